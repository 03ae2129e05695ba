#pragma once

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "dakit/core.hpp"
#include "dakit/csr.hpp"

// =============================================================================
// FILE: tests/oracles.hpp
// BRIEF: Independent brute-force reference implementations and random input
//        generators shared by the unit tests and the acceptance gate. These
//        deliberately avoid the library's own kernels.
// =============================================================================

namespace oracle {

using dakit::CsrMatrix3;
using dakit::CsrMatrix4;
using dakit::DenseMatrix;
using dakit::Index;
using dakit::IndexBase;
using dakit::Layout;

// -----------------------------------------------------------------------------
// Dense BLAS references
// -----------------------------------------------------------------------------

inline std::vector<double> gemv(bool trans, double alpha, const DenseMatrix& a,
                                const std::vector<double>& x, double beta,
                                const std::vector<double>& y) {
    const Index outLen = trans ? a.cols() : a.rows();
    std::vector<double> out(static_cast<std::size_t>(outLen), 0.0);
    for (Index i = 0; i < outLen; ++i) {
        double acc = 0.0;
        const Index inner = trans ? a.rows() : a.cols();
        for (Index k = 0; k < inner; ++k) {
            const double av = trans ? a(k, i) : a(i, k);
            acc += av * x[static_cast<std::size_t>(k)];
        }
        out[static_cast<std::size_t>(i)] =
            alpha * acc + beta * y[static_cast<std::size_t>(i)];
    }
    return out;
}

inline DenseMatrix gemm(bool transA, double alpha, const DenseMatrix& a,
                        const DenseMatrix& b, double beta, const DenseMatrix& c,
                        Layout outLayout = Layout::RowMajor) {
    const Index m = transA ? a.cols() : a.rows();
    const Index kk = transA ? a.rows() : a.cols();
    DenseMatrix out(m, b.cols(), outLayout);
    for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (Index k = 0; k < kk; ++k) {
                const double av = transA ? a(k, i) : a(i, k);
                acc += av * b(k, j);
            }
            out(i, j) = alpha * acc + beta * c(i, j);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Error metrics
// -----------------------------------------------------------------------------

inline double rel_frobenius(std::span<const double> got, std::span<const double> want) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
        const double d = got[i] - want[i];
        num += d * d;
        den += want[i] * want[i];
    }
    if (den == 0.0) {
        return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::sqrt(num) / std::sqrt(den);
}

inline bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

// -----------------------------------------------------------------------------
// Statistics references (textbook two-pass formulas)
// -----------------------------------------------------------------------------

struct TwoPass {
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Column-per-sample convention: X is p x n.
inline TwoPass two_pass(const DenseMatrix& x) {
    const Index p = x.rows();
    const Index n = x.cols();
    TwoPass out;
    out.mean.assign(static_cast<std::size_t>(p), 0.0);
    out.variance.assign(static_cast<std::size_t>(p), 0.0);
    for (Index i = 0; i < p; ++i) {
        double mean = 0.0;
        for (Index k = 0; k < n; ++k) {
            mean += x(i, k);
        }
        mean /= static_cast<double>(n);
        double acc = 0.0;
        for (Index k = 0; k < n; ++k) {
            const double d = x(i, k) - mean;
            acc += d * d;
        }
        out.mean[static_cast<std::size_t>(i)] = mean;
        out.variance[static_cast<std::size_t>(i)] = acc / (static_cast<double>(n) - 1.0);
    }
    return out;
}

/// C_ij = sum_k (X_ik - mu_i)(X_jk - mu_j), computed directly.
inline DenseMatrix direct_cross_product(const DenseMatrix& x) {
    const Index p = x.rows();
    const Index n = x.cols();
    std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
    for (Index i = 0; i < p; ++i) {
        for (Index k = 0; k < n; ++k) {
            mean[static_cast<std::size_t>(i)] += x(i, k);
        }
        mean[static_cast<std::size_t>(i)] /= static_cast<double>(n);
    }
    DenseMatrix c(p, p, Layout::RowMajor);
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) {
            double acc = 0.0;
            for (Index k = 0; k < n; ++k) {
                acc += (x(i, k) - mean[static_cast<std::size_t>(i)]) *
                       (x(j, k) - mean[static_cast<std::size_t>(j)]);
            }
            c(i, j) = acc;
        }
    }
    return c;
}

// -----------------------------------------------------------------------------
// Random input generators (std RNG, independent of the library engines)
// -----------------------------------------------------------------------------

inline DenseMatrix random_dense(std::mt19937_64& gen, Index rows, Index cols,
                                double lo = -1.0, double hi = 1.0,
                                Layout layout = Layout::RowMajor) {
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseMatrix out(rows, cols, layout);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            out(i, j) = dist(gen);
        }
    }
    return out;
}

inline std::vector<double> random_vec(std::mt19937_64& gen, Index len, double lo = -1.0,
                                      double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(static_cast<std::size_t>(len));
    for (double& v : out) {
        v = dist(gen);
    }
    return out;
}

/// Random CSR matrix. Column order inside each row is shuffled half the time
/// (the kernels must not rely on sortedness).
inline CsrMatrix3 random_csr(std::mt19937_64& gen, Index rows, Index cols, double density,
                             IndexBase base) {
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    std::bernoulli_distribution hit(density);
    std::bernoulli_distribution shuffleRow(0.5);
    const Index off = dakit::base_offset(base);

    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowPtr{off};
    for (Index i = 0; i < rows; ++i) {
        std::vector<std::pair<Index, double>> entries;
        for (Index j = 0; j < cols; ++j) {
            if (hit(gen)) {
                entries.emplace_back(j + off, value(gen));
            }
        }
        if (!entries.empty() && shuffleRow(gen)) {
            std::shuffle(entries.begin(), entries.end(), gen);
        }
        for (const auto& [c, v] : entries) {
            colIdx.push_back(c);
            values.push_back(v);
        }
        rowPtr.push_back(off + static_cast<Index>(values.size()));
    }
    return dakit::make_csr3(std::move(values), std::move(colIdx), std::move(rowPtr), base,
                            rows, cols);
}

/// Random 4-array CSR with gaps between row slices. Gap slots hold sentinel
/// values that must never influence any kernel result.
inline CsrMatrix4 random_csr4_with_gaps(std::mt19937_64& gen, Index rows, Index cols,
                                        double density, IndexBase base) {
    const CsrMatrix3 packed = random_csr(gen, rows, cols, density, base);
    std::uniform_int_distribution<Index> gap(0, 3);
    const Index off = dakit::base_offset(base);

    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowBegin;
    std::vector<Index> rowEnd;
    for (Index i = 0; i < rows; ++i) {
        for (Index g = gap(gen); g > 0; --g) {
            values.push_back(777.0);  // sentinel in a gap
            colIdx.push_back(off);
        }
        rowBegin.push_back(off + static_cast<Index>(values.size()));
        for (Index k = packed.rowPtr[i] - off; k < packed.rowPtr[i + 1] - off; ++k) {
            values.push_back(packed.values[static_cast<std::size_t>(k)]);
            colIdx.push_back(packed.colIdx[static_cast<std::size_t>(k)]);
        }
        rowEnd.push_back(off + static_cast<Index>(values.size()));
    }
    for (Index g = gap(gen); g > 0; --g) {
        values.push_back(777.0);
        colIdx.push_back(off);
    }
    return dakit::make_csr4(std::move(values), std::move(colIdx), std::move(rowBegin),
                            std::move(rowEnd), base, rows, cols);
}

}  // namespace oracle
