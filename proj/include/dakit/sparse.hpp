#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dakit/core.hpp"
#include "dakit/csr.hpp"

// =============================================================================
// FILE: dakit/sparse.hpp
// BRIEF: CSR execution routines (csrmv, csrmm, csrmultd) behind a minimal
//        inspector-executor handle API, plus the transpose helper.
//
// The three kernels keep fixed accumulation orders (documented inline), so
// equivalence against a dense reference is a tolerance check, not a bitwise
// one. Execution routines are pure and reentrant; a handle may be shared
// read-only once optimize_handle has run.
// =============================================================================

namespace dakit::sparse {

enum class SparseOp { NoTrans, Trans };

enum class ExpectedOp { MV, MM, MultD, Any };

struct NnzStats {
    Index minPerRow = 0;
    Index maxPerRow = 0;
    double meanPerRow = 0.0;
};

struct SparseHints {
    bool sortedRows = false;   // strictly ascending colIdx within every row
    NnzStats nnzPerRow;
    ExpectedOp expectedOps = ExpectedOp::Any;
};

/// Wraps a CSR matrix (either form) plus analysis hints. The wrapped matrix
/// is never mutated: analysis only inspects.
struct SparseHandle {
    std::variant<CsrMatrix3, CsrMatrix4> matrix;
    bool analyzed = false;
    SparseHints hints;

    detail::CsrRowView view() const noexcept {
        return std::visit([](const auto& m) { return detail::view_of(m); }, matrix);
    }
};

inline SparseHandle create_handle(CsrMatrix3 a) {
    return SparseHandle{std::move(a), false, {}};
}

inline SparseHandle create_handle(CsrMatrix4 a) {
    return SparseHandle{std::move(a), false, {}};
}

/// Inspector stage: detects per-row sortedness and nnz statistics and records
/// the expected execution routine. Idempotent; leaves the wrapped arrays
/// untouched.
inline SparseHandle optimize_handle(SparseHandle h, ExpectedOp expectedOps = ExpectedOp::Any) {
    const detail::CsrRowView v = h.view();

    bool sorted = true;
    Index minNnz = v.rows > 0 ? std::numeric_limits<Index>::max() : 0;
    Index maxNnz = 0;
    Index total = 0;
    for (Index i = 0; i < v.rows; ++i) {
        const Index b = v.row_begin(i);
        const Index e = v.row_end(i);
        const Index n = e - b;
        minNnz = std::min(minNnz, n);
        maxNnz = std::max(maxNnz, n);
        total += n;
        for (Index k = b; k + 1 < e; ++k) {
            if (v.col(k + 1) <= v.col(k)) {
                sorted = false;
            }
        }
    }

    h.hints.sortedRows = sorted;
    h.hints.nnzPerRow = {minNnz, maxNnz,
                         v.rows > 0 ? static_cast<double>(total) / static_cast<double>(v.rows)
                                    : 0.0};
    h.hints.expectedOps = expectedOps;
    h.analyzed = true;
    return h;
}

// -----------------------------------------------------------------------------
// csrmv: y' = alpha * op(A) * x + beta * y
// -----------------------------------------------------------------------------

namespace detail {

using dakit::detail::CsrRowView;

inline void check_mv_dims(const CsrRowView& v, SparseOp op, std::size_t xLen,
                          std::size_t yLen) {
    const Index nx = op == SparseOp::NoTrans ? v.cols : v.rows;
    const Index ny = op == SparseOp::NoTrans ? v.rows : v.cols;
    if (static_cast<Index>(xLen) != nx || static_cast<Index>(yLen) != ny) {
        throw DimensionMismatch("csrmv: vector lengths do not conform with op");
    }
}

/// Both op kernels traverse A row by row; the transpose kernel scatters.
inline void csrmv_view(SparseOp op, double alpha, const CsrRowView& v,
                       std::span<const double> x, double beta, std::span<double> y) {
    check_mv_dims(v, op, x.size(), y.size());

    if (alpha == 0.0) {
        if (beta == 1.0) {
            return;  // bit-identical passthrough, A never touched
        }
        for (double& yi : y) {
            yi = beta == 0.0 ? 0.0 : beta * yi;
        }
        return;
    }

    if (op == SparseOp::NoTrans) {
        for (Index i = 0; i < v.rows; ++i) {
            double acc = 0.0;
            for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
                acc += v.values[k] * x[static_cast<std::size_t>(v.col(k))];
            }
            const double base = beta == 0.0 ? 0.0 : beta * y[static_cast<std::size_t>(i)];
            y[static_cast<std::size_t>(i)] = alpha * acc + base;
        }
    } else {
        for (double& yi : y) {
            yi = beta == 0.0 ? 0.0 : beta * yi;
        }
        for (Index i = 0; i < v.rows; ++i) {
            const double xi = alpha * x[static_cast<std::size_t>(i)];
            for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
                y[static_cast<std::size_t>(v.col(k))] += v.values[k] * xi;
            }
        }
    }
}

}  // namespace detail

/// In-place entry point.
inline void csrmv_inplace(SparseOp op, double alpha, const CsrMatrix4& a,
                          std::span<const double> x, double beta, std::span<double> y) {
    detail::csrmv_view(op, alpha, dakit::detail::view_of(a), x, beta, y);
}

inline void csrmv_inplace(SparseOp op, double alpha, const SparseHandle& h,
                          std::span<const double> x, double beta, std::span<double> y) {
    detail::csrmv_view(op, alpha, h.view(), x, beta, y);
}

/// Pure entry point: returns alpha * op(A) x + beta * y as a fresh vector.
inline std::vector<double> csrmv(SparseOp op, double alpha, const CsrMatrix4& a,
                                 std::span<const double> x, double beta,
                                 std::span<const double> y) {
    std::vector<double> out(y.begin(), y.end());
    csrmv_inplace(op, alpha, a, x, beta, out);
    return out;
}

inline std::vector<double> csrmv(SparseOp op, double alpha, const SparseHandle& h,
                                 std::span<const double> x, double beta,
                                 std::span<const double> y) {
    std::vector<double> out(y.begin(), y.end());
    csrmv_inplace(op, alpha, h, x, beta, out);
    return out;
}

// -----------------------------------------------------------------------------
// csrmm: C' = alpha * op(A) * B + beta * C  (B, C dense row-major)
// -----------------------------------------------------------------------------

namespace detail {

inline void check_mm(const CsrRowView& v, SparseOp op, const DenseMatrix& b,
                     const DenseMatrix& c) {
    if (b.layout() != Layout::RowMajor || c.layout() != Layout::RowMajor) {
        throw LayoutUnsupported("csrmm: B and C must be row-major");
    }
    const Index inner = op == SparseOp::NoTrans ? v.cols : v.rows;
    const Index outRows = op == SparseOp::NoTrans ? v.rows : v.cols;
    if (b.rows() != inner) {
        throw DimensionMismatch("csrmm: op(A) and B do not conform");
    }
    if (c.rows() != outRows || c.cols() != b.cols()) {
        throw DimensionMismatch("csrmm: C has the wrong shape");
    }
}

inline DenseMatrix csrmm_view(SparseOp op, double alpha, const CsrRowView& v,
                              const DenseMatrix& b, double beta, const DenseMatrix& c) {
    check_mm(v, op, b, c);

    DenseMatrix out(c.rows(), c.cols(), Layout::RowMajor);
    if (beta == 1.0) {
        out = c;
    } else if (beta != 0.0) {
        for (Index i = 0; i < c.rows(); ++i) {
            for (Index j = 0; j < c.cols(); ++j) {
                out(i, j) = beta * c(i, j);
            }
        }
    }
    if (alpha == 0.0) {
        return out;
    }

    const Index n = b.cols();
    if (op == SparseOp::NoTrans) {
        for (Index i = 0; i < v.rows; ++i) {
            for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
                const double av = alpha * v.values[k];
                const Index col = v.col(k);
                for (Index j = 0; j < n; ++j) {
                    out(i, j) += av * b(col, j);
                }
            }
        }
    } else {
        // A^t B accumulated row-by-row over A, scattering into rows of C.
        for (Index i = 0; i < v.rows; ++i) {
            for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
                const double av = alpha * v.values[k];
                const Index row = v.col(k);
                for (Index j = 0; j < n; ++j) {
                    out(row, j) += av * b(i, j);
                }
            }
        }
    }
    return out;
}

}  // namespace detail

inline DenseMatrix csrmm(SparseOp op, double alpha, const CsrMatrix3& a,
                         const DenseMatrix& b, double beta, const DenseMatrix& c) {
    return detail::csrmm_view(op, alpha, dakit::detail::view_of(a), b, beta, c);
}

inline DenseMatrix csrmm(SparseOp op, double alpha, const SparseHandle& h,
                         const DenseMatrix& b, double beta, const DenseMatrix& c) {
    return detail::csrmm_view(op, alpha, h.view(), b, beta, c);
}

// -----------------------------------------------------------------------------
// csrmultd: C = op(A) * B, A and B sparse (3-array, 1-based), C dense col-major
// -----------------------------------------------------------------------------

/// C is fully overwritten (pure assignment semantics). Loop orders, innermost
/// to outermost: NoTrans j-k-i, Trans i-j-k.
inline void csrmultd(SparseOp op, const CsrMatrix3& a, const CsrMatrix3& b,
                     DenseMatrix& c) {
    if (a.base != IndexBase::One || b.base != IndexBase::One) {
        throw BaseUnsupported("csrmultd: inputs must use one-based indexing");
    }
    if (c.layout() != Layout::ColMajor) {
        throw LayoutUnsupported("csrmultd: C must be column-major");
    }
    const dakit::detail::CsrRowView va = dakit::detail::view_of(a);
    const dakit::detail::CsrRowView vb = dakit::detail::view_of(b);

    const Index inner = op == SparseOp::NoTrans ? a.cols : a.rows;
    const Index outRows = op == SparseOp::NoTrans ? a.rows : a.cols;
    if (inner != b.rows) {
        throw DimensionMismatch("csrmultd: op(A) and B do not conform");
    }
    if (c.rows() != outRows || c.cols() != b.cols) {
        throw DimensionMismatch("csrmultd: C has the wrong shape");
    }

    std::fill(c.data().begin(), c.data().end(), 0.0);

    if (op == SparseOp::NoTrans) {
        // C_ij += A_ik B_kj: row traversal on A; i outermost, then k, j innermost.
        for (Index i = 0; i < va.rows; ++i) {
            for (Index ka = va.row_begin(i); ka < va.row_end(i); ++ka) {
                const Index k = va.col(ka);
                const double av = va.values[ka];
                for (Index kb = vb.row_begin(k); kb < vb.row_end(k); ++kb) {
                    c(i, vb.col(kb)) += av * vb.values[kb];
                }
            }
        }
    } else {
        // C_ij += A_ki B_kj: k outermost, then j, i innermost, so each write
        // sweep walks a column of C.
        for (Index k = 0; k < va.rows; ++k) {
            for (Index kb = vb.row_begin(k); kb < vb.row_end(k); ++kb) {
                const Index j = vb.col(kb);
                const double bv = vb.values[kb];
                for (Index ka = va.row_begin(k); ka < va.row_end(k); ++ka) {
                    c(va.col(ka), j) += va.values[ka] * bv;
                }
            }
        }
    }
}

// -----------------------------------------------------------------------------
// Helper routines
// -----------------------------------------------------------------------------

/// Transpose in 3-array form. Output rows carry sorted column indices; the
/// index base is preserved.
inline CsrMatrix3 csr_transpose(const CsrMatrix3& a) {
    const dakit::detail::CsrRowView v = dakit::detail::view_of(a);
    const Index off = base_offset(a.base);
    const Index outRows = a.cols;

    std::vector<Index> counts(static_cast<std::size_t>(outRows) + 1, 0);
    for (Index i = 0; i < v.rows; ++i) {
        for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
            ++counts[static_cast<std::size_t>(v.col(k)) + 1];
        }
    }
    std::vector<Index> rowPtr(static_cast<std::size_t>(outRows) + 1, 0);
    std::partial_sum(counts.begin(), counts.end(), rowPtr.begin());

    std::vector<double> values(a.values.size());
    std::vector<Index> colIdx(a.colIdx.size());
    std::vector<Index> cursor(rowPtr.begin(), rowPtr.end() - 1);
    // Walking source rows in order makes each output row's indices ascending.
    for (Index i = 0; i < v.rows; ++i) {
        for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
            const Index c = v.col(k);
            const Index at = cursor[static_cast<std::size_t>(c)]++;
            values[static_cast<std::size_t>(at)] = v.values[k];
            colIdx[static_cast<std::size_t>(at)] = i + off;
        }
    }
    for (Index& p : rowPtr) {
        p += off;
    }
    return CsrMatrix3{outRows, a.rows, a.base, std::move(values), std::move(colIdx),
                      std::move(rowPtr)};
}

}  // namespace dakit::sparse
