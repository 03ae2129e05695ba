#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "dakit/core.hpp"

// =============================================================================
// FILE: dakit/stats.hpp
// BRIEF: Streaming raw-moment statistics: coordinate-wise variance and the
//        batched cross-product matrix.
//
// Data convention: X is p x n with one p-dimensional sample per column.
// Accumulators are single-owner values; states built on disjoint data can be
// merged, and merging is associative within tolerance.
// =============================================================================

namespace dakit::stats {

// -----------------------------------------------------------------------------
// Coordinate-wise variance via raw moments
// -----------------------------------------------------------------------------

/// Raw sums S1_i = sum_j X_ij and S2_i = sum_j X_ij^2 over n observations.
struct MomentAccumulator {
    explicit MomentAccumulator(Index dims)
        : p(dims), n(0), s1(static_cast<std::size_t>(dims), 0.0),
          s2(static_cast<std::size_t>(dims), 0.0) {
        if (dims < 0) {
            throw DimensionMismatch("MomentAccumulator: negative dimension");
        }
    }

    Index p;
    Index n;
    std::vector<double> s1;
    std::vector<double> s2;
};

/// Folds one batch of columns into the accumulator. An empty batch is a no-op.
inline MomentAccumulator moments_update(MomentAccumulator acc, const DenseMatrix& x) {
    if (x.rows() != acc.p) {
        throw DimensionMismatch("moments_update: batch row count must equal p");
    }
    const Index nb = x.cols();
    for (Index i = 0; i < acc.p; ++i) {
        double sum = 0.0;
        double sumSq = 0.0;
        for (Index j = 0; j < nb; ++j) {
            const double v = x(i, j);
            sum += v;
            sumSq += v * v;
        }
        acc.s1[static_cast<std::size_t>(i)] += sum;
        acc.s2[static_cast<std::size_t>(i)] += sumSq;
    }
    acc.n += nb;
    return acc;
}

struct MomentSummary {
    std::vector<double> mean;
    std::vector<double> variance;
    /// Count of coordinates whose raw-moment variance came out negative from
    /// cancellation and was clamped to zero.
    Index clamped = 0;
};

/// mean_i = S1_i/n, variance_i = S2_i/(n-1) - S1_i^2/(n(n-1)), clamped at 0.
inline MomentSummary variance_finalize(const MomentAccumulator& acc) {
    if (acc.n < 2) {
        throw InsufficientObservations("variance_finalize: needs n >= 2");
    }
    const double n = static_cast<double>(acc.n);
    MomentSummary out;
    out.mean.resize(acc.s1.size());
    out.variance.resize(acc.s1.size());
    for (std::size_t i = 0; i < acc.s1.size(); ++i) {
        out.mean[i] = acc.s1[i] / n;
        double v = acc.s2[i] / (n - 1.0) - acc.s1[i] * acc.s1[i] / (n * (n - 1.0));
        if (v < 0.0) {
            v = 0.0;
            ++out.clamped;
        }
        out.variance[i] = v;
    }
    return out;
}

/// Mean only, defined from a single observation up.
inline std::vector<double> mean_finalize(const MomentAccumulator& acc) {
    if (acc.n < 1) {
        throw InsufficientObservations("mean_finalize: needs n >= 1");
    }
    std::vector<double> mean(acc.s1.size());
    for (std::size_t i = 0; i < acc.s1.size(); ++i) {
        mean[i] = acc.s1[i] / static_cast<double>(acc.n);
    }
    return mean;
}

// -----------------------------------------------------------------------------
// Batched cross-product matrix
// -----------------------------------------------------------------------------

/// Centered cross-product state: C' (p x p, row-major), raw sum S', count n'.
struct CrossProductState {
    explicit CrossProductState(Index dims)
        : p(dims), nPrev(0), sPrev(static_cast<std::size_t>(dims), 0.0),
          cPrev(dims, dims, Layout::RowMajor) {
        if (dims < 0) {
            throw DimensionMismatch("CrossProductState: negative dimension");
        }
    }

    Index p;
    Index nPrev;
    std::vector<double> sPrev;
    DenseMatrix cPrev;
};

namespace detail {

/// newC = C' + S'S'^t/n' - SS^t/n + XX^t, computed on the lower triangle and
/// mirrored, so the state stays symmetric to the bit.
inline void apply_cross_update(DenseMatrix& c, const std::vector<double>& sOld,
                               double nOld, const std::vector<double>& sNew,
                               double nNew, const DenseMatrix& x) {
    const Index p = c.rows();
    const Index nb = x.cols();
    const bool haveOld = nOld > 0.0;
    for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j <= i; ++j) {
            double acc = c(i, j);
            if (haveOld) {
                acc += sOld[static_cast<std::size_t>(i)] * sOld[static_cast<std::size_t>(j)] / nOld;
            }
            acc -= sNew[static_cast<std::size_t>(i)] * sNew[static_cast<std::size_t>(j)] / nNew;
            double dot = 0.0;
            for (Index k = 0; k < nb; ++k) {
                dot += x(i, k) * x(j, k);
            }
            c(i, j) = acc + dot;
        }
    }
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            c(i, j) = c(j, i);
        }
    }
}

}  // namespace detail

/// Folds one non-empty batch of columns into the state.
inline CrossProductState xcp_update(CrossProductState state, const DenseMatrix& x) {
    if (x.rows() != state.p) {
        throw DimensionMismatch("xcp_update: batch row count must equal p");
    }
    if (x.cols() < 1) {
        throw EmptyBatch("xcp_update: batch must contain at least one column");
    }

    std::vector<double> sNew = state.sPrev;
    for (Index i = 0; i < state.p; ++i) {
        double rowSum = 0.0;
        for (Index k = 0; k < x.cols(); ++k) {
            rowSum += x(i, k);
        }
        sNew[static_cast<std::size_t>(i)] += rowSum;
    }
    const Index nNew = state.nPrev + x.cols();

    detail::apply_cross_update(state.cPrev, state.sPrev, static_cast<double>(state.nPrev),
                               sNew, static_cast<double>(nNew), x);
    state.sPrev = std::move(sNew);
    state.nPrev = nNew;
    return state;
}

/// Merge of two states built on disjoint data. Uses the same algebra as
/// xcp_update applied to the second state's totals:
///   C = Ca + Sa Sa^t/na + Cb + Sb Sb^t/nb - S S^t/n.
inline CrossProductState xcp_merge(CrossProductState a, const CrossProductState& b) {
    if (a.p != b.p) {
        throw DimensionMismatch("xcp_merge: dimension mismatch");
    }
    if (b.nPrev == 0) {
        return a;
    }
    if (a.nPrev == 0) {
        return b;
    }

    const double na = static_cast<double>(a.nPrev);
    const double nb = static_cast<double>(b.nPrev);
    const double n = na + nb;
    std::vector<double> s(a.sPrev.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = a.sPrev[i] + b.sPrev[i];
    }
    for (Index i = 0; i < a.p; ++i) {
        for (Index j = 0; j <= i; ++j) {
            const std::size_t ii = static_cast<std::size_t>(i);
            const std::size_t jj = static_cast<std::size_t>(j);
            double acc = a.cPrev(i, j) + b.cPrev(i, j);
            acc += a.sPrev[ii] * a.sPrev[jj] / na;
            acc += b.sPrev[ii] * b.sPrev[jj] / nb;
            acc -= s[ii] * s[jj] / n;
            a.cPrev(i, j) = acc;
        }
    }
    for (Index i = 0; i < a.p; ++i) {
        for (Index j = i + 1; j < a.p; ++j) {
            a.cPrev(i, j) = a.cPrev(j, i);
        }
    }
    a.sPrev = std::move(s);
    a.nPrev += b.nPrev;
    return a;
}

enum class Normalize { None, Covariance };

/// Returns C, or C/(n-1) when covariance scaling is requested.
inline DenseMatrix xcp_finalize(const CrossProductState& state,
                                Normalize normalize = Normalize::None) {
    if (normalize == Normalize::None) {
        return state.cPrev;
    }
    if (state.nPrev < 2) {
        throw InsufficientObservations("xcp_finalize: covariance needs n >= 2");
    }
    DenseMatrix out = state.cPrev;
    const double scale = 1.0 / (static_cast<double>(state.nPrev) - 1.0);
    for (double& v : out.data()) {
        v *= scale;
    }
    return out;
}

}  // namespace dakit::stats
