#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <list>
#include <unordered_map>
#include <vector>

#include "dakit/core.hpp"
#include "dakit/wss.hpp"

// =============================================================================
// FILE: dakit/svm.hpp
// BRIEF: SMO-based binary SVM trainer. Each iteration selects a pair with
//        wss_i / wss_j (scalar or lane-blocked path), applies the clipped
//        second-order pair update, and maintains the gradient incrementally.
//
// Gradient convention: g_t = sum_s alpha_s y_s K(x_s, x_t) - y_t, i.e. the
// label-multiplied objective gradient. With it, GMin over the UP set and
// GMax2 over the LOW set bound the optimality gap, and GMax2 - GMin < eps is
// the stopping rule.
// =============================================================================

namespace dakit::svm {

// -----------------------------------------------------------------------------
// Parameters and model
// -----------------------------------------------------------------------------

enum class KernelKind { Linear, RBF };

struct SvmParams {
    double C = 1.0;
    KernelKind kernel = KernelKind::Linear;
    double gamma = 1.0;   // RBF only
    double eps = 1e-3;    // convergence tolerance
    double tau = 1e-12;   // curvature clamp for WSS
    Index maxIter = 0;    // 0 -> 100 * n
    Index cacheRows = 256;
    std::size_t laneWidth = 0;  // 0 -> scalar WSSj; W >= 1 -> blocked path

    void validate() const {
        if (!(C > 0.0)) {
            throw InvalidRange("SvmParams: C must be > 0");
        }
        if (!(eps > 0.0)) {
            throw InvalidRange("SvmParams: eps must be > 0");
        }
        if (!(tau > 0.0)) {
            throw InvalidRange("SvmParams: tau must be > 0");
        }
        if (kernel == KernelKind::RBF && !(gamma > 0.0)) {
            throw InvalidRange("SvmParams: gamma must be > 0 for RBF");
        }
    }
};

struct TrainedModel {
    std::vector<Index> supportIdx;  // indices into the training set
    std::vector<double> alphaY;     // alpha_i * y_i per support vector
    double bias = 0.0;
    SvmParams params;
    DenseMatrix X_support = DenseMatrix(0, 0);  // retained support rows
};

/// smo_train output: the model plus convergence diagnostics. `converged`
/// false means the iteration cap was hit (NoProgress warning, not an error).
struct TrainResult {
    TrainedModel model;
    bool converged = false;
    Index iterations = 0;
    double kktViolation = 0.0;       // max(0, max_low g - min_up g) at exit
    std::vector<double> dualTrace;   // dual objective after each update
};

/// Per-iteration snapshot passed to an optional training observer.
struct IterState {
    Index iter = 0;
    const std::vector<double>& alpha;
    const std::vector<double>& grad;
    const std::vector<std::uint8_t>& sampleFlags;
    double GMin = 0.0;
    double GMax2 = 0.0;
    double dual = 0.0;
};

using IterObserver = std::function<void(const IterState&)>;

// -----------------------------------------------------------------------------
// Kernels
// -----------------------------------------------------------------------------

/// K(x_i, x_j) for j in [start, end). RBF uses an explicit difference loop so
/// that the diagonal is exactly exp(0) == 1.
inline std::vector<double> kernel_row(const DenseMatrix& X, Index i, Index start, Index end,
                                      KernelKind kernel, double gamma) {
    if (i < 0 || i >= X.rows()) {
        throw InvalidRange("kernel_row: row index out of range");
    }
    if (start < 0 || end < start || end > X.rows()) {
        throw InvalidRange("kernel_row: bad row range");
    }
    const Index d = X.cols();
    std::vector<double> out(static_cast<std::size_t>(end - start));
    for (Index j = start; j < end; ++j) {
        double acc = 0.0;
        if (kernel == KernelKind::Linear) {
            for (Index k = 0; k < d; ++k) {
                acc += X(i, k) * X(j, k);
            }
        } else {
            for (Index k = 0; k < d; ++k) {
                const double diff = X(i, k) - X(j, k);
                acc += diff * diff;
            }
            acc = std::exp(-gamma * acc);
        }
        out[static_cast<std::size_t>(j - start)] = acc;
    }
    return out;
}

/// Most-recent-rows kernel cache. Rows are full-width (all n columns); the
/// two rows touched by one SMO iteration always survive together because the
/// capacity floor is 2.
class KernelCache {
public:
    KernelCache(const DenseMatrix& X, KernelKind kernel, double gamma, Index capacity)
        : X_(X), kernel_(kernel), gamma_(gamma), capacity_(std::max<Index>(2, capacity)) {}

    const std::vector<double>& row(Index i) {
        auto it = rows_.find(i);
        if (it != rows_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second.slot);
            return it->second.values;
        }
        if (static_cast<Index>(rows_.size()) >= capacity_) {
            const Index victim = lru_.back();
            lru_.pop_back();
            rows_.erase(victim);
        }
        lru_.push_front(i);
        Entry entry{lru_.begin(), kernel_row(X_, i, 0, X_.rows(), kernel_, gamma_)};
        return rows_.emplace(i, std::move(entry)).first->second.values;
    }

private:
    struct Entry {
        std::list<Index>::iterator slot;
        std::vector<double> values;
    };

    const DenseMatrix& X_;
    KernelKind kernel_;
    double gamma_;
    Index capacity_;
    std::list<Index> lru_;
    std::unordered_map<Index, Entry> rows_;
};

// -----------------------------------------------------------------------------
// Training
// -----------------------------------------------------------------------------

namespace detail {

/// Dual objective from the maintained gradient: since g_t = F_t - y_t with
/// F_t = sum_s alpha_s y_s K_ts, the quadratic term is recoverable without
/// touching the kernel again.
inline double dual_objective(const std::vector<double>& alpha, const std::vector<double>& y,
                             const std::vector<double>& grad) {
    double sumAlpha = 0.0;
    double quad = 0.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        sumAlpha += alpha[t];
        quad += alpha[t] * y[t] * (grad[t] + y[t]);
    }
    return sumAlpha - 0.5 * quad;
}

}  // namespace detail

inline TrainResult smo_train(const DenseMatrix& X, const std::vector<double>& y,
                             const SvmParams& params, const IterObserver& observer = {}) {
    params.validate();
    const Index n = X.rows();
    if (static_cast<std::size_t>(n) != y.size()) {
        throw DimensionMismatch("smo_train: label count must equal row count");
    }
    bool sawPos = false;
    bool sawNeg = false;
    for (double label : y) {
        if (label == 1.0) {
            sawPos = true;
        } else if (label == -1.0) {
            sawNeg = true;
        } else {
            throw InvalidRange("smo_train: labels must be +1 or -1");
        }
    }
    if (!sawPos || !sawNeg) {
        throw DegenerateLabels("smo_train: both classes must be present");
    }

    const Index maxIter = params.maxIter > 0 ? params.maxIter : 100 * n;
    const double C = params.C;

    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        grad[t] = -y[t];  // F == 0 at alpha == 0
    }
    std::vector<std::uint8_t> sampleFlags = compute_flags(alpha, y, C);

    std::vector<double> kernelDiag(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        kernelDiag[t] =
            kernel_row(X, t, t, t + 1, params.kernel, params.gamma)[0];
    }
    KernelCache cache(X, params.kernel, params.gamma, params.cacheRows);

    TrainResult result;
    result.dualTrace.reserve(64);
    bool converged = false;
    Index iter = 0;

    for (; iter < maxIter; ++iter) {
        const WssiResult sel = wss_i(grad, sampleFlags, flags::kAnySign);
        if (!sel.i) {
            converged = true;  // empty UP set: nothing can move
            break;
        }
        const Index i = *sel.i;
        const std::vector<double>& Ki = cache.row(i);

        WssInput in;
        in.jStart = 0;
        in.jEnd = n;
        in.grad = grad.data();
        in.sampleFlags = sampleFlags.data();
        in.kernelDiag = kernelDiag.data();
        in.kiBlock = Ki.data();
        in.GMin = sel.GMin;
        in.Kii = kernelDiag[i];
        in.tau = params.tau;
        const WssResult ws = params.laneWidth >= 1
                                 ? wss_j_blocked(in, LanePolicy(params.laneWidth))
                                 : wss_j_scalar(in);
        if (!ws.Bj) {
            converged = true;  // empty LOW set
            break;
        }
        if (ws.GMax2 - sel.GMin < params.eps) {
            converged = true;
            break;
        }
        const Index j = *ws.Bj;
        const std::vector<double>& Kj = cache.row(j);

        // Clipped pair update in beta = alpha*y space: beta_i += d, beta_j -= d.
        const double capI = y[i] > 0.0 ? C - alpha[i] : alpha[i];
        const double capJ = y[j] > 0.0 ? alpha[j] : C - alpha[j];
        const double d = std::min(std::min(capI, capJ), ws.delta);
        if (!(d > 0.0)) {
            break;  // stalled step; surface as NoProgress via converged=false
        }
        alpha[i] += y[i] * d;
        alpha[j] -= y[j] * d;
        for (Index t = 0; t < n; ++t) {
            grad[t] += d * (Ki[t] - Kj[t]);
        }
        sampleFlags[i] = sample_flag(alpha[i], y[i], C);
        sampleFlags[j] = sample_flag(alpha[j], y[j], C);

        const double dual = detail::dual_objective(alpha, y, grad);
        result.dualTrace.push_back(dual);
        if (observer) {
            observer(IterState{iter, alpha, grad, sampleFlags, sel.GMin, ws.GMax2, dual});
        }
    }
    result.converged = converged;
    result.iterations = iter;

    // Bias: midpoint of the eligible gradient bounds; KKT violation is the
    // residual gap between the LOW and UP sets.
    double minUp = std::numeric_limits<double>::infinity();
    double maxLow = -std::numeric_limits<double>::infinity();
    for (Index t = 0; t < n; ++t) {
        if (sampleFlags[t] & flags::kUp) {
            minUp = std::min(minUp, grad[t]);
        }
        if (sampleFlags[t] & flags::kLow) {
            maxLow = std::max(maxLow, grad[t]);
        }
    }
    double bias = 0.0;
    if (std::isfinite(minUp) && std::isfinite(maxLow)) {
        bias = -(minUp + maxLow) / 2.0;
    } else if (std::isfinite(minUp)) {
        bias = -minUp;
    } else if (std::isfinite(maxLow)) {
        bias = -maxLow;
    }
    result.kktViolation =
        (std::isfinite(minUp) && std::isfinite(maxLow)) ? std::max(0.0, maxLow - minUp) : 0.0;

    TrainedModel& model = result.model;
    model.params = params;
    model.bias = bias;
    for (Index t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.supportIdx.push_back(t);
            model.alphaY.push_back(alpha[t] * y[t]);
        }
    }
    DenseMatrix support(static_cast<Index>(model.supportIdx.size()), X.cols());
    for (std::size_t s = 0; s < model.supportIdx.size(); ++s) {
        for (Index k = 0; k < X.cols(); ++k) {
            support(static_cast<Index>(s), k) = X(model.supportIdx[s], k);
        }
    }
    model.X_support = std::move(support);
    return result;
}

// -----------------------------------------------------------------------------
// Prediction
// -----------------------------------------------------------------------------

struct Prediction {
    std::vector<double> scores;
    std::vector<double> labels;  // sign(score); zero maps to +1
};

inline Prediction predict(const TrainedModel& model, const DenseMatrix& X) {
    if (model.X_support.rows() > 0 && X.cols() != model.X_support.cols()) {
        throw DimensionMismatch("predict: feature dimension mismatch");
    }
    const Index n = X.rows();
    const Index d = X.cols();
    const Index nsv = model.X_support.rows();
    Prediction out;
    out.scores.assign(static_cast<std::size_t>(n), 0.0);
    out.labels.assign(static_cast<std::size_t>(n), 0.0);
    for (Index t = 0; t < n; ++t) {
        double score = 0.0;
        for (Index s = 0; s < nsv; ++s) {
            double acc = 0.0;
            if (model.params.kernel == KernelKind::Linear) {
                for (Index k = 0; k < d; ++k) {
                    acc += model.X_support(s, k) * X(t, k);
                }
            } else {
                for (Index k = 0; k < d; ++k) {
                    const double diff = model.X_support(s, k) - X(t, k);
                    acc += diff * diff;
                }
                acc = std::exp(-model.params.gamma * acc);
            }
            score += model.alphaY[static_cast<std::size_t>(s)] * acc;
        }
        score += model.bias;
        out.scores[static_cast<std::size_t>(t)] = score;
        out.labels[static_cast<std::size_t>(t)] = score < 0.0 ? -1.0 : 1.0;
    }
    return out;
}

}  // namespace dakit::svm
