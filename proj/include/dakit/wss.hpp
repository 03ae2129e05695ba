#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "dakit/core.hpp"

// =============================================================================
// FILE: dakit/wss.hpp
// BRIEF: Second-order working-set selection (WSS) for the SMO solver.
//
// wss_j_scalar is the sequential reference loop; wss_j_blocked restates it as
// predicate-masked blocks of W lanes. The two must agree bitwise for every
// W >= 1: per-lane arithmetic keeps the exact scalar expression order, and the
// reductions only reorder comparisons (block maxima are merged ascending with
// strict `>`, lowest index winning ties), never arithmetic.
// =============================================================================

namespace dakit::svm {

// -----------------------------------------------------------------------------
// Sample flags
// -----------------------------------------------------------------------------

/// One status byte per sample. UP/LOW are the working-set eligibility bits
/// derived from (alpha, y, C); POS/NEG encode the class sign.
namespace flags {
constexpr std::uint8_t kUp = 0x1;
constexpr std::uint8_t kLow = 0x2;
constexpr std::uint8_t kPos = 0x4;
constexpr std::uint8_t kNeg = 0x8;
constexpr std::uint8_t kAnySign = kPos | kNeg;
}  // namespace flags

/// Recomputes the status byte of one sample from its multiplier and label.
/// UP-eligible:  (alpha < C and y > 0) or (alpha > 0 and y < 0)
/// LOW-eligible: (alpha < C and y < 0) or (alpha > 0 and y > 0)
inline std::uint8_t sample_flag(double alpha, double y, double C) noexcept {
    std::uint8_t f = y > 0.0 ? flags::kPos : flags::kNeg;
    if ((y > 0.0 && alpha < C) || (y < 0.0 && alpha > 0.0)) {
        f |= flags::kUp;
    }
    if ((y < 0.0 && alpha < C) || (y > 0.0 && alpha > 0.0)) {
        f |= flags::kLow;
    }
    return f;
}

inline std::vector<std::uint8_t> compute_flags(const std::vector<double>& alpha,
                                               const std::vector<double>& y, double C) {
    if (alpha.size() != y.size()) {
        throw DimensionMismatch("compute_flags: alpha and y lengths differ");
    }
    std::vector<std::uint8_t> out(alpha.size());
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        out[t] = sample_flag(alpha[t], y[t], C);
    }
    return out;
}

// -----------------------------------------------------------------------------
// WSS types
// -----------------------------------------------------------------------------

struct WssInput {
    Index jStart = 0;
    Index jEnd = 0;
    const double* grad = nullptr;              // gradient per sample (global index)
    const std::uint8_t* sampleFlags = nullptr; // status byte per sample (global index)
    const double* kernelDiag = nullptr;        // K_jj (global index)
    const double* kiBlock = nullptr;           // K_ij over [jStart, jEnd)
    double GMin = 0.0;                         // gradient of the selected i
    double Kii = 0.0;                          // K_ii
    double tau = 1e-12;
    std::uint8_t signMask = flags::kAnySign;
    std::uint8_t lowMask = flags::kLow;
};

struct WssResult {
    std::optional<Index> Bj;  // absent  <=>  GMax == -inf
    double GMax = -std::numeric_limits<double>::infinity();
    double GMax2 = -std::numeric_limits<double>::infinity();
    double delta = 0.0;
};

// -----------------------------------------------------------------------------
// First index: minimum gradient over the UP set
// -----------------------------------------------------------------------------

struct WssiResult {
    std::optional<Index> i;
    double GMin = std::numeric_limits<double>::infinity();
};

/// argmin of grad over samples matching signMask that are UP-eligible;
/// ties broken by lowest index.
inline WssiResult wss_i(const std::vector<double>& grad,
                        const std::vector<std::uint8_t>& sampleFlags,
                        std::uint8_t signMask = flags::kAnySign) {
    if (grad.size() != sampleFlags.size()) {
        throw DimensionMismatch("wss_i: grad and flags lengths differ");
    }
    WssiResult out;
    for (std::size_t t = 0; t < grad.size(); ++t) {
        if (!(sampleFlags[t] & signMask)) {
            continue;
        }
        if (!(sampleFlags[t] & flags::kUp)) {
            continue;
        }
        if (grad[t] < out.GMin) {
            out.GMin = grad[t];
            out.i = static_cast<Index>(t);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Second index, scalar reference path
// -----------------------------------------------------------------------------

/// Sequential j-selection. For each eligible j ascending:
///   b = GMin - grad[j];  a = Kii + K_jj - 2*K_ij (clamped to tau if <= 0);
///   dt = b / a;  objFunc = b * dt;  keep the first strict maximum of objFunc.
/// GMax2 tracks the maximum eligible gradient and is updated before the
/// grad[j] < GMin filter.
inline WssResult wss_j_scalar(const WssInput& in) {
    constexpr double kZero = 0.0;
    constexpr double kTwo = 2.0;
    WssResult out;
    for (Index j = in.jStart; j < in.jEnd; ++j) {
        const double gradj = in.grad[j];
        if (!(in.sampleFlags[j] & in.signMask)) {
            continue;
        }
        if ((in.sampleFlags[j] & in.lowMask) != in.lowMask) {
            continue;
        }
        if (gradj > out.GMax2) {
            out.GMax2 = gradj;
        }
        if (gradj < in.GMin) {
            continue;
        }
        const double b = in.GMin - gradj;
        double a = in.Kii + in.kernelDiag[j] - kTwo * in.kiBlock[j - in.jStart];
        if (a <= kZero) {
            a = in.tau;
        }
        const double dt = b / a;
        const double objFunc = b * dt;
        if (objFunc > out.GMax) {
            out.GMax = objFunc;
            out.Bj = j;
            out.delta = -dt;
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// Second index, lane-blocked path
// -----------------------------------------------------------------------------

/// Lane-blocked j-selection over blocks of lanes.width with a tail mask.
/// Every lane evaluates the full expression chain unconditionally (as a
/// predicated vector unit would) and eligibility masks select which lanes
/// join the two block reductions. Bitwise equal to wss_j_scalar for all W.
inline WssResult wss_j_blocked(const WssInput& in, const LanePolicy& lanes) {
    constexpr double kZero = 0.0;
    constexpr double kTwo = 2.0;
    const Index W = static_cast<Index>(lanes.width);

    WssResult out;
    std::vector<double> gradV(lanes.width);
    std::vector<double> objV(lanes.width);
    std::vector<double> dtV(lanes.width);
    std::vector<std::uint8_t> gradElig(lanes.width);  // passes both flag masks
    std::vector<std::uint8_t> objElig(lanes.width);   // flag masks and !(gradj < GMin)

    for (Index blockStart = in.jStart; blockStart < in.jEnd; blockStart += W) {
        const Index len = std::min<Index>(W, in.jEnd - blockStart);

        // Lane phase: per-lane arithmetic in exactly the scalar expression
        // order, plus the merged flag predicate.
        for (Index w = 0; w < len; ++w) {
            const Index j = blockStart + w;
            const double gradj = in.grad[j];
            const bool pass = (in.sampleFlags[j] & in.signMask) &&
                              ((in.sampleFlags[j] & in.lowMask) == in.lowMask);
            const double b = in.GMin - gradj;
            double a = in.Kii + in.kernelDiag[j] - kTwo * in.kiBlock[j - in.jStart];
            if (a <= kZero) {
                a = in.tau;
            }
            const double dt = b / a;
            gradV[w] = gradj;
            dtV[w] = dt;
            objV[w] = b * dt;
            gradElig[w] = pass ? 1 : 0;
            objElig[w] = (pass && !(gradj < in.GMin)) ? 1 : 0;
        }

        // Reduction phase: block maxima with lowest-lane tie-breaking.
        double blockGMax2 = -std::numeric_limits<double>::infinity();
        for (Index w = 0; w < len; ++w) {
            if (gradElig[w] && gradV[w] > blockGMax2) {
                blockGMax2 = gradV[w];
            }
        }
        double blockObj = -std::numeric_limits<double>::infinity();
        Index blockLane = -1;
        for (Index w = 0; w < len; ++w) {
            if (objElig[w] && objV[w] > blockObj) {
                blockObj = objV[w];
                blockLane = w;
            }
        }

        // Merge into the running scalars; strict `>` keeps the earliest block
        // on ties, matching the scalar first-maximum-wins rule.
        if (blockGMax2 > out.GMax2) {
            out.GMax2 = blockGMax2;
        }
        if (blockLane >= 0 && blockObj > out.GMax) {
            out.GMax = blockObj;
            out.Bj = blockStart + blockLane;
            out.delta = -dtV[blockLane];
        }
    }
    return out;
}

}  // namespace dakit::svm
