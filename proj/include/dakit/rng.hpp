#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dakit/core.hpp"

// =============================================================================
// FILE: dakit/rng.hpp
// BRIEF: Parallel-stream RNG subsystem: MT19937 and MCG59 engines with
//        Family / SkipAhead / LeapFrog partitioning and a minimal
//        distribution layer (uniform real, gaussian).
//
// Engines and streams are single-owner mutable values with no locking; the
// partition methods exist so each execution unit can own exactly one stream.
// =============================================================================

namespace dakit::rng {

enum class EngineKind { MT19937, MCG59 };

enum class PartitionMethod { Family, SkipAhead, LeapFrog };

// -----------------------------------------------------------------------------
// MT19937
// -----------------------------------------------------------------------------

/// Standard 32-bit Mersenne Twister. Seeding uses the Knuth-multiplier
/// recurrence on the low 32 bits of the seed; seed 0 is remapped to the
/// conventional default 5489.
class Mt19937Engine {
public:
    static constexpr std::uint32_t kDefaultSeed = 5489u;
    /// SkipAhead on this engine is iterated stepping, capped at 2^24 steps.
    static constexpr std::uint64_t kJumpCap = 1ull << 24;

    explicit Mt19937Engine(std::uint64_t seed) {
        std::uint32_t s = static_cast<std::uint32_t>(seed);
        if (s == 0) {
            s = kDefaultSeed;
        }
        state_[0] = s;
        for (std::uint32_t i = 1; i < kN; ++i) {
            state_[i] = 1812433253u * (state_[i - 1] ^ (state_[i - 1] >> 30)) + i;
        }
        pos_ = kN;
    }

    std::uint32_t next() noexcept {
        if (pos_ >= kN) {
            twist();
        }
        std::uint32_t y = state_[pos_++];
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c5680u;
        y ^= (y << 15) & 0xefc60000u;
        y ^= y >> 18;
        return y;
    }

    void discard(std::uint64_t n) noexcept {
        for (std::uint64_t i = 0; i < n; ++i) {
            next();
        }
    }

private:
    static constexpr std::uint32_t kN = 624;
    static constexpr std::uint32_t kM = 397;

    void twist() noexcept {
        for (std::uint32_t i = 0; i < kN; ++i) {
            const std::uint32_t y =
                (state_[i] & 0x80000000u) | (state_[(i + 1) % kN] & 0x7fffffffu);
            std::uint32_t next = state_[(i + kM) % kN] ^ (y >> 1);
            if (y & 1u) {
                next ^= 0x9908b0dfu;
            }
            state_[i] = next;
        }
        pos_ = 0;
    }

    std::array<std::uint32_t, kN> state_{};
    std::uint32_t pos_ = 0;
};

// -----------------------------------------------------------------------------
// MCG59
// -----------------------------------------------------------------------------

/// Multiplicative congruential generator x_{n+1} = a x_n mod 2^59, a = 13^13.
/// The state is kept odd, so the sequence never hits zero and jumping is a
/// plain multiplier power.
class Mcg59Engine {
public:
    static constexpr std::uint64_t kMultiplier = 302875106592253ull;  // 13^13
    static constexpr std::uint64_t kModMask = (1ull << 59) - 1;

    explicit Mcg59Engine(std::uint64_t seed) noexcept
        : state_((seed & kModMask) | 1ull) {}

    std::uint64_t state() const noexcept { return state_; }

    std::uint64_t next() noexcept {
        state_ = mul_mod(kMultiplier, state_);
        return state_;
    }

    /// Returns the value `mult * state mod 2^59` and adopts it as the new
    /// state; used by the leapfrog stride.
    std::uint64_t step_with(std::uint64_t mult) noexcept {
        state_ = mul_mod(mult, state_);
        return state_;
    }

    /// Advances by n steps in O(log n) multiplications.
    void jump(std::uint64_t n) noexcept { state_ = mul_mod(pow_mod(kMultiplier, n), state_); }

    static std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b) noexcept {
        return static_cast<std::uint64_t>(
                   (static_cast<unsigned __int128>(a) * b)) &
               kModMask;
    }

    static std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) noexcept {
        std::uint64_t result = 1;
        std::uint64_t acc = base & kModMask;
        while (exp > 0) {
            if (exp & 1ull) {
                result = mul_mod(result, acc);
            }
            acc = mul_mod(acc, acc);
            exp >>= 1;
        }
        return result;
    }

private:
    std::uint64_t state_;
};

// -----------------------------------------------------------------------------
// RngEngine: kind-erased engine value
// -----------------------------------------------------------------------------

class RngEngine {
public:
    RngEngine(EngineKind kind, std::uint64_t seed)
        : kind_(kind), seed_(seed), mt_(seed), mcg_(seed) {}

    EngineKind kind() const noexcept { return kind_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// Bits of entropy per raw draw (32 for MT19937, 59 for MCG59).
    int raw_bits() const noexcept { return kind_ == EngineKind::MT19937 ? 32 : 59; }

    std::uint64_t next_raw() noexcept {
        return kind_ == EngineKind::MT19937 ? static_cast<std::uint64_t>(mt_.next())
                                            : mcg_.next();
    }

    /// Skips n draws. MCG59 jumps in O(log n); MT19937 steps one by one and
    /// rejects jumps beyond its cap.
    void jump_ahead(std::uint64_t n) {
        if (kind_ == EngineKind::MCG59) {
            mcg_.jump(n);
            return;
        }
        if (n > Mt19937Engine::kJumpCap) {
            throw JumpTooLarge("jump_ahead: MT19937 skip exceeds the 2^24-step cap");
        }
        mt_.discard(n);
    }

    Mcg59Engine& mcg() noexcept { return mcg_; }
    const Mcg59Engine& mcg() const noexcept { return mcg_; }

private:
    EngineKind kind_;
    std::uint64_t seed_;
    Mt19937Engine mt_;
    Mcg59Engine mcg_;
};

inline RngEngine engine_new(EngineKind kind, std::uint64_t seed) {
    return RngEngine(kind, seed);
}

inline std::uint64_t next_raw(RngEngine& engine) noexcept { return engine.next_raw(); }

// -----------------------------------------------------------------------------
// Streams
// -----------------------------------------------------------------------------

namespace detail {

/// Fixed 64-bit mix used to derive Family-method stream seeds. This is the
/// splitmix64 output function over seed + (idx+1) * golden-gamma.
inline std::uint64_t family_seed(std::uint64_t seed, std::uint64_t idx) noexcept {
    std::uint64_t z = seed + (idx + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace detail

/// A generator plus its slot in a k-way partition of the base sequence.
///   Family:    independently re-seeded engine per stream
///   SkipAhead: stream idx starts at global draw idx*blockLen
///   LeapFrog:  stream idx yields global draws idx, idx+k, idx+2k, ...
class RngStream {
public:
    /// Unpartitioned base stream.
    RngStream(EngineKind kind, std::uint64_t seed)
        : engine_(kind, seed), method_(PartitionMethod::SkipAhead), k_(1), idx_(0) {}

    std::uint64_t next_raw() {
        if (method_ == PartitionMethod::LeapFrog) {
            const std::uint64_t out = engine_.mcg().step_with(pendingMul_);
            pendingMul_ = strideMul_;
            return out;
        }
        return engine_.next_raw();
    }

    EngineKind kind() const noexcept { return engine_.kind(); }
    PartitionMethod method() const noexcept { return method_; }
    std::uint64_t stream_count() const noexcept { return k_; }
    std::uint64_t stream_index() const noexcept { return idx_; }

    /// Raw draw mapped to [0,1).
    double next_unit() {
        const double scale = engine_.raw_bits() == 32 ? 0x1p-32 : 0x1p-59;
        return static_cast<double>(next_raw()) * scale;
    }

private:
    friend RngStream partition(EngineKind, std::uint64_t, PartitionMethod, std::uint64_t,
                               std::uint64_t, std::uint64_t);

    RngEngine engine_;
    PartitionMethod method_;
    std::uint64_t k_;
    std::uint64_t idx_;
    std::uint64_t strideMul_ = 0;   // LeapFrog: 13^13 to the k-th power, mod 2^59
    std::uint64_t pendingMul_ = 0;  // LeapFrog: multiplier for the next draw
};

/// Builds stream idx of a k-way partition over the engine's base sequence.
/// blockLen is only meaningful for SkipAhead.
inline RngStream partition(EngineKind kind, std::uint64_t seed, PartitionMethod method,
                           std::uint64_t k, std::uint64_t idx, std::uint64_t blockLen = 0) {
    if (k < 1) {
        throw InvalidRange("partition: k must be >= 1");
    }
    if (idx >= k) {
        throw InvalidRange("partition: idx must lie in [0, k)");
    }

    switch (method) {
        case PartitionMethod::Family: {
            RngStream s(kind, detail::family_seed(seed, idx));
            s.method_ = PartitionMethod::Family;
            s.k_ = k;
            s.idx_ = idx;
            return s;
        }
        case PartitionMethod::SkipAhead: {
            if (blockLen < 1) {
                throw InvalidRange("partition: SkipAhead needs blockLen >= 1");
            }
            RngStream s(kind, seed);
            s.method_ = PartitionMethod::SkipAhead;
            s.k_ = k;
            s.idx_ = idx;
            s.engine_.jump_ahead(idx * blockLen);
            return s;
        }
        case PartitionMethod::LeapFrog: {
            if (kind != EngineKind::MCG59) {
                throw UnsupportedMethod("partition: LeapFrog is only available for MCG59");
            }
            RngStream s(kind, seed);
            s.method_ = PartitionMethod::LeapFrog;
            s.k_ = k;
            s.idx_ = idx;
            s.engine_.mcg().jump(idx);
            s.strideMul_ = Mcg59Engine::pow_mod(Mcg59Engine::kMultiplier, k);
            s.pendingMul_ = Mcg59Engine::kMultiplier;  // first draw advances by one
            return s;
        }
    }
    throw UnsupportedMethod("partition: unknown method");
}

// -----------------------------------------------------------------------------
// Distributions
// -----------------------------------------------------------------------------

/// count values in [lo, hi), each from one raw draw.
inline std::vector<double> uniform_real(RngStream& stream, std::size_t count, double lo,
                                        double hi) {
    if (!(lo < hi)) {
        throw InvalidRange("uniform_real: requires lo < hi");
    }
    std::vector<double> out(count);
    for (double& v : out) {
        v = lo + stream.next_unit() * (hi - lo);
        if (v >= hi) {  // guard the open end against rounding
            v = std::nextafter(hi, lo);
        }
    }
    return out;
}

/// Box-Muller over consecutive uniform draws; two raws per pair of outputs.
inline std::vector<double> gaussian(RngStream& stream, std::size_t count, double mean,
                                    double sigma) {
    if (!(sigma > 0.0)) {
        throw InvalidSigma("gaussian: requires sigma > 0");
    }
    std::vector<double> out(count);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (std::size_t i = 0; i < count; i += 2) {
        const double u1 = 1.0 - stream.next_unit();  // (0, 1], keeps log finite
        const double u2 = stream.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[i] = mean + sigma * (r * std::cos(kTwoPi * u2));
        if (i + 1 < count) {
            out[i + 1] = mean + sigma * (r * std::sin(kTwoPi * u2));
        }
    }
    return out;
}

}  // namespace dakit::rng
