// =============================================================================
// FILE: tests/test_rng.cpp
// BRIEF: Engines (MT19937, MCG59), stream partitioning (Family / SkipAhead /
//        LeapFrog), and the distribution layer. MT19937 is checked against
//        std::mt19937 as an independent reference; MCG59 against frozen
//        modular-arithmetic constants.
// =============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "dakit/rng.hpp"

using dakit::rng::EngineKind;
using dakit::rng::Mcg59Engine;
using dakit::rng::Mt19937Engine;
using dakit::rng::PartitionMethod;
using dakit::rng::RngEngine;
using dakit::rng::RngStream;

namespace {

std::vector<std::uint64_t> draw(RngStream& s, std::size_t count) {
    std::vector<std::uint64_t> out(count);
    for (auto& v : out) {
        v = s.next_raw();
    }
    return out;
}

}  // namespace

// -----------------------------------------------------------------------------
// MCG59 engine: frozen integer oracles
// -----------------------------------------------------------------------------

TEST_CASE("MCG59 seeding rules", "[rng][mcg59]") {
    CHECK(Mcg59Engine(1).state() == 1);
    CHECK(Mcg59Engine(0).state() == 1);  // remap rule: forced odd
    CHECK(Mcg59Engine(4).state() == 5);  // low bit set
    CHECK(Mcg59Engine((1ull << 59) + 3).state() == 3);  // reduced mod 2^59
}

TEST_CASE("MCG59 matches the modular-arithmetic oracle", "[rng][mcg59]") {
    // x_{n+1} = 13^13 x_n mod 2^59, x_0 = 1. Constants recomputed with
    // arbitrary-precision integer arithmetic.
    CHECK(Mcg59Engine::kMultiplier == 302875106592253ull);

    Mcg59Engine e(1);
    CHECK(e.next() == 302875106592253ull);    // 13^13
    CHECK(e.next() == 458357793578900489ull); // 13^26 mod 2^59
    CHECK(e.next() == 130117127544889829ull);
    CHECK(e.next() == 214028503895537745ull);
    CHECK(e.next() == 129723886062288141ull);

    CHECK(Mcg59Engine::pow_mod(Mcg59Engine::kMultiplier, 100) == 117700022380252113ull);
    CHECK(Mcg59Engine::pow_mod(Mcg59Engine::kMultiplier, 0) == 1ull);
}

TEST_CASE("MCG59 jump equals stepping", "[rng][mcg59]") {
    for (const std::uint64_t n : {0ull, 1ull, 7ull, 1000ull, 123456ull}) {
        Mcg59Engine stepped(987654321);
        for (std::uint64_t i = 0; i < n; ++i) {
            stepped.next();
        }
        Mcg59Engine jumped(987654321);
        jumped.jump(n);
        CHECK(jumped.state() == stepped.state());
        CHECK(jumped.next() == stepped.next());
    }
}

TEST_CASE("MCG59 jump-then-step equals step-then-jump", "[rng][mcg59]") {
    Mcg59Engine a(42);
    a.jump(500);
    for (int i = 0; i < 30; ++i) {
        a.next();
    }

    Mcg59Engine b(42);
    for (int i = 0; i < 30; ++i) {
        b.next();
    }
    b.jump(500);

    CHECK(a.state() == b.state());
}

// -----------------------------------------------------------------------------
// MT19937 engine vs. the standard-library reference
// -----------------------------------------------------------------------------

TEST_CASE("MT19937 matches std::mt19937 across seeds", "[rng][mt19937]") {
    for (const std::uint32_t seed : {5489u, 1u, 42u, 19650218u, 4294967295u}) {
        Mt19937Engine mine(seed);
        std::mt19937 ref(seed);
        for (int i = 0; i < 10000; ++i) {
            REQUIRE(mine.next() == ref());
        }
    }
}

TEST_CASE("MT19937 seed handling", "[rng][mt19937]") {
    SECTION("seed 0 is remapped to the default 5489") {
        Mt19937Engine zero(0);
        std::mt19937 ref(5489u);
        for (int i = 0; i < 100; ++i) {
            CHECK(zero.next() == ref());
        }
    }

    SECTION("only the low 32 bits of the seed are used") {
        Mt19937Engine wide((1ull << 32) + 7ull);
        Mt19937Engine narrow(7);
        for (int i = 0; i < 100; ++i) {
            CHECK(wide.next() == narrow.next());
        }
    }
}

TEST_CASE("MT19937 discard equals stepping and respects the jump cap",
          "[rng][mt19937]") {
    Mt19937Engine stepped(777);
    for (int i = 0; i < 2500; ++i) {
        stepped.next();
    }
    Mt19937Engine skipped(777);
    skipped.discard(2500);
    CHECK(skipped.next() == stepped.next());

    RngEngine atCap(EngineKind::MT19937, 777);
    CHECK_NOTHROW(atCap.jump_ahead(Mt19937Engine::kJumpCap));
    RngEngine overCap(EngineKind::MT19937, 777);
    CHECK_THROWS_AS(overCap.jump_ahead(Mt19937Engine::kJumpCap + 1), dakit::JumpTooLarge);
}

TEST_CASE("engine_new dispatches per kind", "[rng][engine]") {
    RngEngine mt = dakit::rng::engine_new(EngineKind::MT19937, 12345);
    std::mt19937 ref(12345u);
    CHECK(dakit::rng::next_raw(mt) == ref());
    CHECK(mt.raw_bits() == 32);

    RngEngine mcg = dakit::rng::engine_new(EngineKind::MCG59, 1);
    CHECK(dakit::rng::next_raw(mcg) == 302875106592253ull);
    CHECK(mcg.raw_bits() == 59);
}

// -----------------------------------------------------------------------------
// Partitioning
// -----------------------------------------------------------------------------

TEST_CASE("partition validates its arguments", "[rng][partition]") {
    CHECK_THROWS_AS(dakit::rng::partition(EngineKind::MCG59, 1, PartitionMethod::Family, 0, 0),
                    dakit::InvalidRange);
    CHECK_THROWS_AS(dakit::rng::partition(EngineKind::MCG59, 1, PartitionMethod::Family, 4, 4),
                    dakit::InvalidRange);
    CHECK_THROWS_AS(
        dakit::rng::partition(EngineKind::MCG59, 1, PartitionMethod::SkipAhead, 4, 0, 0),
        dakit::InvalidRange);
    CHECK_THROWS_AS(
        dakit::rng::partition(EngineKind::MT19937, 1, PartitionMethod::LeapFrog, 2, 0),
        dakit::UnsupportedMethod);
}

TEST_CASE("LeapFrog k=1 degenerates to the base stream", "[rng][partition]") {
    RngStream base(EngineKind::MCG59, 2024);
    RngStream lf = dakit::rng::partition(EngineKind::MCG59, 2024, PartitionMethod::LeapFrog,
                                    1, 0);
    for (int i = 0; i < 200; ++i) {
        CHECK(lf.next_raw() == base.next_raw());
    }
}

TEST_CASE("LeapFrog streams interleave into the base sequence", "[rng][partition]") {
    for (const std::uint64_t k : {2ull, 3ull, 8ull, 64ull}) {
        const std::uint64_t seed = 31337 + k;
        const std::size_t perStream = 40;

        RngStream base(EngineKind::MCG59, seed);
        const auto expect = draw(base, perStream * static_cast<std::size_t>(k));

        std::vector<std::vector<std::uint64_t>> streams;
        for (std::uint64_t idx = 0; idx < k; ++idx) {
            RngStream s = dakit::rng::partition(EngineKind::MCG59, seed,
                                           PartitionMethod::LeapFrog, k, idx);
            streams.push_back(draw(s, perStream));
        }

        for (std::size_t t = 0; t < expect.size(); ++t) {
            REQUIRE(streams[t % k][t / k] == expect[t]);
        }
    }
}

TEST_CASE("SkipAhead blocks concatenate into the base sequence", "[rng][partition]") {
    for (const std::uint64_t k : {2ull, 3ull, 8ull, 64ull}) {
        const std::uint64_t blockLen = 100;
        for (const EngineKind kind : {EngineKind::MCG59, EngineKind::MT19937}) {
            const std::uint64_t seed = 555 + k;
            RngStream base(kind, seed);
            const auto expect = draw(base, static_cast<std::size_t>(k * blockLen));

            std::vector<std::uint64_t> concat;
            for (std::uint64_t idx = 0; idx < k; ++idx) {
                RngStream s = dakit::rng::partition(kind, seed, PartitionMethod::SkipAhead, k,
                                               idx, blockLen);
                const auto block = draw(s, static_cast<std::size_t>(blockLen));
                concat.insert(concat.end(), block.begin(), block.end());
            }
            REQUIRE(concat == expect);
        }
    }
}

TEST_CASE("Family streams are independent and reproducible", "[rng][partition]") {
    constexpr std::uint64_t k = 8;
    std::vector<std::uint64_t> first;
    for (std::uint64_t idx = 0; idx < k; ++idx) {
        RngStream s = dakit::rng::partition(EngineKind::MCG59, 99, PartitionMethod::Family, k,
                                       idx);
        first.push_back(s.next_raw());
    }
    // No collisions among the k first draws.
    for (std::size_t i = 0; i < first.size(); ++i) {
        for (std::size_t j = i + 1; j < first.size(); ++j) {
            CHECK(first[i] != first[j]);
        }
    }
    // Replay is bit-identical.
    for (std::uint64_t idx = 0; idx < k; ++idx) {
        RngStream s = dakit::rng::partition(EngineKind::MCG59, 99, PartitionMethod::Family, k,
                                       idx);
        CHECK(s.next_raw() == first[static_cast<std::size_t>(idx)]);
    }
    // Family streams also exist for MT19937.
    RngStream mt0 = dakit::rng::partition(EngineKind::MT19937, 99, PartitionMethod::Family, 2,
                                     0);
    RngStream mt1 = dakit::rng::partition(EngineKind::MT19937, 99, PartitionMethod::Family, 2,
                                     1);
    CHECK(mt0.next_raw() != mt1.next_raw());
}

// -----------------------------------------------------------------------------
// Distributions
// -----------------------------------------------------------------------------

TEST_CASE("uniform_real respects its half-open range", "[rng][dist]") {
    for (const EngineKind kind : {EngineKind::MT19937, EngineKind::MCG59}) {
        RngStream s(kind, 4242);
        const auto v = dakit::rng::uniform_real(s, 100000, -2.5, 3.5);
        REQUIRE(v.size() == 100000);
        for (const double x : v) {
            REQUIRE(x >= -2.5);
            REQUIRE(x < 3.5);
        }
    }

    RngStream s(EngineKind::MCG59, 1);
    CHECK(dakit::rng::uniform_real(s, 0, 0.0, 1.0).empty());
    CHECK_THROWS_AS(dakit::rng::uniform_real(s, 4, 1.0, 1.0), dakit::InvalidRange);
    CHECK_THROWS_AS(dakit::rng::uniform_real(s, 4, 2.0, 1.0), dakit::InvalidRange);
}

TEST_CASE("uniform_real replays deterministically", "[rng][dist]") {
    RngStream a(EngineKind::MCG59, 777);
    RngStream b(EngineKind::MCG59, 777);
    CHECK(dakit::rng::uniform_real(a, 1000, 0.0, 1.0) == dakit::rng::uniform_real(b, 1000, 0.0, 1.0));
}

TEST_CASE("gaussian sampling", "[rng][dist]") {
    SECTION("statistical moments at n=1e5") {
        for (const EngineKind kind : {EngineKind::MT19937, EngineKind::MCG59}) {
            RngStream s(kind, 20240101);
            const std::size_t n = 100000;
            const double mu = 1.5;
            const double sigma = 2.0;
            const auto v = dakit::rng::gaussian(s, n, mu, sigma);
            REQUIRE(v.size() == n);

            double sum = 0.0;
            for (const double x : v) {
                sum += x;
            }
            const double mean = sum / static_cast<double>(n);
            double ss = 0.0;
            for (const double x : v) {
                ss += (x - mean) * (x - mean);
            }
            const double sd = std::sqrt(ss / static_cast<double>(n - 1));

            // Mean within 4 sigma/sqrt(n); stdev within 5% at this n.
            CHECK(std::abs(mean - mu) <= 4.0 * sigma / std::sqrt(static_cast<double>(n)));
            CHECK(std::abs(sd - sigma) <= 0.05 * sigma);
        }
    }

    SECTION("trivials and validation") {
        RngStream s(EngineKind::MCG59, 5);
        CHECK(dakit::rng::gaussian(s, 0, 0.0, 1.0).empty());
        CHECK_THROWS_AS(dakit::rng::gaussian(s, 4, 0.0, 0.0), dakit::InvalidSigma);
        CHECK_THROWS_AS(dakit::rng::gaussian(s, 4, 0.0, -1.0), dakit::InvalidSigma);

        RngStream a(EngineKind::MT19937, 99);
        RngStream b(EngineKind::MT19937, 99);
        CHECK(dakit::rng::gaussian(a, 501, 0.0, 1.0) == dakit::rng::gaussian(b, 501, 0.0, 1.0));

        // Every value is finite (Box-Muller log argument never reaches 0).
        RngStream c(EngineKind::MCG59, 3);
        for (const double x : dakit::rng::gaussian(c, 20001, 0.0, 1.0)) {
            REQUIRE(std::isfinite(x));
        }
    }
}

TEST_CASE("next_unit stays in [0,1) for both engines", "[rng][dist]") {
    for (const EngineKind kind : {EngineKind::MT19937, EngineKind::MCG59}) {
        RngStream s(kind, 8);
        for (int i = 0; i < 50000; ++i) {
            const double u = s.next_unit();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
        }
    }
}
