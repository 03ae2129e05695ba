#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dakit/core.hpp"
#include "dakit/csr.hpp"
#include "dakit/dataset.hpp"
#include "dakit/rng.hpp"
#include "dakit/sparse.hpp"
#include "dakit/stats.hpp"
#include "dakit/svm.hpp"
#include "dakit/wss.hpp"

// =============================================================================
// FILE: dakit/bench.hpp
// BRIEF: Correctness-gated timing harness. Every benchmark first proves its
//        variant equivalent to a baseline/oracle, then times variants as the
//        median of R repetitions after one warm-up. Speedup is only reported
//        for variants whose correctness check passed.
// =============================================================================

namespace dakit::bench {

// -----------------------------------------------------------------------------
// Report types
// -----------------------------------------------------------------------------

struct BenchConfig {
    std::vector<std::string> benches;  // empty or containing "all" -> every id
    std::string dataArg;               // path or synthetic:<spec>; empty -> per-bench defaults
    std::vector<std::size_t> lanes{1, 4, 16};
    int reps = 11;
    std::uint64_t seed = 42;
    std::string outCsv;
    std::string outMd;
    std::string injectFault;     // test hook: bench id whose variant checks are forced false
    bool csvHasHeader = false;   // when dataArg is a .csv file
    Index csvLabelColumn = -1;   // zero-based label column in that file; -1 = none
};

struct BenchRow {
    std::string bench;
    std::string variant;
    int reps = 0;
    double medianNs = 0.0;
    double minNs = 0.0;
    double maxNs = 0.0;
    bool correct = false;
    std::optional<double> speedup;  // baseline median / variant median; absent if !correct
};

struct BenchReport {
    std::vector<BenchRow> rows;

    bool all_correct() const noexcept {
        return std::all_of(rows.begin(), rows.end(),
                           [](const BenchRow& r) { return r.correct; });
    }
};

inline const std::vector<std::string>& registered_benches() {
    static const std::vector<std::string> ids = {
        "sparse-csrmv", "sparse-csrmm", "sparse-csrmultd", "stats-variance",
        "stats-xcp",    "rng-engines",  "svm-wssj",        "svm-train"};
    return ids;
}

// -----------------------------------------------------------------------------
// Timing
// -----------------------------------------------------------------------------

namespace detail {

/// Optimizer sink: every timed body folds a checksum into this.
inline volatile double g_sink = 0.0;

inline void consume(double v) noexcept { g_sink = g_sink + v; }

struct Timing {
    double medianNs = 0.0;
    double minNs = 0.0;
    double maxNs = 0.0;
};

template <typename F>
Timing time_reps(F&& fn, int reps) {
    fn();  // warm-up, untimed
    std::vector<double> ns(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        ns[static_cast<std::size_t>(r)] =
            std::chrono::duration<double, std::nano>(t1 - t0).count();
    }
    std::sort(ns.begin(), ns.end());
    Timing t;
    t.minNs = ns.front();
    t.maxNs = ns.back();
    const std::size_t mid = ns.size() / 2;
    t.medianNs = ns.size() % 2 ? ns[mid] : 0.5 * (ns[mid - 1] + ns[mid]);
    return t;
}

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

inline bool same_bits(double a, double b) noexcept {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

inline bool wss_equal(const svm::WssResult& a, const svm::WssResult& b) noexcept {
    return a.Bj == b.Bj && same_bits(a.GMax, b.GMax) && same_bits(a.GMax2, b.GMax2) &&
           same_bits(a.delta, b.delta);
}

// -----------------------------------------------------------------------------
// Shared input builders
// -----------------------------------------------------------------------------

struct BenchContext {
    const BenchConfig& config;
    std::optional<data::Dataset> dataset;

    bool faulted(const std::string& id) const { return config.injectFault == id; }
};

inline CsrMatrix3 sparse_input(const BenchContext& ctx, std::uint64_t salt) {
    if (ctx.dataset) {
        return data::dataset_csr(*ctx.dataset);
    }
    data::SyntheticSpec spec;
    spec.kind = data::SyntheticKind::SparseUniform;
    spec.rows = 512;
    spec.cols = 512;
    spec.density = 0.05;
    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + salt);
    return std::get<CsrMatrix3>(data::gen_synthetic(spec, stream).features);
}

/// Observation matrix in variables-by-observations orientation (p x n).
inline DenseMatrix stats_input(const BenchContext& ctx, std::uint64_t salt, Index defaultP,
                               Index defaultN) {
    if (ctx.dataset) {
        const DenseMatrix d = ctx.dataset->dense();
        if (d.rows() < 2) {
            throw DataLoadError("stats benchmarks need at least 2 observations");
        }
        return dense_transpose(d);
    }
    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + salt);
    const std::vector<double> draws = rng::gaussian(
        stream, static_cast<std::size_t>(defaultP * defaultN), 0.5, 2.0);
    return DenseMatrix(defaultP, defaultN, Layout::RowMajor, draws);
}

inline DenseMatrix submatrix_cols(const DenseMatrix& x, Index c0, Index c1) {
    DenseMatrix out(x.rows(), c1 - c0);
    for (Index i = 0; i < x.rows(); ++i) {
        for (Index j = c0; j < c1; ++j) {
            out(i, j - c0) = x(i, j);
        }
    }
    return out;
}

inline void add_baseline(BenchReport& report, const std::string& bench,
                         const std::string& variant, int reps, const Timing& t) {
    report.rows.push_back(BenchRow{bench, variant, reps, t.medianNs, t.minNs, t.maxNs,
                                   true, 1.0});
}

inline void add_variant(BenchReport& report, const std::string& bench,
                        const std::string& variant, int reps, const Timing& t, bool correct,
                        double baselineMedianNs) {
    std::optional<double> speedup;
    if (correct && t.medianNs > 0.0) {
        speedup = baselineMedianNs / t.medianNs;
    }
    report.rows.push_back(
        BenchRow{bench, variant, reps, t.medianNs, t.minNs, t.maxNs, correct, speedup});
}

// -----------------------------------------------------------------------------
// Individual benchmarks
// -----------------------------------------------------------------------------

inline void bench_sparse_csrmv(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "sparse-csrmv";
    const int reps = ctx.config.reps;
    const CsrMatrix3 a = sparse_input(ctx, 11);
    const sparse::SparseHandle handle =
        sparse::optimize_handle(sparse::create_handle(a), sparse::ExpectedOp::MV);
    const DenseMatrix ad = csr_to_dense(a);

    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + 12);
    const std::vector<double> x =
        rng::uniform_real(stream, static_cast<std::size_t>(a.cols), -1.0, 1.0);

    auto dense_mv = [&]() {
        std::vector<double> y(static_cast<std::size_t>(ad.rows()), 0.0);
        for (Index i = 0; i < ad.rows(); ++i) {
            double acc = 0.0;
            for (Index j = 0; j < ad.cols(); ++j) {
                acc += ad(i, j) * x[static_cast<std::size_t>(j)];
            }
            y[static_cast<std::size_t>(i)] = acc;
        }
        return y;
    };
    const std::vector<double> yRef = dense_mv();
    const std::vector<double> zeros(yRef.size(), 0.0);
    const std::vector<double> yGot =
        sparse::csrmv(sparse::SparseOp::NoTrans, 1.0, handle, x, 0.0, zeros);
    const bool correct =
        rel_frobenius(yGot, yRef) <= 1e-12 && !ctx.faulted(id);

    const Timing tBase = time_reps([&]() { consume(dense_mv()[0]); }, reps);
    add_baseline(report, id, "dense-oracle", reps, tBase);

    std::vector<double> y(yRef.size(), 0.0);
    const Timing tKernel = time_reps(
        [&]() {
            sparse::csrmv_inplace(sparse::SparseOp::NoTrans, 1.0, handle, x, 0.0, y);
            consume(y[0]);
        },
        reps);
    add_variant(report, id, "kernel", reps, tKernel, correct, tBase.medianNs);
}

inline void bench_sparse_csrmm(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "sparse-csrmm";
    const int reps = ctx.config.reps;
    const CsrMatrix3 a = sparse_input(ctx, 21);
    const sparse::SparseHandle handle =
        sparse::optimize_handle(sparse::create_handle(a), sparse::ExpectedOp::MM);
    const DenseMatrix ad = csr_to_dense(a);

    constexpr Index kBCols = 16;
    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + 22);
    const std::vector<double> bData = rng::uniform_real(
        stream, static_cast<std::size_t>(a.cols * kBCols), -1.0, 1.0);
    const DenseMatrix b(a.cols, kBCols, Layout::RowMajor, bData);
    const DenseMatrix cZero(a.rows, kBCols, Layout::RowMajor);

    auto dense_mm = [&]() {
        DenseMatrix c(ad.rows(), kBCols, Layout::RowMajor);
        for (Index i = 0; i < ad.rows(); ++i) {
            for (Index k = 0; k < ad.cols(); ++k) {
                const double av = ad(i, k);
                if (av == 0.0) {
                    continue;
                }
                for (Index j = 0; j < kBCols; ++j) {
                    c(i, j) += av * b(k, j);
                }
            }
        }
        return c;
    };
    const DenseMatrix cRef = dense_mm();
    const DenseMatrix cGot =
        sparse::csrmm(sparse::SparseOp::NoTrans, 1.0, handle, b, 0.0, cZero);
    const bool correct =
        rel_frobenius(cGot.data(), cRef.data()) <= 1e-12 && !ctx.faulted(id);

    const Timing tBase = time_reps([&]() { consume(dense_mm()(0, 0)); }, reps);
    add_baseline(report, id, "dense-oracle", reps, tBase);

    const Timing tKernel = time_reps(
        [&]() {
            consume(sparse::csrmm(sparse::SparseOp::NoTrans, 1.0, handle, b, 0.0,
                                  cZero)(0, 0));
        },
        reps);
    add_variant(report, id, "kernel", reps, tKernel, correct, tBase.medianNs);
}

inline void bench_sparse_csrmultd(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "sparse-csrmultd";
    const int reps = ctx.config.reps;
    const CsrMatrix3 a0 = sparse_input(ctx, 31);

    data::SyntheticSpec bSpec;
    bSpec.kind = data::SyntheticKind::SparseUniform;
    bSpec.rows = a0.cols;
    bSpec.cols = 128;
    bSpec.density = 0.05;
    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + 32);
    const CsrMatrix3 b0 =
        std::get<CsrMatrix3>(data::gen_synthetic(bSpec, stream).features);

    const CsrMatrix3 a1 = convert_csr3(a0, IndexBase::One);
    const CsrMatrix3 b1 = convert_csr3(b0, IndexBase::One);
    const DenseMatrix ad = csr_to_dense(a0);
    const DenseMatrix bd = csr_to_dense(b0);

    auto dense_multd = [&]() {
        DenseMatrix c(ad.rows(), bd.cols(), Layout::ColMajor);
        for (Index i = 0; i < ad.rows(); ++i) {
            for (Index k = 0; k < ad.cols(); ++k) {
                const double av = ad(i, k);
                if (av == 0.0) {
                    continue;
                }
                for (Index j = 0; j < bd.cols(); ++j) {
                    c(i, j) += av * bd(k, j);
                }
            }
        }
        return c;
    };
    const DenseMatrix cRef = dense_multd();
    DenseMatrix cGot(a1.rows, b1.cols, Layout::ColMajor);
    sparse::csrmultd(sparse::SparseOp::NoTrans, a1, b1, cGot);
    const bool correct =
        rel_frobenius(cGot.data(), cRef.data()) <= 1e-12 && !ctx.faulted(id);

    const Timing tBase = time_reps([&]() { consume(dense_multd()(0, 0)); }, reps);
    add_baseline(report, id, "dense-oracle", reps, tBase);

    DenseMatrix c(a1.rows, b1.cols, Layout::ColMajor);
    const Timing tKernel = time_reps(
        [&]() {
            sparse::csrmultd(sparse::SparseOp::NoTrans, a1, b1, c);
            consume(c(0, 0));
        },
        reps);
    add_variant(report, id, "kernel", reps, tKernel, correct, tBase.medianNs);
}

inline void bench_stats_variance(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "stats-variance";
    const int reps = ctx.config.reps;
    const DenseMatrix x = stats_input(ctx, 41, 32, 10000);
    const Index p = x.rows();
    const Index n = x.cols();

    auto two_pass = [&]() {
        std::vector<double> var(static_cast<std::size_t>(p), 0.0);
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
            var[static_cast<std::size_t>(i)] = acc / (static_cast<double>(n) - 1.0);
        }
        return var;
    };

    const Index batchLen = std::max<Index>(1, std::min<Index>(1024, n));
    std::vector<DenseMatrix> batches;
    for (Index c0 = 0; c0 < n; c0 += batchLen) {
        batches.push_back(submatrix_cols(x, c0, std::min(n, c0 + batchLen)));
    }
    auto raw_moments = [&]() {
        stats::MomentAccumulator acc(p);
        for (const DenseMatrix& b : batches) {
            acc = stats::moments_update(std::move(acc), b);
        }
        return stats::variance_finalize(acc).variance;
    };

    const std::vector<double> varRef = two_pass();
    const std::vector<double> varGot = raw_moments();
    const bool correct = rel_frobenius(varGot, varRef) <= 1e-10 && !ctx.faulted(id);

    const Timing tBase = time_reps([&]() { consume(two_pass()[0]); }, reps);
    add_baseline(report, id, "two-pass", reps, tBase);
    const Timing tMoments = time_reps([&]() { consume(raw_moments()[0]); }, reps);
    add_variant(report, id, "raw-moments", reps, tMoments, correct, tBase.medianNs);
}

inline void bench_stats_xcp(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "stats-xcp";
    const int reps = ctx.config.reps;
    const DenseMatrix x = stats_input(ctx, 51, 32, 5000);
    const Index p = x.rows();
    const Index n = x.cols();

    auto direct = [&]() {
        std::vector<double> mean(static_cast<std::size_t>(p), 0.0);
        for (Index i = 0; i < p; ++i) {
            for (Index k = 0; k < n; ++k) {
                mean[static_cast<std::size_t>(i)] += x(i, k);
            }
            mean[static_cast<std::size_t>(i)] /= static_cast<double>(n);
        }
        DenseMatrix c(p, p, Layout::RowMajor);
        for (Index i = 0; i < p; ++i) {
            for (Index j = 0; j <= i; ++j) {
                double acc = 0.0;
                for (Index k = 0; k < n; ++k) {
                    acc += (x(i, k) - mean[static_cast<std::size_t>(i)]) *
                           (x(j, k) - mean[static_cast<std::size_t>(j)]);
                }
                c(i, j) = acc;
                c(j, i) = acc;
            }
        }
        return c;
    };

    const Index batchLen = std::max<Index>(1, (n + 7) / 8);
    std::vector<DenseMatrix> batches;
    for (Index c0 = 0; c0 < n; c0 += batchLen) {
        batches.push_back(submatrix_cols(x, c0, std::min(n, c0 + batchLen)));
    }
    auto batched = [&]() {
        stats::CrossProductState state(p);
        for (const DenseMatrix& b : batches) {
            state = stats::xcp_update(std::move(state), b);
        }
        return stats::xcp_finalize(state, stats::Normalize::None);
    };

    const DenseMatrix cRef = direct();
    const DenseMatrix cGot = batched();
    const bool correct =
        rel_frobenius(cGot.data(), cRef.data()) <= 1e-10 && !ctx.faulted(id);

    const Timing tBase = time_reps([&]() { consume(direct()(0, 0)); }, reps);
    add_baseline(report, id, "direct", reps, tBase);
    const Timing tBatched = time_reps([&]() { consume(batched()(0, 0)); }, reps);
    add_variant(report, id, "batched", reps, tBatched, correct, tBase.medianNs);
}

inline void bench_rng_engines(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "rng-engines";
    const int reps = ctx.config.reps;
    constexpr std::size_t kDraws = 1u << 20;
    const std::uint64_t seed = ctx.config.seed;
    const std::uint32_t seed32 = static_cast<std::uint32_t>(seed);
    const std::uint32_t stdSeed = seed32 == 0 ? rng::Mt19937Engine::kDefaultSeed : seed32;

    const Timing tBase = time_reps(
        [&]() {
            std::mt19937 gen(stdSeed);
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < kDraws; ++i) {
                acc += gen();
            }
            consume(static_cast<double>(acc));
        },
        reps);
    add_baseline(report, id, "std-mt19937", reps, tBase);

    // Our MT19937 must reproduce the std engine draw-for-draw.
    bool mtCorrect = true;
    {
        std::mt19937 ref(stdSeed);
        rng::Mt19937Engine ours(seed);
        for (int i = 0; i < 10000; ++i) {
            if (ours.next() != ref()) {
                mtCorrect = false;
                break;
            }
        }
    }
    mtCorrect = mtCorrect && !ctx.faulted(id);
    const Timing tMt = time_reps(
        [&]() {
            rng::Mt19937Engine gen(seed);
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < kDraws; ++i) {
                acc += gen.next();
            }
            consume(static_cast<double>(acc));
        },
        reps);
    add_variant(report, id, "mt19937", reps, tMt, mtCorrect, tBase.medianNs);

    // MCG59 checks its own partition contracts: LeapFrog interleave and
    // SkipAhead concatenation must reproduce the base sequence.
    bool mcgCorrect = true;
    {
        rng::RngStream base(rng::EngineKind::MCG59, seed);
        std::vector<std::uint64_t> expected(600);
        for (std::uint64_t& v : expected) {
            v = base.next_raw();
        }
        constexpr std::uint64_t kLf = 3;
        std::vector<rng::RngStream> lf;
        for (std::uint64_t s = 0; s < kLf; ++s) {
            lf.push_back(rng::partition(rng::EngineKind::MCG59, seed,
                                        rng::PartitionMethod::LeapFrog, kLf, s));
        }
        for (std::size_t m = 0; m < 300 && mcgCorrect; ++m) {
            mcgCorrect = lf[m % kLf].next_raw() == expected[m];
        }
        constexpr std::uint64_t kSa = 4;
        constexpr std::uint64_t kBlock = 50;
        for (std::uint64_t s = 0; s < kSa && mcgCorrect; ++s) {
            rng::RngStream stream = rng::partition(
                rng::EngineKind::MCG59, seed, rng::PartitionMethod::SkipAhead, kSa, s, kBlock);
            for (std::uint64_t m = 0; m < kBlock && mcgCorrect; ++m) {
                mcgCorrect = stream.next_raw() == expected[s * kBlock + m];
            }
        }
    }
    mcgCorrect = mcgCorrect && !ctx.faulted(id);
    const Timing tMcg = time_reps(
        [&]() {
            rng::Mcg59Engine gen(seed);
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < kDraws; ++i) {
                acc += gen.next();
            }
            consume(static_cast<double>(acc));
        },
        reps);
    add_variant(report, id, "mcg59", reps, tMcg, mcgCorrect, tBase.medianNs);
}

/// Random WssInput over its own backing arrays.
struct WssInstance {
    std::vector<double> grad;
    std::vector<double> kernelDiag;
    std::vector<double> kiBlock;
    std::vector<std::uint8_t> sampleFlags;
    svm::WssInput in;
};

inline WssInstance make_wss_instance(rng::RngStream& stream, Index n) {
    WssInstance w;
    w.grad = rng::uniform_real(stream, static_cast<std::size_t>(n), -2.0, 2.0);
    w.kernelDiag = rng::uniform_real(stream, static_cast<std::size_t>(n), 0.5, 1.5);
    w.kiBlock = rng::uniform_real(stream, static_cast<std::size_t>(n), -1.0, 1.0);
    w.sampleFlags.resize(static_cast<std::size_t>(n));
    for (std::uint8_t& f : w.sampleFlags) {
        const std::uint64_t r = stream.next_raw();
        f = static_cast<std::uint8_t>(((r & 4) ? svm::flags::kPos : svm::flags::kNeg) |
                                      ((r & 1) ? svm::flags::kUp : 0) |
                                      ((r & 2) ? svm::flags::kLow : 0));
    }
    w.in.jStart = 0;
    w.in.jEnd = n;
    w.in.grad = w.grad.data();
    w.in.sampleFlags = w.sampleFlags.data();
    w.in.kernelDiag = w.kernelDiag.data();
    w.in.kiBlock = w.kiBlock.data();
    w.in.GMin = -2.1;
    w.in.Kii = 1.0;
    w.in.tau = 1e-12;
    return w;
}

inline void bench_svm_wssj(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "svm-wssj";
    const int reps = ctx.config.reps;
    rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + 61);
    const WssInstance big = make_wss_instance(stream, 100000);
    const svm::WssResult ref = svm::wss_j_scalar(big.in);

    const Timing tBase = time_reps(
        [&]() { consume(svm::wss_j_scalar(big.in).GMax); }, reps);
    add_baseline(report, id, "scalar", reps, tBase);

    for (const std::size_t w : ctx.config.lanes) {
        const LanePolicy lanes(w);
        bool correct = wss_equal(svm::wss_j_blocked(big.in, lanes), ref);
        for (int t = 0; t < 50 && correct; ++t) {
            const WssInstance small = make_wss_instance(stream, 1 + (t * 7) % 64);
            correct = wss_equal(svm::wss_j_blocked(small.in, lanes),
                                svm::wss_j_scalar(small.in));
        }
        correct = correct && !ctx.faulted(id);
        const Timing t = time_reps(
            [&]() { consume(svm::wss_j_blocked(big.in, lanes).GMax); }, reps);
        add_variant(report, id, "blocked-" + std::to_string(w), reps, t, correct,
                    tBase.medianNs);
    }
}

inline bool models_identical(const svm::TrainResult& a, const svm::TrainResult& b) {
    if (a.iterations != b.iterations || a.model.supportIdx != b.model.supportIdx ||
        !same_bits(a.model.bias, b.model.bias) ||
        a.model.alphaY.size() != b.model.alphaY.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.model.alphaY.size(); ++i) {
        if (!same_bits(a.model.alphaY[i], b.model.alphaY[i])) {
            return false;
        }
    }
    return true;
}

inline void bench_svm_train(const BenchContext& ctx, BenchReport& report) {
    const std::string id = "svm-train";
    const int reps = ctx.config.reps;

    DenseMatrix x(0, 0);
    std::vector<double> y;
    if (ctx.dataset) {
        if (!ctx.dataset->labels) {
            throw DataLoadError("svm-train needs a labeled dataset");
        }
        x = ctx.dataset->dense();
        y = *ctx.dataset->labels;
        for (double v : y) {
            if (v != 1.0 && v != -1.0) {
                throw DataLoadError("svm-train needs labels in {-1, +1}");
            }
        }
    } else {
        data::SyntheticSpec spec;
        spec.kind = data::SyntheticKind::TwoClassMargin;
        spec.rows = 300;
        spec.cols = 8;
        spec.margin = 0.5;
        rng::RngStream stream(rng::EngineKind::MCG59, ctx.config.seed + 71);
        data::Dataset ds = data::gen_synthetic(spec, stream);
        x = std::get<DenseMatrix>(std::move(ds.features));
        y = std::move(*ds.labels);
    }

    svm::SvmParams params;
    params.C = 1.0;
    params.kernel = svm::KernelKind::Linear;
    params.eps = 1e-3;

    const svm::TrainResult ref = svm::smo_train(x, y, params);
    const Timing tBase = time_reps(
        [&]() { consume(svm::smo_train(x, y, params).model.bias); }, reps);
    add_baseline(report, id, "scalar", reps, tBase);

    for (const std::size_t w : ctx.config.lanes) {
        svm::SvmParams blocked = params;
        blocked.laneWidth = w;
        const bool correct =
            models_identical(svm::smo_train(x, y, blocked), ref) && !ctx.faulted(id);
        const Timing t = time_reps(
            [&]() { consume(svm::smo_train(x, y, blocked).model.bias); }, reps);
        add_variant(report, id, "blocked-" + std::to_string(w), reps, t, correct,
                    tBase.medianNs);
    }
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Harness entry point and report writers
// -----------------------------------------------------------------------------

inline std::string to_csv(const BenchReport& report) {
    std::string out = "bench,variant,reps,median_ns,min_ns,max_ns,correct,speedup\n";
    char buf[256];
    for (const BenchRow& r : report.rows) {
        std::string speedup;
        if (r.speedup) {
            char sbuf[40];
            std::snprintf(sbuf, sizeof(sbuf), "%.6g", *r.speedup);
            speedup = sbuf;
        }
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%lld,%lld,%lld,%s,%s\n",
                      r.bench.c_str(), r.variant.c_str(), r.reps,
                      static_cast<long long>(std::llround(r.medianNs)),
                      static_cast<long long>(std::llround(r.minNs)),
                      static_cast<long long>(std::llround(r.maxNs)),
                      r.correct ? "true" : "false", speedup.c_str());
        out += buf;
    }
    return out;
}

inline std::string to_markdown(const BenchReport& report) {
    std::string out =
        "| bench | variant | reps | median_ns | min_ns | max_ns | correct | speedup |\n"
        "|---|---|---|---|---|---|---|---|\n";
    char buf[256];
    for (const BenchRow& r : report.rows) {
        std::string speedup = "—";
        if (r.speedup) {
            char sbuf[40];
            std::snprintf(sbuf, sizeof(sbuf), "%.3fx", *r.speedup);
            speedup = sbuf;
        }
        std::snprintf(buf, sizeof(buf), "| %s | %s | %d | %lld | %lld | %lld | %s | %s |\n",
                      r.bench.c_str(), r.variant.c_str(), r.reps,
                      static_cast<long long>(std::llround(r.medianNs)),
                      static_cast<long long>(std::llround(r.minNs)),
                      static_cast<long long>(std::llround(r.maxNs)),
                      r.correct ? "true" : "false", speedup.c_str());
        out += buf;
    }
    return out;
}

inline void write_report_files(const BenchReport& report, const std::string& csvPath,
                               const std::string& mdPath) {
    if (!csvPath.empty()) {
        std::ofstream out(csvPath);
        if (!out) {
            throw DataLoadError("cannot open '" + csvPath + "' for writing");
        }
        out << to_csv(report);
    }
    if (!mdPath.empty()) {
        std::ofstream out(mdPath);
        if (!out) {
            throw DataLoadError("cannot open '" + mdPath + "' for writing");
        }
        out << to_markdown(report);
    }
}

inline BenchReport run_bench(const BenchConfig& config) {
    if (config.reps < 1) {
        throw InvalidRange("run_bench: reps must be >= 1");
    }
    if (config.lanes.empty()) {
        throw InvalidRange("run_bench: at least one lane width is required");
    }
    for (const std::size_t w : config.lanes) {
        if (w < 1) {
            throw InvalidRange("run_bench: lane widths must be >= 1");
        }
    }
    std::vector<std::string> ids = config.benches;
    const bool wantAll =
        ids.empty() || std::find(ids.begin(), ids.end(), "all") != ids.end();
    if (wantAll) {
        ids = registered_benches();
    }
    for (const std::string& id : ids) {
        const auto& known = registered_benches();
        if (std::find(known.begin(), known.end(), id) == known.end()) {
            throw UnknownBench("run_bench: unknown benchmark '" + id + "'");
        }
    }

    detail::BenchContext ctx{config, std::nullopt};
    if (!config.dataArg.empty()) {
        ctx.dataset = data::load_data(config.dataArg, config.seed, config.csvHasHeader,
                                      config.csvLabelColumn);
    }

    BenchReport report;
    for (const std::string& id : ids) {
        if (id == "sparse-csrmv") {
            detail::bench_sparse_csrmv(ctx, report);
        } else if (id == "sparse-csrmm") {
            detail::bench_sparse_csrmm(ctx, report);
        } else if (id == "sparse-csrmultd") {
            detail::bench_sparse_csrmultd(ctx, report);
        } else if (id == "stats-variance") {
            detail::bench_stats_variance(ctx, report);
        } else if (id == "stats-xcp") {
            detail::bench_stats_xcp(ctx, report);
        } else if (id == "rng-engines") {
            detail::bench_rng_engines(ctx, report);
        } else if (id == "svm-wssj") {
            detail::bench_svm_wssj(ctx, report);
        } else if (id == "svm-train") {
            detail::bench_svm_train(ctx, report);
        }
    }
    write_report_files(report, config.outCsv, config.outMd);
    return report;
}

}  // namespace dakit::bench
