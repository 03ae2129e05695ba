// =============================================================================
// FILE: tools/bench_main.cpp
// BRIEF: `bench` CLI: correctness-gated timing runs (`run`), correctness-only
//        sweeps (`check`), and synthetic dataset generation (`gen`).
//
// Exit codes: 0 all correctness checks passed, 1 at least one failed,
// 2 usage or data error. Env var BENCH_SEED overrides the default seed;
// an explicit --seed wins over both.
// =============================================================================

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dakit/dakit.hpp"

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("BENCH_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') {
            return v;
        }
        std::cerr << "warning: ignoring non-numeric BENCH_SEED '" << env << "'\n";
    }
    return 42;
}

int run_report(const dakit::bench::BenchConfig& cfg, bool timingOutput) {
    const dakit::bench::BenchReport report = dakit::bench::run_bench(cfg);
    if (timingOutput) {
        std::cout << dakit::bench::to_csv(report);
    } else {
        for (const dakit::bench::BenchRow& row : report.rows) {
            std::printf("[%s] %s / %s\n", row.correct ? "PASS" : "FAIL", row.bench.c_str(),
                        row.variant.c_str());
        }
    }
    return report.all_correct() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dakit benchmark harness"};
    app.require_subcommand(1);

    // --- shared options --------------------------------------------------
    std::vector<std::string> benches{"all"};
    std::string dataArg;
    std::vector<std::size_t> lanes{1, 4, 16};
    int reps = 11;
    std::uint64_t seed = default_seed();
    std::string outCsv;
    std::string outMd;
    std::string injectFault;
    bool csvHeader = false;
    dakit::Index csvLabel = -1;

    CLI::App* run = app.add_subcommand("run", "correctness-gated timing run");
    run->add_option("--bench", benches, "benchmark ids or 'all'")->delimiter(',');
    run->add_option("--data", dataArg, "dataset path or synthetic:<kind>:k=v,...");
    run->add_option("--lanes", lanes, "lane widths for blocked variants")->delimiter(',');
    run->add_option("--reps", reps, "timed repetitions per variant");
    run->add_option("--seed", seed, "RNG seed")->capture_default_str();
    run->add_option("--out", outCsv, "CSV report path");
    run->add_option("--md", outMd, "markdown report path");
    run->add_flag("--csv-header", csvHeader, "treat the first row of a CSV --data as a header");
    run->add_option("--csv-label", csvLabel,
                    "zero-based label column of a CSV --data (-1 = none)");
    run->add_option("--inject-fault", injectFault,
                    "test hook: force this benchmark's checks to fail");

    CLI::App* check = app.add_subcommand("check", "correctness checks only");
    check->add_option("--bench", benches, "benchmark ids or 'all'")->delimiter(',');
    check->add_option("--data", dataArg, "dataset path or synthetic:<kind>:k=v,...");
    check->add_option("--lanes", lanes, "lane widths for blocked variants")->delimiter(',');
    check->add_option("--seed", seed, "RNG seed")->capture_default_str();
    check->add_flag("--csv-header", csvHeader, "treat the first row of a CSV --data as a header");
    check->add_option("--csv-label", csvLabel,
                      "zero-based label column of a CSV --data (-1 = none)");
    check->add_option("--inject-fault", injectFault,
                      "test hook: force this benchmark's checks to fail");

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string kind = "blobs";
    dakit::Index n = 200;
    dakit::Index d = 16;
    dakit::Index classes = 2;
    double density = 0.1;
    double margin = 1.0;
    double spread = 1.0;
    std::string outPath;
    gen->add_option("--kind", kind, "blobs | sparse | margin")->capture_default_str();
    gen->add_option("--n", n, "rows")->capture_default_str();
    gen->add_option("--d", d, "columns")->capture_default_str();
    gen->add_option("--classes", classes, "blob class count")->capture_default_str();
    gen->add_option("--density", density, "sparse nonzero fraction")->capture_default_str();
    gen->add_option("--margin", margin, "class separation margin")->capture_default_str();
    gen->add_option("--spread", spread, "blob standard deviation")->capture_default_str();
    gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
    gen->add_option("--out", outPath, "output path (.libsvm or .csv)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed() || check->parsed()) {
            dakit::bench::BenchConfig cfg;
            cfg.benches = benches;
            cfg.dataArg = dataArg;
            cfg.lanes = lanes;
            cfg.reps = check->parsed() ? 1 : reps;
            cfg.seed = seed;
            cfg.outCsv = outCsv;
            cfg.outMd = outMd;
            cfg.injectFault = injectFault;
            cfg.csvHasHeader = csvHeader;
            cfg.csvLabelColumn = csvLabel;
            return run_report(cfg, run->parsed());
        }

        // gen
        dakit::data::SyntheticSpec spec;
        if (kind == "blobs") {
            spec.kind = dakit::data::SyntheticKind::GaussianBlobs;
        } else if (kind == "sparse") {
            spec.kind = dakit::data::SyntheticKind::SparseUniform;
        } else if (kind == "margin") {
            spec.kind = dakit::data::SyntheticKind::TwoClassMargin;
        } else {
            throw dakit::InvalidSpec("gen: unknown kind '" + kind +
                                     "' (expected blobs|sparse|margin)");
        }
        spec.rows = n;
        spec.cols = d;
        spec.classes = classes;
        spec.density = density;
        spec.margin = margin;
        spec.spread = spread;
        dakit::rng::RngStream stream(dakit::rng::EngineKind::MCG59, seed);
        const dakit::data::Dataset ds = dakit::data::gen_synthetic(spec, stream);
        const bool isCsv =
            outPath.size() >= 4 && outPath.compare(outPath.size() - 4, 4, ".csv") == 0;
        if (isCsv) {
            dakit::data::write_csv(outPath, ds, /*withHeader=*/true);
        } else {
            dakit::data::write_libsvm(outPath, ds);
        }
        std::cout << "wrote " << ds.rows() << "x" << ds.cols() << " dataset to " << outPath
                  << "\n";
        return 0;
    } catch (const dakit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
