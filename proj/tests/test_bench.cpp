// =============================================================================
// FILE: tests/test_bench.cpp
// BRIEF: Benchmark harness: row schema, speedup accounting, fault injection,
//        report serialization, and run-to-run stability.
// =============================================================================

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dakit/bench.hpp"

using dakit::bench::BenchConfig;
using dakit::bench::BenchReport;
using dakit::bench::BenchRow;

namespace {

/// Small, fast config: tiny rep count, one bench at a time.
BenchConfig quick_config(std::vector<std::string> benches) {
    BenchConfig cfg;
    cfg.benches = std::move(benches);
    cfg.reps = 3;
    cfg.lanes = {1, 4};
    cfg.seed = 42;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "dakit-bench-tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

const BenchRow* find_row(const BenchReport& r, const std::string& bench,
                         const std::string& variant) {
    for (const auto& row : r.rows) {
        if (row.bench == bench && row.variant == variant) {
            return &row;
        }
    }
    return nullptr;
}

}  // namespace

TEST_CASE("registered bench ids are exactly the documented set", "[bench]") {
    const auto& ids = dakit::bench::registered_benches();
    const std::vector<std::string> expect{"sparse-csrmv",   "sparse-csrmm",
                                          "sparse-csrmultd", "stats-variance",
                                          "stats-xcp",       "rng-engines",
                                          "svm-wssj",        "svm-train"};
    CHECK(ids == expect);
}

TEST_CASE("unknown bench ids are rejected", "[bench]") {
    CHECK_THROWS_AS(dakit::bench::run_bench(quick_config({"sparse-csrmvv"})),
                    dakit::UnknownBench);
    CHECK_THROWS_AS(dakit::bench::run_bench(quick_config({"sparse-csrmv", "nope"})),
                    dakit::UnknownBench);
}

TEST_CASE("config validation", "[bench]") {
    BenchConfig bad = quick_config({"stats-variance"});
    bad.reps = 0;
    CHECK_THROWS_AS(dakit::bench::run_bench(bad), dakit::InvalidRange);
    BenchConfig noLanes = quick_config({"stats-variance"});
    noLanes.lanes.clear();
    CHECK_THROWS_AS(dakit::bench::run_bench(noLanes), dakit::InvalidRange);
}

TEST_CASE("rows are well-formed and the baseline speedup is 1.0", "[bench]") {
    BenchConfig cfg = quick_config({"stats-variance", "sparse-csrmv"});
    cfg.dataArg = "synthetic:sparse:n=64,d=48,density=0.2";
    const BenchReport report = dakit::bench::run_bench(cfg);

    CHECK(report.all_correct());
    REQUIRE(report.rows.size() >= 4);
    for (const auto& row : report.rows) {
        CAPTURE(row.bench, row.variant);
        CHECK(row.reps == 3);
        CHECK(row.medianNs >= 0.0);
        CHECK(row.minNs <= row.medianNs);
        CHECK(row.medianNs <= row.maxNs);
        CHECK(row.correct);
        REQUIRE(row.speedup.has_value());
    }

    const BenchRow* base = find_row(report, "stats-variance", "two-pass");
    REQUIRE(base != nullptr);
    CHECK(*base->speedup == 1.0);
    CHECK(find_row(report, "stats-variance", "raw-moments") != nullptr);
    CHECK(find_row(report, "sparse-csrmv", "dense-oracle") != nullptr);
    CHECK(find_row(report, "sparse-csrmv", "kernel") != nullptr);
}

TEST_CASE("svm-wssj emits one blocked row per configured lane width", "[bench]") {
    BenchConfig cfg = quick_config({"svm-wssj"});
    cfg.lanes = {1, 4, 16};
    const BenchReport report = dakit::bench::run_bench(cfg);

    CHECK(report.all_correct());
    REQUIRE(find_row(report, "svm-wssj", "scalar") != nullptr);
    for (const char* v : {"blocked-1", "blocked-4", "blocked-16"}) {
        const BenchRow* row = find_row(report, "svm-wssj", v);
        CAPTURE(v);
        REQUIRE(row != nullptr);
        CHECK(row->correct);
        REQUIRE(row->speedup.has_value());
        // speedup = baseline median / variant median, from this very report.
        const BenchRow* base = find_row(report, "svm-wssj", "scalar");
        if (row->medianNs > 0.0) {
            CHECK(*row->speedup ==
                  Catch::Approx(base->medianNs / row->medianNs).epsilon(1e-12));
        }
    }
}

TEST_CASE("fault injection flips variant correctness and suppresses speedup",
          "[bench]") {
    BenchConfig cfg = quick_config({"stats-xcp"});
    cfg.injectFault = "stats-xcp";
    const BenchReport report = dakit::bench::run_bench(cfg);

    CHECK_FALSE(report.all_correct());
    const BenchRow* variant = find_row(report, "stats-xcp", "batched");
    REQUIRE(variant != nullptr);
    CHECK_FALSE(variant->correct);
    CHECK_FALSE(variant->speedup.has_value());

    // The baseline row keeps its own (trivially true) correctness.
    const BenchRow* base = find_row(report, "stats-xcp", "direct");
    REQUIRE(base != nullptr);
    CHECK(base->correct);
}

TEST_CASE("CSV serialization has the exact documented header", "[bench]") {
    BenchConfig cfg = quick_config({"stats-variance"});
    const BenchReport report = dakit::bench::run_bench(cfg);
    const std::string csv = dakit::bench::to_csv(report);

    std::istringstream lines(csv);
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "bench,variant,reps,median_ns,min_ns,max_ns,correct,speedup");

    std::size_t body = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) {
            ++body;
            // Every row has exactly 8 columns (7 commas).
            CHECK(std::count(line.begin(), line.end(), ',') == 7);
        }
    }
    CHECK(body == report.rows.size());
}

TEST_CASE("failed variants serialize with an empty speedup cell", "[bench]") {
    BenchConfig cfg = quick_config({"stats-variance"});
    cfg.injectFault = "stats-variance";
    const std::string csv = dakit::bench::to_csv(dakit::bench::run_bench(cfg));

    bool sawFailedRow = false;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        if (line.find(",raw-moments,") != std::string::npos) {
            sawFailedRow = true;
            CHECK(line.find(",false,") != std::string::npos);
            CHECK(line.back() == ',');  // empty trailing speedup column
        }
    }
    CHECK(sawFailedRow);
}

TEST_CASE("report files are written on demand", "[bench]") {
    BenchConfig cfg = quick_config({"stats-variance"});
    cfg.outCsv = scratch("report.csv");
    cfg.outMd = scratch("report.md");
    const BenchReport report = dakit::bench::run_bench(cfg);

    const std::string csv = slurp(cfg.outCsv);
    CHECK(csv.rfind("bench,variant,reps,median_ns,min_ns,max_ns,correct,speedup", 0) == 0);
    CHECK(csv == dakit::bench::to_csv(report));

    const std::string md = slurp(cfg.outMd);
    CHECK(md.find("| bench |") != std::string::npos);
    CHECK(md.find("stats-variance") != std::string::npos);

    // Markdown renders absent speedups as an em dash.
    BenchConfig faulty = quick_config({"stats-variance"});
    faulty.injectFault = "stats-variance";
    const std::string mdFaulty =
        dakit::bench::to_markdown(dakit::bench::run_bench(faulty));
    CHECK(mdFaulty.find("—") != std::string::npos);
}

TEST_CASE("rows are stable across runs modulo timing", "[bench]") {
    BenchConfig cfg = quick_config({"sparse-csrmm", "rng-engines"});
    const BenchReport a = dakit::bench::run_bench(cfg);
    const BenchReport b = dakit::bench::run_bench(cfg);

    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].bench == b.rows[i].bench);
        CHECK(a.rows[i].variant == b.rows[i].variant);
        CHECK(a.rows[i].reps == b.rows[i].reps);
        CHECK(a.rows[i].correct == b.rows[i].correct);
        CHECK(a.rows[i].speedup.has_value() == b.rows[i].speedup.has_value());
    }
}

TEST_CASE("svm-train runs on a margin dataset and stays correct", "[bench]") {
    BenchConfig cfg = quick_config({"svm-train"});
    cfg.lanes = {4};
    cfg.dataArg = "synthetic:margin:n=80,d=6,margin=0.5";
    const BenchReport report = dakit::bench::run_bench(cfg);
    CHECK(report.all_correct());
    CHECK(find_row(report, "svm-train", "scalar") != nullptr);
    CHECK(find_row(report, "svm-train", "blocked-4") != nullptr);
}

TEST_CASE("CSV data options are forwarded to the loader", "[bench]") {
    // A header CSV with the label in the last column -- the shape `gen`
    // emits -- must be consumable once the config describes it.
    dakit::rng::RngStream stream(dakit::rng::EngineKind::MCG59, 17);
    const dakit::data::Dataset ds = dakit::data::gen_synthetic(
        dakit::data::SyntheticSpec::parse("margin:n=60,d=5,margin=0.5"), stream);
    const std::string path = scratch("forwarded.csv");
    dakit::data::write_csv(path, ds, /*withHeader=*/true);

    BenchConfig cfg = quick_config({"svm-train"});
    cfg.lanes = {1};
    cfg.dataArg = path;
    cfg.csvHasHeader = true;
    cfg.csvLabelColumn = 5;
    const BenchReport report = dakit::bench::run_bench(cfg);
    CHECK(report.all_correct());
    CHECK(find_row(report, "svm-train", "scalar") != nullptr);

    // Without the description the header row must be rejected loudly.
    BenchConfig raw = quick_config({"svm-train"});
    raw.lanes = {1};
    raw.dataArg = path;
    CHECK_THROWS_AS(dakit::bench::run_bench(raw), dakit::ParseError);
}
