// =============================================================================
// FILE: tools/train_svm_main.cpp
// BRIEF: `train-svm` CLI: loads a labeled dataset (libsvm, or CSV with
//        --csv-header/--csv-label describing the file), trains the SMO
//        classifier, prints a summary, and optionally writes the model JSON.
//
// Labels are mapped to {-1, +1}: native ±1 is kept, any other two-valued
// labeling maps its smaller value to -1.
// =============================================================================

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dakit/dakit.hpp"
#include "json.hpp"

namespace {

std::vector<double> map_labels(const std::vector<double>& raw) {
    std::set<double> distinct(raw.begin(), raw.end());
    if (distinct.size() != 2) {
        throw dakit::DegenerateLabels("train-svm: need exactly two distinct label values, got " +
                                      std::to_string(distinct.size()));
    }
    const double lo = *distinct.begin();
    const double hi = *distinct.rbegin();
    if (lo == -1.0 && hi == 1.0) {
        return raw;
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = raw[i] == lo ? -1.0 : 1.0;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dakit SMO SVM trainer"};

    std::string dataPath;
    double C = 1.0;
    std::string kernel = "linear";
    double gamma = 1.0;
    double eps = 1e-3;
    double tau = 1e-12;
    dakit::Index maxIter = 0;
    std::size_t laneWidth = 0;
    std::string modelPath;
    std::uint64_t seed = 42;
    bool csvHeader = false;
    dakit::Index csvLabel = 0;

    app.add_option("--data", dataPath, "dataset path or synthetic:<kind>:k=v,...")
        ->required();
    app.add_option("--C", C, "box constraint")->capture_default_str();
    app.add_option("--kernel", kernel, "linear | rbf")->capture_default_str();
    app.add_option("--gamma", gamma, "RBF gamma")->capture_default_str();
    app.add_option("--eps", eps, "convergence tolerance")->capture_default_str();
    app.add_option("--tau", tau, "WSS curvature clamp")->capture_default_str();
    app.add_option("--max-iter", maxIter, "iteration cap (0 = 100*n)")->capture_default_str();
    app.add_option("--lane-width", laneWidth, "blocked WSSj lane width (0 = scalar)")
        ->capture_default_str();
    app.add_option("--model", modelPath, "write trained model JSON here");
    app.add_option("--seed", seed, "seed for synthetic --data")->capture_default_str();
    app.add_flag("--csv-header", csvHeader, "treat the first row of a CSV --data as a header");
    app.add_option("--csv-label", csvLabel, "zero-based label column of a CSV --data")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        const dakit::data::Dataset ds =
            dakit::data::load_data(dataPath, seed, csvHeader, csvLabel);
        if (!ds.labels) {
            throw dakit::DataLoadError("train-svm: dataset has no labels");
        }
        const dakit::DenseMatrix x = ds.dense();
        const std::vector<double> y = map_labels(*ds.labels);

        dakit::svm::SvmParams params;
        params.C = C;
        if (kernel == "rbf") {
            params.kernel = dakit::svm::KernelKind::RBF;
        } else if (kernel == "linear") {
            params.kernel = dakit::svm::KernelKind::Linear;
        } else {
            throw dakit::InvalidRange("train-svm: unknown kernel '" + kernel + "'");
        }
        params.gamma = gamma;
        params.eps = eps;
        params.tau = tau;
        params.maxIter = maxIter;
        params.laneWidth = laneWidth;

        const dakit::svm::TrainResult result = dakit::svm::smo_train(x, y, params);
        const dakit::svm::Prediction pred = dakit::svm::predict(result.model, x);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            hits += pred.labels[i] == y[i] ? 1 : 0;
        }

        std::printf("trained on %lld x %lld: %zu support vectors, bias=%.6g\n",
                    static_cast<long long>(x.rows()), static_cast<long long>(x.cols()),
                    result.model.supportIdx.size(), result.model.bias);
        std::printf("iterations=%lld converged=%s kkt=%.3g train-accuracy=%.4f\n",
                    static_cast<long long>(result.iterations),
                    result.converged ? "yes" : "no (iteration cap)", result.kktViolation,
                    static_cast<double>(hits) / static_cast<double>(y.size()));
        if (!result.converged) {
            std::cerr << "warning: solver hit the iteration cap before reaching eps\n";
        }

        if (!modelPath.empty()) {
            nlohmann::json j;
            j["kernel"] = params.kernel == dakit::svm::KernelKind::RBF ? "rbf" : "linear";
            j["gamma"] = params.gamma;
            j["C"] = params.C;
            j["eps"] = params.eps;
            j["bias"] = result.model.bias;
            j["iterations"] = result.iterations;
            j["converged"] = result.converged;
            j["kkt_violation"] = result.kktViolation;
            j["support_idx"] = result.model.supportIdx;
            j["alpha_y"] = result.model.alphaY;
            std::vector<std::vector<double>> vectors;
            for (dakit::Index s = 0; s < result.model.X_support.rows(); ++s) {
                std::vector<double> row(static_cast<std::size_t>(x.cols()));
                for (dakit::Index k = 0; k < x.cols(); ++k) {
                    row[static_cast<std::size_t>(k)] = result.model.X_support(s, k);
                }
                vectors.push_back(std::move(row));
            }
            j["vectors"] = vectors;
            std::ofstream out(modelPath);
            if (!out) {
                throw dakit::DataLoadError("train-svm: cannot open '" + modelPath +
                                           "' for writing");
            }
            out << j.dump(2) << "\n";
            std::cout << "model written to " << modelPath << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
