#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dakit/core.hpp"
#include "dakit/csr.hpp"
#include "dakit/rng.hpp"

// =============================================================================
// FILE: dakit/dataset.hpp
// BRIEF: Dataset container plus ingestion (libsvm, CSV), serialization, and
//        deterministic synthetic generators (GaussianBlobs, SparseUniform,
//        TwoClassMargin).
//
// libsvm indices are 1-based in files and converted to the internal zero base
// on load; non-ascending indices are rejected loudly rather than sorted.
// =============================================================================

namespace dakit::data {

// -----------------------------------------------------------------------------
// Container
// -----------------------------------------------------------------------------

enum class DataSource { LibSVM, CSV, Synthetic };

struct Dataset {
    std::variant<CsrMatrix3, DenseMatrix> features = DenseMatrix(0, 0);
    std::optional<std::vector<double>> labels;
    std::string name;
    DataSource source = DataSource::Synthetic;

    bool is_sparse() const noexcept { return std::holds_alternative<CsrMatrix3>(features); }

    Index rows() const noexcept {
        return is_sparse() ? std::get<CsrMatrix3>(features).rows
                           : std::get<DenseMatrix>(features).rows();
    }

    Index cols() const noexcept {
        return is_sparse() ? std::get<CsrMatrix3>(features).cols
                           : std::get<DenseMatrix>(features).cols();
    }

    /// Materializes the features densely (row-major).
    DenseMatrix dense() const {
        return is_sparse() ? csr_to_dense(std::get<CsrMatrix3>(features))
                           : std::get<DenseMatrix>(features);
    }

    void validate() const {
        if (labels && static_cast<Index>(labels->size()) != rows()) {
            throw InvalidStructure("Dataset: labels length must equal feature rows");
        }
    }
};

/// Dense -> CSR (zero base); exact zeros are dropped.
inline CsrMatrix3 dense_to_csr(const DenseMatrix& m) {
    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowPtr{0};
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) {
                values.push_back(m(i, j));
                colIdx.push_back(j);
            }
        }
        rowPtr.push_back(static_cast<Index>(values.size()));
    }
    return make_csr3(std::move(values), std::move(colIdx), std::move(rowPtr),
                     IndexBase::Zero, m.rows(), m.cols());
}

/// Materializes the features as CSR (zero base).
inline CsrMatrix3 dataset_csr(const Dataset& ds) {
    return ds.is_sparse() ? std::get<CsrMatrix3>(ds.features) : dense_to_csr(ds.dense());
}

// -----------------------------------------------------------------------------
// Parsing helpers
// -----------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

/// Locale-independent full-token double parse; tolerates a leading '+'.
inline bool parse_double(std::string_view s, double& out) noexcept {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

inline bool parse_index(std::string_view s, Index& out) noexcept {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s.empty()) {
        return false;
    }
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

/// Shortest exact decimal form: %.17g round-trips binary64.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// -----------------------------------------------------------------------------
// libsvm format
// -----------------------------------------------------------------------------

/// Parses "label idx:val ..." lines with 1-based strictly ascending indices.
/// Blank lines and `#` comments are skipped. Column count is the maximum
/// index seen unless forceCols (> 0) overrides it.
inline Dataset parse_libsvm(const std::string& path, Index forceCols = 0) {
    std::ifstream in(path);
    if (!in) {
        throw DataLoadError("parse_libsvm: cannot open '" + path + "'");
    }
    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowPtr{0};
    std::vector<double> labels;
    Index maxCol = 0;

    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string_view stripped = detail::trim(line);
        if (stripped.empty() || stripped.front() == '#') {
            continue;
        }
        std::istringstream tokens{std::string(stripped)};
        std::string tok;
        tokens >> tok;
        double label = 0.0;
        if (!detail::parse_double(tok, label)) {
            throw ParseError("parse_libsvm: line " + std::to_string(lineNo) +
                             ": bad label '" + tok + "'");
        }
        Index prevIdx = 0;
        while (tokens >> tok) {
            const std::size_t colon = tok.find(':');
            if (colon == std::string::npos) {
                throw ParseError("parse_libsvm: line " + std::to_string(lineNo) +
                                 ": expected idx:val, got '" + tok + "'");
            }
            Index idx = 0;
            double val = 0.0;
            if (!detail::parse_index(std::string_view(tok).substr(0, colon), idx) || idx < 1) {
                throw ParseError("parse_libsvm: line " + std::to_string(lineNo) +
                                 ": bad feature index in '" + tok + "'");
            }
            if (!detail::parse_double(std::string_view(tok).substr(colon + 1), val)) {
                throw ParseError("parse_libsvm: line " + std::to_string(lineNo) +
                                 ": bad feature value in '" + tok + "'");
            }
            if (idx <= prevIdx) {
                throw IndexOrderError("parse_libsvm: line " + std::to_string(lineNo) +
                                      ": indices must be strictly ascending");
            }
            prevIdx = idx;
            maxCol = std::max(maxCol, idx);
            values.push_back(val);
            colIdx.push_back(idx - 1);  // to internal zero base
        }
        rowPtr.push_back(static_cast<Index>(values.size()));
        labels.push_back(label);
    }

    if (forceCols > 0 && forceCols < maxCol) {
        throw ParseError("parse_libsvm: column override " + std::to_string(forceCols) +
                         " is smaller than max index " + std::to_string(maxCol));
    }
    const Index cols = forceCols > 0 ? forceCols : maxCol;
    const Index rows = static_cast<Index>(rowPtr.size()) - 1;

    Dataset ds;
    ds.features = make_csr3(std::move(values), std::move(colIdx), std::move(rowPtr),
                            IndexBase::Zero, rows, cols);
    ds.labels = std::move(labels);
    ds.name = path;
    ds.source = DataSource::LibSVM;
    return ds;
}

/// Writes libsvm lines with 1-based indices and %.17g values (bit round-trip).
/// Missing labels are written as 0.
inline void write_libsvm(const std::string& path, const Dataset& ds) {
    std::ofstream out(path);
    if (!out) {
        throw DataLoadError("write_libsvm: cannot open '" + path + "' for writing");
    }
    const CsrMatrix3 csr = dataset_csr(ds);
    const Index off = base_offset(csr.base);
    for (Index i = 0; i < csr.rows; ++i) {
        const double label = ds.labels ? (*ds.labels)[static_cast<std::size_t>(i)] : 0.0;
        out << detail::fmt_double(label);
        for (Index k = csr.rowPtr[i] - off; k < csr.rowPtr[i + 1] - off; ++k) {
            out << ' ' << (csr.colIdx[k] - off + 1) << ':'
                << detail::fmt_double(csr.values[k]);
        }
        out << '\n';
    }
}

// -----------------------------------------------------------------------------
// CSV format
// -----------------------------------------------------------------------------

/// Rectangular numeric CSV -> dense row-major matrix. labelColumn >= 0
/// extracts that 0-based column as labels.
inline Dataset parse_csv(const std::string& path, bool hasHeader = false,
                         Index labelColumn = -1) {
    std::ifstream in(path);
    if (!in) {
        throw DataLoadError("parse_csv: cannot open '" + path + "'");
    }
    std::vector<std::vector<double>> cells;
    std::string line;
    std::size_t lineNo = 0;
    bool headerSkipped = !hasHeader;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string_view stripped = detail::trim(line);
        if (stripped.empty()) {
            continue;
        }
        if (!headerSkipped) {
            headerSkipped = true;
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        const std::string text(stripped);
        for (std::size_t col = 0;; ++col) {
            const std::size_t comma = text.find(',', start);
            const std::string_view cell = detail::trim(
                std::string_view(text).substr(start, comma == std::string::npos
                                                         ? std::string::npos
                                                         : comma - start));
            double v = 0.0;
            if (!detail::parse_double(cell, v)) {
                throw ParseError("parse_csv: row " + std::to_string(lineNo) + ", column " +
                                 std::to_string(col + 1) + ": non-numeric cell '" +
                                 std::string(cell) + "'");
            }
            row.push_back(v);
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        if (!cells.empty() && row.size() != cells.front().size()) {
            throw ParseError("parse_csv: row " + std::to_string(lineNo) + " has " +
                             std::to_string(row.size()) + " cells, expected " +
                             std::to_string(cells.front().size()));
        }
        cells.push_back(std::move(row));
    }

    const Index rows = static_cast<Index>(cells.size());
    const Index fileCols = rows > 0 ? static_cast<Index>(cells.front().size()) : 0;
    if (labelColumn >= fileCols && rows > 0) {
        throw InvalidRange("parse_csv: labelColumn out of range");
    }
    const bool hasLabels = labelColumn >= 0 && rows > 0;
    const Index dcols = hasLabels ? fileCols - 1 : fileCols;

    DenseMatrix m(rows, dcols);
    std::vector<double> labels;
    for (Index i = 0; i < rows; ++i) {
        Index jOut = 0;
        for (Index j = 0; j < fileCols; ++j) {
            if (hasLabels && j == labelColumn) {
                labels.push_back(cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            } else {
                m(i, jOut++) = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
    }

    Dataset ds;
    ds.features = std::move(m);
    if (hasLabels) {
        ds.labels = std::move(labels);
    }
    ds.name = path;
    ds.source = DataSource::CSV;
    return ds;
}

/// Writes features (densified if needed) with %.17g cells; labels, when
/// present, form the last column. Header names are f0..f{d-1} and label.
inline void write_csv(const std::string& path, const Dataset& ds, bool withHeader = false) {
    std::ofstream out(path);
    if (!out) {
        throw DataLoadError("write_csv: cannot open '" + path + "' for writing");
    }
    const DenseMatrix m = ds.dense();
    if (withHeader) {
        for (Index j = 0; j < m.cols(); ++j) {
            out << (j ? "," : "") << 'f' << j;
        }
        if (ds.labels) {
            out << (m.cols() > 0 ? "," : "") << "label";
        }
        out << '\n';
    }
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out << (j ? "," : "") << detail::fmt_double(m(i, j));
        }
        if (ds.labels) {
            out << (m.cols() > 0 ? "," : "")
                << detail::fmt_double((*ds.labels)[static_cast<std::size_t>(i)]);
        }
        out << '\n';
    }
}

// -----------------------------------------------------------------------------
// Synthetic generators
// -----------------------------------------------------------------------------

enum class SyntheticKind { GaussianBlobs, SparseUniform, TwoClassMargin };

struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::GaussianBlobs;
    Index rows = 200;
    Index cols = 16;
    Index classes = 2;     // GaussianBlobs
    double spread = 1.0;   // GaussianBlobs: per-coordinate sigma
    double density = 0.1;  // SparseUniform
    double margin = 1.0;   // TwoClassMargin

    void validate() const {
        if (rows < 1 || cols < 1) {
            throw InvalidSpec("SyntheticSpec: dimensions must be positive");
        }
        switch (kind) {
            case SyntheticKind::GaussianBlobs:
                if (classes < 1 || !(spread > 0.0)) {
                    throw InvalidSpec("SyntheticSpec: blobs need classes >= 1, spread > 0");
                }
                break;
            case SyntheticKind::SparseUniform:
                if (!(density >= 0.0) || !(density <= 1.0)) {
                    throw InvalidSpec("SyntheticSpec: density must lie in [0, 1]");
                }
                break;
            case SyntheticKind::TwoClassMargin:
                if (!(margin > 0.0)) {
                    throw InvalidSpec("SyntheticSpec: margin must be > 0");
                }
                if (rows < 2) {
                    throw InvalidSpec("SyntheticSpec: TwoClassMargin needs rows >= 2");
                }
                break;
        }
    }

    /// Parses "<kind>:k=v,k=v" where kind is blobs | sparse | margin and keys
    /// are n/rows, d/cols, classes, spread, density, margin.
    static SyntheticSpec parse(const std::string& text) {
        SyntheticSpec spec;
        const std::size_t colon = text.find(':');
        const std::string kind = text.substr(0, colon);
        if (kind == "blobs") {
            spec.kind = SyntheticKind::GaussianBlobs;
        } else if (kind == "sparse") {
            spec.kind = SyntheticKind::SparseUniform;
        } else if (kind == "margin") {
            spec.kind = SyntheticKind::TwoClassMargin;
        } else {
            throw InvalidSpec("SyntheticSpec: unknown kind '" + kind +
                              "' (expected blobs|sparse|margin)");
        }
        if (colon == std::string::npos) {
            spec.validate();
            return spec;
        }
        std::istringstream rest(text.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos) {
                throw InvalidSpec("SyntheticSpec: expected key=value, got '" + item + "'");
            }
            const std::string key = item.substr(0, eq);
            const std::string value = item.substr(eq + 1);
            double v = 0.0;
            if (!detail::parse_double(value, v)) {
                throw InvalidSpec("SyntheticSpec: non-numeric value in '" + item + "'");
            }
            if (key == "n" || key == "rows") {
                spec.rows = static_cast<Index>(v);
            } else if (key == "d" || key == "cols") {
                spec.cols = static_cast<Index>(v);
            } else if (key == "classes") {
                spec.classes = static_cast<Index>(v);
            } else if (key == "spread") {
                spec.spread = v;
            } else if (key == "density") {
                spec.density = v;
            } else if (key == "margin") {
                spec.margin = v;
            } else {
                throw InvalidSpec("SyntheticSpec: unknown key '" + key + "'");
            }
        }
        spec.validate();
        return spec;
    }
};

namespace detail {

inline Dataset gen_blobs(const SyntheticSpec& spec, rng::RngStream& stream) {
    const Index n = spec.rows;
    const Index d = spec.cols;
    const std::vector<double> centers =
        rng::uniform_real(stream, static_cast<std::size_t>(spec.classes * d), -5.0, 5.0);
    DenseMatrix X(n, d);
    std::vector<double> labels(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        const Index c = t % spec.classes;
        const std::vector<double> noise =
            rng::gaussian(stream, static_cast<std::size_t>(d), 0.0, spec.spread);
        for (Index k = 0; k < d; ++k) {
            X(t, k) = centers[static_cast<std::size_t>(c * d + k)] +
                      noise[static_cast<std::size_t>(k)];
        }
        labels[static_cast<std::size_t>(t)] =
            spec.classes == 2 ? (c == 0 ? 1.0 : -1.0) : static_cast<double>(c);
    }
    Dataset ds;
    ds.features = std::move(X);
    ds.labels = std::move(labels);
    return ds;
}

inline Dataset gen_sparse_uniform(const SyntheticSpec& spec, rng::RngStream& stream) {
    const Index rows = spec.rows;
    const Index cols = spec.cols;
    const Index total = rows * cols;
    Index nnz = static_cast<Index>(std::llround(spec.density * static_cast<double>(total)));
    nnz = std::min(nnz, total);

    // Partial Fisher-Yates over the implicit cell range [0, total): draws nnz
    // distinct cells uniformly, which pins the density exactly.
    std::unordered_map<Index, Index> perm;
    std::vector<Index> cells(static_cast<std::size_t>(nnz));
    for (Index i = 0; i < nnz; ++i) {
        Index offset = static_cast<Index>(stream.next_unit() * static_cast<double>(total - i));
        offset = std::min(offset, total - i - 1);  // guard rounding at the top end
        const Index j = i + offset;
        const auto atJ = perm.find(j);
        const Index valJ = atJ == perm.end() ? j : atJ->second;
        const auto atI = perm.find(i);
        const Index valI = atI == perm.end() ? i : atI->second;
        perm[j] = valI;
        cells[static_cast<std::size_t>(i)] = valJ;
    }
    std::sort(cells.begin(), cells.end());
    const std::vector<double> vals =
        rng::uniform_real(stream, static_cast<std::size_t>(nnz), -1.0, 1.0);

    std::vector<double> values(static_cast<std::size_t>(nnz));
    std::vector<Index> colIdx(static_cast<std::size_t>(nnz));
    std::vector<Index> rowPtr(static_cast<std::size_t>(rows) + 1, 0);
    for (Index k = 0; k < nnz; ++k) {
        const Index cell = cells[static_cast<std::size_t>(k)];
        values[static_cast<std::size_t>(k)] = vals[static_cast<std::size_t>(k)];
        colIdx[static_cast<std::size_t>(k)] = cell % cols;
        ++rowPtr[static_cast<std::size_t>(cell / cols) + 1];
    }
    for (Index i = 0; i < rows; ++i) {
        rowPtr[static_cast<std::size_t>(i) + 1] += rowPtr[static_cast<std::size_t>(i)];
    }
    Dataset ds;
    ds.features = make_csr3(std::move(values), std::move(colIdx), std::move(rowPtr),
                            IndexBase::Zero, rows, cols);
    return ds;
}

inline Dataset gen_margin(const SyntheticSpec& spec, rng::RngStream& stream) {
    const Index n = spec.rows;
    const Index d = spec.cols;
    std::vector<double> w = rng::gaussian(stream, static_cast<std::size_t>(d), 0.0, 1.0);
    double norm = 0.0;
    for (double v : w) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        w.assign(static_cast<std::size_t>(d), 0.0);
        w[0] = 1.0;
    } else {
        for (double& v : w) {
            v /= norm;
        }
    }

    DenseMatrix X(n, d);
    std::vector<double> labels(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        const double y = (t % 2 == 0) ? 1.0 : -1.0;
        const std::vector<double> z =
            rng::uniform_real(stream, static_cast<std::size_t>(d), -1.0, 1.0);
        double proj = 0.0;
        for (Index k = 0; k < d; ++k) {
            proj += w[static_cast<std::size_t>(k)] * z[static_cast<std::size_t>(k)];
        }
        const double slack = stream.next_unit();
        const double shift = y * (spec.margin / 2.0 + slack);
        for (Index k = 0; k < d; ++k) {
            // remove the normal component, then place the point at signed
            // distance (margin/2 + slack) from the separating hyperplane
            X(t, k) = z[static_cast<std::size_t>(k)] -
                      proj * w[static_cast<std::size_t>(k)] +
                      shift * w[static_cast<std::size_t>(k)];
        }
        labels[static_cast<std::size_t>(t)] = y;
    }
    Dataset ds;
    ds.features = std::move(X);
    ds.labels = std::move(labels);
    return ds;
}

}  // namespace detail

/// Deterministic synthetic dataset from an RNG stream: two consumers holding
/// identical stream descriptors produce identical datasets.
inline Dataset gen_synthetic(const SyntheticSpec& spec, rng::RngStream& stream) {
    spec.validate();
    Dataset ds;
    switch (spec.kind) {
        case SyntheticKind::GaussianBlobs:
            ds = detail::gen_blobs(spec, stream);
            break;
        case SyntheticKind::SparseUniform:
            ds = detail::gen_sparse_uniform(spec, stream);
            break;
        case SyntheticKind::TwoClassMargin:
            ds = detail::gen_margin(spec, stream);
            break;
    }
    ds.source = DataSource::Synthetic;
    ds.validate();
    return ds;
}

/// Resolves a CLI --data argument: "synthetic:<spec>" generates, anything
/// else loads by extension (.csv -> CSV, otherwise libsvm).
inline Dataset load_data(const std::string& arg, std::uint64_t seed,
                         bool csvHasHeader = false, Index csvLabelColumn = -1) {
    constexpr std::string_view kPrefix = "synthetic:";
    if (arg.rfind(kPrefix, 0) == 0) {
        const SyntheticSpec spec = SyntheticSpec::parse(arg.substr(kPrefix.size()));
        rng::RngStream stream(rng::EngineKind::MCG59, seed);
        Dataset ds = gen_synthetic(spec, stream);
        ds.name = arg;
        return ds;
    }
    const bool isCsv = arg.size() >= 4 && arg.compare(arg.size() - 4, 4, ".csv") == 0;
    return isCsv ? parse_csv(arg, csvHasHeader, csvLabelColumn) : parse_libsvm(arg);
}

}  // namespace dakit::data
