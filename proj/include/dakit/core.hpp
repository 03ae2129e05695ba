#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// =============================================================================
// FILE: dakit/core.hpp
// BRIEF: Shared scalar/index types, error hierarchy, dense containers
// =============================================================================

namespace dakit {

using Index = std::int64_t;

// -----------------------------------------------------------------------------
// Errors
// -----------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed sparse-matrix arrays (non-monotone row extents, bad indices, ...).
class InvalidStructure : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class LayoutUnsupported : public Error {
public:
    using Error::Error;
};

class BaseUnsupported : public Error {
public:
    using Error::Error;
};

class InsufficientObservations : public Error {
public:
    using Error::Error;
};

class EmptyBatch : public Error {
public:
    using Error::Error;
};

class InvalidRange : public Error {
public:
    using Error::Error;
};

class InvalidSigma : public Error {
public:
    using Error::Error;
};

class UnsupportedMethod : public Error {
public:
    using Error::Error;
};

class JumpTooLarge : public Error {
public:
    using Error::Error;
};

class DegenerateLabels : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Feature indices within a record must be strictly ascending.
class IndexOrderError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnknownBench : public Error {
public:
    using Error::Error;
};

class DataLoadError : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

// -----------------------------------------------------------------------------
// Index base and storage layout
// -----------------------------------------------------------------------------

/// Index base of the CSR index arrays.
enum class IndexBase : int { Zero = 0, One = 1 };

inline Index base_offset(IndexBase base) noexcept {
    return base == IndexBase::One ? 1 : 0;
}

enum class Layout { RowMajor, ColMajor };

// -----------------------------------------------------------------------------
// DenseMatrix
// -----------------------------------------------------------------------------

/// Dense 2-D array of real64 with an explicit storage layout.
/// Immutable dimensions; element storage is plain std::vector<double>.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(Index rows, Index cols, Layout layout = Layout::RowMajor)
        : rows_(rows), cols_(cols), layout_(layout) {
        check_dims(rows, cols);
        data_.assign(static_cast<std::size_t>(rows * cols), 0.0);
    }

    DenseMatrix(Index rows, Index cols, Layout layout, std::vector<double> data)
        : rows_(rows), cols_(cols), layout_(layout), data_(std::move(data)) {
        check_dims(rows, cols);
        if (data_.size() != static_cast<std::size_t>(rows * cols)) {
            throw InvalidStructure("DenseMatrix: data length must equal rows*cols");
        }
    }

    Index rows() const noexcept { return rows_; }
    Index cols() const noexcept { return cols_; }
    Layout layout() const noexcept { return layout_; }

    double& operator()(Index i, Index j) noexcept { return data_[offset(i, j)]; }
    double operator()(Index i, Index j) const noexcept { return data_[offset(i, j)]; }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    bool same_shape(const DenseMatrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    std::size_t offset(Index i, Index j) const noexcept {
        return layout_ == Layout::RowMajor
                   ? static_cast<std::size_t>(i * cols_ + j)
                   : static_cast<std::size_t>(j * rows_ + i);
    }

    static void check_dims(Index rows, Index cols) {
        if (rows < 0 || cols < 0) {
            throw InvalidStructure("DenseMatrix: negative dimension");
        }
    }

    Index rows_ = 0;
    Index cols_ = 0;
    Layout layout_ = Layout::RowMajor;
    std::vector<double> data_;
};

/// out[j][i] = m[i][j]. Keeps the input layout. Involution.
inline DenseMatrix dense_transpose(const DenseMatrix& m) {
    DenseMatrix out(m.cols(), m.rows(), m.layout());
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            out(j, i) = m(i, j);
        }
    }
    return out;
}

// -----------------------------------------------------------------------------
// LanePolicy
// -----------------------------------------------------------------------------

/// Number of lanes processed per block by lane-blocked kernels. Any width
/// >= 1 is legal; results never depend on the width.
struct LanePolicy {
    explicit LanePolicy(std::size_t w) : width(w) {
        if (w < 1) {
            throw InvalidRange("LanePolicy: width must be >= 1");
        }
    }

    std::size_t width;
};

}  // namespace dakit
