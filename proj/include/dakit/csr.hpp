#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dakit/core.hpp"

// =============================================================================
// FILE: dakit/csr.hpp
// BRIEF: 3-array and 4-array CSR containers, validation, conversions, and the
//        dense expansion used as the brute-force oracle by every sparse test.
// =============================================================================

namespace dakit {

// -----------------------------------------------------------------------------
// Containers
// -----------------------------------------------------------------------------

/// Sparse matrix in 3-array CSR form: values / colIdx / rowPtr.
///
/// rowPtr has rows+1 entries, is nondecreasing, starts at the base offset,
/// and rowPtr[rows] - rowPtr[0] == nnz. Column indices live in
/// [base, cols-1+base]. Columns within a row need not be sorted, and
/// duplicates are legal (they add up).
struct CsrMatrix3 {
    Index rows = 0;
    Index cols = 0;
    IndexBase base = IndexBase::Zero;
    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowPtr;

    Index nnz() const noexcept { return static_cast<Index>(values.size()); }
};

/// Sparse matrix in 4-array CSR form: values / colIdx / rowBegin / rowEnd.
///
/// Row i occupies [rowBegin[i], rowEnd[i]) in values/colIdx (base-adjusted).
/// Rows may leave gaps between one another; slices only have to stay inside
/// the arrays and satisfy rowBegin[i] <= rowEnd[i].
struct CsrMatrix4 {
    Index rows = 0;
    Index cols = 0;
    IndexBase base = IndexBase::Zero;
    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowBegin;
    std::vector<Index> rowEnd;
};

enum class CsrForm { ThreeArray, FourArray };

// -----------------------------------------------------------------------------
// Read-only row view shared by all sparse kernels
// -----------------------------------------------------------------------------

namespace detail {

/// Uniform row accessor over both CSR forms. For the 3-array form the row
/// extents are rowPtr[i] / rowPtr[i+1], which is exactly a 4-array view with
/// rowEnd aliased one entry past rowBegin.
struct CsrRowView {
    Index rows = 0;
    Index cols = 0;
    Index off = 0;  // base offset applied to all stored indices
    const double* values = nullptr;
    const Index* colIdx = nullptr;
    const Index* rowBegin = nullptr;
    const Index* rowEnd = nullptr;

    Index row_begin(Index i) const noexcept { return rowBegin[i] - off; }
    Index row_end(Index i) const noexcept { return rowEnd[i] - off; }
    Index col(Index k) const noexcept { return colIdx[k] - off; }
};

inline CsrRowView view_of(const CsrMatrix3& a) noexcept {
    return {a.rows,          a.cols,          base_offset(a.base),
            a.values.data(), a.colIdx.data(), a.rowPtr.data(),
            a.rowPtr.data() + 1};
}

inline CsrRowView view_of(const CsrMatrix4& a) noexcept {
    return {a.rows,          a.cols,          base_offset(a.base),
            a.values.data(), a.colIdx.data(), a.rowBegin.data(),
            a.rowEnd.data()};
}

inline void validate_col_indices(const CsrRowView& v, const char* what) {
    for (Index i = 0; i < v.rows; ++i) {
        const Index b = v.row_begin(i);
        const Index e = v.row_end(i);
        for (Index k = b; k < e; ++k) {
            const Index c = v.col(k);
            if (c < 0 || c >= v.cols) {
                throw InvalidStructure(std::string(what) +
                                       ": column index out of range in row " +
                                       std::to_string(i));
            }
        }
    }
}

}  // namespace detail

// -----------------------------------------------------------------------------
// Validating factories
// -----------------------------------------------------------------------------

/// Builds a validated 3-array CSR matrix. Throws InvalidStructure on
/// non-monotone rowPtr, length mismatches, or out-of-range column indices.
inline CsrMatrix3 make_csr3(std::vector<double> values, std::vector<Index> colIdx,
                            std::vector<Index> rowPtr, IndexBase base, Index rows,
                            Index cols) {
    if (rows < 0 || cols < 0) {
        throw InvalidStructure("make_csr3: negative dimension");
    }
    if (values.size() != colIdx.size()) {
        throw InvalidStructure("make_csr3: values/colIdx length mismatch");
    }
    if (rowPtr.size() != static_cast<std::size_t>(rows) + 1) {
        throw InvalidStructure("make_csr3: rowPtr must have rows+1 entries");
    }
    const Index off = base_offset(base);
    if (rowPtr.front() != off) {
        throw InvalidStructure("make_csr3: rowPtr[0] must equal the base offset");
    }
    for (Index i = 0; i < rows; ++i) {
        if (rowPtr[i + 1] < rowPtr[i]) {
            throw InvalidStructure("make_csr3: rowPtr is not nondecreasing at row " +
                                   std::to_string(i));
        }
    }
    if (rowPtr.back() - rowPtr.front() != static_cast<Index>(values.size())) {
        throw InvalidStructure("make_csr3: rowPtr span disagrees with nnz");
    }

    CsrMatrix3 a{rows, cols, base, std::move(values), std::move(colIdx), std::move(rowPtr)};
    detail::validate_col_indices(detail::view_of(a), "make_csr3");
    return a;
}

/// Builds a validated 4-array CSR matrix. Row slices may be disjoint but must
/// stay inside the arrays.
inline CsrMatrix4 make_csr4(std::vector<double> values, std::vector<Index> colIdx,
                            std::vector<Index> rowBegin, std::vector<Index> rowEnd,
                            IndexBase base, Index rows, Index cols) {
    if (rows < 0 || cols < 0) {
        throw InvalidStructure("make_csr4: negative dimension");
    }
    if (values.size() != colIdx.size()) {
        throw InvalidStructure("make_csr4: values/colIdx length mismatch");
    }
    if (rowBegin.size() != static_cast<std::size_t>(rows) ||
        rowEnd.size() != static_cast<std::size_t>(rows)) {
        throw InvalidStructure("make_csr4: rowBegin/rowEnd must have rows entries");
    }
    const Index off = base_offset(base);
    const Index limit = static_cast<Index>(values.size());
    for (Index i = 0; i < rows; ++i) {
        if (rowBegin[i] < off || rowEnd[i] < rowBegin[i]) {
            throw InvalidStructure("make_csr4: bad row extent at row " + std::to_string(i));
        }
        if (rowEnd[i] - off > limit) {
            throw InvalidStructure("make_csr4: row slice overflows arrays at row " +
                                   std::to_string(i));
        }
    }

    CsrMatrix4 a{rows,  cols,  base, std::move(values), std::move(colIdx),
                 std::move(rowBegin), std::move(rowEnd)};
    detail::validate_col_indices(detail::view_of(a), "make_csr4");
    return a;
}

// -----------------------------------------------------------------------------
// Conversions
// -----------------------------------------------------------------------------

namespace detail {

template <typename Csr>
CsrMatrix3 to_csr3(const Csr& a, IndexBase targetBase) {
    const CsrRowView v = view_of(a);
    const Index off = base_offset(targetBase);

    std::vector<double> values;
    std::vector<Index> colIdx;
    std::vector<Index> rowPtr(static_cast<std::size_t>(v.rows) + 1, off);
    Index nnz = 0;
    for (Index i = 0; i < v.rows; ++i) {
        nnz += v.row_end(i) - v.row_begin(i);
    }
    values.reserve(static_cast<std::size_t>(nnz));
    colIdx.reserve(static_cast<std::size_t>(nnz));

    for (Index i = 0; i < v.rows; ++i) {
        for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
            values.push_back(v.values[k]);
            colIdx.push_back(v.col(k) + off);
        }
        rowPtr[i + 1] = off + static_cast<Index>(values.size());
    }
    return CsrMatrix3{v.rows, v.cols, targetBase, std::move(values), std::move(colIdx),
                      std::move(rowPtr)};
}

}  // namespace detail

/// Rebase/compact into 3-array form. Per-row entry order is preserved.
inline CsrMatrix3 convert_csr3(const CsrMatrix3& a, IndexBase targetBase) {
    return detail::to_csr3(a, targetBase);
}

inline CsrMatrix3 convert_csr3(const CsrMatrix4& a, IndexBase targetBase) {
    return detail::to_csr3(a, targetBase);
}

/// Convert to 4-array form: rowBegin[i] = rowPtr[i], rowEnd[i] = rowPtr[i+1]
/// after compaction to the target base.
template <typename Csr>
CsrMatrix4 convert_csr4(const Csr& a, IndexBase targetBase) {
    CsrMatrix3 c3 = detail::to_csr3(a, targetBase);
    std::vector<Index> rowBegin(c3.rowPtr.begin(), c3.rowPtr.end() - 1);
    std::vector<Index> rowEnd(c3.rowPtr.begin() + 1, c3.rowPtr.end());
    return CsrMatrix4{c3.rows, c3.cols,   targetBase,        std::move(c3.values),
                      std::move(c3.colIdx), std::move(rowBegin), std::move(rowEnd)};
}

// -----------------------------------------------------------------------------
// Dense oracle
// -----------------------------------------------------------------------------

/// Brute-force expansion. Duplicate column entries within a row are summed.
template <typename Csr>
DenseMatrix csr_to_dense(const Csr& a, Layout layout = Layout::RowMajor) {
    const detail::CsrRowView v = detail::view_of(a);
    DenseMatrix out(v.rows, v.cols, layout);
    for (Index i = 0; i < v.rows; ++i) {
        for (Index k = v.row_begin(i); k < v.row_end(i); ++k) {
            out(i, v.col(k)) += v.values[k];
        }
    }
    return out;
}

}  // namespace dakit
