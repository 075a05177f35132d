#pragma once

#include "lmi/field.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lmi {

using FieldVec = std::vector<u64>;

struct SingularMatrixError : std::runtime_error {
    SingularMatrixError() : std::runtime_error("matrix is singular") {}
};

struct SparseEntry {
    std::size_t row;
    u64 value;
};

using SparseColumn = std::vector<SparseEntry>;

/// Column-grouped sparse matrix over GF(p). Every stored value is nonzero,
/// entries within a column are sorted by row, at most one entry per cell.
/// nnz() is the input-size parameter all cost accounting refers to.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SparseColumn> columns;

    SparseMatrix() = default;
    SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

    static SparseMatrix identity(std::size_t n);

    // Accumulates duplicate cells mod p, drops zeros, sorts within columns.
    static SparseMatrix from_triples(std::size_t rows, std::size_t cols,
                                     const std::vector<std::tuple<std::size_t, std::size_t, u64>>& triples,
                                     u64 p);

    std::size_t nnz() const;

    const SparseColumn& column(std::size_t j) const { return columns[j]; }

    FieldVec column_dense(std::size_t j) const;

    // Columns indexed by `which`, re-indexed as 0..which.size()-1.
    SparseMatrix select_columns(const std::vector<std::size_t>& which) const;
};

/// Row-major dense matrix over GF(p).
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<u64> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    static DenseMatrix identity(std::size_t n);

    u64& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    u64 at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

DenseMatrix dense_from_sparse(const SparseMatrix& m);

// Dense r x |which| matrix whose columns are the selected columns of m.
DenseMatrix columns_to_dense(const SparseMatrix& m, const std::vector<std::size_t>& which);

DenseMatrix transpose(const DenseMatrix& a);

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, u64 p);

FieldVec mat_vec(const DenseMatrix& a, const FieldVec& x, u64 p);

// out[i] = v^T m_i for every column i; runs in O(nnz(m)) time.
FieldVec left_apply_all(const FieldVec& v, const SparseMatrix& m, u64 p);

std::size_t rank(const DenseMatrix& a, u64 p);
std::size_t rank(const SparseMatrix& a, u64 p);

// Gauss-Jordan inverse of a square full-rank matrix; throws SingularMatrixError.
DenseMatrix inverse(const DenseMatrix& a, u64 p);

// Basis of {x : A x = 0}; returns n - rank(A) independent vectors in a
// canonical order (one per free column of the RREF, ascending).
std::vector<FieldVec> null_space_basis(const DenseMatrix& a, u64 p);
std::vector<FieldVec> null_space_basis(const SparseMatrix& a, u64 p);

/// Greedy independent-column maintenance: columns offered in sequence are
/// accepted exactly when they are outside the span of the previously
/// accepted ones. Keeps a reduced echelon form plus the elimination
/// multipliers, so membership and coordinate queries run in O(r^2).
class BasisTracker {
public:
    BasisTracker(std::size_t ambient_dim, u64 p);

    bool try_insert(const FieldVec& col, std::size_t label = 0);
    bool try_insert(const SparseColumn& col, std::size_t label = 0);

    bool in_span(const FieldVec& col) const;
    bool in_span(const SparseColumn& col) const;

    // Coefficients over the accepted columns (in acceptance order) expressing
    // `col`; nullopt when col is outside the span.
    std::optional<FieldVec> coordinates(const FieldVec& col) const;

    std::size_t rank() const { return reduced_.size(); }
    std::size_t ambient() const { return ambient_; }
    const std::vector<std::size_t>& accepted_labels() const { return labels_; }

private:
    FieldVec densify(const SparseColumn& col) const;
    // Eliminates col against the reduced basis; fills `coeffs` with the
    // multiplier used at each accepted vector.
    FieldVec reduce(const FieldVec& col, FieldVec* coeffs) const;

    std::size_t ambient_;
    u64 p_;
    std::vector<FieldVec> reduced_;   // pivot-normalized vectors
    std::vector<std::size_t> pivot_;  // pivot row of each reduced vector
    std::vector<FieldVec> rep_;       // reduced_[i] = sum_j rep_[i][j] * accepted_j
    std::vector<std::size_t> labels_;
};

} // namespace lmi
