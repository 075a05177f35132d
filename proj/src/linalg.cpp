#include "lmi/linalg.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace lmi {

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.columns[i].push_back({i, 1});
    return m;
}

SparseMatrix SparseMatrix::from_triples(std::size_t rows, std::size_t cols,
                                        const std::vector<std::tuple<std::size_t, std::size_t, u64>>& triples,
                                        u64 p) {
    std::map<std::pair<std::size_t, std::size_t>, u64> cells;
    for (const auto& [r, c, v] : triples) {
        if (r >= rows || c >= cols)
            throw std::invalid_argument("from_triples: index out of range");
        auto& cell = cells[{c, r}];
        cell = add_mod(cell, v % p, p);
    }
    SparseMatrix m(rows, cols);
    for (const auto& [key, v] : cells) {
        if (v != 0)
            m.columns[key.first].push_back({key.second, v});
    }
    return m;
}

std::size_t SparseMatrix::nnz() const {
    std::size_t total = 0;
    for (const auto& col : columns)
        total += col.size();
    return total;
}

FieldVec SparseMatrix::column_dense(std::size_t j) const {
    FieldVec v(rows, 0);
    for (const auto& e : columns[j])
        v[e.row] = e.value;
    return v;
}

SparseMatrix SparseMatrix::select_columns(const std::vector<std::size_t>& which) const {
    SparseMatrix m(rows, which.size());
    for (std::size_t j = 0; j < which.size(); ++j)
        m.columns[j] = columns[which[j]];
    return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

DenseMatrix dense_from_sparse(const SparseMatrix& m) {
    DenseMatrix d(m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j)
        for (const auto& e : m.columns[j])
            d.at(e.row, j) = e.value;
    return d;
}

DenseMatrix columns_to_dense(const SparseMatrix& m, const std::vector<std::size_t>& which) {
    DenseMatrix d(m.rows, which.size());
    for (std::size_t j = 0; j < which.size(); ++j)
        for (const auto& e : m.columns[which[j]])
            d.at(e.row, j) = e.value;
    return d;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j)
            t.at(j, i) = a.at(i, j);
    return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, u64 p) {
    if (a.cols != b.rows)
        throw std::invalid_argument("multiply: dimension mismatch");
    DenseMatrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            u64 aik = a.at(i, k);
            if (aik == 0)
                continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) = add_mod(c.at(i, j), mul_mod(aik, b.at(k, j), p), p);
        }
    }
    return c;
}

FieldVec mat_vec(const DenseMatrix& a, const FieldVec& x, u64 p) {
    if (a.cols != x.size())
        throw std::invalid_argument("mat_vec: dimension mismatch");
    FieldVec y(a.rows, 0);
    for (std::size_t i = 0; i < a.rows; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < a.cols; ++j)
            acc = add_mod(acc, mul_mod(a.at(i, j), x[j], p), p);
        y[i] = acc;
    }
    return y;
}

FieldVec left_apply_all(const FieldVec& v, const SparseMatrix& m, u64 p) {
    if (v.size() != m.rows)
        throw std::invalid_argument("left_apply_all: dimension mismatch");
    FieldVec out(m.cols, 0);
    for (std::size_t j = 0; j < m.cols; ++j) {
        u64 acc = 0;
        for (const auto& e : m.columns[j])
            acc = add_mod(acc, mul_mod(v[e.row], e.value, p), p);
        out[j] = acc;
    }
    return out;
}

namespace {

// In-place reduction to RREF; returns pivot columns in order.
std::vector<std::size_t> rref(DenseMatrix& a, u64 p) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
        std::size_t sel = row;
        while (sel < a.rows && a.at(sel, col) == 0)
            ++sel;
        if (sel == a.rows)
            continue;
        if (sel != row)
            for (std::size_t j = 0; j < a.cols; ++j)
                std::swap(a.at(sel, j), a.at(row, j));
        u64 inv = inv_mod(a.at(row, col), p);
        for (std::size_t j = col; j < a.cols; ++j)
            a.at(row, j) = mul_mod(a.at(row, j), inv, p);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == row)
                continue;
            u64 f = a.at(i, col);
            if (f == 0)
                continue;
            for (std::size_t j = col; j < a.cols; ++j)
                a.at(i, j) = sub_mod(a.at(i, j), mul_mod(f, a.at(row, j), p), p);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::size_t rank(const DenseMatrix& a, u64 p) {
    DenseMatrix work = a;
    return rref(work, p).size();
}

std::size_t rank(const SparseMatrix& a, u64 p) {
    DenseMatrix work = dense_from_sparse(a);
    return rref(work, p).size();
}

DenseMatrix inverse(const DenseMatrix& a, u64 p) {
    if (a.rows != a.cols)
        throw std::invalid_argument("inverse: matrix not square");
    std::size_t n = a.rows;
    // Augmented [A | I], reduced in one sweep.
    DenseMatrix work(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            work.at(i, j) = a.at(i, j);
        work.at(i, n + i) = 1;
    }
    std::vector<std::size_t> pivots = rref(work, p);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw SingularMatrixError();
    DenseMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv.at(i, j) = work.at(i, n + j);
    return inv;
}

std::vector<FieldVec> null_space_basis(const DenseMatrix& a, u64 p) {
    DenseMatrix work = a;
    std::vector<std::size_t> pivots = rref(work, p);
    std::vector<bool> is_pivot(a.cols, false);
    for (std::size_t c : pivots)
        is_pivot[c] = true;
    std::vector<FieldVec> basis;
    for (std::size_t free = 0; free < a.cols; ++free) {
        if (is_pivot[free])
            continue;
        FieldVec x(a.cols, 0);
        x[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            x[pivots[i]] = neg_mod(work.at(i, free), p);
        basis.push_back(std::move(x));
    }
    return basis;
}

std::vector<FieldVec> null_space_basis(const SparseMatrix& a, u64 p) {
    return null_space_basis(dense_from_sparse(a), p);
}

BasisTracker::BasisTracker(std::size_t ambient_dim, u64 p) : ambient_(ambient_dim), p_(p) {}

FieldVec BasisTracker::densify(const SparseColumn& col) const {
    FieldVec v(ambient_, 0);
    for (const auto& e : col) {
        if (e.row >= ambient_)
            throw std::invalid_argument("BasisTracker: entry row out of range");
        v[e.row] = e.value % p_;
    }
    return v;
}

FieldVec BasisTracker::reduce(const FieldVec& col, FieldVec* coeffs) const {
    if (col.size() != ambient_)
        throw std::invalid_argument("BasisTracker: column dimension mismatch");
    FieldVec x = col;
    if (coeffs)
        coeffs->assign(reduced_.size(), 0);
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
        u64 c = x[pivot_[i]];
        if (c == 0)
            continue;
        if (coeffs)
            (*coeffs)[i] = c;
        const FieldVec& u = reduced_[i];
        for (std::size_t k = 0; k < ambient_; ++k) {
            if (u[k] != 0)
                x[k] = sub_mod(x[k], mul_mod(c, u[k], p_), p_);
        }
    }
    return x;
}

bool BasisTracker::try_insert(const FieldVec& col, std::size_t label) {
    FieldVec coeffs;
    FieldVec x = reduce(col, &coeffs);
    std::size_t piv = ambient_;
    for (std::size_t k = 0; k < ambient_; ++k) {
        if (x[k] != 0) {
            piv = k;
            break;
        }
    }
    if (piv == ambient_)
        return false;
    u64 inv = inv_mod(x[piv], p_);
    for (auto& v : x)
        v = mul_mod(v, inv, p_);
    // rep of the new reduced vector: inv * (col - sum coeffs_i reduced_i).
    FieldVec rep(reduced_.size() + 1, 0);
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
        if (coeffs[i] == 0)
            continue;
        u64 f = mul_mod(inv, coeffs[i], p_);
        for (std::size_t j = 0; j < rep_[i].size(); ++j)
            rep[j] = sub_mod(rep[j], mul_mod(f, rep_[i][j], p_), p_);
    }
    rep[reduced_.size()] = inv;
    reduced_.push_back(std::move(x));
    pivot_.push_back(piv);
    rep_.push_back(std::move(rep));
    labels_.push_back(label);
    return true;
}

bool BasisTracker::try_insert(const SparseColumn& col, std::size_t label) {
    return try_insert(densify(col), label);
}

bool BasisTracker::in_span(const FieldVec& col) const {
    FieldVec x = reduce(col, nullptr);
    return std::all_of(x.begin(), x.end(), [](u64 v) { return v == 0; });
}

bool BasisTracker::in_span(const SparseColumn& col) const {
    return in_span(densify(col));
}

std::optional<FieldVec> BasisTracker::coordinates(const FieldVec& col) const {
    FieldVec coeffs;
    FieldVec x = reduce(col, &coeffs);
    if (!std::all_of(x.begin(), x.end(), [](u64 v) { return v == 0; }))
        return std::nullopt;
    // col = sum_i coeffs_i reduced_i = sum_j (sum_i coeffs_i rep_[i][j]) b_j.
    FieldVec lambda(reduced_.size(), 0);
    for (std::size_t i = 0; i < reduced_.size(); ++i) {
        if (coeffs[i] == 0)
            continue;
        for (std::size_t j = 0; j < rep_[i].size(); ++j)
            lambda[j] = add_mod(lambda[j], mul_mod(coeffs[i], rep_[i][j], p_), p_);
    }
    return lambda;
}

} // namespace lmi
