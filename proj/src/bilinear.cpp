#include "lmi/bilinear.hpp"

#include <algorithm>

namespace lmi {

DiagonalForm sample_form(std::size_t r, const FieldConfig& cfg, Rng& rng) {
    if (r < 1)
        throw std::invalid_argument("sample_form: r must be >= 1");
    DiagonalForm b;
    b.seed = rng.seed();
    b.diag.reserve(r);
    for (std::size_t i = 0; i < r; ++i)
        b.diag.push_back(rng.field_element(cfg));
    return b;
}

u64 bilinear_product(const FieldVec& v, const FieldVec& w, const DiagonalForm& b, u64 p) {
    if (v.size() != w.size() || v.size() != b.diag.size())
        throw std::invalid_argument("bilinear_product: dimension mismatch");
    u64 acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc = add_mod(acc, mul_mod(v[i], mul_mod(b.diag[i], w[i], p), p), p);
    return acc;
}

Projection project(const DenseMatrix& a, const DiagonalForm& b, const FieldVec& v, u64 p) {
    if (a.rows != b.diag.size() || v.size() != a.rows)
        throw std::invalid_argument("project: dimension mismatch");
    std::size_t l = a.cols;
    // Gram = A^T B A; rhs = A^T B v.
    DenseMatrix gram(l, l);
    FieldVec rhs(l, 0);
    FieldVec bv(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        bv[i] = mul_mod(b.diag[i], v[i], p);
    for (std::size_t c = 0; c < l; ++c) {
        for (std::size_t d = 0; d < l; ++d) {
            u64 acc = 0;
            for (std::size_t i = 0; i < a.rows; ++i)
                acc = add_mod(acc, mul_mod(a.at(i, c), mul_mod(b.diag[i], a.at(i, d), p), p), p);
            gram.at(c, d) = acc;
        }
        u64 acc = 0;
        for (std::size_t i = 0; i < a.rows; ++i)
            acc = add_mod(acc, mul_mod(a.at(i, c), bv[i], p), p);
        rhs[c] = acc;
    }
    DenseMatrix gram_inv;
    try {
        gram_inv = inverse(gram, p);
    } catch (const SingularMatrixError&) {
        throw DegenerateFormError();
    }
    FieldVec coeff = mat_vec(gram_inv, rhs, p);
    Projection out;
    out.onto.assign(a.rows, 0);
    for (std::size_t c = 0; c < l; ++c) {
        if (coeff[c] == 0)
            continue;
        for (std::size_t i = 0; i < a.rows; ++i)
            out.onto[i] = add_mod(out.onto[i], mul_mod(coeff[c], a.at(i, c), p), p);
    }
    out.residual.resize(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        out.residual[i] = sub_mod(v[i], out.onto[i], p);
    return out;
}

OrthoSequence orthogonalize_sequence(const std::vector<FieldVec>& vectors, const DiagonalForm& b,
                                     u64 p) {
    std::size_t r = b.diag.size();
    OrthoSequence seq;
    seq.inputs = vectors;
    seq.outputs.reserve(vectors.size());
    seq.pivots.reserve(vectors.size());
    for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
        const FieldVec& m = vectors[idx];
        if (m.size() != r)
            throw std::invalid_argument("orthogonalize_sequence: dimension mismatch");
        FieldVec x = m;
        for (std::size_t j : seq.accepted) {
            u64 num = bilinear_product(seq.outputs[j], x, b, p);
            if (num == 0)
                continue;
            u64 f = mul_mod(num, inv_mod(seq.pivots[j], p), p);
            const FieldVec& u = seq.outputs[j];
            for (std::size_t k = 0; k < r; ++k)
                x[k] = sub_mod(x[k], mul_mod(f, u[k], p), p);
        }
        bool zero = std::all_of(x.begin(), x.end(), [](u64 v) { return v == 0; });
        if (zero) {
            seq.outputs.push_back(FieldVec(r, 0));
            seq.pivots.push_back(0);
            continue;
        }
        u64 pivot = bilinear_product(x, x, b, p);
        if (pivot == 0)
            throw DegenerateFormError();
        seq.outputs.push_back(std::move(x));
        seq.pivots.push_back(pivot);
        seq.accepted.push_back(idx);
    }
    return seq;
}

std::vector<FieldVec> complement_basis_bilinear(const std::vector<FieldVec>& w_basis,
                                                const DiagonalForm& b, u64 p) {
    std::size_t r = b.diag.size();
    DenseMatrix sys(w_basis.size(), r);
    for (std::size_t i = 0; i < w_basis.size(); ++i) {
        if (w_basis[i].size() != r)
            throw std::invalid_argument("complement_basis_bilinear: dimension mismatch");
        for (std::size_t k = 0; k < r; ++k)
            sys.at(i, k) = mul_mod(w_basis[i][k], b.diag[k], p);
    }
    return null_space_basis(sys, p);
}

bool check_good_subspace(const std::vector<FieldVec>& w_basis, const DiagonalForm& b, u64 p) {
    std::size_t r = b.diag.size();
    std::vector<FieldVec> comp = complement_basis_bilinear(w_basis, b, p);
    DenseMatrix wstack(w_basis.size(), r);
    for (std::size_t i = 0; i < w_basis.size(); ++i)
        for (std::size_t k = 0; k < r; ++k)
            wstack.at(i, k) = w_basis[i][k];
    std::size_t dim_w = rank(wstack, p);
    if (dim_w + comp.size() != r)
        return false;
    // Trivial intersection iff the stacked bases have full combined rank.
    DenseMatrix stack(w_basis.size() + comp.size(), r);
    std::size_t row = 0;
    for (const auto& w : w_basis) {
        for (std::size_t k = 0; k < r; ++k)
            stack.at(row, k) = w[k];
        ++row;
    }
    for (const auto& c : comp) {
        for (std::size_t k = 0; k < r; ++k)
            stack.at(row, k) = c[k];
        ++row;
    }
    return rank(stack, p) == dim_w + comp.size();
}

} // namespace lmi
