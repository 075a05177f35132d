#include "lmi/span.hpp"

#include <algorithm>

namespace lmi {

std::vector<FieldVec> orthogonal_complement_basis(const SparseMatrix& m,
                                                  const std::vector<std::size_t>& s, u64 p) {
    // Null space of M[S]^T: an |S| x r system.
    DenseMatrix st(s.size(), m.rows);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= m.cols)
            throw std::invalid_argument("orthogonal_complement_basis: index out of range");
        for (const auto& e : m.columns[s[i]])
            st.at(i, e.row) = e.value;
    }
    return null_space_basis(st, p);
}

ComplementSample sample_complement(const SparseMatrix& m, const std::vector<std::size_t>& s,
                                   const FieldConfig& cfg, Rng& rng) {
    ComplementSample out;
    out.basis = orthogonal_complement_basis(m, s, cfg.p);
    out.coefficients.reserve(out.basis.size());
    out.v.assign(m.rows, 0);
    for (const FieldVec& b : out.basis) {
        u64 r = rng.field_element(cfg);
        out.coefficients.push_back(r);
        if (r == 0)
            continue;
        for (std::size_t k = 0; k < m.rows; ++k)
            out.v[k] = add_mod(out.v[k], mul_mod(r, b[k], cfg.p), cfg.p);
    }
    return out;
}

std::vector<std::size_t> compute_span(const SparseMatrix& m, const std::vector<std::size_t>& s,
                                      const FieldConfig& cfg, Rng& rng, unsigned repetitions) {
    std::vector<bool> in_all(m.cols, true);
    for (unsigned rep = 0; rep < std::max(1u, repetitions); ++rep) {
        ComplementSample cs = sample_complement(m, s, cfg, rng);
        FieldVec products = left_apply_all(cs.v, m, cfg.p);
        for (std::size_t i = 0; i < m.cols; ++i) {
            if (products[i] != 0)
                in_all[i] = false;
        }
    }
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < m.cols; ++i)
        if (in_all[i])
            t.push_back(i);
    return t;
}

std::vector<std::size_t> span_oracle_gaussian(const SparseMatrix& m,
                                              const std::vector<std::size_t>& s, u64 p) {
    BasisTracker tracker(m.rows, p);
    for (std::size_t j : s) {
        if (j >= m.cols)
            throw std::invalid_argument("span_oracle_gaussian: index out of range");
        tracker.try_insert(m.columns[j]);
    }
    std::vector<std::size_t> t;
    for (std::size_t i = 0; i < m.cols; ++i)
        if (tracker.in_span(m.columns[i]))
            t.push_back(i);
    return t;
}

} // namespace lmi
