#pragma once

#include "lmi/field.hpp"
#include "lmi/linalg.hpp"

#include <vector>

namespace lmi {

/// Randomized witness used by compute_span: a basis of the orthogonal
/// complement of span{m_j : j in S} together with the random combination
/// v = sum r_j b_j drawn from it.
struct ComplementSample {
    std::vector<FieldVec> basis;
    FieldVec coefficients;
    FieldVec v;
};

// Basis of {x in F^r : m_j^T x = 0 for all j in S}; dimension r - rank(M[S]).
// S = {} yields the standard basis.
std::vector<FieldVec> orthogonal_complement_basis(const SparseMatrix& m,
                                                  const std::vector<std::size_t>& s, u64 p);

ComplementSample sample_complement(const SparseMatrix& m, const std::vector<std::size_t>& s,
                                   const FieldConfig& cfg, Rng& rng);

// Randomized span_M(S): T = {i : v^T m_i = 0} for a random complement
// vector v. Always contains the true span; equals it with probability
// >= 1 - n/|F| per repetition. `repetitions` > 1 intersects independent
// trials, shrinking false positives only.
std::vector<std::size_t> compute_span(const SparseMatrix& m, const std::vector<std::size_t>& s,
                                      const FieldConfig& cfg, Rng& rng, unsigned repetitions = 1);

// Deterministic oracle: {i : rank(M[S + i]) = rank(M[S])} by elimination.
std::vector<std::size_t> span_oracle_gaussian(const SparseMatrix& m,
                                              const std::vector<std::size_t>& s, u64 p);

} // namespace lmi
