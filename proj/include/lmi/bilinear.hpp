#pragma once

#include "lmi/field.hpp"
#include "lmi/linalg.hpp"

#include <stdexcept>
#include <vector>

namespace lmi {

/// Raised when a sampled diagonal form turns out degenerate for the vectors
/// at hand (singular Gram matrix or an isotropic pivot). Callers resample
/// the form and retry.
struct DegenerateFormError : std::runtime_error {
    DegenerateFormError() : std::runtime_error("degenerate bilinear form; resample") {}
};

/// Random diagonal bilinear form <v, w> = v^T B w with B = diag(w_1..w_r).
struct DiagonalForm {
    FieldVec diag;
    u64 seed = 0;

    std::size_t dim() const { return diag.size(); }

    static DiagonalForm euclidean(std::size_t r) { return DiagonalForm{FieldVec(r, 1), 0}; }
};

DiagonalForm sample_form(std::size_t r, const FieldConfig& cfg, Rng& rng);

u64 bilinear_product(const FieldVec& v, const FieldVec& w, const DiagonalForm& b, u64 p);

struct Projection {
    FieldVec onto;      // component in the column space of A
    FieldVec residual;  // v - onto, B-orthogonal to every column of A
};

// p = A (A^T B A)^-1 A^T B v, q = v - p. A must have independent columns;
// a singular Gram matrix A^T B A raises DegenerateFormError.
Projection project(const DenseMatrix& a, const DiagonalForm& b, const FieldVec& v, u64 p);

/// Result of orthogonalizing a vector sequence against a diagonal form:
/// outputs[i] = m_i - (projection onto span of the accepted prefix).
/// Vectors dependent on their prefix come out as zero and are not accepted;
/// accepted outputs are pairwise B-orthogonal with nonzero self-products.
struct OrthoSequence {
    std::vector<FieldVec> inputs;
    std::vector<FieldVec> outputs;
    FieldVec pivots;                      // <m'_i, m'_i>_B, aligned with outputs
    std::vector<std::size_t> accepted;    // indices with nonzero output
};

// Iterated projection using the already-orthogonalized prefix, O(N r^2).
// An independent vector with a zero self-product raises DegenerateFormError.
OrthoSequence orthogonalize_sequence(const std::vector<FieldVec>& vectors, const DiagonalForm& b,
                                     u64 p);

// True iff dim(W) + dim(W_perp_B) = r and the two subspaces intersect
// trivially, where W is spanned by w_basis.
bool check_good_subspace(const std::vector<FieldVec>& w_basis, const DiagonalForm& b, u64 p);

// Basis of {x : <w, x>_B = 0 for all rows w of the stacked basis}.
std::vector<FieldVec> complement_basis_bilinear(const std::vector<FieldVec>& w_basis,
                                                const DiagonalForm& b, u64 p);

} // namespace lmi
