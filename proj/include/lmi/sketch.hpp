#pragma once

#include "lmi/field.hpp"
#include "lmi/linalg.hpp"

#include <vector>

namespace lmi {

/// Sparse random row-compression operator: out_rows x in_rows, where every
/// input row spreads to `spread` output rows with nonzero coefficients.
/// Column dependencies survive application deterministically; independence
/// of small column sets survives with high probability.
struct SketchOperator {
    std::size_t in_rows = 0;
    std::size_t out_rows = 0;
    bool is_identity = false;
    u64 seed = 0;
    // row_map[i] lists the (out_row, coefficient) pairs of input row i.
    std::vector<std::vector<std::pair<std::size_t, u64>>> row_map;
};

struct SketchParams {
    double c_sketch = 2.0; // out_rows = min(r, ceil(c_sketch * k))
};

// n is the column count of the matrices the operator will be applied to;
// it sets the per-row spread ceil(log2 n) + 1.
SketchOperator make_sketch_operator(std::size_t in_rows, std::size_t k, std::size_t n,
                                    const FieldConfig& cfg, Rng& rng,
                                    const SketchParams& params = {});

SparseMatrix apply_sketch(const SketchOperator& op, const SparseMatrix& m, u64 p);

// Convenience: sample an operator for target rank bound k and apply it.
SparseMatrix compress(const SparseMatrix& m, std::size_t k, const FieldConfig& cfg, Rng& rng,
                      const SketchParams& params = {});

} // namespace lmi
