#pragma once

#include "lmi/field.hpp"
#include "lmi/linalg.hpp"
#include "lmi/rational.hpp"

#include <optional>
#include <vector>

namespace lmi {

using IndexSet = std::vector<std::size_t>; // kept sorted ascending

/// A matroid-intersection instance: two matrices with a shared column index
/// set, optional nonnegative weights, and the field they live in.
struct Instance {
    FieldConfig field;
    SparseMatrix m1;
    SparseMatrix m2;
    std::optional<std::vector<Rational>> weights;

    std::size_t n() const { return m1.cols; }
    bool has_weights() const { return weights.has_value(); }

    Instance select_elements(const IndexSet& elements) const;
};

/// Min-max certificate for cardinality: S u T = [n] and
/// rank_1(S) + rank_2(T) equals the optimum.
struct CardinalityDual {
    IndexSet s;
    IndexSet t;
};

struct CardinalityResult {
    IndexSet independent;
    CardinalityDual dual;
};

/// Frank weight splitting for an optimal I: c <= c1 + c2 pointwise with
/// equality on I, and I simultaneously c1-maximum in M1 and c2-maximum
/// in M2 (over all independent sets).
struct WeightSplitting {
    std::vector<Rational> c1;
    std::vector<Rational> c2;
};

struct WeightedResult {
    IndexSet independent;
    Rational weight;
    WeightSplitting splitting;
};

// Exchange-graph augmenting-path solver. Deterministic: BFS layers with
// lowest-index tie-breaks. The dual is extracted from the final
// reachability cut and is always tight.
CardinalityResult max_common_independent(const Instance& inst);

// Successive shortest augmenting paths (exact rational costs) producing an
// extreme set of every cardinality; the best one is returned together with
// a weight splitting extracted from the final exchange graph. Conditions
// (a)-(d) of the splitting are asserted before returning.
WeightedResult weighted_exact_with_splitting(const Instance& inst);

struct BruteForceResult {
    std::size_t best_size = 0;
    IndexSet size_witness;
    Rational best_weight = 0;
    IndexSet weight_witness;
};

// Exhaustive search over common independent sets; guard n <= 20.
BruteForceResult brute_force_intersection(const Instance& inst);

bool is_independent(const SparseMatrix& m, const IndexSet& set, u64 p);
bool is_common_independent(const Instance& inst, const IndexSet& set);

Rational weight_of(const Instance& inst, const IndexSet& set);

bool verify_dual_cardinality(const Instance& inst, const IndexSet& independent,
                             const CardinalityDual& dual);

bool verify_weight_splitting(const Instance& inst, const IndexSet& independent,
                             const WeightSplitting& splitting);

// Max weight of an independent set in a single matroid (matroid greedy);
// zero-or-negative weights contribute nothing.
Rational max_weight_independent(const SparseMatrix& m, const std::vector<Rational>& w, u64 p);

// Greedy common independent set by descending weight (cardinality when no
// weights); a cheap lower bound used as a sketch-failure tripwire.
IndexSet greedy_common_independent(const Instance& inst);

} // namespace lmi
