#pragma once

#include "lmi/bilinear.hpp"
#include "lmi/exact.hpp"
#include "lmi/rational.hpp"
#include "lmi/sketch.hpp"
#include "lmi/span.hpp"

#include <functional>
#include <string>
#include <vector>

namespace lmi {

/// Multiplicative-weights state: halving counts per element; the sampling
/// weight of e is 2^-h(e), kept exact (never floats, never zero).
class WeightState {
public:
    explicit WeightState(std::size_t n) : halvings_(n, 0) {}

    std::size_t size() const { return halvings_.size(); }
    unsigned halvings(std::size_t e) const { return halvings_[e]; }
    void halve(std::size_t e) { ++halvings_[e]; }

private:
    std::vector<unsigned> halvings_;
};

// Weighted sample of at most m distinct elements. When m covers every
// element the whole ground set is returned without consuming randomness;
// otherwise m draws with replacement are deduplicated.
IndexSet sample_proportional(const WeightState& w, std::size_t m, Rng& rng);

/// One matroid's side of a compact dual: weights supported on the chain of
/// prefix spans of `elements`. suffix_sum[a] = sum of prefix_weight[a..].
struct ChainDual {
    int matroid = 1;
    IndexSet elements; // chain order (not sorted): e_1 .. e_k
    std::vector<Rational> prefix_weight;
    std::vector<Rational> suffix_sum;
    std::vector<std::size_t> prefix_rank;

    std::size_t length() const { return elements.size(); }
    Rational objective() const;
    void recompute_suffix_sums();
};

struct ChainPair {
    ChainDual y;
    ChainDual z;
};

// Chain duals from a weight splitting via the threshold-integral
// construction: elements of I sorted by c1 (resp. c2) descending, prefix
// weights = consecutive level differences. c1_on/c2_on align with
// `independent` (which is sorted ascending).
ChainPair build_compact_dual(const Instance& inst, const IndexSet& independent,
                             const std::vector<Rational>& c1_on,
                             const std::vector<Rational>& c2_on);

// Rounds every positive prefix weight up to the nearest power of (1+eps),
// exactly in rational arithmetic; suffix sums recomputed.
ChainDual round_up_chain(const ChainDual& d, const Rational& eps);

/// Preprocessed structure answering "is column j in the span of the first
/// alpha chain columns" in O(nnz(m_j)) per query, one-sided error.
struct MembershipQuery {
    const SparseMatrix* matrix = nullptr;
    u64 modulus = 0;
    IndexSet sequence;
    DiagonalForm form;
    FieldVec coefficients;                  // q_1 .. q_{s+r}
    std::vector<FieldVec> suffix_vectors;   // v_alpha, alpha = 1..s
    std::vector<FieldVec> weighted_vectors; // B v_alpha, ready for sparse dots
};

// Orthogonalizes [m_{i_1..i_s}, e_1..e_r] against B and forms the suffix
// combinations; throws DegenerateFormError when B is bad for the sequence.
MembershipQuery build_membership_query(const SparseMatrix& m, const IndexSet& sequence,
                                       const DiagonalForm& b, const FieldConfig& cfg, Rng& rng);

// alpha in [1, sequence length]; member => always true.
bool query_membership(const MembershipQuery& q, std::size_t j, std::size_t alpha);

// Smallest alpha with membership true (binary search over the monotone
// randomized test); 0 when membership never holds.
std::size_t first_membership_randomized(const MembershipQuery& q, std::size_t j);

// Deterministic counterpart for every column at once (elimination).
std::vector<std::size_t> oracle_first_membership(const SparseMatrix& m, const IndexSet& chain,
                                                 u64 p);

// covered[e] = (suffix sum at first y-prefix containing e) +
//              (suffix sum at first z-prefix containing e) >= c(e).
std::vector<bool> coverage_check(const Instance& inst, const ChainDual& y, const ChainDual& z,
                                 const MembershipQuery& qy, const MembershipQuery& qz);

struct IterationRecord {
    std::size_t sample_size = 0;
    std::string subsolve_objective;
    std::size_t halved = 0;
    unsigned form_resamples = 0;
    std::size_t oracle_mismatches = 0;
    bool full_cover = false;
};

struct StageRecord {
    std::size_t level = 0;
    std::size_t rows1 = 0;
    std::size_t rows2 = 0;
    std::size_t result_size = 0;
    unsigned sketch_resamples = 0;
    std::vector<IterationRecord> iterations;
};

/// Exact-arithmetic audit of one weighted subsolve's chain dual, evaluated
/// with the Gaussian span oracle.
struct WeightedAuditRecord {
    bool feasible_on_sample = false;   // coverage >= c(e) for every sampled e
    bool objective_exact = false;      // chain objective == c1(I)+c2(I) == c(I)
    bool rounded_within_factor = false; // rounded objective <= (1+eps) c(I)
    bool randomized_consistent = false; // oracle-covered implies randomized-covered
};

struct ApproxParams {
    double c_sample = 4.0; // m = ceil(c_sample * k * ln(n) / eps), capped at n
    double c_iters = 4.0;  // L = ceil(c_iters * ln(n) / eps)
    SketchParams sketch;
    unsigned span_repetitions = 1;
    unsigned form_retries = 5;
    bool oracle_check = false; // Gaussian-oracle cross-checks + audits
    std::function<void(const WeightedAuditRecord&)> audit_hook;
};

struct MwuResult {
    IndexSet solution;
    Rational objective = 0;
    std::vector<IterationRecord> iterations;
};

// Algorithm: L rounds of weighted sampling, exact cardinality subsolve,
// span extension of the subinstance dual, and weight halving on the
// extended dual sets. Returns the best subsolve primal.
MwuResult approx_cardinality(const Instance& inst, std::size_t k, double eps, Rng& rng,
                             const ApproxParams& params = {});

// Weighted counterpart: exact weighted subsolve with splitting, compact
// chain duals, (1+eps) rounding, randomized coverage via membership
// queries, halving of covered elements.
MwuResult approx_weighted(const Instance& inst, std::size_t k, const Rational& eps, Rng& rng,
                          const ApproxParams& params = {});

struct PipelineResult {
    IndexSet solution;
    Rational objective = 0;
    std::size_t r_star_hint = 0; // final doubling level bound (cardinality)
    std::size_t bootstrap_size = 0;
    std::size_t sketch_k = 0;
    unsigned sketch_resamples = 0;
    bool validated = false;
    std::vector<StageRecord> stages;
};

// Doubling pipeline: sketch to O(l) rows, run the cardinality loop, stop
// when the returned set has size < l/2. eps must lie in (0, 1/2).
PipelineResult solve_cardinality(const Instance& inst, const Rational& eps, Rng& rng,
                                 const ApproxParams& params = {});

// Bootstrap a 2/3-approximate cardinality solution, sketch with
// k = ceil(3/2 |S|), then run the weighted loop. eps in (0, 1).
PipelineResult solve_weighted(const Instance& inst, const Rational& eps, Rng& rng,
                              const ApproxParams& params = {});

} // namespace lmi
