#include "lmi/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace lmi {

namespace {

BigInt uniform_bigint_below(Rng& rng, const BigInt& bound) {
    if (bound <= 0)
        throw std::invalid_argument("uniform_bigint_below: bound must be positive");
    if (bound <= std::numeric_limits<u64>::max())
        return BigInt(rng.below(static_cast<u64>(bound)));
    std::size_t bits = boost::multiprecision::msb(bound) + 1;
    std::size_t words = (bits + 63) / 64;
    std::size_t top_bits = bits - (words - 1) * 64;
    u64 top_mask = top_bits == 64 ? ~u64{0} : ((u64{1} << top_bits) - 1);
    for (;;) {
        BigInt r = rng.next_u64() & top_mask;
        for (std::size_t i = 1; i < words; ++i)
            r = (r << 64) | rng.next_u64();
        if (r < bound)
            return r;
    }
}

IndexSet map_back(const IndexSet& positions, const IndexSet& universe) {
    IndexSet out;
    out.reserve(positions.size());
    for (std::size_t pos : positions)
        out.push_back(universe[pos]);
    return out;
}

std::size_t iteration_count(std::size_t n, double c_iters, double eps) {
    double lnn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c_iters * lnn / eps)));
}

std::size_t sample_count(std::size_t n, std::size_t k, double c_sample, double eps) {
    double lnn = std::log(static_cast<double>(std::max<std::size_t>(n, 2)));
    double raw = std::ceil(c_sample * static_cast<double>(std::max<std::size_t>(k, 1)) * lnn / eps);
    if (raw >= static_cast<double>(n))
        return n;
    return std::max<std::size_t>(1, static_cast<std::size_t>(raw));
}

} // namespace

IndexSet sample_proportional(const WeightState& w, std::size_t m, Rng& rng) {
    std::size_t n = w.size();
    if (n == 0 || m == 0)
        return {};
    if (m >= n) {
        IndexSet all(n);
        std::iota(all.begin(), all.end(), std::size_t{0});
        return all;
    }
    unsigned max_h = 0;
    for (std::size_t e = 0; e < n; ++e)
        max_h = std::max(max_h, w.halvings(e));
    // Scaled integer weights 2^(max_h - h(e)); one prefix-sum pass.
    std::vector<BigInt> prefix(n);
    BigInt running = 0;
    for (std::size_t e = 0; e < n; ++e) {
        running += BigInt(1) << (max_h - w.halvings(e));
        prefix[e] = running;
    }
    std::vector<bool> chosen(n, false);
    for (std::size_t draw = 0; draw < m; ++draw) {
        BigInt r = uniform_bigint_below(rng, running);
        auto it = std::upper_bound(prefix.begin(), prefix.end(), r);
        chosen[static_cast<std::size_t>(it - prefix.begin())] = true;
    }
    IndexSet out;
    for (std::size_t e = 0; e < n; ++e)
        if (chosen[e])
            out.push_back(e);
    return out;
}

Rational ChainDual::objective() const {
    Rational total = 0;
    for (std::size_t a = 0; a < prefix_weight.size(); ++a)
        total += Rational(static_cast<long>(prefix_rank[a])) * prefix_weight[a];
    return total;
}

void ChainDual::recompute_suffix_sums() {
    suffix_sum.assign(prefix_weight.size(), Rational(0));
    Rational running = 0;
    for (std::size_t a = prefix_weight.size(); a-- > 0;) {
        running += prefix_weight[a];
        suffix_sum[a] = running;
    }
}

namespace {

ChainDual build_one_chain(const SparseMatrix& m, u64 p, int matroid_tag,
                          const IndexSet& independent, const std::vector<Rational>& levels) {
    std::vector<std::size_t> order(independent.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (levels[a] != levels[b])
            return levels[a] > levels[b];
        return independent[a] < independent[b];
    });
    ChainDual chain;
    chain.matroid = matroid_tag;
    BasisTracker tracker(m.rows, p);
    for (std::size_t i : order) {
        std::size_t e = independent[i];
        chain.elements.push_back(e);
        if (!tracker.try_insert(m.columns[e], e))
            throw std::logic_error("build_compact_dual: chain element dependent on prefix");
        chain.prefix_rank.push_back(tracker.rank());
    }
    // Prefix alpha carries the gap between consecutive levels; the last
    // prefix keeps its whole level. Levels are nonnegative.
    chain.prefix_weight.resize(chain.elements.size());
    for (std::size_t a = 0; a < chain.elements.size(); ++a) {
        const Rational& here = levels[order[a]];
        if (a + 1 < chain.elements.size())
            chain.prefix_weight[a] = here - levels[order[a + 1]];
        else
            chain.prefix_weight[a] = here;
    }
    chain.recompute_suffix_sums();
    return chain;
}

} // namespace

ChainPair build_compact_dual(const Instance& inst, const IndexSet& independent,
                             const std::vector<Rational>& c1_on,
                             const std::vector<Rational>& c2_on) {
    if (c1_on.size() != independent.size() || c2_on.size() != independent.size())
        throw std::invalid_argument("build_compact_dual: level vectors must align with the set");
    ChainPair pair;
    pair.y = build_one_chain(inst.m1, inst.field.p, 1, independent, c1_on);
    pair.z = build_one_chain(inst.m2, inst.field.p, 2, independent, c2_on);
    return pair;
}

ChainDual round_up_chain(const ChainDual& d, const Rational& eps) {
    if (eps <= 0)
        throw std::invalid_argument("round_up_chain: eps must be positive");
    Rational q = Rational(1) + eps;
    ChainDual out = d;
    for (Rational& w : out.prefix_weight) {
        if (w <= 0)
            continue;
        // Smallest integer power of (1+eps) that is >= w, exactly.
        Rational pw = 1;
        if (w <= 1) {
            while (pw / q >= w)
                pw /= q;
        } else {
            while (pw < w)
                pw *= q;
        }
        w = pw;
    }
    out.recompute_suffix_sums();
    return out;
}

MembershipQuery build_membership_query(const SparseMatrix& m, const IndexSet& sequence,
                                       const DiagonalForm& b, const FieldConfig& cfg, Rng& rng) {
    std::size_t r = m.rows;
    std::size_t s = sequence.size();
    if (b.dim() != r)
        throw std::invalid_argument("build_membership_query: form dimension mismatch");
    std::vector<FieldVec> vectors;
    vectors.reserve(s + r);
    for (std::size_t i : sequence) {
        if (i >= m.cols)
            throw std::invalid_argument("build_membership_query: index out of range");
        vectors.push_back(m.column_dense(i));
    }
    for (std::size_t j = 0; j < r; ++j) {
        FieldVec e(r, 0);
        e[j] = 1;
        vectors.push_back(std::move(e));
    }
    OrthoSequence os = orthogonalize_sequence(vectors, b, cfg.p); // may throw

    MembershipQuery q;
    q.matrix = &m;
    q.modulus = cfg.p;
    q.sequence = sequence;
    q.form = b;
    q.coefficients.reserve(s + r);
    for (std::size_t i = 0; i < s + r; ++i)
        q.coefficients.push_back(rng.field_element(cfg));

    // Fixed part: random combination of the orthogonalized unit vectors.
    FieldVec tail(r, 0);
    for (std::size_t j = 0; j < r; ++j) {
        u64 coeff = q.coefficients[s + j];
        if (coeff == 0)
            continue;
        const FieldVec& ej = os.outputs[s + j];
        for (std::size_t t = 0; t < r; ++t)
            tail[t] = add_mod(tail[t], mul_mod(coeff, ej[t], cfg.p), cfg.p);
    }
    // Suffix sums in reverse: v_alpha = v_{alpha+1} + q_{alpha+1} m'_{alpha+1}.
    q.suffix_vectors.assign(s, FieldVec(r, 0));
    FieldVec acc = tail;
    for (std::size_t a = s; a-- > 0;) {
        q.suffix_vectors[a] = acc; // v_{a+1} uses m' strictly beyond a+1
        if (a == 0)
            break;
        u64 coeff = q.coefficients[a];
        const FieldVec& ma = os.outputs[a];
        for (std::size_t t = 0; t < r; ++t)
            acc[t] = add_mod(acc[t], mul_mod(coeff, ma[t], cfg.p), cfg.p);
    }
    q.weighted_vectors.assign(s, FieldVec(r, 0));
    for (std::size_t a = 0; a < s; ++a)
        for (std::size_t t = 0; t < r; ++t)
            q.weighted_vectors[a][t] = mul_mod(q.suffix_vectors[a][t], b.diag[t], cfg.p);
    return q;
}

bool query_membership(const MembershipQuery& q, std::size_t j, std::size_t alpha) {
    if (alpha < 1 || alpha > q.sequence.size())
        throw std::invalid_argument("query_membership: alpha out of range");
    const FieldVec& wv = q.weighted_vectors[alpha - 1];
    u64 acc = 0;
    for (const auto& e : q.matrix->columns[j])
        acc = add_mod(acc, mul_mod(wv[e.row], e.value, q.modulus), q.modulus);
    return acc == 0;
}

std::size_t first_membership_randomized(const MembershipQuery& q, std::size_t j) {
    std::size_t s = q.sequence.size();
    if (s == 0)
        return 0;
    if (!query_membership(q, j, s))
        return 0;
    std::size_t lo = 1, hi = s;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (query_membership(q, j, mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::vector<std::size_t> oracle_first_membership(const SparseMatrix& m, const IndexSet& chain,
                                                 u64 p) {
    std::vector<std::size_t> first(m.cols, 0);
    BasisTracker tracker(m.rows, p);
    for (std::size_t a = 0; a < chain.size(); ++a) {
        tracker.try_insert(m.columns[chain[a]]);
        for (std::size_t e = 0; e < m.cols; ++e) {
            if (first[e] == 0 && tracker.in_span(m.columns[e]))
                first[e] = a + 1;
        }
    }
    return first;
}

std::vector<bool> coverage_check(const Instance& inst, const ChainDual& y, const ChainDual& z,
                                 const MembershipQuery& qy, const MembershipQuery& qz) {
    if (!inst.has_weights())
        throw std::invalid_argument("coverage_check: weights required");
    const auto& c = *inst.weights;
    std::size_t n = inst.n();
    std::vector<bool> covered(n, false);
    for (std::size_t e = 0; e < n; ++e) {
        Rational cov = 0;
        if (y.length() > 0) {
            std::size_t a = first_membership_randomized(qy, e);
            if (a != 0)
                cov += y.suffix_sum[a - 1];
        }
        if (z.length() > 0) {
            std::size_t a = first_membership_randomized(qz, e);
            if (a != 0)
                cov += z.suffix_sum[a - 1];
        }
        covered[e] = cov >= c[e];
    }
    return covered;
}

MwuResult approx_cardinality(const Instance& inst, std::size_t k, double eps, Rng& rng,
                             const ApproxParams& params) {
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("approx_cardinality: eps must lie in (0, 1)");
    std::size_t n = inst.n();
    MwuResult res;
    if (n == 0)
        return res;
    std::size_t iters = iteration_count(n, params.c_iters, eps);
    std::size_t m = sample_count(n, k, params.c_sample, eps);
    WeightState w(n);
    for (std::size_t iter = 0; iter < iters; ++iter) {
        IterationRecord rec;
        IndexSet sampled = sample_proportional(w, m, rng);
        rec.sample_size = sampled.size();
        Instance sub = inst.select_elements(sampled);
        CardinalityResult sol = max_common_independent(sub);
        IndexSet candidate = map_back(sol.independent, sampled);
        rec.subsolve_objective = std::to_string(candidate.size());
        if (candidate.size() > res.solution.size())
            res.solution = candidate;
        IndexSet s_tilde = map_back(sol.dual.s, sampled);
        IndexSet t_tilde = map_back(sol.dual.t, sampled);
        IndexSet s_span = compute_span(inst.m1, s_tilde, inst.field, rng, params.span_repetitions);
        IndexSet t_span = compute_span(inst.m2, t_tilde, inst.field, rng, params.span_repetitions);
        if (params.oracle_check) {
            IndexSet s_exact = span_oracle_gaussian(inst.m1, s_tilde, inst.field.p);
            IndexSet t_exact = span_oracle_gaussian(inst.m2, t_tilde, inst.field.p);
            IndexSet diff;
            std::set_symmetric_difference(s_span.begin(), s_span.end(), s_exact.begin(),
                                          s_exact.end(), std::back_inserter(diff));
            rec.oracle_mismatches += diff.size();
            diff.clear();
            std::set_symmetric_difference(t_span.begin(), t_span.end(), t_exact.begin(),
                                          t_exact.end(), std::back_inserter(diff));
            rec.oracle_mismatches += diff.size();
        }
        std::vector<bool> halve(n, false);
        for (std::size_t e : s_span)
            halve[e] = true;
        for (std::size_t e : t_span)
            halve[e] = true;
        for (std::size_t e = 0; e < n; ++e) {
            if (halve[e]) {
                w.halve(e);
                ++rec.halved;
            }
        }
        if (sampled.size() == n) {
            // The subsolve was a global exact solve; no later iteration can
            // return a larger set.
            rec.full_cover = true;
            res.iterations.push_back(std::move(rec));
            break;
        }
        res.iterations.push_back(std::move(rec));
    }
    res.objective = Rational(static_cast<long>(res.solution.size()));
    return res;
}

namespace {

struct BuiltQueries {
    MembershipQuery qy;
    MembershipQuery qz;
    unsigned resamples = 0;
};

BuiltQueries build_queries_with_retry(const Instance& inst, const IndexSet& y_chain,
                                      const IndexSet& z_chain, Rng& rng,
                                      const ApproxParams& params) {
    BuiltQueries out;
    unsigned attempts = 0;
    for (;;) {
        try {
            DiagonalForm b1 = sample_form(std::max<std::size_t>(inst.m1.rows, 1), inst.field, rng);
            DiagonalForm b2 = sample_form(std::max<std::size_t>(inst.m2.rows, 1), inst.field, rng);
            out.qy = build_membership_query(inst.m1, y_chain, b1, inst.field, rng);
            out.qz = build_membership_query(inst.m2, z_chain, b2, inst.field, rng);
            return out;
        } catch (const DegenerateFormError&) {
            ++out.resamples;
            if (++attempts > params.form_retries)
                throw;
        }
    }
}

} // namespace

MwuResult approx_weighted(const Instance& inst, std::size_t k, const Rational& eps, Rng& rng,
                          const ApproxParams& params) {
    if (!inst.has_weights())
        throw std::invalid_argument("approx_weighted: weights required");
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("approx_weighted: eps must lie in (0, 1)");
    std::size_t n = inst.n();
    MwuResult res;
    if (n == 0)
        return res;
    double eps_d = eps.convert_to<double>();
    std::size_t iters = iteration_count(n, params.c_iters, eps_d);
    std::size_t m = sample_count(n, k, params.c_sample, eps_d);
    const auto& c = *inst.weights;
    WeightState w(n);
    for (std::size_t iter = 0; iter < iters; ++iter) {
        IterationRecord rec;
        IndexSet sampled = sample_proportional(w, m, rng);
        rec.sample_size = sampled.size();
        Instance sub = inst.select_elements(sampled);
        WeightedResult sol = weighted_exact_with_splitting(sub);
        IndexSet candidate = map_back(sol.independent, sampled);
        rec.subsolve_objective = format_rational(sol.weight);
        if (iter == 0 || sol.weight > res.objective) {
            res.objective = sol.weight;
            res.solution = candidate;
        }
        std::vector<Rational> c1_on, c2_on;
        c1_on.reserve(candidate.size());
        c2_on.reserve(candidate.size());
        for (std::size_t pos : sol.independent) {
            c1_on.push_back(sol.splitting.c1[pos]);
            c2_on.push_back(sol.splitting.c2[pos]);
        }
        ChainPair chains = build_compact_dual(inst, candidate, c1_on, c2_on);
        ChainDual y_rounded = round_up_chain(chains.y, eps);
        ChainDual z_rounded = round_up_chain(chains.z, eps);

        BuiltQueries queries =
            build_queries_with_retry(inst, y_rounded.elements, z_rounded.elements, rng, params);
        rec.form_resamples = queries.resamples;
        std::vector<bool> covered = coverage_check(inst, y_rounded, z_rounded, queries.qy, queries.qz);

        if (params.oracle_check || params.audit_hook) {
            WeightedAuditRecord audit;
            std::vector<std::size_t> fy = oracle_first_membership(inst.m1, chains.y.elements, inst.field.p);
            std::vector<std::size_t> fz = oracle_first_membership(inst.m2, chains.z.elements, inst.field.p);
            audit.feasible_on_sample = true;
            for (std::size_t e : sampled) {
                Rational cov = 0;
                if (fy[e] != 0 && chains.y.length() > 0)
                    cov += chains.y.suffix_sum[fy[e] - 1];
                if (fz[e] != 0 && chains.z.length() > 0)
                    cov += chains.z.suffix_sum[fz[e] - 1];
                if (cov < c[e])
                    audit.feasible_on_sample = false;
            }
            Rational set_weight = 0;
            for (std::size_t e = 0; e < candidate.size(); ++e)
                set_weight += c[candidate[e]];
            Rational split_weight = 0;
            for (std::size_t i = 0; i < c1_on.size(); ++i)
                split_weight += c1_on[i] + c2_on[i];
            audit.objective_exact = chains.y.objective() + chains.z.objective() == split_weight &&
                                    split_weight == set_weight;
            audit.rounded_within_factor =
                y_rounded.objective() + z_rounded.objective() <= (Rational(1) + eps) * set_weight;
            // One-sided randomized coverage: wherever the oracle certifies
            // coverage, the randomized check must agree.
            audit.randomized_consistent = true;
            for (std::size_t e = 0; e < n; ++e) {
                Rational cov = 0;
                if (fy[e] != 0 && y_rounded.length() > 0)
                    cov += y_rounded.suffix_sum[fy[e] - 1];
                if (fz[e] != 0 && z_rounded.length() > 0)
                    cov += z_rounded.suffix_sum[fz[e] - 1];
                bool oracle_covered = cov >= c[e];
                if (oracle_covered && !covered[e]) {
                    audit.randomized_consistent = false;
                    ++rec.oracle_mismatches;
                }
            }
            if (params.audit_hook)
                params.audit_hook(audit);
        }

        for (std::size_t e = 0; e < n; ++e) {
            if (covered[e]) {
                w.halve(e);
                ++rec.halved;
            }
        }
        if (sampled.size() == n) {
            rec.full_cover = true;
            res.iterations.push_back(std::move(rec));
            break;
        }
        res.iterations.push_back(std::move(rec));
    }
    return res;
}

PipelineResult solve_cardinality(const Instance& inst, const Rational& eps, Rng& rng,
                                 const ApproxParams& params) {
    if (!(eps > 0 && eps < Rational(1, 2)))
        throw std::invalid_argument(
            "solve_cardinality: eps must lie in (0, 1/2); larger eps gives no doubling guarantee");
    PipelineResult out;
    std::size_t n = inst.n();
    if (n == 0) {
        out.validated = true;
        return out;
    }
    double eps_d = eps.convert_to<double>();
    for (std::size_t level = 2;; level *= 2) {
        StageRecord stage;
        stage.level = level;
        MwuResult best_attempt;
        bool have = false;
        for (unsigned attempt = 0;; ++attempt) {
            SketchOperator op1 = make_sketch_operator(inst.m1.rows, level, n, inst.field, rng,
                                                      params.sketch);
            SketchOperator op2 = make_sketch_operator(inst.m2.rows, level, n, inst.field, rng,
                                                      params.sketch);
            Instance sub;
            sub.field = inst.field;
            sub.m1 = apply_sketch(op1, inst.m1, inst.field.p);
            sub.m2 = apply_sketch(op2, inst.m2, inst.field.p);
            stage.rows1 = sub.m1.rows;
            stage.rows2 = sub.m2.rows;
            std::size_t k = std::max<std::size_t>(1, std::max(sub.m1.rows, sub.m2.rows));
            MwuResult attempt_result = approx_cardinality(sub, k, eps_d, rng, params);
            if (!is_common_independent(inst, attempt_result.solution))
                throw std::logic_error("solve_cardinality: sketched solution dependent on originals");
            if (!have || attempt_result.solution.size() > best_attempt.solution.size()) {
                best_attempt = std::move(attempt_result);
                have = true;
            }
            bool suspicious = best_attempt.solution.size() < std::max(level / 2, out.solution.size());
            if (!suspicious || attempt >= 1)
                break;
            ++stage.sketch_resamples;
            ++out.sketch_resamples;
        }
        stage.result_size = best_attempt.solution.size();
        stage.iterations = best_attempt.iterations;
        out.stages.push_back(stage);
        if (best_attempt.solution.size() > out.solution.size())
            out.solution = best_attempt.solution;
        out.r_star_hint = level;
        if (best_attempt.solution.size() * 2 < level)
            break;
        if (level >= 2 * n)
            break;
    }
    out.objective = Rational(static_cast<long>(out.solution.size()));
    out.validated = is_common_independent(inst, out.solution);
    if (!out.validated)
        throw std::logic_error("solve_cardinality: final validation failed");
    return out;
}

PipelineResult solve_weighted(const Instance& inst, const Rational& eps, Rng& rng,
                              const ApproxParams& params) {
    if (!inst.has_weights())
        throw std::invalid_argument("solve_weighted: weights required");
    if (!(eps > 0 && eps < 1))
        throw std::invalid_argument("solve_weighted: eps must lie in (0, 1)");
    PipelineResult out;
    std::size_t n = inst.n();
    if (n == 0) {
        out.validated = true;
        return out;
    }
    // 2/3-approximate cardinality bootstrap fixes the sketch size.
    PipelineResult boot = solve_cardinality(inst, Rational(1, 3), rng, params);
    out.bootstrap_size = boot.solution.size();
    std::size_t k = std::max<std::size_t>(1, (3 * boot.solution.size() + 1) / 2);
    out.sketch_k = k;

    IndexSet greedy = greedy_common_independent(inst);
    Rational greedy_weight = weight_of(inst, greedy);

    MwuResult best_attempt;
    bool have = false;
    StageRecord stage;
    stage.level = k;
    for (unsigned attempt = 0;; ++attempt) {
        SketchOperator op1 = make_sketch_operator(inst.m1.rows, k, n, inst.field, rng, params.sketch);
        SketchOperator op2 = make_sketch_operator(inst.m2.rows, k, n, inst.field, rng, params.sketch);
        Instance sub;
        sub.field = inst.field;
        sub.m1 = apply_sketch(op1, inst.m1, inst.field.p);
        sub.m2 = apply_sketch(op2, inst.m2, inst.field.p);
        sub.weights = inst.weights;
        stage.rows1 = sub.m1.rows;
        stage.rows2 = sub.m2.rows;
        std::size_t kk = std::max<std::size_t>(1, std::max(sub.m1.rows, sub.m2.rows));
        MwuResult attempt_result = approx_weighted(sub, kk, eps, rng, params);
        if (!is_common_independent(inst, attempt_result.solution))
            throw std::logic_error("solve_weighted: sketched solution dependent on originals");
        if (!have || attempt_result.objective > best_attempt.objective) {
            best_attempt = std::move(attempt_result);
            have = true;
        }
        bool suspicious = best_attempt.objective < greedy_weight;
        if (!suspicious || attempt >= 1)
            break;
        ++stage.sketch_resamples;
        ++out.sketch_resamples;
    }
    stage.result_size = best_attempt.solution.size();
    stage.iterations = best_attempt.iterations;
    out.stages.push_back(stage);
    out.solution = best_attempt.solution;
    out.objective = best_attempt.objective;
    out.validated = is_common_independent(inst, out.solution);
    if (!out.validated)
        throw std::logic_error("solve_weighted: final validation failed");
    return out;
}

} // namespace lmi
