#include "lmi/exact.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <limits>
#include <stdexcept>

namespace lmi {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

/// Exchange structure of the current common independent set I:
/// membership of every outside element in span_1(I)/span_2(I), fundamental
/// circuits where defined, and the addable sets X1/X2.
struct ExchangeGraph {
    std::vector<bool> in_set;
    std::vector<char> in_span1, in_span2;
    std::vector<IndexSet> circuit1, circuit2; // labels into I, ascending
    IndexSet x1, x2;
    // Reverse adjacency of the A1 arcs restricted to circuit exchanges:
    // a1_from[y] = { x : y in C_1(I, x) }.
    std::vector<IndexSet> a1_from;
    std::vector<IndexSet> a2_from; // a2_from[y] = { x : y in C_2(I, x) }
};

ExchangeGraph build_exchange(const Instance& inst, const IndexSet& set) {
    std::size_t n = inst.n();
    ExchangeGraph g;
    g.in_set.assign(n, false);
    for (std::size_t e : set)
        g.in_set[e] = true;
    g.in_span1.assign(n, 0);
    g.in_span2.assign(n, 0);
    g.circuit1.assign(n, {});
    g.circuit2.assign(n, {});
    g.a1_from.assign(n, {});
    g.a2_from.assign(n, {});

    BasisTracker t1(inst.m1.rows, inst.field.p);
    BasisTracker t2(inst.m2.rows, inst.field.p);
    for (std::size_t e : set) {
        bool ok1 = t1.try_insert(inst.m1.columns[e], e);
        bool ok2 = t2.try_insert(inst.m2.columns[e], e);
        if (!ok1 || !ok2)
            throw std::logic_error("build_exchange: set is not common independent");
    }
    const auto& labels1 = t1.accepted_labels();
    const auto& labels2 = t2.accepted_labels();
    for (std::size_t x = 0; x < n; ++x) {
        if (g.in_set[x]) {
            g.in_span1[x] = g.in_span2[x] = 1;
            continue;
        }
        if (auto coords = t1.coordinates(inst.m1.column_dense(x))) {
            g.in_span1[x] = 1;
            for (std::size_t i = 0; i < coords->size(); ++i)
                if ((*coords)[i] != 0)
                    g.circuit1[x].push_back(labels1[i]);
            std::sort(g.circuit1[x].begin(), g.circuit1[x].end());
            for (std::size_t y : g.circuit1[x])
                g.a1_from[y].push_back(x);
        } else {
            g.x1.push_back(x);
        }
        if (auto coords = t2.coordinates(inst.m2.column_dense(x))) {
            g.in_span2[x] = 1;
            for (std::size_t i = 0; i < coords->size(); ++i)
                if ((*coords)[i] != 0)
                    g.circuit2[x].push_back(labels2[i]);
            std::sort(g.circuit2[x].begin(), g.circuit2[x].end());
            for (std::size_t y : g.circuit2[x])
                g.a2_from[y].push_back(x);
        } else {
            g.x2.push_back(x);
        }
    }
    return g;
}

IndexSet apply_augmentation(const IndexSet& set, const std::vector<std::size_t>& path,
                            const std::vector<bool>& in_set) {
    IndexSet next = set;
    for (std::size_t v : path) {
        if (in_set[v]) {
            next.erase(std::find(next.begin(), next.end(), v));
        } else {
            next.push_back(v);
        }
    }
    std::sort(next.begin(), next.end());
    return next;
}

} // namespace

Instance Instance::select_elements(const IndexSet& elements) const {
    Instance sub;
    sub.field = field;
    sub.m1 = m1.select_columns(elements);
    sub.m2 = m2.select_columns(elements);
    if (weights) {
        std::vector<Rational> w;
        w.reserve(elements.size());
        for (std::size_t e : elements)
            w.push_back((*weights)[e]);
        sub.weights = std::move(w);
    }
    return sub;
}

bool is_independent(const SparseMatrix& m, const IndexSet& set, u64 p) {
    BasisTracker t(m.rows, p);
    for (std::size_t e : set) {
        if (e >= m.cols)
            throw std::invalid_argument("is_independent: index out of range");
        if (!t.try_insert(m.columns[e]))
            return false;
    }
    return true;
}

bool is_common_independent(const Instance& inst, const IndexSet& set) {
    return is_independent(inst.m1, set, inst.field.p) &&
           is_independent(inst.m2, set, inst.field.p);
}

Rational weight_of(const Instance& inst, const IndexSet& set) {
    if (!inst.has_weights())
        throw std::invalid_argument("weight_of: instance has no weights");
    Rational total = 0;
    for (std::size_t e : set)
        total += (*inst.weights)[e];
    return total;
}

CardinalityResult max_common_independent(const Instance& inst) {
    std::size_t n = inst.n();
    IndexSet current;
    for (;;) {
        ExchangeGraph g = build_exchange(inst, current);
        // BFS from X1 over A1/A2 arcs; the first dequeued X2 node closes a
        // shortest augmenting path.
        std::vector<std::size_t> pred(n, kNone);
        std::vector<bool> seen(n, false);
        std::vector<bool> is_sink(n, false);
        for (std::size_t x : g.x2)
            is_sink[x] = true;
        std::deque<std::size_t> queue;
        for (std::size_t x : g.x1) {
            seen[x] = true;
            queue.push_back(x);
        }
        std::size_t found = kNone;
        while (!queue.empty()) {
            std::size_t v = queue.front();
            queue.pop_front();
            if (!g.in_set[v] && is_sink[v]) {
                found = v;
                break;
            }
            const IndexSet& nbrs = g.in_set[v] ? g.a1_from[v] : g.circuit2[v];
            for (std::size_t w : nbrs) {
                if (!seen[w]) {
                    seen[w] = true;
                    pred[w] = v;
                    queue.push_back(w);
                }
            }
        }
        if (found == kNone) {
            // No augmenting path: the set of reachable elements certifies
            // optimality. T = reachable, S = complement.
            CardinalityResult result;
            result.independent = current;
            for (std::size_t v = 0; v < n; ++v)
                (seen[v] ? result.dual.t : result.dual.s).push_back(v);
            if (!verify_dual_cardinality(inst, result.independent, result.dual))
                throw std::logic_error("max_common_independent: dual not tight");
            return result;
        }
        std::vector<std::size_t> path;
        for (std::size_t v = found; v != kNone; v = pred[v])
            path.push_back(v);
        current = apply_augmentation(current, path, g.in_set);
        if (!is_common_independent(inst, current))
            throw std::logic_error("max_common_independent: augmentation broke independence");
    }
}

namespace {

struct PathCost {
    Rational cost;
    std::size_t arcs = 0;

    bool operator<(const PathCost& other) const {
        if (cost != other.cost)
            return cost < other.cost;
        return arcs < other.arcs;
    }
};

struct WeightedSearch {
    bool found = false;
    std::size_t sink = kNone;
    PathCost best;
    std::vector<std::size_t> path; // source ... sink
};

// Bellman-Ford over the exchange graph with node costs +c on I and -c
// outside, minimizing (cost, arc count) lexicographically.
WeightedSearch cheapest_augmenting_path(const Instance& inst, const ExchangeGraph& g,
                                        const std::vector<Rational>& c) {
    std::size_t n = inst.n();
    std::vector<std::optional<PathCost>> dist(n);
    std::vector<std::size_t> pred(n, kNone);
    IndexSet members;
    for (std::size_t v = 0; v < n; ++v)
        if (g.in_set[v])
            members.push_back(v);

    for (std::size_t x : g.x1) {
        dist[x] = PathCost{-c[x], 1};
        pred[x] = kNone;
    }
    auto relax = [&](std::size_t u, std::size_t v, const Rational& node_cost) {
        if (!dist[u])
            return false;
        PathCost cand{dist[u]->cost + node_cost, dist[u]->arcs + 1};
        if (!dist[v] || cand < *dist[v]) {
            dist[v] = cand;
            pred[v] = u;
            return true;
        }
        return false;
    };
    bool stable = false;
    for (std::size_t sweep = 0; sweep <= n + 1 && !stable; ++sweep) {
        stable = true;
        for (std::size_t v = 0; v < n; ++v) {
            if (g.in_set[v]) {
                // Arcs x -> v (A2): from circuit exchanges and from every
                // element outside span_2(I).
                for (std::size_t x : g.a2_from[v])
                    if (relax(x, v, c[v]))
                        stable = false;
                for (std::size_t x : g.x2)
                    if (relax(x, v, c[v]))
                        stable = false;
            } else {
                // Arcs y -> v (A1).
                if (g.in_span1[v]) {
                    for (std::size_t y : g.circuit1[v])
                        if (relax(y, v, -c[v]))
                            stable = false;
                } else {
                    for (std::size_t y : members)
                        if (relax(y, v, -c[v]))
                            stable = false;
                }
            }
        }
    }
    if (!stable)
        throw std::logic_error("cheapest_augmenting_path: negative cycle (set not extreme)");

    WeightedSearch out;
    // g.x2 ascends, so the first strict minimum is the lowest-index sink.
    for (std::size_t x : g.x2) {
        if (!dist[x])
            continue;
        if (!out.found || *dist[x] < out.best) {
            out.found = true;
            out.sink = x;
            out.best = *dist[x];
        }
    }
    if (!out.found)
        return out;
    for (std::size_t v = out.sink; v != kNone; v = pred[v])
        out.path.push_back(v);
    std::reverse(out.path.begin(), out.path.end());
    return out;
}

// Weight splitting for an optimal set: solve the difference-constraint
// system that expresses local optimality of I under c1 in M1 and under
// c = c1 + c2 in M2, by shortest paths from a root. Feasibility is
// Frank's weight-splitting theorem; the result is verified by the caller.
WeightSplitting extract_splitting(const Instance& inst, const IndexSet& best,
                                  const std::vector<Rational>& c) {
    std::size_t n = inst.n();
    ExchangeGraph g = build_exchange(inst, best);
    struct Arc {
        std::size_t from, to;
        Rational w;
    };
    std::size_t root = n;
    std::vector<Arc> arcs;
    for (std::size_t y : best) {
        arcs.push_back({root, y, c[y]}); // c1(y) <= c(y)
        arcs.push_back({y, root, 0});    // c1(y) >= 0
    }
    for (std::size_t x : g.x1)
        arcs.push_back({root, x, 0}); // c1(x) <= 0
    for (std::size_t x : g.x2)
        arcs.push_back({x, root, -c[x]}); // c1(x) >= c(x)
    for (std::size_t x = 0; x < n; ++x) {
        if (g.in_set[x])
            continue;
        if (g.in_span1[x])
            for (std::size_t y : g.circuit1[x])
                arcs.push_back({y, x, 0}); // c1(x) <= c1(y)
        if (g.in_span2[x])
            for (std::size_t y : g.circuit2[x])
                arcs.push_back({x, y, c[y] - c[x]}); // c2(x) <= c2(y)
    }
    std::vector<std::optional<Rational>> dist(n + 1);
    dist[root] = Rational(0);
    bool stable = false;
    for (std::size_t sweep = 0; sweep <= n + 2 && !stable; ++sweep) {
        stable = true;
        for (const Arc& a : arcs) {
            if (!dist[a.from])
                continue;
            Rational cand = *dist[a.from] + a.w;
            if (!dist[a.to] || cand < *dist[a.to]) {
                dist[a.to] = cand;
                stable = false;
            }
        }
    }
    if (!stable || *dist[root] != 0)
        throw std::logic_error("extract_splitting: constraint system infeasible");

    WeightSplitting ws;
    ws.c1.assign(n, Rational(0));
    ws.c2.assign(n, Rational(0));
    for (std::size_t v = 0; v < n; ++v) {
        // Unreachable elements are unconstrained from above; c1 = c works.
        Rational c1 = dist[v] ? *dist[v] : c[v];
        Rational c2 = c[v] - c1;
        ws.c1[v] = c1 < 0 ? Rational(0) : c1;
        ws.c2[v] = c2 < 0 ? Rational(0) : c2;
    }
    return ws;
}

} // namespace

WeightedResult weighted_exact_with_splitting(const Instance& inst) {
    if (!inst.has_weights())
        throw std::invalid_argument("weighted_exact_with_splitting: weights required");
    const std::vector<Rational>& c = *inst.weights;
    for (const Rational& w : c)
        if (w < 0)
            throw std::invalid_argument("weighted_exact_with_splitting: negative weight");

    IndexSet current;
    Rational current_weight = 0;
    for (;;) {
        ExchangeGraph g = build_exchange(inst, current);
        WeightedSearch search = cheapest_augmenting_path(inst, g, c);
        if (!search.found)
            break;
        // Successive cheapest paths have nondecreasing cost, so the first
        // weight-decreasing augmentation ends the search for the optimum.
        if (search.best.cost > 0)
            break;
        current = apply_augmentation(current, search.path, g.in_set);
        current_weight -= search.best.cost;
        if (!is_common_independent(inst, current))
            throw std::logic_error("weighted_exact: augmentation broke independence");
    }

    WeightedResult result;
    result.independent = current;
    result.weight = current_weight;
    result.splitting = extract_splitting(inst, current, c);
    if (!verify_weight_splitting(inst, result.independent, result.splitting))
        throw std::logic_error("weighted_exact: splitting conditions failed");
    return result;
}

namespace {

void brute_force_search(const Instance& inst, std::size_t next, BasisTracker& t1, BasisTracker& t2,
                        IndexSet& chosen, Rational& weight, BruteForceResult& best) {
    if (chosen.size() > best.best_size ||
        (chosen.size() == best.best_size && chosen < best.size_witness)) {
        best.best_size = chosen.size();
        best.size_witness = chosen;
    }
    if (inst.has_weights() &&
        (weight > best.best_weight || (weight == best.best_weight && chosen < best.weight_witness))) {
        best.best_weight = weight;
        best.weight_witness = chosen;
    }
    for (std::size_t e = next; e < inst.n(); ++e) {
        if (t1.in_span(inst.m1.columns[e]) || t2.in_span(inst.m2.columns[e]))
            continue;
        BasisTracker n1 = t1;
        BasisTracker n2 = t2;
        n1.try_insert(inst.m1.columns[e], e);
        n2.try_insert(inst.m2.columns[e], e);
        chosen.push_back(e);
        Rational w = weight;
        if (inst.has_weights())
            w += (*inst.weights)[e];
        brute_force_search(inst, e + 1, n1, n2, chosen, w, best);
        chosen.pop_back();
    }
}

} // namespace

BruteForceResult brute_force_intersection(const Instance& inst) {
    if (inst.n() > 20)
        throw std::invalid_argument("brute_force_intersection: n > 20");
    BruteForceResult best;
    best.size_witness = {};
    best.weight_witness = {};
    BasisTracker t1(inst.m1.rows, inst.field.p);
    BasisTracker t2(inst.m2.rows, inst.field.p);
    IndexSet chosen;
    Rational weight = 0;
    // Seed so that the first candidate comparison works from empty.
    best.best_size = 0;
    best.best_weight = 0;
    brute_force_search(inst, 0, t1, t2, chosen, weight, best);
    return best;
}

bool verify_dual_cardinality(const Instance& inst, const IndexSet& independent,
                             const CardinalityDual& dual) {
    std::size_t n = inst.n();
    std::vector<bool> covered(n, false);
    for (std::size_t e : dual.s) {
        if (e >= n)
            return false;
        covered[e] = true;
    }
    for (std::size_t e : dual.t) {
        if (e >= n)
            return false;
        covered[e] = true;
    }
    if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
        return false;
    if (!is_common_independent(inst, independent))
        return false;
    std::size_t r1 = rank(inst.m1.select_columns(dual.s), inst.field.p);
    std::size_t r2 = rank(inst.m2.select_columns(dual.t), inst.field.p);
    return r1 + r2 == independent.size();
}

Rational max_weight_independent(const SparseMatrix& m, const std::vector<Rational>& w, u64 p) {
    std::vector<std::size_t> order(m.cols);
    for (std::size_t i = 0; i < m.cols; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (w[a] != w[b])
            return w[a] > w[b];
        return a < b;
    });
    BasisTracker t(m.rows, p);
    Rational total = 0;
    for (std::size_t e : order) {
        if (w[e] <= 0)
            break;
        if (t.try_insert(m.columns[e]))
            total += w[e];
    }
    return total;
}

bool verify_weight_splitting(const Instance& inst, const IndexSet& independent,
                             const WeightSplitting& splitting) {
    if (!inst.has_weights())
        return false;
    const auto& c = *inst.weights;
    std::size_t n = inst.n();
    if (splitting.c1.size() != n || splitting.c2.size() != n)
        return false;
    Rational sum_c1 = 0, sum_c2 = 0, sum_c = 0;
    for (std::size_t e = 0; e < n; ++e) {
        if (splitting.c1[e] < 0 || splitting.c2[e] < 0)
            return false;
        if (splitting.c1[e] + splitting.c2[e] < c[e])
            return false; // (a)
    }
    for (std::size_t e : independent) {
        sum_c1 += splitting.c1[e];
        sum_c2 += splitting.c2[e];
        sum_c += c[e];
    }
    if (sum_c1 + sum_c2 != sum_c)
        return false; // (b) with eps = 0
    if (!is_common_independent(inst, independent))
        return false;
    if (max_weight_independent(inst.m1, splitting.c1, inst.field.p) != sum_c1)
        return false; // (c)
    if (max_weight_independent(inst.m2, splitting.c2, inst.field.p) != sum_c2)
        return false; // (d)
    return true;
}

IndexSet greedy_common_independent(const Instance& inst) {
    std::size_t n = inst.n();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    if (inst.has_weights()) {
        const auto& c = *inst.weights;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (c[a] != c[b])
                return c[a] > c[b];
            return a < b;
        });
    }
    BasisTracker t1(inst.m1.rows, inst.field.p);
    BasisTracker t2(inst.m2.rows, inst.field.p);
    IndexSet picked;
    for (std::size_t e : order) {
        if (t1.in_span(inst.m1.columns[e]) || t2.in_span(inst.m2.columns[e]))
            continue;
        t1.try_insert(inst.m1.columns[e], e);
        t2.try_insert(inst.m2.columns[e], e);
        picked.push_back(e);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

} // namespace lmi
