#include "lmi/generators.hpp"

#include <stdexcept>

namespace lmi {

namespace {

void validate_edges(const std::vector<Edge>& edges, std::size_t num_vertices) {
    for (const Edge& e : edges) {
        if (e.u >= num_vertices || e.v >= num_vertices)
            throw std::invalid_argument("graph: vertex index out of range");
        if (e.u == e.v)
            throw std::invalid_argument("graph: self-loops not allowed");
    }
}

} // namespace

Instance gen_random(std::size_t r, std::size_t n, double density, u64 seed,
                    std::optional<u64> max_weight) {
    if (r < 1 || n < 1)
        throw std::invalid_argument("gen_random: dimensions must be positive");
    if (!(density > 0.0 && density <= 1.0))
        throw std::invalid_argument("gen_random: density must lie in (0, 1]");
    Instance inst;
    inst.field = choose_prime(n);
    Rng rng(seed);
    // Per-cell Bernoulli draw at 2^-64 granularity.
    u64 threshold = density >= 1.0 ? ~u64{0}
                                   : static_cast<u64>(density * 18446744073709551616.0);
    auto fill = [&](SparseMatrix& m) {
        m = SparseMatrix(r, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < r; ++i)
                if (rng.next_u64() <= threshold)
                    m.columns[j].push_back({i, 1 + rng.below(inst.field.p - 1)});
    };
    fill(inst.m1);
    fill(inst.m2);
    if (max_weight) {
        std::vector<Rational> w;
        w.reserve(n);
        for (std::size_t e = 0; e < n; ++e)
            w.push_back(Rational(BigInt(rng.below(*max_weight + 1))));
        inst.weights = std::move(w);
    }
    return inst;
}

SparseMatrix gen_graphic(const std::vector<Edge>& edges, std::size_t num_vertices, u64 p) {
    validate_edges(edges, num_vertices);
    SparseMatrix m(num_vertices, edges.size());
    for (std::size_t j = 0; j < edges.size(); ++j) {
        SparseColumn col = {{edges[j].u, 1}, {edges[j].v, p - 1}};
        if (col[0].row > col[1].row)
            std::swap(col[0], col[1]);
        m.columns[j] = std::move(col);
    }
    return m;
}

Instance gen_graphic_instance(const std::vector<Edge>& edges, std::size_t num_vertices) {
    Instance inst;
    inst.field = choose_prime(std::max<std::size_t>(edges.size(), 1));
    inst.m1 = gen_graphic(edges, num_vertices, inst.field.p);
    inst.m2 = inst.m1;
    return inst;
}

Instance gen_bipartite(const std::vector<Edge>& edges, std::size_t left, std::size_t right) {
    Instance inst;
    inst.field = choose_prime(std::max<std::size_t>(edges.size(), 1));
    inst.m1 = SparseMatrix(left, edges.size());
    inst.m2 = SparseMatrix(right, edges.size());
    for (std::size_t j = 0; j < edges.size(); ++j) {
        if (edges[j].u >= left || edges[j].v >= right)
            throw std::invalid_argument("gen_bipartite: endpoint out of range");
        inst.m1.columns[j].push_back({edges[j].u, 1});
        inst.m2.columns[j].push_back({edges[j].v, 1});
    }
    return inst;
}

Instance gen_rainbow(const std::vector<Edge>& edges, std::size_t num_vertices,
                     std::size_t num_colors) {
    validate_edges(edges, num_vertices);
    Instance inst;
    inst.field = choose_prime(std::max<std::size_t>(edges.size(), 1));
    inst.m1 = gen_graphic(edges, num_vertices, inst.field.p);
    inst.m2 = SparseMatrix(num_colors, edges.size());
    for (std::size_t j = 0; j < edges.size(); ++j) {
        if (edges[j].color >= num_colors)
            throw std::invalid_argument("gen_rainbow: color out of range");
        inst.m2.columns[j].push_back({edges[j].color, 1});
    }
    return inst;
}

} // namespace lmi
