#pragma once

#include "lmi/exact.hpp"

#include <optional>
#include <vector>

namespace lmi {

struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
    std::size_t color = 0;
};

// Two independent random r x n matrices with the given per-cell nonzero
// density, entries uniform nonzero; optional integer weights uniform in
// [0, max_weight]. Deterministic per seed.
Instance gen_random(std::size_t r, std::size_t n, double density, u64 seed,
                    std::optional<u64> max_weight = std::nullopt);

// Signed vertex-edge incidence matrix of a simple graph: column per edge
// with +1 at the head and p-1 at the tail.
SparseMatrix gen_graphic(const std::vector<Edge>& edges, std::size_t num_vertices, u64 p);

// Self-intersection of the graphic matroid (M1 = M2 = incidence).
Instance gen_graphic_instance(const std::vector<Edge>& edges, std::size_t num_vertices);

// Partition matroids of the two sides of a bipartite graph: M1 has a row
// per left vertex, M2 a row per right vertex, a 1 at each edge's endpoint.
Instance gen_bipartite(const std::vector<Edge>& edges, std::size_t left, std::size_t right);

// Graphic matroid paired with the color partition matroid.
Instance gen_rainbow(const std::vector<Edge>& edges, std::size_t num_vertices,
                     std::size_t num_colors);

} // namespace lmi
