#pragma once

#include "lmi/approx.hpp"
#include "lmi/exact.hpp"
#include "lmi/generators.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace lmi {

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t line_number)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + message),
          line(line_number) {}
    std::size_t line;
};

// Instance text format (indices 1-based, canonical order column-major then
// row):
//   lmi 1
//   p <prime>
//   rows <r>
//   cols <n>
//   m1 <nnz>
//   <row> <col> <value>   * nnz
//   m2 <nnz>
//   <row> <col> <value>   * nnz
//   weights               (optional; n lines of "num", "num/den")
Instance parse_instance(std::istream& in);
Instance parse_instance_file(const std::string& path);

std::string serialize_instance(const Instance& inst);
void write_instance_file(const Instance& inst, const std::string& path);

/// Everything a solver run reports. Serialized as JSON with a fixed key
/// order so that identical (binary, seed, instance) runs emit identical
/// bytes; wall_ms is only populated when timing was requested.
struct SolveReport {
    std::string command;
    u64 seed = 0;
    std::string eps; // empty for exact runs
    u64 p = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    IndexSet solution; // 0-based internally, 1-based in JSON
    std::string objective;
    std::optional<std::size_t> r_star;
    std::optional<std::string> dual_value;
    std::optional<CardinalityDual> dual;
    std::optional<WeightSplitting> splitting;
    std::vector<StageRecord> stages;
    unsigned sketch_resamples = 0;
    std::optional<std::size_t> bootstrap_size;
    std::optional<std::size_t> sketch_k;
    bool validated = false;
    std::optional<std::int64_t> wall_ms;
};

std::string report_to_json(const SolveReport& report);
SolveReport report_from_json(const std::string& text);

// Graph text format: one edge per line, "u v" or "u v color", 1-based,
// '#' starts a comment.
struct GraphInput {
    std::vector<Edge> edges;
    std::size_t num_vertices = 0;
    std::size_t num_colors = 0;
    bool has_colors = false;
};

GraphInput parse_graph(std::istream& in);
GraphInput parse_graph_file(const std::string& path);

} // namespace lmi
