#include "lmi/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lmi {

SketchOperator make_sketch_operator(std::size_t in_rows, std::size_t k, std::size_t n,
                                    const FieldConfig& cfg, Rng& rng, const SketchParams& params) {
    if (k < 1)
        throw std::invalid_argument("make_sketch_operator: k must be >= 1");
    SketchOperator op;
    op.in_rows = in_rows;
    op.seed = rng.seed();
    std::size_t target = static_cast<std::size_t>(std::ceil(params.c_sketch * static_cast<double>(k)));
    if (target >= in_rows) {
        op.out_rows = in_rows;
        op.is_identity = true;
        op.row_map.resize(in_rows);
        for (std::size_t i = 0; i < in_rows; ++i)
            op.row_map[i] = {{i, 1}};
        return op;
    }
    op.out_rows = target;
    std::size_t spread = static_cast<std::size_t>(std::log2(std::max<std::size_t>(n, 1)));
    if ((std::size_t{1} << spread) < std::max<std::size_t>(n, 1))
        ++spread;
    spread += 1;
    spread = std::min(spread, op.out_rows);
    op.row_map.resize(in_rows);
    std::vector<std::size_t> pool(op.out_rows);
    for (std::size_t i = 0; i < in_rows; ++i) {
        // Partial Fisher-Yates: `spread` distinct output rows.
        for (std::size_t j = 0; j < op.out_rows; ++j)
            pool[j] = j;
        for (std::size_t j = 0; j < spread; ++j) {
            std::size_t pick = j + rng.below(op.out_rows - j);
            std::swap(pool[j], pool[pick]);
            op.row_map[i].push_back({pool[j], rng.field_element(cfg, /*nonzero=*/true)});
        }
        std::sort(op.row_map[i].begin(), op.row_map[i].end());
    }
    return op;
}

SparseMatrix apply_sketch(const SketchOperator& op, const SparseMatrix& m, u64 p) {
    if (op.in_rows != m.rows)
        throw std::invalid_argument("apply_sketch: row dimension mismatch");
    if (op.is_identity)
        return m;
    SparseMatrix out(op.out_rows, m.cols);
    std::vector<u64> acc(op.out_rows, 0);
    std::vector<std::size_t> touched;
    for (std::size_t j = 0; j < m.cols; ++j) {
        touched.clear();
        for (const auto& e : m.columns[j]) {
            for (const auto& [out_row, coeff] : op.row_map[e.row]) {
                if (acc[out_row] == 0)
                    touched.push_back(out_row);
                acc[out_row] = add_mod(acc[out_row], mul_mod(coeff, e.value, p), p);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::size_t row : touched) {
            if (acc[row] != 0)
                out.columns[j].push_back({row, acc[row]});
            acc[row] = 0;
        }
    }
    return out;
}

SparseMatrix compress(const SparseMatrix& m, std::size_t k, const FieldConfig& cfg, Rng& rng,
                      const SketchParams& params) {
    SketchOperator op = make_sketch_operator(m.rows, k, m.cols, cfg, rng, params);
    return apply_sketch(op, m, cfg.p);
}

} // namespace lmi
