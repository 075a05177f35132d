#include <CLI11.hpp>

#include "lmi/approx.hpp"
#include "lmi/exact.hpp"
#include "lmi/generators.hpp"
#include "lmi/io.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace lmi;

struct CommonOptions {
    std::string instance_path;
    u64 seed = 1;
    std::string eps = "0.2";
    double c_sample = 4.0;
    double c_iters = 4.0;
    double c_sketch = 2.0;
    unsigned repeat = 1;
    bool json = false;
    bool oracle = false;
    bool timing = false;
    std::string out_path;
};

void add_solver_flags(CLI::App* cmd, CommonOptions& opt, bool with_eps) {
    cmd->add_option("instance", opt.instance_path, "instance file (.lmi)")->required();
    cmd->add_option("--seed", opt.seed, "random seed");
    if (with_eps) {
        cmd->add_option("--eps", opt.eps, "approximation parameter (rational or decimal)");
        cmd->add_option("--c-sample", opt.c_sample, "sample-size constant c_S");
        cmd->add_option("--c-iters", opt.c_iters, "iteration-count constant c_L");
        cmd->add_option("--c-sketch", opt.c_sketch, "sketch-width constant c_sk");
        cmd->add_option("--repeat", opt.repeat, "run this many consecutive seeds");
    }
    cmd->add_flag("--json", opt.json, "emit a JSON report");
    cmd->add_flag("--oracle", opt.oracle, "cross-check randomized steps against the Gaussian oracle");
    cmd->add_flag("--timing", opt.timing, "include wall_ms in the report");
    cmd->add_option("-o,--out", opt.out_path, "write the report to this file");
}

ApproxParams params_from(const CommonOptions& opt) {
    ApproxParams params;
    params.c_sample = opt.c_sample;
    params.c_iters = opt.c_iters;
    params.sketch.c_sketch = opt.c_sketch;
    params.oracle_check = opt.oracle;
    return params;
}

void emit_report(const SolveReport& report, const CommonOptions& opt, bool append_ok = false) {
    std::string text = report_to_json(report);
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, append_ok ? std::ios::app : std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open output file: " + opt.out_path);
        out << text;
    }
    if (opt.json || opt.out_path.empty())
        std::cout << text;
}

SolveReport base_report(const std::string& command, const Instance& inst, const CommonOptions& opt) {
    SolveReport report;
    report.command = command;
    report.seed = opt.seed;
    report.p = inst.field.p;
    report.rows = inst.m1.rows;
    report.cols = inst.n();
    return report;
}

int run_rank(const CommonOptions& opt) {
    Instance inst = parse_instance_file(opt.instance_path);
    std::size_t r1 = rank(inst.m1, inst.field.p);
    std::size_t r2 = rank(inst.m2, inst.field.p);
    if (opt.json) {
        std::cout << "{\"rank1\": " << r1 << ", \"rank2\": " << r2 << ", \"nnz1\": "
                  << inst.m1.nnz() << ", \"nnz2\": " << inst.m2.nnz() << "}\n";
    } else {
        std::cout << "rank(M1) = " << r1 << "\nrank(M2) = " << r2 << "\n";
    }
    return 0;
}

int run_span(const CommonOptions& opt, const std::string& set_arg, int matroid,
             unsigned repetitions) {
    Instance inst = parse_instance_file(opt.instance_path);
    IndexSet s;
    if (!set_arg.empty()) {
        std::stringstream ss(set_arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty())
                continue;
            std::size_t v = std::stoull(tok);
            if (v < 1 || v > inst.n())
                throw std::runtime_error("span: set index out of range: " + tok);
            s.push_back(v - 1);
        }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    const SparseMatrix& m = matroid == 2 ? inst.m2 : inst.m1;
    Rng rng(opt.seed);
    IndexSet t = compute_span(m, s, inst.field, rng, repetitions);
    auto print_set = [](const IndexSet& set) {
        std::ostringstream os;
        for (std::size_t i = 0; i < set.size(); ++i)
            os << (i ? " " : "") << set[i] + 1;
        return os.str();
    };
    bool match = true;
    IndexSet exact;
    if (opt.oracle) {
        exact = span_oracle_gaussian(m, s, inst.field.p);
        match = exact == t;
    }
    if (opt.json) {
        std::cout << "{\"span\": [" << [&] {
            std::ostringstream os;
            for (std::size_t i = 0; i < t.size(); ++i)
                os << (i ? "," : "") << t[i] + 1;
            return os.str();
        }() << "]";
        if (opt.oracle)
            std::cout << ", \"oracle_match\": " << (match ? "true" : "false");
        std::cout << "}\n";
    } else {
        std::cout << print_set(t) << "\n";
        if (opt.oracle)
            std::cout << "oracle: " << print_set(exact) << (match ? " (match)" : " (MISMATCH)")
                      << "\n";
    }
    return match ? 0 : 1;
}

int run_exact(const CommonOptions& opt) {
    Instance inst = parse_instance_file(opt.instance_path);
    auto start = std::chrono::steady_clock::now();
    CardinalityResult result = max_common_independent(inst);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    SolveReport report = base_report("exact", inst, opt);
    report.solution = result.independent;
    report.objective = std::to_string(result.independent.size());
    report.r_star = result.independent.size();
    std::size_t r1 = rank(inst.m1.select_columns(result.dual.s), inst.field.p);
    std::size_t r2 = rank(inst.m2.select_columns(result.dual.t), inst.field.p);
    report.dual_value = std::to_string(r1 + r2);
    report.dual = result.dual;
    report.validated = is_common_independent(inst, result.independent);
    if (opt.timing)
        report.wall_ms = elapsed;
    emit_report(report, opt);
    return report.validated ? 0 : 1;
}

int run_exact_weighted(const CommonOptions& opt) {
    Instance inst = parse_instance_file(opt.instance_path);
    if (!inst.has_weights())
        throw std::runtime_error("exact-weighted: instance has no weights block");
    auto start = std::chrono::steady_clock::now();
    WeightedResult result = weighted_exact_with_splitting(inst);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    SolveReport report = base_report("exact-weighted", inst, opt);
    report.solution = result.independent;
    report.objective = format_rational(result.weight);
    report.r_star = result.independent.size();
    Rational dual_value = 0;
    for (std::size_t e : result.independent)
        dual_value += result.splitting.c1[e] + result.splitting.c2[e];
    report.dual_value = format_rational(dual_value);
    report.splitting = result.splitting;
    report.validated = is_common_independent(inst, result.independent) &&
                       verify_weight_splitting(inst, result.independent, result.splitting);
    if (opt.timing)
        report.wall_ms = elapsed;
    emit_report(report, opt);
    return report.validated ? 0 : 1;
}

SolveReport pipeline_report(const std::string& command, const Instance& inst,
                            const CommonOptions& opt, u64 seed, const PipelineResult& result,
                            std::int64_t elapsed_ms) {
    SolveReport report;
    report.command = command;
    report.seed = seed;
    report.eps = format_rational(parse_rational(opt.eps));
    report.p = inst.field.p;
    report.rows = inst.m1.rows;
    report.cols = inst.n();
    report.solution = result.solution;
    report.objective = command == "approx" ? std::to_string(result.solution.size())
                                           : format_rational(result.objective);
    report.stages = result.stages;
    report.sketch_resamples = result.sketch_resamples;
    if (command == "approx-weighted") {
        report.bootstrap_size = result.bootstrap_size;
        report.sketch_k = result.sketch_k;
    }
    report.validated = result.validated;
    if (opt.timing)
        report.wall_ms = elapsed_ms;
    return report;
}

int run_approx(const CommonOptions& opt, bool weighted) {
    Instance inst = parse_instance_file(opt.instance_path);
    Rational eps = parse_rational(opt.eps);
    ApproxParams params = params_from(opt);
    bool first = true;
    for (unsigned rep = 0; rep < std::max(1u, opt.repeat); ++rep) {
        u64 seed = opt.seed + rep;
        Rng rng(seed);
        auto start = std::chrono::steady_clock::now();
        PipelineResult result = weighted ? solve_weighted(inst, eps, rng, params)
                                         : solve_cardinality(inst, eps, rng, params);
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        CommonOptions seed_opt = opt;
        seed_opt.seed = seed;
        SolveReport report = pipeline_report(weighted ? "approx-weighted" : "approx", inst,
                                             seed_opt, seed, result, elapsed);
        emit_report(report, opt, /*append_ok=*/!first);
        first = false;
    }
    return 0;
}

int run_verify(const CommonOptions& opt, const std::string& report_path) {
    Instance inst = parse_instance_file(opt.instance_path);
    std::ifstream in(report_path);
    if (!in)
        throw std::runtime_error("cannot open report file: " + report_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    SolveReport report = report_from_json(buffer.str());

    bool ok = true;
    auto check = [&](const std::string& name, bool passed) {
        std::cout << (passed ? "ok   " : "FAIL ") << name << "\n";
        ok = ok && passed;
    };
    check("solution independent in both matroids", is_common_independent(inst, report.solution));
    if (report.command == "exact" || report.command == "approx") {
        check("objective equals solution size",
              report.objective == std::to_string(report.solution.size()));
    } else {
        check("objective equals solution weight",
              inst.has_weights() &&
                  parse_rational(report.objective) == weight_of(inst, report.solution));
    }
    if (report.dual) {
        check("cardinality dual is tight",
              verify_dual_cardinality(inst, report.solution, *report.dual));
    }
    if (report.splitting) {
        check("weight splitting satisfies (a)-(d)",
              verify_weight_splitting(inst, report.solution, *report.splitting));
    }
    std::cout << (ok ? "verify: PASS" : "verify: FAIL") << "\n";
    return ok ? 0 : 1;
}

struct GenOptions {
    std::string kind;
    std::size_t rows = 8;
    std::size_t cols = 32;
    double density = 0.3;
    u64 seed = 1;
    std::optional<u64> max_weight;
    std::string graph_path;
    std::string out_path;
};

int run_gen(const GenOptions& gen) {
    Instance inst;
    if (gen.kind == "random") {
        inst = gen_random(gen.rows, gen.cols, gen.density, gen.seed, gen.max_weight);
    } else {
        GraphInput g = parse_graph_file(gen.graph_path);
        if (gen.kind == "graphic") {
            inst = gen_graphic_instance(g.edges, g.num_vertices);
        } else if (gen.kind == "bipartite") {
            std::size_t left = 0, right = 0;
            for (const Edge& e : g.edges) {
                left = std::max(left, e.u + 1);
                right = std::max(right, e.v + 1);
            }
            inst = gen_bipartite(g.edges, left, right);
        } else if (gen.kind == "rainbow") {
            if (!g.has_colors)
                throw std::runtime_error("gen rainbow: graph file has no colors");
            inst = gen_rainbow(g.edges, g.num_vertices, g.num_colors);
        } else {
            throw std::runtime_error("gen: unknown kind " + gen.kind);
        }
    }
    if (gen.out_path.empty()) {
        std::cout << serialize_instance(inst);
    } else {
        write_instance_file(inst, gen.out_path);
    }
    return 0;
}

struct BenchOptions {
    std::size_t rows = 32;
    std::size_t nnz_per_col = 4;
    std::size_t n0 = 1024;
    unsigned doublings = 3;
    u64 seed = 1;
    std::string out_path;
};

Instance bench_instance(const BenchOptions& b, std::size_t n) {
    Instance inst;
    inst.field = choose_prime(n);
    Rng rng(b.seed ^ n);
    auto fill = [&](SparseMatrix& m) {
        m = SparseMatrix(b.rows, n);
        std::vector<std::size_t> pool(b.rows);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < b.rows; ++i)
                pool[i] = i;
            for (std::size_t t = 0; t < std::min(b.nnz_per_col, b.rows); ++t) {
                std::size_t pick = t + rng.below(b.rows - t);
                std::swap(pool[t], pool[pick]);
                m.columns[j].push_back({pool[t], 1 + rng.below(inst.field.p - 1)});
            }
            std::sort(m.columns[j].begin(), m.columns[j].end(),
                      [](const SparseEntry& a, const SparseEntry& bb) { return a.row < bb.row; });
        }
    };
    fill(inst.m1);
    fill(inst.m2);
    return inst;
}

int run_bench(const BenchOptions& b) {
    std::ostringstream csv;
    csv << "n,nnz,span_ms,solve_ms\n";
    for (unsigned d = 0; d <= b.doublings; ++d) {
        std::size_t n = b.n0 << d;
        Instance inst = bench_instance(b, n);
        Rng rng(b.seed);
        IndexSet s;
        for (std::size_t i = 0; i < b.rows / 2; ++i)
            s.push_back(rng.below(n));
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        // Median of five span computations.
        std::vector<double> times;
        for (int rep = 0; rep < 5; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            volatile std::size_t sink = compute_span(inst.m1, s, inst.field, rng).size();
            (void)sink;
            times.push_back(std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count());
        }
        std::sort(times.begin(), times.end());
        double span_ms = times[2];
        // Solve timing runs with cheap constants; the spans above carry the
        // scaling check.
        ApproxParams params;
        params.c_sample = 1.0;
        params.c_iters = 1.0;
        Rng solve_rng(b.seed);
        auto t0 = std::chrono::steady_clock::now();
        PipelineResult res = solve_cardinality(inst, Rational(45, 100), solve_rng, params);
        double solve_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        (void)res;
        csv << n << "," << inst.m1.nnz() + inst.m2.nnz() << "," << span_ms << "," << solve_ms
            << "\n";
    }
    if (b.out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(b.out_path);
        if (!out)
            throw std::runtime_error("cannot open output file: " + b.out_path);
        out << csv.str();
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear matroid intersection toolkit"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string set_arg;
    int matroid = 1;
    unsigned repetitions = 1;
    std::string report_path;
    GenOptions gen;
    BenchOptions bench;

    CLI::App* rank_cmd = app.add_subcommand("rank", "ranks of both matrices");
    rank_cmd->add_option("instance", opt.instance_path)->required();
    rank_cmd->add_flag("--json", opt.json);

    CLI::App* span_cmd = app.add_subcommand("span", "randomized span of a column set");
    add_solver_flags(span_cmd, opt, false);
    span_cmd->add_option("--set", set_arg, "comma-separated 1-based element indices");
    span_cmd->add_option("--matroid", matroid, "1 or 2")->check(CLI::Range(1, 2));
    span_cmd->add_option("--repetitions", repetitions, "independent span repetitions");

    CLI::App* exact_cmd = app.add_subcommand("exact", "exact cardinality solve with dual");
    add_solver_flags(exact_cmd, opt, false);

    CLI::App* exactw_cmd = app.add_subcommand("exact-weighted", "exact weighted solve with splitting");
    add_solver_flags(exactw_cmd, opt, false);

    CLI::App* approx_cmd = app.add_subcommand("approx", "(1-eps)-approximate cardinality");
    add_solver_flags(approx_cmd, opt, true);

    CLI::App* approxw_cmd = app.add_subcommand("approx-weighted", "(1-eps)-approximate weighted");
    add_solver_flags(approxw_cmd, opt, true);

    CLI::App* verify_cmd = app.add_subcommand("verify", "re-check a report against its instance");
    verify_cmd->add_option("instance", opt.instance_path)->required();
    verify_cmd->add_option("--report", report_path, "report JSON file")->required();

    CLI::App* gen_cmd = app.add_subcommand("gen", "instance generators");
    gen_cmd->add_option("kind", gen.kind, "random | graphic | bipartite | rainbow")->required();
    gen_cmd->add_option("--rows", gen.rows);
    gen_cmd->add_option("--cols", gen.cols);
    gen_cmd->add_option("--density", gen.density);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--max-weight", [&gen](const std::vector<std::string>& vals) {
        gen.max_weight = std::stoull(vals[0]);
        return true;
    }, "attach integer weights uniform in [0, max]");
    gen_cmd->add_option("--graph", gen.graph_path, "edge-list file for graph kinds");
    gen_cmd->add_option("-o,--out", gen.out_path, "output instance file");

    CLI::App* bench_cmd = app.add_subcommand("bench", "nnz-scaling timings (CSV)");
    bench_cmd->add_option("--rows", bench.rows);
    bench_cmd->add_option("--nnz-per-col", bench.nnz_per_col);
    bench_cmd->add_option("--n0", bench.n0);
    bench_cmd->add_option("--doublings", bench.doublings);
    bench_cmd->add_option("--seed", bench.seed);
    bench_cmd->add_option("-o,--out", bench.out_path, "CSV output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (rank_cmd->parsed())
            return run_rank(opt);
        if (span_cmd->parsed())
            return run_span(opt, set_arg, matroid, repetitions);
        if (exact_cmd->parsed())
            return run_exact(opt);
        if (exactw_cmd->parsed())
            return run_exact_weighted(opt);
        if (approx_cmd->parsed())
            return run_approx(opt, false);
        if (approxw_cmd->parsed())
            return run_approx(opt, true);
        if (verify_cmd->parsed())
            return run_verify(opt, report_path);
        if (gen_cmd->parsed())
            return run_gen(gen);
        if (bench_cmd->parsed())
            return run_bench(bench);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
