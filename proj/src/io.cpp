#include "lmi/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace lmi {

namespace {

using OrderedJson = nlohmann::ordered_json;

struct LineReader {
    std::istream& in;
    std::size_t line_number = 0;

    bool next(std::string& out) {
        while (std::getline(in, out)) {
            ++line_number;
            return true;
        }
        return false;
    }

    std::string expect() {
        std::string s;
        if (!next(s))
            throw ParseError("unexpected end of file", line_number + 1);
        return s;
    }
};

u64 parse_u64(const std::string& tok, LineReader& r, const char* what) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(tok, &pos);
        if (pos != tok.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(std::string("malformed ") + what + " '" + tok + "'", r.line_number);
    }
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t)
        toks.push_back(t);
    return toks;
}

SparseMatrix parse_block(LineReader& r, const std::string& tag, std::size_t rows, std::size_t cols,
                         u64 p) {
    auto header = tokens_of(r.expect());
    if (header.size() != 2 || header[0] != tag)
        throw ParseError("expected '" + tag + " <nnz>'", r.line_number);
    std::size_t nnz = parse_u64(header[1], r, "entry count");
    std::vector<std::tuple<std::size_t, std::size_t, u64>> triples;
    std::vector<std::vector<std::size_t>> seen_rows(cols);
    triples.reserve(nnz);
    for (std::size_t i = 0; i < nnz; ++i) {
        auto toks = tokens_of(r.expect());
        if (toks.size() != 3)
            throw ParseError("expected '<row> <col> <value>'", r.line_number);
        u64 row = parse_u64(toks[0], r, "row index");
        u64 col = parse_u64(toks[1], r, "column index");
        u64 val = parse_u64(toks[2], r, "value");
        if (row < 1 || row > rows)
            throw ParseError("row index out of range", r.line_number);
        if (col < 1 || col > cols)
            throw ParseError("column index out of range", r.line_number);
        if (val < 1 || val >= p)
            throw ParseError("value must lie in [1, p-1]", r.line_number);
        for (std::size_t prev : seen_rows[col - 1])
            if (prev == row - 1)
                throw ParseError("duplicate entry", r.line_number);
        seen_rows[col - 1].push_back(row - 1);
        triples.emplace_back(row - 1, col - 1, val);
    }
    return SparseMatrix::from_triples(rows, cols, triples, p);
}

} // namespace

Instance parse_instance(std::istream& in) {
    LineReader r{in};
    auto magic = tokens_of(r.expect());
    if (magic.size() != 2 || magic[0] != "lmi" || magic[1] != "1")
        throw ParseError("expected header 'lmi 1'", r.line_number);
    auto p_line = tokens_of(r.expect());
    if (p_line.size() != 2 || p_line[0] != "p")
        throw ParseError("expected 'p <prime>'", r.line_number);
    u64 p = parse_u64(p_line[1], r, "prime");
    if (!is_prime(p))
        throw ParseError("modulus is not prime", r.line_number);
    auto rows_line = tokens_of(r.expect());
    if (rows_line.size() != 2 || rows_line[0] != "rows")
        throw ParseError("expected 'rows <r>'", r.line_number);
    std::size_t rows = parse_u64(rows_line[1], r, "row count");
    auto cols_line = tokens_of(r.expect());
    if (cols_line.size() != 2 || cols_line[0] != "cols")
        throw ParseError("expected 'cols <n>'", r.line_number);
    std::size_t cols = parse_u64(cols_line[1], r, "column count");
    if (rows < 1 || cols < 1)
        throw ParseError("dimensions must be positive", r.line_number);

    Instance inst;
    inst.field.p = p;
    // Default sample-set size, same rule as choose_prime: min(p, max(16, n^2)).
    u64 square = static_cast<u64>(cols) * static_cast<u64>(cols);
    inst.field.sample_set_size = std::min<u64>(p, std::max<u64>(16, square));
    inst.m1 = parse_block(r, "m1", rows, cols, p);
    inst.m2 = parse_block(r, "m2", rows, cols, p);

    std::string extra;
    if (r.next(extra)) {
        auto toks = tokens_of(extra);
        if (toks.empty() || toks[0] != "weights")
            throw ParseError("expected 'weights' or end of file", r.line_number);
        std::vector<Rational> w;
        w.reserve(cols);
        for (std::size_t i = 0; i < cols; ++i) {
            std::string line = r.expect();
            auto wt = tokens_of(line);
            if (wt.size() != 1)
                throw ParseError("expected one rational per line", r.line_number);
            Rational q;
            try {
                q = parse_rational(wt[0]);
            } catch (...) {
                throw ParseError("malformed rational '" + wt[0] + "'", r.line_number);
            }
            if (q < 0)
                throw ParseError("weights must be nonnegative", r.line_number);
            w.push_back(std::move(q));
        }
        inst.weights = std::move(w);
        if (r.next(extra) && !tokens_of(extra).empty())
            throw ParseError("trailing content", r.line_number);
    }
    return inst;
}

Instance parse_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open instance file: " + path);
    return parse_instance(in);
}

std::string serialize_instance(const Instance& inst) {
    std::ostringstream out;
    out << "lmi 1\n";
    out << "p " << inst.field.p << "\n";
    out << "rows " << inst.m1.rows << "\n";
    out << "cols " << inst.m1.cols << "\n";
    auto block = [&](const char* tag, const SparseMatrix& m) {
        out << tag << " " << m.nnz() << "\n";
        for (std::size_t j = 0; j < m.cols; ++j)
            for (const auto& e : m.columns[j])
                out << (e.row + 1) << " " << (j + 1) << " " << e.value << "\n";
    };
    block("m1", inst.m1);
    block("m2", inst.m2);
    if (inst.weights) {
        out << "weights\n";
        for (const Rational& q : *inst.weights)
            out << format_rational(q) << "\n";
    }
    return out.str();
}

void write_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << serialize_instance(inst);
}

namespace {

OrderedJson iterations_to_json(const std::vector<IterationRecord>& iterations) {
    OrderedJson arr = OrderedJson::array();
    for (const auto& it : iterations) {
        OrderedJson j;
        j["sample_size"] = it.sample_size;
        j["subsolve_objective"] = it.subsolve_objective;
        j["halved"] = it.halved;
        j["form_resamples"] = it.form_resamples;
        j["oracle_mismatches"] = it.oracle_mismatches;
        j["full_cover"] = it.full_cover;
        arr.push_back(std::move(j));
    }
    return arr;
}

std::vector<IterationRecord> iterations_from_json(const OrderedJson& arr) {
    std::vector<IterationRecord> out;
    for (const auto& j : arr) {
        IterationRecord it;
        it.sample_size = j.at("sample_size").get<std::size_t>();
        it.subsolve_objective = j.at("subsolve_objective").get<std::string>();
        it.halved = j.at("halved").get<std::size_t>();
        it.form_resamples = j.at("form_resamples").get<unsigned>();
        it.oracle_mismatches = j.at("oracle_mismatches").get<std::size_t>();
        it.full_cover = j.at("full_cover").get<bool>();
        out.push_back(std::move(it));
    }
    return out;
}

OrderedJson one_based(const IndexSet& set) {
    OrderedJson arr = OrderedJson::array();
    for (std::size_t e : set)
        arr.push_back(e + 1);
    return arr;
}

IndexSet zero_based(const OrderedJson& arr) {
    IndexSet out;
    for (const auto& v : arr) {
        std::size_t e = v.get<std::size_t>();
        if (e < 1)
            throw std::runtime_error("report: indices are 1-based");
        out.push_back(e - 1);
    }
    return out;
}

} // namespace

std::string report_to_json(const SolveReport& report) {
    OrderedJson j;
    j["command"] = report.command;
    j["seed"] = report.seed;
    if (!report.eps.empty())
        j["eps"] = report.eps;
    j["p"] = report.p;
    j["rows"] = report.rows;
    j["cols"] = report.cols;
    j["solution"] = one_based(report.solution);
    j["objective"] = report.objective;
    if (report.r_star)
        j["r_star"] = *report.r_star;
    if (report.dual_value)
        j["dual_value"] = *report.dual_value;
    if (report.dual) {
        j["dual"] = OrderedJson{{"s", one_based(report.dual->s)}, {"t", one_based(report.dual->t)}};
    }
    if (report.splitting) {
        OrderedJson c1 = OrderedJson::array(), c2 = OrderedJson::array();
        for (const auto& q : report.splitting->c1)
            c1.push_back(format_rational(q));
        for (const auto& q : report.splitting->c2)
            c2.push_back(format_rational(q));
        j["splitting"] = OrderedJson{{"c1", std::move(c1)}, {"c2", std::move(c2)}};
    }
    if (!report.stages.empty()) {
        OrderedJson stages = OrderedJson::array();
        for (const auto& st : report.stages) {
            OrderedJson s;
            s["level"] = st.level;
            s["rows1"] = st.rows1;
            s["rows2"] = st.rows2;
            s["result_size"] = st.result_size;
            s["sketch_resamples"] = st.sketch_resamples;
            s["iterations"] = iterations_to_json(st.iterations);
            stages.push_back(std::move(s));
        }
        j["trace"] = std::move(stages);
        j["sketch_resamples"] = report.sketch_resamples;
    }
    if (report.bootstrap_size)
        j["bootstrap_size"] = *report.bootstrap_size;
    if (report.sketch_k)
        j["sketch_k"] = *report.sketch_k;
    j["validated"] = report.validated;
    if (report.wall_ms)
        j["wall_ms"] = *report.wall_ms;
    return j.dump(2) + "\n";
}

SolveReport report_from_json(const std::string& text) {
    OrderedJson j = OrderedJson::parse(text);
    SolveReport report;
    report.command = j.at("command").get<std::string>();
    report.seed = j.at("seed").get<u64>();
    if (j.contains("eps"))
        report.eps = j.at("eps").get<std::string>();
    report.p = j.at("p").get<u64>();
    report.rows = j.at("rows").get<std::size_t>();
    report.cols = j.at("cols").get<std::size_t>();
    report.solution = zero_based(j.at("solution"));
    report.objective = j.at("objective").get<std::string>();
    if (j.contains("r_star"))
        report.r_star = j.at("r_star").get<std::size_t>();
    if (j.contains("dual_value"))
        report.dual_value = j.at("dual_value").get<std::string>();
    if (j.contains("dual")) {
        CardinalityDual dual;
        dual.s = zero_based(j.at("dual").at("s"));
        dual.t = zero_based(j.at("dual").at("t"));
        report.dual = std::move(dual);
    }
    if (j.contains("splitting")) {
        WeightSplitting ws;
        for (const auto& v : j.at("splitting").at("c1"))
            ws.c1.push_back(parse_rational(v.get<std::string>()));
        for (const auto& v : j.at("splitting").at("c2"))
            ws.c2.push_back(parse_rational(v.get<std::string>()));
        report.splitting = std::move(ws);
    }
    if (j.contains("trace")) {
        for (const auto& s : j.at("trace")) {
            StageRecord st;
            st.level = s.at("level").get<std::size_t>();
            st.rows1 = s.at("rows1").get<std::size_t>();
            st.rows2 = s.at("rows2").get<std::size_t>();
            st.result_size = s.at("result_size").get<std::size_t>();
            st.sketch_resamples = s.at("sketch_resamples").get<unsigned>();
            st.iterations = iterations_from_json(s.at("iterations"));
            report.stages.push_back(std::move(st));
        }
        if (j.contains("sketch_resamples"))
            report.sketch_resamples = j.at("sketch_resamples").get<unsigned>();
    }
    if (j.contains("bootstrap_size"))
        report.bootstrap_size = j.at("bootstrap_size").get<std::size_t>();
    if (j.contains("sketch_k"))
        report.sketch_k = j.at("sketch_k").get<std::size_t>();
    report.validated = j.at("validated").get<bool>();
    if (j.contains("wall_ms"))
        report.wall_ms = j.at("wall_ms").get<std::int64_t>();
    return report;
}

GraphInput parse_graph(std::istream& in) {
    GraphInput g;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto toks = tokens_of(line);
        if (toks.empty())
            continue;
        if (toks.size() != 2 && toks.size() != 3)
            throw ParseError("expected 'u v' or 'u v color'", line_number);
        Edge e;
        auto idx = [&](const std::string& t, const char* what) -> std::size_t {
            try {
                std::size_t pos = 0;
                unsigned long long v = std::stoull(t, &pos);
                if (pos != t.size() || v < 1)
                    throw std::invalid_argument("");
                return v - 1;
            } catch (...) {
                throw ParseError(std::string("malformed ") + what + " '" + t + "'", line_number);
            }
        };
        e.u = idx(toks[0], "vertex");
        e.v = idx(toks[1], "vertex");
        if (toks.size() == 3) {
            e.color = idx(toks[2], "color");
            g.has_colors = true;
        }
        g.num_vertices = std::max({g.num_vertices, e.u + 1, e.v + 1});
        g.num_colors = std::max(g.num_colors, e.color + 1);
        g.edges.push_back(e);
    }
    return g;
}

GraphInput parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open graph file: " + path);
    return parse_graph(in);
}

} // namespace lmi
