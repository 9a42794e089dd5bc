// pmx: command-line front end for the library.
//
// Exit codes: 0 ok, 1 runtime error or negative verdict, 2 bad parameters,
// 3 pipeline stage failure.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmx/constraints.hpp"
#include "pmx/embed.hpp"
#include "pmx/error.hpp"
#include "pmx/graph.hpp"
#include "pmx/matching.hpp"
#include "pmx/partition.hpp"
#include "pmx/pipeline.hpp"
#include "pmx/refute.hpp"
#include "pmx/spectral.hpp"

using nlohmann::json;
using namespace pmx;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
}

void emit(const std::string& path, const json& j) { emit(path, j.dump(1) + "\n"); }

json edges_json(const std::vector<Edge>& edges) {
    json out = json::array();
    for (const auto& e : edges) out.push_back({e.u, e.v});
    return out;
}

// A vertex list: a bare array, or an object with a "B" (or "A") member.
std::vector<int> read_vertex_set(const std::string& path) {
    json j = read_json(path);
    if (j.is_object()) {
        if (j.contains("B")) return j.at("B").get<std::vector<int>>();
        if (j.contains("A")) return j.at("A").get<std::vector<int>>();
        throw FormatError(path + ": expected an array or an object with \"B\"");
    }
    return j.get<std::vector<int>>();
}

Graph read_graph_arg(const std::string& spec) {
    std::ifstream probe(spec);
    if (probe) return load_edge_list(spec);
    return named_graph(spec);
}

// "1", "2" or a comma list with one value per vertex.
std::vector<long long> parse_b(const std::string& spec, int n) {
    std::vector<long long> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw ParameterError("--b: '" + item + "' is not an integer");
        }
    }
    if (out.size() == 1) return std::vector<long long>(static_cast<std::size_t>(n), out.front());
    if (out.size() != static_cast<std::size_t>(n)) {
        throw ParameterError("--b: expected 1 or " + std::to_string(n) + " values, got " + std::to_string(out.size()));
    }
    return out;
}

Restriction read_restriction(const std::string& path) {
    Restriction rho;
    json j = read_json(path);
    if (!j.is_object()) throw FormatError(path + ": expected {\"x_u_v\": literal, ...}");
    for (auto it = j.begin(); it != j.end(); ++it) {
        rho.assignment.emplace(parse_variable(it.key()), parse_literal(it.value().get<std::string>()));
    }
    return rho;
}

std::map<Variable, Variable> read_var_map(const std::string& path) {
    std::map<Variable, Variable> out;
    json j = read_json(path);
    if (!j.is_object()) throw FormatError(path + ": expected {\"from\": \"to\", ...}");
    for (auto it = j.begin(); it != j.end(); ++it) {
        out.emplace(parse_variable(it.key()), parse_variable(it.value().get<std::string>()));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ParameterError("'" + item + "' is not an integer");
        }
    }
    return out;
}

int exit_code = 0;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pmx: cardinality constraints, expander embeddings and refutation degrees"};
    app.require_subcommand(1);

    std::string in, out = "-";

    // graph
    auto* graph = app.add_subcommand("graph", "generate and inspect regular graphs");
    graph->require_subcommand(1);
    int gen_n = 0, gen_d = 0;
    std::uint64_t gen_seed = 1;
    auto* gen = graph->add_subcommand("gen", "random d-regular graph as an edge list");
    gen->add_option("--n", gen_n, "vertices")->required();
    gen->add_option("--d", gen_d, "degree")->required();
    gen->add_option("--seed", gen_seed, "seed");
    gen->add_option("--out", out, "output file");
    gen->callback([&] {
        std::ostringstream buf;
        write_edge_list(buf, random_regular(gen_n, gen_d, gen_seed));
        emit(out, buf.str());
    });

    bool dense = false, iterative = false;
    auto* spectral = graph->add_subcommand("spectral", "second largest absolute eigenvalue");
    spectral->add_option("--in", in, "edge list or named graph")->required();
    spectral->add_flag("--dense", dense, "force the Jacobi solver");
    spectral->add_flag("--iterative", iterative, "force power iteration with deflation");
    spectral->add_option("--out", out, "output file");
    spectral->callback([&] {
        Graph g = read_graph_arg(in);
        SpectralOptions opts;
        opts.method = dense ? SpectralMethod::DenseJacobi
                      : iterative ? SpectralMethod::PowerDeflate
                      : g.num_vertices() <= 2000 ? SpectralMethod::DenseJacobi
                                                 : SpectralMethod::PowerDeflate;
        auto r = spectral_gap(g, opts);
        json j{{"n", g.num_vertices()}, {"lambda", r.lambda}, {"method", to_string(r.method)}, {"iterations", r.iterations}};
        j["degree"] = r.degree ? json(*r.degree) : json(nullptr);
        if (!r.eigenvalues.empty()) j["eigenvalues"] = r.eigenvalues;
        emit(out, j);
    });

    int samples = 1000;
    std::uint64_t mix_seed = 1;
    auto* mixing = graph->add_subcommand("mixing", "check the mixing lemma on random vertex-set pairs");
    mixing->add_option("--in", in, "edge list or named graph")->required();
    mixing->add_option("--samples", samples, "number of (S, T) pairs");
    mixing->add_option("--seed", mix_seed, "seed");
    mixing->add_option("--out", out, "output file");
    mixing->callback([&] {
        Graph g = read_graph_arg(in);
        auto d = g.regular_degree();
        if (!d) throw ParameterError("mixing: the graph is not regular");
        const double lambda = spectral_gap(g).lambda;
        std::mt19937_64 rng(mix_seed);
        std::bernoulli_distribution coin(0.5);
        int violations = 0;
        double worst = 0;
        for (int k = 0; k < samples; ++k) {
            std::vector<int> s, t;
            for (int v = 0; v < g.num_vertices(); ++v) {
                if (coin(rng)) s.push_back(v);
                if (coin(rng)) t.push_back(v);
            }
            auto m = mixing_check(g, *d, lambda, s, t);
            if (!m.holds) ++violations;
            if (m.rhs > 0) worst = std::max(worst, m.lhs / m.rhs);
        }
        emit(out, json{{"lambda", lambda}, {"samples", samples}, {"violations", violations}, {"worst_ratio", worst}});
        if (violations > 0) exit_code = 1;
    });

    // partition
    PartitionParams pp;
    auto* partition = app.add_subcommand("partition", "split V into A and B by neighbourhood resampling");
    partition->add_option("--in", in, "edge list")->required();
    partition->add_option("--c", pp.c, "target fraction of neighbours in A");
    partition->add_option("--gamma", pp.gamma, "allowed deviation");
    partition->add_option("--seed", pp.seed, "seed");
    partition->add_option("--max-rounds", pp.max_resamples, "resample budget");
    partition->add_option("--out", out, "output file");
    partition->callback([&] {
        Graph g = read_graph_arg(in);
        auto d = g.regular_degree();
        if (!d) throw ParameterError("partition: the graph is not regular");
        Partition p = find_partition(g, *d, pp);
        emit(out, json{{"A", p.A},
                       {"B", p.B},
                       {"iterations", p.iterations},
                       {"restarts", p.restarts},
                       {"satisfied", p.satisfied},
                       {"violations", p.violations},
                       {"verified", verify_partition(g, *d, p)}});
        if (!p.satisfied) exit_code = 1;
    });

    // embed
    std::string pattern, b_file;
    SubdivisionSpec sub;
    EmbedOptions eopts;
    auto* embed = app.add_subcommand("embed", "odd subdivision of a pattern inside G[B]");
    embed->add_option("--in", in, "edge list")->required();
    embed->add_option("--pattern", pattern, "pattern edge list or named graph")->required();
    embed->add_option("--B", b_file, "JSON vertex set (array, or partition output)")->required();
    embed->add_option("--min-len", sub.min_len, "minimum odd path length");
    embed->add_option("--max-len", sub.max_len, "maximum path length (0: |B|)");
    embed->add_option("--seed", eopts.seed, "seed");
    embed->add_option("--restarts", eopts.restarts, "placement restarts");
    embed->add_option("--out", out, "output file");
    embed->callback([&] {
        Graph g = read_graph_arg(in);
        sub.pattern = read_graph_arg(pattern);
        const auto b = read_vertex_set(b_file);
        Embedding e = embed_topological(g, b, sub, eopts);
        emit(out, json{{"psi", e.psi}, {"paths", e.paths}, {"sigma", e.lengths()}, {"verified", verify_embedding(g, b, sub, e)}});
    });

    // match
    auto* match = app.add_subcommand("match", "matchings, f-factors and Tutte-type checks");
    match->require_subcommand(1);
    auto* pm = match->add_subcommand("pm", "perfect matching by the blossom algorithm");
    pm->add_option("--in", in, "edge list or named graph")->required();
    pm->add_option("--out", out, "output file");
    pm->callback([&] {
        Graph g = read_graph_arg(in);
        Matching m = maximum_matching(g);
        emit(out, json{{"perfect", m.is_perfect_for(g)}, {"size", m.size()}, {"edges", edges_json(m.edges)}});
        if (!m.is_perfect_for(g)) exit_code = 1;
    });

    int f = 0;
    auto* factor = match->add_subcommand("factor", "spanning f-regular subgraph");
    factor->add_option("--in", in, "edge list or named graph")->required();
    factor->add_option("--f", f, "even degree")->required();
    factor->add_option("--out", out, "output file");
    factor->callback([&] {
        Graph g = read_graph_arg(in);
        auto r = f_factor(g, f);
        json j{{"f", f}, {"found", r.has_value()}};
        j["edges"] = r ? edges_json(r->edges) : json::array();
        emit(out, j);
        if (!r) exit_code = 1;
    });

    std::optional<int> tutte_f;
    bool classical = false;
    auto* tutte = match->add_subcommand("tutte", "exhaustive Tutte condition (all components by default)");
    tutte->add_option("--in", in, "edge list or named graph")->required();
    tutte->add_option("--f", tutte_f, "check the f-factor condition instead");
    tutte->add_flag("--classical", classical, "count odd components only (or parity-qualified ones with --f)");
    tutte->add_option("--out", out, "output file");
    tutte->callback([&] {
        Graph g = read_graph_arg(in);
        json j;
        if (tutte_f) {
            auto r = tutte_generalized_check(g, *tutte_f, classical ? ComponentCount::ParityQualified : ComponentCount::All);
            j = {{"ok", r.ok}, {"f", *tutte_f}};
            j["witness"] = r.witness ? json{{"S", r.witness->S}, {"T", r.witness->T}} : json(nullptr);
            if (!r.ok) exit_code = 1;
        } else {
            auto r = classical ? tutte_odd_components_check(g) : tutte_all_components_check(g);
            j = {{"ok", r.ok}};
            j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
            if (!r.ok) exit_code = 1;
        }
        emit(out, j);
    });

    // cs
    auto* cs = app.add_subcommand("cs", "constraint systems");
    cs->require_subcommand(1);
    std::string b_spec = "1";
    bool twins = false;
    auto* encode = cs->add_subcommand("encode", "Card(G, b); b = 1 gives PM(G)");
    encode->add_option("--graph", in, "edge list or named graph")->required();
    encode->add_option("--b", b_spec, "one value, or a comma list per vertex");
    encode->add_flag("--twins", twins, "add complement variables");
    encode->add_option("--out", out, "output file");
    encode->callback([&] {
        Graph g = read_graph_arg(in);
        std::ostringstream buf;
        write_constraints(buf, encode_card(g, parse_b(b_spec, g.num_vertices()), twins));
        emit(out, buf.str());
    });

    std::string rho_file;
    bool as_twin = false;
    auto* restrict_cmd = cs->add_subcommand("restrict", "apply an affine restriction");
    restrict_cmd->add_option("--in", in, "constraint file")->required();
    restrict_cmd->add_option("--rho", rho_file, "JSON {\"x_u_v\": \"0\" | \"1\" | \"y\" | \"~y\"}")->required();
    restrict_cmd->add_flag("--negation-as-twin", as_twin, "map ~y to the twin variable");
    restrict_cmd->add_option("--out", out, "output file");
    restrict_cmd->callback([&] {
        RestrictOptions ro;
        ro.negation_as_twin = as_twin;
        std::ostringstream buf;
        write_constraints(buf, apply_restriction(load_constraints(in), read_restriction(rho_file), ro));
        emit(out, buf.str());
    });

    std::string cs_a, cs_b, map_file;
    auto* equiv = cs->add_subcommand("equiv", "set equality after normalization and renaming");
    equiv->add_option("--a", cs_a, "first constraint file")->required();
    equiv->add_option("--b", cs_b, "second constraint file")->required();
    equiv->add_option("--map", map_file, "JSON variable map from a to b");
    equiv->callback([&] {
        const auto a = load_constraints(cs_a), b = load_constraints(cs_b);
        const bool same = map_file.empty() ? check_equiv(a, b) : check_equiv(a, b, read_var_map(map_file));
        std::cout << json{{"equivalent", same}}.dump() << "\n";
        if (!same) exit_code = 1;
    });

    // refute
    auto* refute = app.add_subcommand("refute", "refutation degree and certificates");
    refute->require_subcommand(1);
    PcOptions pco;
    int d_max = 6;
    auto* pc = refute->add_subcommand("pc", "minimal PC refutation degree over F_p");
    pc->add_option("--in", in, "constraint file")->required();
    pc->add_option("--p", pco.prime, "prime field size");
    pc->add_option("--dmax", d_max, "largest degree tried");
    pc->add_flag("--allow-char2", pco.allow_char2, "permit p = 2");
    pc->add_flag("--eliminate-twins", pco.eliminate_twins, "substitute twins by 1 - x");
    pc->add_option("--out", out, "output file");
    pc->callback([&] {
        auto r = pc_degree_search(load_constraints(in), d_max, pco);
        json runs = json::array();
        for (const auto& run : r.runs) runs.push_back({{"degree", run.degree}, {"refuted", run.refuted}, {"dimension", run.dimension}});
        json j{{"p", pco.prime}, {"d_max", r.d_max}, {"runs", runs}};
        j["degree"] = r.degree ? json(*r.degree) : json(nullptr);
        emit(out, j);
    });

    std::string cert_file;
    auto* verify = refute->add_subcommand("sos-verify", "exact check of an SoS certificate");
    verify->add_option("--in", in, "constraint file")->required();
    verify->add_option("--cert", cert_file, "certificate JSON")->required();
    verify->callback([&] {
        auto v = sos_verify(load_constraints(in), load_certificate(cert_file));
        std::cout << json{{"valid", v.valid}, {"degree", v.degree}}.dump() << "\n";
        if (!v.valid) exit_code = 1;
    });

    int pe_d = 2;
    PeOptions peo;
    auto* pe = refute->add_subcommand("sos-pe", "search for a pseudo-expectation (never claims infeasibility)");
    pe->add_option("--in", in, "constraint file")->required();
    pe->add_option("--d", pe_d, "even degree");
    pe->add_option("--iters", peo.iterations, "projection rounds");
    pe->add_option("--tol", peo.tol, "feasibility tolerance");
    pe->add_option("--out", out, "output file");
    pe->callback([&] {
        auto r = sos_pe_search(load_constraints(in), pe_d, peo);
        json j{{"status", r.status}, {"note", r.note}, {"iterations", r.iterations}};
        if (r.pe) {
            json moments = json::object();
            for (std::size_t i = 0; i < r.pe->monomials.size(); ++i) {
                std::string name;
                for (const auto& v : r.pe->monomials[i]) name += (name.empty() ? "" : ".") + to_string(v);
                moments[name.empty() ? "1" : name] = r.pe->values[i];
            }
            j["moments"] = moments;
            j["affine_residual"] = r.pe->affine_residual;
            j["psd_residual"] = r.pe->psd_residual;
        }
        emit(out, j);
    });

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "the full reduction and degree experiments");
    pipeline->require_subcommand(1);
    std::string config_file, format = "json";
    bool timings = false;
    auto* run = pipeline->add_subcommand("run", "Card(G, t) restricted onto PM(H)");
    run->add_option("--config", config_file, "key = value configuration")->required();
    run->add_option("--out", out, "report file");
    run->add_option("--format", format, "json, csv or text");
    run->add_flag("--timings", timings, "include stage timings (json)");
    run->callback([&] {
        auto r = run_construction(load_config(config_file));
        const ExportFormat fmt = parse_format(format);
        if (out.empty() || out == "-") {
            std::cout << (fmt == ExportFormat::Json ? report_to_json(r, timings)
                          : fmt == ExportFormat::Csv ? report_to_csv(r)
                                                     : report_to_text(r));
        } else {
            export_report(r, out, fmt, timings);
        }
        if (r.status == RunStatus::StageFailure) {
            std::cerr << "stage '" << r.failed_stage << "' failed: " << r.message << "\n";
            exit_code = 3;
        }
    });

    ExperimentSpec es;
    std::string sizes, seeds = "1";
    auto* experiment = pipeline->add_subcommand("experiment", "minimal PC degree over a family of PM instances");
    experiment->add_option("--family", es.family, "pm-cycle, pm-complete, pm-matching or restricted-cycle");
    experiment->add_option("--sizes", sizes, "comma list")->required();
    experiment->add_option("--p", es.prime, "prime field size");
    experiment->add_option("--dmax", es.d_max, "largest degree tried");
    experiment->add_option("--seeds", seeds, "comma list");
    experiment->add_flag("!--serial", es.parallel, "run rows one at a time");
    experiment->add_option("--out", out, "table file");
    experiment->add_option("--format", format, "json, csv or text (default from the extension)");
    experiment->callback([&] {
        es.sizes = parse_int_list(sizes);
        es.seeds.clear();
        for (int s : parse_int_list(seeds)) es.seeds.push_back(static_cast<std::uint64_t>(s));
        auto table = run_degree_experiment(es);
        std::string fmt_name = format;
        if (!experiment->count("--format") && out.size() > 4 && out.substr(out.size() - 4) == ".csv") fmt_name = "csv";
        const ExportFormat fmt = parse_format(fmt_name);
        if (out.empty() || out == "-") {
            std::cout << (fmt == ExportFormat::Json ? table_to_json(table)
                          : fmt == ExportFormat::Csv ? table_to_csv(table)
                                                     : table_to_text(table));
        } else {
            export_table(table, out, fmt);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
