#include "pmx/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "pmx/error.hpp"
#include "pmx/matching.hpp"
#include "pmx/partition.hpp"
#include "pmx/spectral.hpp"

namespace pmx {

std::string to_string(RunStatus s) { return s == RunStatus::Success ? "success" : "stage-failure"; }

void apply_profile(PipelineConfig& cfg, const std::string& profile) {
    if (profile == "desk") {
        cfg.c = 0.70;
        cfg.gamma = 0.20;
        cfg.epsilon_check = false;
    } else if (profile == "paper") {
        cfg.c = 0.925;
        cfg.gamma = 0.025;
        cfg.epsilon_check = true;
    } else {
        throw ParameterError("unknown profile '" + profile + "' (expected desk or paper)");
    }
    cfg.profile = profile;
}

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) return s.substr(1, s.size() - 2);
    return s;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw FormatError("config key '" + key + "' expects true or false, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    std::istringstream in(v);
    T out{};
    if (!(in >> out) || !in.eof()) throw FormatError("config key '" + key + "' has a malformed number '" + v + "'");
    return out;
}

}  // namespace

PipelineConfig parse_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // '#' inside quotes is kept.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw FormatError("config line " + std::to_string(lineno) + ": expected key = value");
        entries.emplace_back(trim(line.substr(0, eq)), unquote(trim(line.substr(eq + 1))));
    }

    PipelineConfig cfg;
    for (const auto& [k, v] : entries)
        if (k == "profile") apply_profile(cfg, v);
    for (const auto& [k, v] : entries) {
        if (k == "profile") continue;
        if (k == "graph" || k == "graph_file") cfg.graph_file = v;
        else if (k == "n") cfg.n = parse_number<int>(k, v);
        else if (k == "d") cfg.d = parse_number<int>(k, v);
        else if (k == "graph_seed") cfg.graph_seed = parse_number<std::uint64_t>(k, v);
        else if (k == "t") cfg.t = parse_number<int>(k, v);
        else if (k == "pattern") cfg.pattern = v;
        else if (k == "pattern_file") cfg.pattern_file = v;
        else if (k == "c") cfg.c = parse_number<double>(k, v);
        else if (k == "gamma") cfg.gamma = parse_number<double>(k, v);
        else if (k == "epsilon_check") cfg.epsilon_check = parse_bool(k, v);
        else if (k == "min_len") cfg.min_len = parse_number<int>(k, v);
        else if (k == "max_len") cfg.max_len = parse_number<int>(k, v);
        else if (k == "seed") cfg.seed = parse_number<std::uint64_t>(k, v);
        else if (k == "max_resamples") cfg.max_resamples = parse_number<std::int64_t>(k, v);
        else if (k == "partition_attempts") cfg.partition_attempts = parse_number<int>(k, v);
        else if (k == "embed_restarts") cfg.embed_restarts = parse_number<int>(k, v);
        else if (k == "search_budget") cfg.search_budget = parse_number<long>(k, v);
        else if (k == "twin_audit") cfg.twin_audit = parse_bool(k, v);
        else throw FormatError("unknown config key '" + k + "'");
    }
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return parse_config(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

Graph resolve_pattern(const PipelineConfig& cfg) {
    if (!cfg.pattern_file.empty()) return load_edge_list(cfg.pattern_file);
    return named_graph(cfg.pattern);
}

PipelineReport run_construction(const PipelineConfig& cfg) {
    Graph g = cfg.graph_file.empty() ? random_regular(cfg.n, cfg.d, cfg.graph_seed) : load_edge_list(cfg.graph_file);
    return run_construction(g, resolve_pattern(cfg), cfg);
}

namespace {

// y variable standing for the pattern edge {u, v}: named after its branch
// vertices.
Variable branch_variable(const std::vector<int>& psi, const Edge& he) {
    return Variable::x(psi[static_cast<std::size_t>(he.u)], psi[static_cast<std::size_t>(he.v)]);
}

class StageClock {
public:
    explicit StageClock(std::map<std::string, double>& sink) : sink_(sink) {}
    void start(const std::string& stage) {
        stage_ = stage;
        running_ = true;
        begin_ = std::chrono::steady_clock::now();
    }
    // Repeated stops are harmless; a stage keeps its name for error reports.
    void stop() {
        if (!running_) return;
        running_ = false;
        sink_[stage_] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin_).count();
    }
    const std::string& stage() const { return stage_; }

private:
    std::map<std::string, double>& sink_;
    std::string stage_;
    bool running_ = false;
    std::chrono::steady_clock::time_point begin_;
};

struct StageFailure {
    std::string message;
};

std::string partition_deviation(const Partition& part) {
    return "partition did not converge (" + std::to_string(part.violations) +
           " vertices outside the window); continuing with the best assignment";
}

bool disjoint(const std::vector<Edge>& a, const std::vector<Edge>& b) {
    std::vector<Edge> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return common.empty();
}

}  // namespace

PipelineReport run_construction(const Graph& g, const Graph& h, const PipelineConfig& cfg) {
    const int n = g.num_vertices();
    auto reg = g.regular_degree();
    if (!reg) throw ParameterError("pipeline: G is not regular");
    const int d = *reg;
    if (n % 2 == 0) throw ParameterError("pipeline: G needs an odd number of vertices");
    if (cfg.t < 1 || cfg.t > d || cfg.t % 2 == 0) {
        throw ParameterError("pipeline: t = " + std::to_string(cfg.t) + " must be odd with 1 <= t <= d = " + std::to_string(d));
    }
    if (h.num_vertices() % 2 == 0) throw ParameterError("pipeline: the pattern needs an odd number of vertices");
    if (h.num_vertices() > 0 && h.max_degree() > 5) throw ParameterError("pipeline: the pattern has maximum degree above 5");
    if (cfg.min_len < 1 || cfg.min_len % 2 == 0) throw ParameterError("pipeline: min_len must be odd");

    PipelineReport r;
    r.n = n;
    r.d = d;
    r.t = cfg.t;
    r.pattern = cfg.pattern_file.empty() ? cfg.pattern : cfg.pattern_file;
    r.pattern_vertices = h.num_vertices();
    r.pattern_edges = static_cast<int>(h.num_edges());
    r.c = cfg.c;
    r.gamma = cfg.gamma;
    StageClock clock(r.timings_ms);

    try {
        clock.start("spectral");
        SpectralOptions sopts;
        sopts.method = n <= 600 ? SpectralMethod::DenseJacobi : SpectralMethod::PowerDeflate;
        auto spec = spectral_gap(g, sopts);
        r.lambda = spec.lambda;
        r.spectral_method = to_string(spec.method);
        r.epsilon = 1.0 / (100.0 * std::pow(6.0, 1.5));
        r.epsilon_ok = spec.lambda < r.epsilon * d;
        r.lambda_below_d_over_50 = spec.lambda < d / 50.0;
        clock.stop();
        if (cfg.epsilon_check && !r.epsilon_ok) {
            throw StageFailure{"lambda = " + std::to_string(spec.lambda) + " is not below epsilon d = " +
                               std::to_string(r.epsilon * d)};
        }

        // Card(G, t) and Card(G, d - t) differ by x -> 1 - x.
        r.complemented = 2 * cfg.t > d;
        r.t_effective = r.complemented ? d - cfg.t : cfg.t;

        // Partition then embed; an embedding failure re-partitions with a
        // fresh seed, up to partition_attempts times.
        SubdivisionSpec sub{h, cfg.min_len, cfg.max_len, 5};
        Embedding emb;
        Partition last_partition;
        for (int attempt = 0;; ++attempt) {
            const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(attempt) * 0x9E3779B97F4A7C15ULL;
            clock.start("partition");
            PartitionParams pp;
            pp.c = cfg.c;
            pp.gamma = cfg.gamma;
            pp.seed = seed;
            pp.max_resamples = cfg.max_resamples;
            Partition part = find_partition(g, d, pp);
            last_partition = part;
            r.partition_attempts = attempt + 1;
            r.partition_satisfied = part.satisfied;
            r.partition_iterations = part.iterations;
            r.partition_restarts = part.restarts;
            r.partition_violations = part.violations;
            r.A = part.A;
            r.B = part.B;
            r.b_at_least_n_over_20 = 20 * r.B.size() >= static_cast<std::size_t>(n);
            r.edges_in_b = induced_subgraph(g, r.B).graph.num_edges();
            clock.stop();

            clock.start("embed");
            EmbedOptions eopts;
            eopts.seed = seed;
            eopts.restarts = cfg.embed_restarts;
            eopts.search_budget = cfg.search_budget;
            std::string failure;
            if (r.B.size() < static_cast<std::size_t>(h.num_vertices())) {
                failure = "embed: |B| = " + std::to_string(r.B.size()) + " is smaller than |V(H)|";
            } else {
                try {
                    emb = embed_topological(g, r.B, sub, eopts);
                    break;
                } catch (const EmbeddingFailure& e) {
                    failure = std::string(e.what()) + " (stuck on pattern edge " + std::to_string(e.stuck_edge().u) + "-" +
                              std::to_string(e.stuck_edge().v) + ", |B| = " + std::to_string(r.B.size()) +
                              ", |V(H)| + |E(H)| (min_len - 1) = " +
                              std::to_string(h.num_vertices() + static_cast<int>(h.num_edges()) * (cfg.min_len - 1)) + ")";
                }
            }
            clock.stop();
            if (attempt + 1 < std::max(1, cfg.partition_attempts)) continue;
            if (!part.satisfied) r.deviations.push_back(partition_deviation(part));
            throw StageFailure{failure};
        }
        if (!last_partition.satisfied) r.deviations.push_back(partition_deviation(last_partition));
        if (!r.b_at_least_n_over_20) r.deviations.push_back("|B| < n/20");
        if (r.partition_attempts > 1) {
            r.deviations.push_back("embedding needed " + std::to_string(r.partition_attempts) + " partition attempts");
        }
        if (auto problem = embedding_problem(g, r.B, sub, emb)) throw StageFailure{"invalid embedding: " + *problem};
        r.psi = emb.psi;
        r.paths = emb.paths;
        r.sigma = emb.lengths();
        clock.stop();

        clock.start("matching");
        const std::vector<int> embedded = emb.vertices();
        std::vector<char> in_psi(static_cast<std::size_t>(n), 0);
        for (int v : embedded) in_psi[static_cast<std::size_t>(v)] = 1;
        std::vector<int> u;
        for (int v = 0; v < n; ++v)
            if (!in_psi[static_cast<std::size_t>(v)]) u.push_back(v);
        r.parity.n = n;
        r.parity.pattern_vertices = h.num_vertices();
        for (int s : r.sigma) r.parity.sum_sigma_minus_one += s - 1;
        r.parity.embedded_vertices = static_cast<std::int64_t>(embedded.size());
        r.parity.u_size = static_cast<std::int64_t>(u.size());
        r.parity.u_even = u.size() % 2 == 0;
        r.parity.count_matches = r.parity.embedded_vertices == h.num_vertices() + r.parity.sum_sigma_minus_one;
        if (!r.parity.count_matches) throw StageFailure{"|V(G_psi)| differs from |V(H)| + sum(sigma - 1)"};
        if (!r.parity.u_even) throw StageFailure{"U has odd size " + std::to_string(u.size())};
        auto gu = induced_subgraph(g, u);
        auto pm = perfect_matching(gu.graph);
        if (!pm) {
            throw StageFailure{"G[U] has no perfect matching (|U| = " + std::to_string(u.size()) + ", min degree " +
                               std::to_string(gu.graph.num_vertices() ? gu.graph.min_degree() : 0) + ")"};
        }
        for (const auto& e : pm->edges) {
            r.matching.emplace_back(gu.to_parent[static_cast<std::size_t>(e.u)], gu.to_parent[static_cast<std::size_t>(e.v)]);
        }
        std::sort(r.matching.begin(), r.matching.end());
        clock.stop();

        clock.start("factor");
        const std::vector<Edge> psi_edges = emb.edges();
        std::vector<Edge> removed = psi_edges;
        removed.insert(removed.end(), r.matching.begin(), r.matching.end());
        Graph g_prime = remove_edges(g, removed);
        r.min_degree_g_prime = g_prime.min_degree();
        if (r.min_degree_g_prime < d - 6) {
            throw StageFailure{"min degree of G' is " + std::to_string(r.min_degree_g_prime) + " < d - 6"};
        }
        const int f = r.t_effective - 1;
        if (f > r.min_degree_g_prime) {
            throw StageFailure{"t - 1 = " + std::to_string(f) + " exceeds the min degree of G'"};
        }
        auto factor = f_factor(g_prime, f);
        if (!factor) throw StageFailure{"G' has no " + std::to_string(f) + "-factor"};
        r.factor = factor->edges;
        clock.stop();

        clock.start("restriction");
        r.disjoint_ok = disjoint(psi_edges, r.matching) && disjoint(psi_edges, r.factor) && disjoint(r.matching, r.factor);
        if (!r.disjoint_ok) throw StageFailure{"E(G_psi), M and E(G'') are not pairwise disjoint"};
        std::map<Edge, Literal> image;
        for (const auto& e : g.edges()) image.emplace(e, Literal::zero());
        for (const auto& e : r.matching) image[e] = Literal::one();
        for (const auto& e : r.factor) image[e] = Literal::one();
        for (std::size_t i = 0; i < emb.paths.size(); ++i) {
            const Variable y = branch_variable(emb.psi, h.edges()[i]);
            const auto& p = emb.paths[i];
            // First and last edges get y (odd length), interiors alternate.
            for (std::size_t k = 0; k + 1 < p.size(); ++k) {
                image[Edge(p[k], p[k + 1])] = k % 2 == 0 ? Literal::pos(y) : Literal::neg(y);
            }
        }
        Restriction rho;
        for (auto& [e, lit] : image) {
            Literal final = r.complemented ? lit.complement() : lit;
            rho.assignment.emplace(Variable::x(e.u, e.v), final);
            r.rho.emplace(to_string(Variable::x(e.u, e.v)), to_string(final));
        }
        clock.stop();

        clock.start("equivalence");
        std::map<Variable, Variable> var_map;
        for (const auto& he : h.edges()) var_map.emplace(branch_variable(emb.psi, he), Variable::x(he.u, he.v));
        const ConstraintSystem card = encode_card(g, static_cast<long long>(cfg.t));
        const ConstraintSystem pm_h = encode_pm(h);
        r.equiv_ok = check_equiv(apply_restriction(card, rho), pm_h, var_map);

        // Each vertex equation maps to 0 = 0 or to the pattern equation of
        // its branch preimage.
        std::map<Variable, Polynomial> images;
        for (const auto& [x, lit] : rho.assignment) images.emplace(x, literal_polynomial(lit));
        std::vector<int> preimage(static_cast<std::size_t>(n), -1);
        for (std::size_t hv = 0; hv < emb.psi.size(); ++hv) preimage[static_cast<std::size_t>(emb.psi[hv])] = static_cast<int>(hv);
        std::map<int, Polynomial> pattern_equation;
        for (const auto& eq : pm_h.equations)
            if (eq.tag == EquationTag::Vertex) pattern_equation.emplace(eq.source, normalize_polynomial(eq.poly));
        r.vertex_audit_ok = true;
        for (const auto& eq : card.equations) {
            if (eq.tag != EquationTag::Vertex) continue;
            Polynomial got = normalize_polynomial(
                eq.poly.substitute([&](const Variable& v) { return images.at(v); }).rename(var_map));
            const int hv = preimage[static_cast<std::size_t>(eq.source)];
            const bool ok = hv < 0 ? got.is_zero() : got == pattern_equation.at(hv);
            if (!ok) {
                r.vertex_audit_ok = false;
                break;
            }
        }
        // Under x -> 1 - x the twin encoding matches only modulo the twin
        // links, so the syntactic twin audit is limited to direct runs.
        if (cfg.twin_audit && !r.complemented) {
            std::map<Variable, Variable> twin_map = var_map;
            for (const auto& [y, x] : var_map) twin_map.emplace(y.partner(), x.partner());
            RestrictOptions ro;
            ro.negation_as_twin = true;
            r.equiv_twins_ok = check_equiv(apply_restriction(encode_card(g, static_cast<long long>(cfg.t), true), rho, ro),
                                           encode_pm(h, true), twin_map);
        }
        clock.stop();
        if (!r.vertex_audit_ok) throw StageFailure{"a restricted vertex equation differs from its expected image"};
        if (!r.equiv_ok) throw StageFailure{"Card(G, t) restricted by rho is not equivalent to PM(H)"};
        if (r.equiv_twins_ok && !*r.equiv_twins_ok) throw StageFailure{"twin-encoded restriction is not equivalent"};
        r.status = RunStatus::Success;
    } catch (const StageFailure& f) {
        clock.stop();
        r.status = RunStatus::StageFailure;
        r.failed_stage = clock.stage();
        r.message = f.message;
    } catch (const ConvergenceError& e) {
        clock.stop();
        r.status = RunStatus::StageFailure;
        r.failed_stage = clock.stage();
        r.message = e.what();
    }
    return r;
}

Restriction report_restriction(const PipelineReport& r) {
    Restriction rho;
    for (const auto& [x, lit] : r.rho) rho.assignment.emplace(parse_variable(x), parse_literal(lit));
    return rho;
}

std::map<Variable, Variable> report_variable_map(const PipelineReport& r) {
    // Recover the pattern edges from the path endpoints.
    std::map<int, int> branch_of;
    for (std::size_t i = 0; i < r.psi.size(); ++i) branch_of.emplace(r.psi[i], static_cast<int>(i));
    std::map<Variable, Variable> out;
    for (const auto& p : r.paths) {
        if (p.size() < 2) continue;
        out.emplace(Variable::x(p.front(), p.back()), Variable::x(branch_of.at(p.front()), branch_of.at(p.back())));
    }
    return out;
}

}  // namespace pmx
