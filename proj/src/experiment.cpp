#include <chrono>
#include <future>

#include "pmx/error.hpp"
#include "pmx/pipeline.hpp"

namespace pmx {

namespace {

// C_n with n = 3m (m odd) is C_3 subdivided into three paths of length m.
// Alternating literals along each path restrict PM(C_n) to PM(C_3).
Restriction cycle_contraction(int n) {
    const int m = n / 3;
    Restriction rho;
    const int branch[3] = {0, m, 2 * m};
    for (int j = 0; j < 3; ++j) {
        const int a = branch[j];
        // Named directly after the C_3 edge; substitution is simultaneous,
        // so sharing names with C_n's variables is harmless.
        const Variable y = Variable::x(j, (j + 1) % 3);
        for (int k = 0; k < m; ++k) {
            const int u = a + k, v = (a + k + 1) % n;
            rho.assignment.emplace(Variable::x(u, v), k % 2 == 0 ? Literal::pos(y) : Literal::neg(y));
        }
    }
    return rho;
}

ExperimentRow run_row(const ExperimentSpec& spec, int size, std::uint64_t seed) {
    ExperimentRow row;
    row.family = spec.family;
    row.n = size;
    row.seed = seed;
    row.d_max = spec.d_max;
    const auto start = std::chrono::steady_clock::now();
    try {
        Graph g(0);
        if (spec.family == "restricted-cycle" && (size % 3 != 0 || (size / 3) % 2 == 0)) {
            throw ParameterError("restricted-cycle needs n = 3m with m odd");
        }
        if (spec.family == "pm-cycle" || spec.family == "restricted-cycle") {
            g = named_graph("C" + std::to_string(size));
        } else if (spec.family == "pm-complete") {
            g = named_graph("K" + std::to_string(size));
        } else if (spec.family == "pm-matching") {
            if (size % 2 != 0) throw ParameterError("pm-matching needs an even size");
            std::vector<Edge> edges;
            for (int v = 0; v + 1 < size; v += 2) edges.emplace_back(v, v + 1);
            g = Graph(size, std::move(edges));
        } else {
            throw ParameterError("unknown experiment family '" + spec.family + "'");
        }
        auto reg = g.regular_degree();
        row.d = reg ? *reg : g.max_degree();
        const ConstraintSystem q = encode_pm(g);
        row.variables = static_cast<int>(q.vars.size());
        PcOptions opts;
        opts.prime = spec.prime;
        row.degree = pc_degree_search(q, spec.d_max, opts).degree;
        if (spec.family == "restricted-cycle") {
            const ConstraintSystem restricted = apply_restriction(q, cycle_contraction(size));
            row.restricted_degree = pc_degree_search(restricted, spec.d_max, opts).degree;
            if (row.degree && row.restricted_degree) row.monotone = *row.restricted_degree <= *row.degree;
        }
    } catch (const Error& e) {
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

}  // namespace

ExperimentTable run_degree_experiment(const ExperimentSpec& spec) {
    if (spec.d_max < 0) throw ParameterError("experiment: d_max must be non-negative");
    if (spec.seeds.empty()) throw ParameterError("experiment: at least one seed is required");
    ExperimentTable table;
    table.spec = spec;
    std::vector<int> sizes = spec.sizes;
    std::sort(sizes.begin(), sizes.end());
    std::vector<std::uint64_t> seeds = spec.seeds;
    std::sort(seeds.begin(), seeds.end());
    // Independent rows; merged in (n, seed) order whatever the completion order.
    std::vector<std::future<ExperimentRow>> jobs;
    for (int size : sizes)
        for (std::uint64_t seed : seeds)
            jobs.push_back(std::async(spec.parallel ? std::launch::async : std::launch::deferred,
                                      [&spec, size, seed] { return run_row(spec, size, seed); }));
    for (auto& j : jobs) table.rows.push_back(j.get());
    return table;
}

}  // namespace pmx
