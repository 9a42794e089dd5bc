#include "pmx/partition.hpp"

#include <set>

#include "pmx/error.hpp"

namespace pmx {

namespace {
constexpr double kWindowEps = 1e-9;
}

bool DegreeWindow::contains(int count) const {
    return count >= lo - kWindowEps && count <= hi + kWindowEps;
}

DegreeWindow degree_window(int d, double c, double gamma) {
    return {(c - gamma) * d, (c + gamma) * d};
}

NeighbourhoodSampler::NeighbourhoodSampler(const Graph& g, double c, std::uint64_t seed)
    : g_(&g), rng_(seed), coin_(c),
      coins_(static_cast<std::size_t>(g.num_vertices()), 0),
      counts_(static_cast<std::size_t>(g.num_vertices()), 0) {}

void NeighbourhoodSampler::set_coin(int u, bool value) {
    auto& slot = coins_[static_cast<std::size_t>(u)];
    if (static_cast<bool>(slot) == value) return;
    slot = value ? 1 : 0;
    const int delta = value ? 1 : -1;
    for (int w : g_->neighbors(u)) counts_[static_cast<std::size_t>(w)] += delta;
}

void NeighbourhoodSampler::sample_all() {
    for (int u = 0; u < g_->num_vertices(); ++u) set_coin(u, coin_(rng_));
}

void NeighbourhoodSampler::resample_neighbourhood(int v) {
    for (int u : g_->neighbors(v)) set_coin(u, coin_(rng_));
}

namespace {

Partition make_partition(const std::vector<char>& coins, double c, double gamma) {
    Partition p;
    p.c = c;
    p.gamma = gamma;
    for (std::size_t v = 0; v < coins.size(); ++v) (coins[v] ? p.A : p.B).push_back(static_cast<int>(v));
    return p;
}

}  // namespace

Partition find_partition(const Graph& g, int d, const PartitionParams& params) {
    const double c = params.c, gamma = params.gamma;
    if (!(c > 0.0 && c <= 1.0)) throw ParameterError("find_partition: c must lie in (0, 1]");
    if (!(gamma > 0.0)) throw ParameterError("find_partition: gamma must be positive");
    if (!(c - gamma > 0.0)) throw ParameterError("find_partition: need c - gamma > 0");
    auto reg = g.regular_degree();
    if (!reg || *reg != d) throw ParameterError("find_partition: graph is not " + std::to_string(d) + "-regular");

    const int n = g.num_vertices();
    const auto window = degree_window(d, c, gamma);
    const std::int64_t restart_every = params.restart_every > 0 ? params.restart_every : 50LL * std::max(1, n);

    NeighbourhoodSampler sampler(g, c, params.seed);
    std::set<int> violated;
    auto refresh = [&](int v) {
        if (window.contains(sampler.counts()[static_cast<std::size_t>(v)])) violated.erase(v);
        else violated.insert(v);
    };
    auto restart = [&] {
        sampler.sample_all();
        violated.clear();
        for (int v = 0; v < n; ++v) refresh(v);
    };

    restart();
    std::vector<char> best = sampler.coins();
    std::size_t best_violations = violated.size();
    std::int64_t used = 0, since_restart = 0;
    int restarts = 0;

    while (!violated.empty() && used < params.max_resamples) {
        if (since_restart >= restart_every) {
            restart();
            ++restarts;
            since_restart = 0;
        } else {
            int v = *violated.begin();
            sampler.resample_neighbourhood(v);
            // Only vertices within distance 2 of v can change their count.
            for (int u : g.neighbors(v))
                for (int w : g.neighbors(u)) refresh(w);
            ++used;
            ++since_restart;
        }
        if (violated.size() < best_violations) {
            best_violations = violated.size();
            best = sampler.coins();
        }
    }

    Partition p = make_partition(violated.empty() ? sampler.coins() : best, c, gamma);
    p.iterations = used;
    p.restarts = restarts;
    p.satisfied = violated.empty();
    p.violations = violated.empty() ? 0 : best_violations;
    return p;
}

bool verify_partition(const Graph& g, int d, const Partition& p) {
    std::vector<char> in_a(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : p.A) {
        if (v < 0 || v >= g.num_vertices()) return false;
        in_a[static_cast<std::size_t>(v)] = 1;
    }
    const auto window = degree_window(d, p.c, p.gamma);
    for (int v = 0; v < g.num_vertices(); ++v) {
        int count = 0;
        for (int w : g.neighbors(v)) count += in_a[static_cast<std::size_t>(w)];
        if (!window.contains(count)) return false;
    }
    return true;
}

}  // namespace pmx
