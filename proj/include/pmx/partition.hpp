#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pmx/graph.hpp"

namespace pmx {

struct PartitionParams {
    double c = 0.70;       // target fraction of neighbours inside A
    double gamma = 0.20;   // allowed deviation, as a fraction of d
    std::uint64_t seed = 1;
    std::int64_t max_resamples = 1'000'000;
    std::int64_t restart_every = 0;  // 0 means 50 * n
};

struct Partition {
    std::vector<int> A;
    std::vector<int> B;
    double c = 0.0;
    double gamma = 0.0;
    std::int64_t iterations = 0;  // resamples used, across restarts
    int restarts = 0;
    bool satisfied = false;
    std::size_t violations = 0;   // vertices outside the window (0 when satisfied)
};

// Inclusive bounds on |N(v) ∩ A|: [(c - gamma) d, (c + gamma) d].
struct DegreeWindow {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(int count) const;
};

DegreeWindow degree_window(int d, double c, double gamma);

// Coin vector X plus the neighbour counts Y_v = |N(v) ∩ A|, kept in sync
// under resampling of a neighbourhood.
class NeighbourhoodSampler {
public:
    NeighbourhoodSampler(const Graph& g, double c, std::uint64_t seed);

    void sample_all();
    // Re-toss X_u for every u in N(v).
    void resample_neighbourhood(int v);

    const std::vector<char>& coins() const { return coins_; }
    const std::vector<int>& counts() const { return counts_; }

private:
    void set_coin(int u, bool value);

    const Graph* g_;
    std::mt19937_64 rng_;
    std::bernoulli_distribution coin_;
    std::vector<char> coins_;
    std::vector<int> counts_;
};

// Moser-Tardos resampling: while some vertex (lowest index first) is outside
// the window, re-toss its neighbourhood; full restart every `restart_every`
// resamples. On budget exhaustion the best assignment seen is returned with
// satisfied = false. Throws ParameterError for c - gamma <= 0, c outside
// (0, 1], gamma <= 0, or a graph that is not d-regular.
Partition find_partition(const Graph& g, int d, const PartitionParams& params);

bool verify_partition(const Graph& g, int d, const Partition& p);

}  // namespace pmx
