#pragma once

// All graphs up to isomorphism on at most 8 vertices, built by vertex
// addition and deduplicated by a brute-force canonical form.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "pmx/graph.hpp"

namespace oracle {

inline int pair_bit(int u, int v, int n) {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
}

// Minimum edge bitmask over the relabellings that sort vertices by an
// isomorphism invariant (degree, then the sorted degrees of the neighbours).
// Only permutations inside each invariant class are tried.
inline std::uint32_t canonical_mask(std::uint32_t mask, int n) {
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (mask >> pair_bit(u, v, n) & 1U) {
                edges.emplace_back(u, v);
                adj[static_cast<std::size_t>(u)].push_back(v);
                adj[static_cast<std::size_t>(v)].push_back(u);
            }
    std::vector<std::vector<int>> key(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        auto& k = key[static_cast<std::size_t>(v)];
        k.push_back(static_cast<int>(adj[static_cast<std::size_t>(v)].size()));
        std::vector<int> nd;
        for (int w : adj[static_cast<std::size_t>(v)]) nd.push_back(static_cast<int>(adj[static_cast<std::size_t>(w)].size()));
        std::sort(nd.begin(), nd.end());
        k.insert(k.end(), nd.begin(), nd.end());
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return key[static_cast<std::size_t>(a)] < key[static_cast<std::size_t>(b)]; });
    // Class boundaries in `order`; each class is permuted independently.
    std::vector<std::pair<int, int>> classes;
    for (int i = 0; i < n;) {
        int j = i;
        while (j < n && key[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] == key[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])]) ++j;
        classes.emplace_back(i, j);
        i = j;
    }
    std::vector<int> pos(static_cast<std::size_t>(n));
    std::uint32_t best = ~0U;
    auto evaluate = [&] {
        for (int i = 0; i < n; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        std::uint32_t m = 0;
        for (auto [u, v] : edges) m |= 1U << pair_bit(pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(v)], n);
        best = std::min(best, m);
    };
    // Odometer over the classes' permutations.
    for (auto& [a, b] : classes) std::sort(order.begin() + a, order.begin() + b);
    while (true) {
        evaluate();
        std::size_t c = 0;
        for (; c < classes.size(); ++c) {
            auto [a, b] = classes[c];
            if (std::next_permutation(order.begin() + a, order.begin() + b)) break;
        }
        if (c == classes.size()) break;
    }
    return best;
}

inline pmx::Graph from_mask(std::uint32_t mask, int n) {
    std::vector<pmx::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (mask >> pair_bit(u, v, n) & 1U) edges.emplace_back(u, v);
    return pmx::Graph(n, std::move(edges));
}

// Index i of the result holds the graphs on exactly i vertices.
inline std::vector<std::vector<pmx::Graph>> graph_catalogue(int max_n) {
    std::vector<std::vector<pmx::Graph>> out(static_cast<std::size_t>(max_n + 1));
    out[0].emplace_back(0);
    std::vector<std::uint32_t> prev{0};
    for (int n = 1; n <= max_n; ++n) {
        std::set<std::uint32_t> seen;
        for (std::uint32_t pm : prev) {
            pmx::Graph g = from_mask(pm, n - 1);
            std::uint32_t base = 0;
            for (const auto& e : g.edges()) base |= 1U << pair_bit(e.u, e.v, n);
            for (std::uint32_t nb = 0; nb < (1U << (n - 1)); ++nb) {
                std::uint32_t m = base;
                for (int u = 0; u < n - 1; ++u)
                    if (nb >> u & 1U) m |= 1U << pair_bit(u, n - 1, n);
                seen.insert(canonical_mask(m, n));
            }
        }
        prev.assign(seen.begin(), seen.end());
        for (std::uint32_t m : prev) out[static_cast<std::size_t>(n)].push_back(from_mask(m, n));
    }
    return out;
}

}  // namespace oracle
