#include <algorithm>
#include <random>
#include <unordered_map>
#include <utility>

#include "pmx/error.hpp"
#include "pmx/graph.hpp"

namespace pmx {

namespace {

using Pair = std::pair<int, int>;

std::uint64_t pair_key(int a, int b, int n) {
    if (a > b) std::swap(a, b);
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(b);
}

std::vector<Pair> random_pairing(int n, int d, std::mt19937_64& rng) {
    std::vector<int> points;
    points.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (int v = 0; v < n; ++v)
        for (int k = 0; k < d; ++k) points.push_back(v);
    std::shuffle(points.begin(), points.end(), rng);
    std::vector<Pair> pairs;
    pairs.reserve(points.size() / 2);
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) pairs.emplace_back(points[i], points[i + 1]);
    return pairs;
}

bool is_simple(const std::vector<Pair>& pairs, int n) {
    std::vector<std::uint64_t> keys;
    keys.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        if (a == b) return false;
        keys.push_back(pair_key(a, b, n));
    }
    std::sort(keys.begin(), keys.end());
    return std::adjacent_find(keys.begin(), keys.end()) == keys.end();
}

// Double-edge swaps that never create a loop or a multi-edge; every accepted
// swap removes at least one defect.
void repair(std::vector<Pair>& pairs, int n, std::mt19937_64& rng, std::int64_t budget) {
    std::unordered_map<std::uint64_t, int> count;
    count.reserve(pairs.size() * 2);
    for (auto [a, b] : pairs) ++count[pair_key(a, b, n)];

    auto is_bad = [&](std::size_t i) {
        auto [a, b] = pairs[i];
        return a == b || count[pair_key(a, b, n)] > 1;
    };
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (is_bad(i)) bad.push_back(i);

    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    std::bernoulli_distribution flip(0.5);
    while (!bad.empty()) {
        std::size_t i = bad.back();
        if (!is_bad(i)) {
            bad.pop_back();
            continue;
        }
        if (budget-- <= 0) throw ConvergenceError("random_regular: edge-swap repair exceeded its budget");
        std::size_t j = pick(rng);
        if (j == i) continue;
        auto [a, b] = pairs[i];
        auto [c, e] = pairs[j];
        if (flip(rng)) std::swap(c, e);
        if (a == c || b == e) continue;
        std::uint64_t k1 = pair_key(a, c, n), k2 = pair_key(b, e, n);
        if (k1 == k2 || count[k1] > 0 || count[k2] > 0) continue;
        --count[pair_key(a, b, n)];
        --count[pair_key(c, e, n)];
        ++count[k1];
        ++count[k2];
        pairs[i] = {a, c};
        pairs[j] = {b, e};
    }
}

}  // namespace

Graph random_regular(int n, int d, std::uint64_t seed, const RandomRegularOptions& opts) {
    if (n <= 0 || d < 0) throw ParameterError("random_regular: need n > 0 and d >= 0");
    if (d >= n) throw ParameterError("random_regular: degree d=" + std::to_string(d) + " must be < n=" + std::to_string(n));
    if ((static_cast<long long>(n) * d) % 2 != 0) throw ParameterError("random_regular: n*d must be even");
    if (d == 0) return Graph(n);
    if (2 * d > n - 1) return complement(random_regular(n, n - 1 - d, seed, opts));

    std::mt19937_64 rng(seed);
    std::vector<Pair> pairs;
    for (int attempt = 0; attempt < std::max(1, opts.pairing_attempts); ++attempt) {
        pairs = random_pairing(n, d, rng);
        if (is_simple(pairs, n)) break;
    }
    if (!is_simple(pairs, n)) repair(pairs, n, rng, opts.swap_budget);

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (auto [a, b] : pairs) edges.emplace_back(a, b);
    return Graph(n, std::move(edges));
}

}  // namespace pmx
