#include "pmx/embed.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace pmx {

std::vector<int> Embedding::lengths() const {
    std::vector<int> out;
    out.reserve(paths.size());
    for (const auto& p : paths) out.push_back(static_cast<int>(p.size()) - 1);
    return out;
}

std::size_t Embedding::vertex_count() const {
    std::size_t total = psi.size();
    for (const auto& p : paths) total += p.size() - 2;
    return total;
}

std::vector<int> Embedding::vertices() const {
    std::set<int> all(psi.begin(), psi.end());
    for (const auto& p : paths) all.insert(p.begin(), p.end());
    return {all.begin(), all.end()};
}

std::vector<Edge> Embedding::edges() const {
    std::vector<Edge> out;
    for (const auto& p : paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) out.emplace_back(p[i], p[i + 1]);
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Parity-aware router inside G[B]. Length states: c = len below min_len,
// and past it c alternates between min_len (odd lengths) and min_len - 1
// (even lengths), which have identical futures.
class Router {
public:
    Router(const Graph& g, const std::vector<char>& in_b, int min_len, int max_len, long budget)
        : g_(g), in_b_(in_b), min_len_(min_len), max_len_(max_len), budget_(budget),
          blocked_(static_cast<std::size_t>(g.num_vertices()), 0) {}

    void block(int v) { blocked_[static_cast<std::size_t>(v)] = 1; }
    void unblock(int v) { blocked_[static_cast<std::size_t>(v)] = 0; }

    std::optional<std::vector<int>> route(int s, int t) {
        if (auto walk = shortest_odd_walk(s, t)) {
            std::vector<int> sorted = *walk;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return walk;
        }
        return simple_path_search(s, t);
    }

private:
    bool usable(int w, int s) const {
        return in_b_[static_cast<std::size_t>(w)] && !blocked_[static_cast<std::size_t>(w)] && w != s;
    }
    int next_state(int c) const { return c < min_len_ ? c + 1 : min_len_ - 1; }

    std::optional<std::vector<int>> shortest_odd_walk(int s, int t) {
        const int states = min_len_ + 1;
        const std::size_t total = static_cast<std::size_t>(g_.num_vertices()) * static_cast<std::size_t>(states);
        std::vector<int> parent(total, -2), depth(total, 0);
        auto id = [states](int v, int c) { return static_cast<std::size_t>(v) * static_cast<std::size_t>(states) + static_cast<std::size_t>(c); };
        std::queue<std::pair<int, int>> q;
        parent[id(s, 0)] = -1;
        q.emplace(s, 0);
        while (!q.empty()) {
            auto [v, c] = q.front();
            q.pop();
            if (v == t) continue;
            const int dv = depth[id(v, c)];
            if (dv + 1 > max_len_) continue;
            const int nc = next_state(c);
            for (int w : g_.neighbors(v)) {
                if (!usable(w, s)) continue;
                if (w == t && nc != min_len_) continue;
                const std::size_t k = id(w, nc);
                if (parent[k] != -2) continue;
                parent[k] = static_cast<int>(id(v, c));
                depth[k] = dv + 1;
                if (w == t) {
                    std::vector<int> walk;
                    for (long cur = static_cast<long>(k); cur != -1; cur = parent[static_cast<std::size_t>(cur)]) {
                        walk.push_back(static_cast<int>(cur / states));
                    }
                    std::reverse(walk.begin(), walk.end());
                    return walk;
                }
                q.emplace(w, nc);
            }
        }
        return std::nullopt;
    }

    // Depth-first search for a simple path of each odd length in turn,
    // pruned by plain distance to t.
    std::optional<std::vector<int>> simple_path_search(int s, int t) {
        const auto n = static_cast<std::size_t>(g_.num_vertices());
        std::vector<int> dist(n, -1);
        std::queue<int> q;
        dist[static_cast<std::size_t>(t)] = 0;
        q.push(t);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : g_.neighbors(v)) {
                if (dist[static_cast<std::size_t>(w)] >= 0 || !(usable(w, -1) || w == s)) continue;
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                if (w != s) q.push(w);
            }
        }
        if (dist[static_cast<std::size_t>(s)] < 0) return std::nullopt;

        long nodes = 0;
        std::vector<char> on_path(n, 0);
        std::vector<int> path{s};
        on_path[static_cast<std::size_t>(s)] = 1;
        std::function<bool(int, int)> dfs = [&](int v, int remaining) -> bool {
            if (++nodes > budget_) return false;
            if (remaining == 0) return v == t;
            std::vector<int> next;
            for (int w : g_.neighbors(v)) {
                const int dw = dist[static_cast<std::size_t>(w)];
                if (dw < 0 || dw > remaining - 1 || on_path[static_cast<std::size_t>(w)]) continue;
                if (w == t ? remaining != 1 : !usable(w, s)) continue;
                next.push_back(w);
            }
            std::stable_sort(next.begin(), next.end(), [&](int a, int b) {
                return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
            });
            for (int w : next) {
                on_path[static_cast<std::size_t>(w)] = 1;
                path.push_back(w);
                if (dfs(w, remaining - 1)) return true;
                path.pop_back();
                on_path[static_cast<std::size_t>(w)] = 0;
                if (nodes > budget_) return false;
            }
            return false;
        };
        int first = std::max(min_len_, dist[static_cast<std::size_t>(s)]);
        if (first % 2 == 0) ++first;
        for (int len = first; len <= max_len_ && nodes <= budget_; len += 2) {
            if (dfs(s, len)) return path;
        }
        return std::nullopt;
    }

    const Graph& g_;
    const std::vector<char>& in_b_;
    int min_len_, max_len_;
    long budget_;
    std::vector<char> blocked_;
};

// Greedy placement with pairwise G[B]-distance >= spacing.
std::optional<std::vector<int>> place_branches(const Graph& g, const std::vector<char>& in_b, const std::vector<int>& b,
                                               const Graph& h, int spacing, std::mt19937_64& rng) {
    const auto n = static_cast<std::size_t>(g.num_vertices());
    std::vector<int> deg_b(n, 0);
    for (int v : b)
        for (int w : g.neighbors(v))
            if (in_b[static_cast<std::size_t>(w)]) ++deg_b[static_cast<std::size_t>(v)];

    // Branch vertices all go into the largest component of G[B].
    std::vector<int> comp(n, -1), comp_size;
    for (int v : b) {
        if (comp[static_cast<std::size_t>(v)] >= 0) continue;
        const int id = static_cast<int>(comp_size.size());
        comp_size.push_back(0);
        std::queue<int> q;
        comp[static_cast<std::size_t>(v)] = id;
        q.push(v);
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            ++comp_size.back();
            for (int w : g.neighbors(x)) {
                if (!in_b[static_cast<std::size_t>(w)] || comp[static_cast<std::size_t>(w)] >= 0) continue;
                comp[static_cast<std::size_t>(w)] = id;
                q.push(w);
            }
        }
    }
    if (comp_size.empty()) return std::nullopt;
    const int largest = static_cast<int>(std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
    // Peel the component down to its 2-core: hanging trees are dead ends
    // for paths, so they neither host branch vertices nor count toward deg_b.
    std::vector<int> core_deg(n, 0);
    std::queue<int> peel;
    for (int v : b) {
        if (comp[static_cast<std::size_t>(v)] != largest) continue;
        core_deg[static_cast<std::size_t>(v)] = deg_b[static_cast<std::size_t>(v)];
        if (core_deg[static_cast<std::size_t>(v)] < 2) peel.push(v);
    }
    std::vector<char> peeled(n, 0);
    while (!peel.empty()) {
        int v = peel.front();
        peel.pop();
        if (peeled[static_cast<std::size_t>(v)]) continue;
        peeled[static_cast<std::size_t>(v)] = 1;
        for (int w : g.neighbors(v)) {
            if (comp[static_cast<std::size_t>(w)] != largest || peeled[static_cast<std::size_t>(w)]) continue;
            if (--core_deg[static_cast<std::size_t>(w)] < 2) peel.push(w);
        }
    }
    std::vector<int> candidates;
    for (int v : b) {
        if (comp[static_cast<std::size_t>(v)] != largest || peeled[static_cast<std::size_t>(v)]) continue;
        deg_b[static_cast<std::size_t>(v)] = core_deg[static_cast<std::size_t>(v)];
        candidates.push_back(v);
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::stable_sort(candidates.begin(), candidates.end(), [&](int x, int y) {
        return deg_b[static_cast<std::size_t>(x)] > deg_b[static_cast<std::size_t>(y)];
    });
    std::vector<int> order(static_cast<std::size_t>(h.num_vertices()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return h.degree(x) > h.degree(y); });

    std::vector<int> psi(static_cast<std::size_t>(h.num_vertices()), -1);
    std::vector<char> forbidden(n, 0);
    for (int hv : order) {
        int chosen = -1;
        for (int v : candidates) {
            if (!forbidden[static_cast<std::size_t>(v)] && deg_b[static_cast<std::size_t>(v)] >= h.degree(hv)) {
                chosen = v;
                break;
            }
        }
        if (chosen < 0) return std::nullopt;
        psi[static_cast<std::size_t>(hv)] = chosen;
        // Forbid the G[B]-ball of radius spacing - 1.
        std::vector<int> dist(n, -1);
        std::queue<int> q;
        dist[static_cast<std::size_t>(chosen)] = 0;
        q.push(chosen);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            forbidden[static_cast<std::size_t>(v)] = 1;
            if (dist[static_cast<std::size_t>(v)] + 1 >= spacing) continue;
            for (int w : g.neighbors(v)) {
                if (!in_b[static_cast<std::size_t>(w)] || dist[static_cast<std::size_t>(w)] >= 0) continue;
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                q.push(w);
            }
        }
    }
    return psi;
}

}  // namespace

Embedding embed_topological(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec,
                            const EmbedOptions& opts) {
    const Graph& h = spec.pattern;
    if (spec.min_len < 1 || spec.min_len % 2 == 0) throw ParameterError("embed: min_len must be odd and at least 1");
    if (h.num_vertices() > 0 && h.max_degree() > spec.max_degree) {
        throw ParameterError("embed: pattern maximum degree " + std::to_string(h.max_degree()) + " exceeds the bound " +
                             std::to_string(spec.max_degree));
    }
    std::vector<char> in_b(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : b) {
        if (v < 0 || v >= g.num_vertices()) throw ParameterError("embed: vertex " + std::to_string(v) + " of B is out of range");
        in_b[static_cast<std::size_t>(v)] = 1;
    }
    const int size_b = static_cast<int>(std::count(in_b.begin(), in_b.end(), 1));
    if (h.num_vertices() > size_b) throw ParameterError("embed: pattern has more vertices than B");
    const int max_len = spec.max_len > 0 ? spec.max_len : std::max(size_b, spec.min_len);
    if (max_len < spec.min_len) throw ParameterError("embed: max_len is below min_len");
    std::vector<int> b_sorted(b);
    std::sort(b_sorted.begin(), b_sorted.end());
    b_sorted.erase(std::unique(b_sorted.begin(), b_sorted.end()), b_sorted.end());

    Edge stuck = h.num_edges() > 0 ? h.edges().front() : Edge(0, 1);
    std::string reason = "no branch placement";
    for (int attempt = 0; attempt < std::max(1, opts.restarts); ++attempt) {
        std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(attempt));
        std::optional<std::vector<int>> psi;
        // Later restarts start from tighter spacing: in small or dense hosts
        // a spread-out placement can leave too little room for the paths.
        const int restarts = std::max(1, opts.restarts);
        const int first = std::max(1, opts.spacing - attempt * std::max(1, opts.spacing) / restarts);
        for (int spacing = first; spacing >= 1 && !psi; --spacing) {
            psi = place_branches(g, in_b, b_sorted, h, spacing, rng);
        }
        if (!psi) continue;

        std::vector<std::size_t> order(h.num_edges());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        auto weight = [&](std::size_t i) { return h.degree(h.edges()[i].u) + h.degree(h.edges()[i].v); };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return weight(x) > weight(y); });

        Router router(g, in_b, spec.min_len, max_len, opts.search_budget);
        for (int v : *psi) router.block(v);
        Embedding out;
        out.psi = *psi;
        out.paths.assign(h.num_edges(), {});
        auto route_edge = [&](std::size_t i) {
            const Edge& e = h.edges()[i];
            const int s = (*psi)[static_cast<std::size_t>(e.u)], t = (*psi)[static_cast<std::size_t>(e.v)];
            router.unblock(t);
            auto path = router.route(s, t);
            router.block(t);
            return path;
        };
        auto set_path = [&](std::size_t i, std::vector<int> p, bool on) {
            for (std::size_t k = 1; k + 1 < p.size(); ++k) on ? router.block(p[k]) : router.unblock(p[k]);
            out.paths[i] = on ? std::move(p) : std::vector<int>{};
        };

        // Rip-up and reroute: an edge with no free path evicts a routed path
        // whose removal frees one; the evicted edge goes back on the queue.
        std::deque<std::size_t> pending(order.begin(), order.end());
        long rips = 0;
        const long max_rips = 8 * static_cast<long>(h.num_edges()) + 8;
        bool ok = true;
        while (!pending.empty()) {
            const std::size_t i = pending.front();
            pending.pop_front();
            if (auto path = route_edge(i)) {
                set_path(i, std::move(*path), true);
                continue;
            }
            std::vector<std::size_t> routed;
            for (std::size_t j = 0; j < h.num_edges(); ++j)
                if (!out.paths[j].empty()) routed.push_back(j);
            std::shuffle(routed.begin(), routed.end(), rng);
            bool freed = false;
            for (std::size_t j : routed) {
                if (rips >= max_rips) break;
                std::vector<int> old = out.paths[j];
                set_path(j, old, false);
                if (auto path = route_edge(i)) {
                    set_path(i, std::move(*path), true);
                    pending.push_back(j);
                    ++rips;
                    freed = true;
                    break;
                }
                set_path(j, std::move(old), true);
            }
            if (!freed) {
                ok = false;
                stuck = h.edges()[i];
                reason = "no odd path for pattern edge " + std::to_string(stuck.u) + "-" + std::to_string(stuck.v);
                break;
            }
        }
        if (ok) return out;
    }
    throw EmbeddingFailure("embed: " + reason + " after " + std::to_string(std::max(1, opts.restarts)) + " restarts", stuck);
}

std::optional<std::string> embedding_problem(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec,
                                             const Embedding& e) {
    const Graph& h = spec.pattern;
    std::vector<char> in_b(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : b)
        if (v >= 0 && v < g.num_vertices()) in_b[static_cast<std::size_t>(v)] = 1;
    if (e.psi.size() != static_cast<std::size_t>(h.num_vertices())) return "psi does not cover the pattern vertices";
    if (e.paths.size() != h.num_edges()) return "path count differs from the pattern edge count";

    std::vector<int> owner(static_cast<std::size_t>(g.num_vertices()), -1);  // -2 marks a branch vertex
    for (std::size_t i = 0; i < e.psi.size(); ++i) {
        const int v = e.psi[i];
        if (v < 0 || v >= g.num_vertices() || !in_b[static_cast<std::size_t>(v)]) return "branch vertex outside B";
        if (owner[static_cast<std::size_t>(v)] != -1) return "psi is not injective";
        owner[static_cast<std::size_t>(v)] = -2;
    }
    for (std::size_t i = 0; i < e.paths.size(); ++i) {
        const auto& p = e.paths[i];
        const Edge& he = h.edges()[i];
        const std::string tag = "path " + std::to_string(he.u) + "-" + std::to_string(he.v);
        if (p.size() < 2) return tag + " is too short";
        if (p.front() != e.psi[static_cast<std::size_t>(he.u)] || p.back() != e.psi[static_cast<std::size_t>(he.v)]) {
            return tag + " does not join the branch vertices";
        }
        const int len = static_cast<int>(p.size()) - 1;
        if (len % 2 == 0) return tag + " has even length";
        if (len < spec.min_len) return tag + " is shorter than min_len";
        if (spec.max_len > 0 && len > spec.max_len) return tag + " is longer than max_len";
        for (std::size_t k = 0; k + 1 < p.size(); ++k) {
            if (p[k] < 0 || p[k] >= g.num_vertices() || p[k + 1] < 0 || p[k + 1] >= g.num_vertices()) {
                return tag + " leaves the vertex range";
            }
            if (!g.has_edge(p[k], p[k + 1])) return tag + " uses a non-edge";
        }
        for (std::size_t k = 1; k + 1 < p.size(); ++k) {
            const int v = p[k];
            if (!in_b[static_cast<std::size_t>(v)]) return tag + " leaves B";
            if (owner[static_cast<std::size_t>(v)] == -2) return tag + " passes through a branch vertex";
            if (owner[static_cast<std::size_t>(v)] >= 0) return tag + " shares an interior vertex";
            owner[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
    }
    return std::nullopt;
}

bool verify_embedding(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec, const Embedding& e) {
    return !embedding_problem(g, b, spec, e);
}

}  // namespace pmx
