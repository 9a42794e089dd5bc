#include "pmx/matching.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>

#include "pmx/error.hpp"

namespace pmx {

bool is_matching(const Graph& g, std::span<const Edge> edges) {
    std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
    for (const auto& e : edges) {
        if (!g.has_edge(e.u, e.v)) return false;
        if (used[static_cast<std::size_t>(e.u)] || used[static_cast<std::size_t>(e.v)]) return false;
        used[static_cast<std::size_t>(e.u)] = used[static_cast<std::size_t>(e.v)] = 1;
    }
    return true;
}

namespace {

class Blossom {
public:
    explicit Blossom(const Graph& g)
        : g_(g), n_(static_cast<std::size_t>(g.num_vertices())), match_(n_, -1), parent_(n_, -1), base_(n_),
          used_(n_, 0), in_blossom_(n_, 0), seen_(n_, 0) {}

    std::vector<int> run() {
        // Greedy start, lowest-degree vertices first.
        std::vector<int> order(n_);
        for (std::size_t i = 0; i < n_; ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g_.degree(a) < g_.degree(b); });
        for (int v : order) {
            if (match_[idx(v)] != -1) continue;
            for (int w : g_.neighbors(v)) {
                if (match_[idx(w)] == -1) {
                    match_[idx(v)] = w;
                    match_[idx(w)] = v;
                    break;
                }
            }
        }
        for (std::size_t root = 0; root < n_; ++root) {
            if (match_[root] != -1) continue;
            int v = find_path(static_cast<int>(root));
            while (v != -1) {
                int pv = parent_[idx(v)];
                int ppv = match_[idx(pv)];
                match_[idx(v)] = pv;
                match_[idx(pv)] = v;
                v = ppv;
            }
        }
        return match_;
    }

private:
    static std::size_t idx(int v) { return static_cast<std::size_t>(v); }

    int lca(int a, int b) {
        ++stamp_;
        for (;;) {
            a = base_[idx(a)];
            seen_[idx(a)] = stamp_;
            if (match_[idx(a)] == -1) break;
            a = parent_[idx(match_[idx(a)])];
        }
        for (;;) {
            b = base_[idx(b)];
            if (seen_[idx(b)] == stamp_) return b;
            b = parent_[idx(match_[idx(b)])];
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[idx(v)] != b) {
            in_blossom_[idx(base_[idx(v)])] = 1;
            in_blossom_[idx(base_[idx(match_[idx(v)])])] = 1;
            parent_[idx(v)] = child;
            child = match_[idx(v)];
            v = parent_[idx(match_[idx(v)])];
        }
    }

    int find_path(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), -1);
        for (std::size_t i = 0; i < n_; ++i) base_[i] = static_cast<int>(i);
        used_[idx(root)] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int to : g_.neighbors(v)) {
                if (base_[idx(v)] == base_[idx(to)] || match_[idx(v)] == to) continue;
                if (to == root || (match_[idx(to)] != -1 && parent_[idx(match_[idx(to)])] != -1)) {
                    int cur = lca(v, to);
                    std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (std::size_t i = 0; i < n_; ++i) {
                        if (in_blossom_[idx(base_[i])]) {
                            base_[i] = cur;
                            if (!used_[i]) {
                                used_[i] = 1;
                                q.push(static_cast<int>(i));
                            }
                        }
                    }
                } else if (parent_[idx(to)] == -1) {
                    parent_[idx(to)] = v;
                    if (match_[idx(to)] == -1) return to;
                    used_[idx(match_[idx(to)])] = 1;
                    q.push(match_[idx(to)]);
                }
            }
        }
        return -1;
    }

    const Graph& g_;
    std::size_t n_;
    std::vector<int> match_, parent_, base_;
    std::vector<char> used_, in_blossom_;
    std::vector<std::uint64_t> seen_;
    std::uint64_t stamp_ = 0;
};

using Mask = std::uint32_t;

std::vector<Mask> adjacency_masks(const Graph& g) {
    std::vector<Mask> adj(static_cast<std::size_t>(g.num_vertices()), 0);
    for (const auto& e : g.edges()) {
        adj[static_cast<std::size_t>(e.u)] |= Mask{1} << e.v;
        adj[static_cast<std::size_t>(e.v)] |= Mask{1} << e.u;
    }
    return adj;
}

// Calls visit(component_mask) for each connected component inside `alive`.
template <class Visit>
void for_each_component(const std::vector<Mask>& adj, Mask alive, Visit&& visit) {
    while (alive) {
        Mask comp = alive & (~alive + 1);
        Mask frontier = comp;
        while (frontier) {
            Mask next = 0;
            for (Mask f = frontier; f; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
            next &= alive & ~comp;
            comp |= next;
            frontier = next;
        }
        visit(comp);
        alive &= ~comp;
    }
}

std::vector<int> mask_to_vertices(Mask m, const std::vector<int>* labels = nullptr) {
    std::vector<int> out;
    for (; m; m &= m - 1) {
        int v = std::countr_zero(m);
        out.push_back(labels ? (*labels)[static_cast<std::size_t>(v)] : v);
    }
    return out;
}

void guard(const Graph& g, int limit, const char* what) {
    if (g.num_vertices() > limit) {
        throw GuardError(std::string(what) + ": exhaustive check limited to n <= " + std::to_string(limit) +
                         " (got " + std::to_string(g.num_vertices()) + ")");
    }
}

// Shared driver for the subset-enumerating Tutte audits.
template <class Bound>
TutteResult subset_audit(const Graph& g, bool odd_only, Bound&& bound, const std::vector<int>* labels = nullptr) {
    const auto adj = adjacency_masks(g);
    const int n = g.num_vertices();
    const Mask full = n == 32 ? ~Mask{0} : (Mask{1} << n) - 1;
    for (std::uint64_t s = 0; s <= full; ++s) {
        Mask smask = static_cast<Mask>(s);
        int q = 0;
        for_each_component(adj, full & ~smask, [&](Mask comp) {
            if (!odd_only || (std::popcount(comp) % 2 == 1)) ++q;
        });
        if (q > bound(std::popcount(smask))) return {false, mask_to_vertices(smask, labels)};
    }
    return {};
}

}  // namespace

Matching maximum_matching(const Graph& g) {
    auto match = Blossom(g).run();
    Matching m;
    for (std::size_t v = 0; v < match.size(); ++v) {
        if (match[v] > static_cast<int>(v)) m.edges.emplace_back(static_cast<int>(v), match[v]);
    }
    return m;
}

std::optional<Matching> perfect_matching(const Graph& g) {
    if (g.num_vertices() % 2 != 0) return std::nullopt;
    Matching m = maximum_matching(g);
    if (!m.is_perfect_for(g)) return std::nullopt;
    return m;
}

TutteResult tutte_all_components_check(const Graph& g) {
    guard(g, 20, "tutte_all_components_check");
    return subset_audit(g, false, [](int s) { return s == 0 ? 1 : s; });
}

TutteResult tutte_odd_components_check(const Graph& g) {
    guard(g, 20, "tutte_odd_components_check");
    return subset_audit(g, true, [](int s) { return s; });
}

GeneralizedTutteResult tutte_generalized_check(const Graph& g, int f, ComponentCount mode) {
    if (f < 0 || f % 2 != 0) throw ParameterError("tutte_generalized_check: f must be even and non-negative");
    guard(g, 16, "tutte_generalized_check");
    const auto adj = adjacency_masks(g);
    const int n = g.num_vertices();
    const Mask full = (Mask{1} << n) - 1;

    auto check = [&](Mask S, Mask T) -> bool {
        long long rhs = static_cast<long long>(f) * std::popcount(S);
        for (Mask t = T; t; t &= t - 1) {
            int w = std::countr_zero(t);
            rhs -= f - std::popcount(adj[static_cast<std::size_t>(w)] & ~S);
        }
        long long q = 0;
        for_each_component(adj, full & ~(S | T), [&](Mask comp) {
            if (mode == ComponentCount::All) {
                ++q;
                return;
            }
            long long cross = 0;
            for (Mask t = T; t; t &= t - 1) cross += std::popcount(adj[static_cast<std::size_t>(std::countr_zero(t))] & comp);
            if (cross % 2 == 1) ++q;
        });
        if (mode == ComponentCount::All && S == 0 && T == 0) return q <= 1;
        return q <= rhs;
    };

    // T ranges over all subsets, S over subsets of the complement of T.
    for (Mask T = 0;; ++T) {
        Mask rest = full & ~T;
        for (Mask S = rest;; S = (S - 1) & rest) {
            if (!check(S, T)) return {false, FactorWitness{mask_to_vertices(S), mask_to_vertices(T)}};
            if (S == 0) break;
        }
        if (T == full) break;
    }
    return {};
}

bool is_f_factor(const Graph& g, int f, std::span<const Edge> edges) {
    std::vector<int> deg(static_cast<std::size_t>(g.num_vertices()), 0);
    std::vector<Edge> sorted(edges.begin(), edges.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (const auto& e : sorted) {
        if (!g.has_edge(e.u, e.v)) return false;
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
    }
    return std::all_of(deg.begin(), deg.end(), [f](int x) { return x == f; });
}

std::optional<FactorSubgraph> f_factor(const Graph& g, int f) {
    if (f < 0 || f % 2 != 0) throw ParameterError("f_factor: f must be even and non-negative");
    if (g.num_vertices() > 0 && f > g.min_degree()) {
        throw ParameterError("f_factor: f=" + std::to_string(f) + " exceeds minimum degree " +
                             std::to_string(g.min_degree()));
    }
    FactorSubgraph out;
    out.f = f;
    if (f == 0) return out;

    const int n = g.num_vertices();
    // External node of (v, i-th neighbour) and internal nodes per vertex.
    std::vector<int> ext_start(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> int_start(static_cast<std::size_t>(n), 0);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        ext_start[static_cast<std::size_t>(v)] = next;
        next += g.degree(v);
    }
    ext_start[static_cast<std::size_t>(n)] = next;
    for (int v = 0; v < n; ++v) {
        int_start[static_cast<std::size_t>(v)] = next;
        next += g.degree(v) - f;
    }
    auto ext_node = [&](int v, int w) {
        auto nb = g.neighbors(v);
        auto pos = std::lower_bound(nb.begin(), nb.end(), w) - nb.begin();
        return ext_start[static_cast<std::size_t>(v)] + static_cast<int>(pos);
    };

    std::vector<Edge> gadget;
    for (const auto& e : g.edges()) gadget.emplace_back(ext_node(e.u, e.v), ext_node(e.v, e.u));
    for (int v = 0; v < n; ++v) {
        for (int i = 0; i < g.degree(v) - f; ++i)
            for (int k = 0; k < g.degree(v); ++k)
                gadget.emplace_back(int_start[static_cast<std::size_t>(v)] + i, ext_start[static_cast<std::size_t>(v)] + k);
    }
    Graph gg(next, std::move(gadget));
    auto pm = perfect_matching(gg);
    if (!pm) return std::nullopt;

    std::vector<char> matched_across(static_cast<std::size_t>(ext_start[static_cast<std::size_t>(n)]), 0);
    const int ext_end = ext_start[static_cast<std::size_t>(n)];
    for (const auto& e : pm->edges) {
        if (e.u < ext_end && e.v < ext_end) {
            matched_across[static_cast<std::size_t>(e.u)] = 1;
        }
    }
    for (const auto& e : g.edges()) {
        int a = ext_node(e.u, e.v), b = ext_node(e.v, e.u);
        if (matched_across[static_cast<std::size_t>(std::min(a, b))]) out.edges.push_back(e);
    }
    return out;
}

PmLemmaReport pm_lemma_check(const Graph& g, int d, double lambda, std::span<const int> u) {
    if (u.size() > 20) {
        throw GuardError("pm_lemma_check: exhaustive check limited to |U| <= 20 (got " + std::to_string(u.size()) + ")");
    }
    auto sub = induced_subgraph(g, u);
    PmLemmaReport report;
    report.min_degree_in_u = sub.graph.min_degree();
    report.degree_precondition = report.min_degree_in_u >= 0.9 * d;
    report.spectral_precondition = lambda < d / 50.0;
    auto audit = subset_audit(sub.graph, false, [](int s) { return s == 0 ? 1 : s; }, &sub.to_parent);
    report.ok = audit.ok;
    report.witness = std::move(audit.witness);
    return report;
}

}  // namespace pmx
