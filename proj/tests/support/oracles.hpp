#pragma once

// Slow, direct reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "pmx/constraints.hpp"
#include "pmx/graph.hpp"

namespace oracle {

// --- matchings -----------------------------------------------------------

inline bool has_perfect_matching_rec(const pmx::Graph& g, std::vector<char>& used) {
    int v = 0;
    while (v < g.num_vertices() && used[static_cast<std::size_t>(v)]) ++v;
    if (v == g.num_vertices()) return true;
    used[static_cast<std::size_t>(v)] = 1;
    for (int w : g.neighbors(v)) {
        if (used[static_cast<std::size_t>(w)]) continue;
        used[static_cast<std::size_t>(w)] = 1;
        if (has_perfect_matching_rec(g, used)) return true;
        used[static_cast<std::size_t>(w)] = 0;
    }
    used[static_cast<std::size_t>(v)] = 0;
    return false;
}

// Lowest unmatched vertex is matched to each neighbour in turn.
inline bool has_perfect_matching(const pmx::Graph& g) {
    if (g.num_vertices() % 2) return false;
    std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
    return has_perfect_matching_rec(g, used);
}

inline int max_matching_size_rec(const pmx::Graph& g, std::vector<char>& used, int from) {
    int v = from;
    while (v < g.num_vertices() && used[static_cast<std::size_t>(v)]) ++v;
    if (v >= g.num_vertices()) return 0;
    used[static_cast<std::size_t>(v)] = 1;
    int best = max_matching_size_rec(g, used, v + 1);  // v stays unmatched
    for (int w : g.neighbors(v)) {
        if (used[static_cast<std::size_t>(w)]) continue;
        used[static_cast<std::size_t>(w)] = 1;
        best = std::max(best, 1 + max_matching_size_rec(g, used, v + 1));
        used[static_cast<std::size_t>(w)] = 0;
    }
    used[static_cast<std::size_t>(v)] = 0;
    return best;
}

inline int max_matching_size(const pmx::Graph& g) {
    std::vector<char> used(static_cast<std::size_t>(g.num_vertices()), 0);
    return max_matching_size_rec(g, used, 0);
}

// Backtracking over edges in order with per-vertex residual degrees.
inline bool has_f_factor(const pmx::Graph& g, int f) {
    const auto& edges = g.edges();
    std::vector<int> need(static_cast<std::size_t>(g.num_vertices()), f);
    std::vector<int> left(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v = 0; v < g.num_vertices(); ++v) left[static_cast<std::size_t>(v)] = g.degree(v);
    auto rec = [&](auto&& self, std::size_t i) -> bool {
        if (i == edges.size()) return std::all_of(need.begin(), need.end(), [](int x) { return x == 0; });
        const auto u = static_cast<std::size_t>(edges[i].u), v = static_cast<std::size_t>(edges[i].v);
        --left[u];
        --left[v];
        bool ok = false;
        if (need[u] > 0 && need[v] > 0) {
            --need[u];
            --need[v];
            if (need[u] <= left[u] && need[v] <= left[v]) ok = self(self, i + 1);
            ++need[u];
            ++need[v];
        }
        if (!ok && need[u] <= left[u] && need[v] <= left[v]) ok = self(self, i + 1);
        ++left[u];
        ++left[v];
        return ok;
    };
    return rec(rec, 0);
}

// --- random graphs ---------------------------------------------------------

inline pmx::Graph random_graph(int n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    std::vector<pmx::Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng)) edges.emplace_back(u, v);
    return pmx::Graph(n, std::move(edges));
}

// --- dense polynomial calculus over F_p ------------------------------------
//
// The space V of derivable multilinear polynomials of degree <= d, kept as
// dense rows. Closure: for each variable x, the subspace of V whose product
// with x stays within degree d is found by eliminating the offending columns
// first; its products with x are added. Repeats until V stops growing.
class DensePc {
public:
    DensePc(const pmx::ConstraintSystem& cs, int d, std::uint32_t p) : d_(d), p_(p) {
        for (const auto& v : cs.vars) {
            if (v.kind == pmx::VarKind::Edge) index_[v] = static_cast<int>(vars_.size()), vars_.push_back(v);
        }
        k_ = static_cast<int>(vars_.size());
        for (std::uint32_t m = 0; m < (1U << k_); ++m)
            if (__builtin_popcount(m) <= d) col_[m] = static_cast<int>(cols_.size()), cols_.push_back(m);
        for (const auto& eq : cs.equations) {
            auto row = to_row(eq.poly);
            if (row) add(*row);
        }
    }

    bool refutes() {
        for (bool grew = true; grew;) {
            grew = false;
            for (int x = 0; x < k_; ++x) {
                for (const auto& r : kernel(x)) {
                    std::vector<std::uint32_t> prod(cols_.size(), 0);
                    for (std::size_t c = 0; c < cols_.size(); ++c) {
                        if (!r[c]) continue;
                        const std::uint32_t m = cols_[c] | (1U << x);
                        auto& slot = prod[static_cast<std::size_t>(col_.at(m))];
                        slot = static_cast<std::uint32_t>((slot + r[c]) % p_);
                    }
                    if (add(prod)) grew = true;
                }
            }
        }
        return contains_one();
    }

private:
    using Row = std::vector<std::uint32_t>;

    std::uint64_t inv(std::uint64_t a) const {
        std::uint64_t r = 1, e = p_ - 2;
        a %= p_;
        while (e) {
            if (e & 1) r = r * a % p_;
            a = a * a % p_;
            e >>= 1;
        }
        return r;
    }

    std::uint32_t reduce_q(const mpq_class& q) const {
        mpz_class num = q.get_num() % p_, den = q.get_den() % p_;
        if (num < 0) num += p_;
        const std::uint64_t n = num.get_ui(), dn = den.get_ui();
        return static_cast<std::uint32_t>(n * inv(dn) % p_);
    }

    // Twins are replaced by 1 - x; returns nullopt above degree d.
    std::optional<Row> to_row(const pmx::Polynomial& poly) const {
        std::map<std::uint32_t, std::uint64_t> acc;
        for (const auto& [mono, coef] : poly.terms()) {
            // Expand the product of (x) and (1 - x) factors.
            std::map<std::uint32_t, long long> expansion{{0U, 1}};
            for (const auto& [v, e] : mono.factors()) {
                (void)e;
                const std::uint32_t bit = 1U << index_.at(pmx::Variable{pmx::VarKind::Edge, v.edge});
                std::map<std::uint32_t, long long> next;
                for (auto [m, c] : expansion) {
                    if (v.kind == pmx::VarKind::Edge) {
                        next[m | bit] += c;
                    } else {
                        next[m] += c;
                        next[m | bit] -= c;
                    }
                }
                expansion = std::move(next);
            }
            const std::uint64_t cq = reduce_q(coef);
            for (auto [m, c] : expansion) {
                const std::uint64_t cm = static_cast<std::uint64_t>(((c % static_cast<long long>(p_)) + p_) % p_);
                acc[m] = (acc[m] + cq * cm) % p_;
            }
        }
        Row row(cols_.size(), 0);
        for (auto [m, c] : acc) {
            if (!c) continue;
            if (__builtin_popcount(m) > d_) return std::nullopt;
            row[static_cast<std::size_t>(col_.at(m))] = static_cast<std::uint32_t>(c);
        }
        return row;
    }

    // Reduces against the echelon basis; true if the row was new.
    bool add(Row row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c]) continue;
            auto it = pivots_.find(static_cast<int>(c));
            if (it == pivots_.end()) {
                const std::uint64_t s = inv(row[c]);
                for (auto& x : row) x = static_cast<std::uint32_t>(x * s % p_);
                pivots_.emplace(static_cast<int>(c), std::move(row));
                return true;
            }
            const std::uint64_t f = row[c];
            const Row& b = it->second;
            for (std::size_t j = c; j < row.size(); ++j)
                row[j] = static_cast<std::uint32_t>((row[j] + (p_ - f) * b[j]) % p_);
        }
        return false;
    }

    // Basis of {r in V : deg(x r) <= d}.
    std::vector<Row> kernel(int x) const {
        std::vector<char> bad(cols_.size(), 0);
        for (std::size_t c = 0; c < cols_.size(); ++c)
            bad[c] = __builtin_popcount(cols_[c]) == d_ && !(cols_[c] >> x & 1U);
        std::vector<Row> rows;
        for (const auto& [c, r] : pivots_) rows.push_back(r);
        // Eliminate on bad columns; rows left without a bad entry form the kernel.
        std::vector<Row> out;
        std::vector<char> done(rows.size(), 0);
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (!bad[c]) continue;
            std::size_t piv = rows.size();
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (!done[i] && rows[i][c]) {
                    piv = i;
                    break;
                }
            if (piv == rows.size()) continue;
            done[piv] = 1;
            const std::uint64_t s = inv(rows[piv][c]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == piv || done[i] || !rows[i][c]) continue;
                const std::uint64_t f = rows[i][c] * s % p_;
                for (std::size_t j = 0; j < cols_.size(); ++j)
                    rows[i][j] = static_cast<std::uint32_t>((rows[i][j] + (p_ - f) * rows[piv][j]) % p_);
            }
        }
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (!done[i]) out.push_back(rows[i]);
        return out;
    }

    bool contains_one() {
        Row one(cols_.size(), 0);
        one[static_cast<std::size_t>(col_.at(0U))] = 1;
        return !add(one);
    }

    int d_;
    std::uint64_t p_;
    int k_ = 0;
    std::vector<pmx::Variable> vars_;
    std::map<pmx::Variable, int> index_;
    std::vector<std::uint32_t> cols_;
    std::map<std::uint32_t, int> col_;
    std::map<int, Row> pivots_;
};

inline bool dense_pc_refutes(const pmx::ConstraintSystem& cs, int d, std::uint32_t p) {
    return DensePc(cs, d, p).refutes();
}

// --- exact linear feasibility of a degree-d pseudo-expectation -------------
//
// Unknowns E[m] for multilinear monomials of degree <= d over the edge
// variables; E[1] = 1 and E[q * m] = 0 for every equation q and monomial m
// whose multilinear product stays within degree d. Returns true iff that linear system has a
// rational solution (PSD is not checked).
inline bool pe_affine_feasible(const pmx::ConstraintSystem& cs, int d) {
    std::vector<pmx::Variable> vars;
    for (const auto& v : cs.vars)
        if (v.kind == pmx::VarKind::Edge) vars.push_back(v);
    const int k = static_cast<int>(vars.size());
    std::map<std::uint32_t, int> col;
    std::vector<std::uint32_t> monos;
    for (std::uint32_t m = 0; m < (1U << k); ++m)
        if (__builtin_popcount(m) <= d) col[m] = static_cast<int>(monos.size()), monos.push_back(m);
    auto bit_of = [&](const pmx::Variable& v) {
        return 1U << (std::find(vars.begin(), vars.end(), v) - vars.begin());
    };
    std::vector<std::vector<mpq_class>> rows;
    const std::size_t width = monos.size() + 1;  // last entry: right-hand side
    {
        std::vector<mpq_class> r(width, 0);
        r[static_cast<std::size_t>(col[0])] = 1;
        r.back() = 1;
        rows.push_back(r);
    }
    for (const auto& eq : cs.equations) {
        const pmx::Polynomial q = eq.poly.multilinear();
        for (std::uint32_t m : monos) {
            std::vector<mpq_class> r(width, 0);
            bool fits = true;
            for (const auto& [mono, coef] : q.terms()) {
                std::uint32_t mm = m;
                for (const auto& [v, e] : mono.factors()) {
                    (void)e;
                    mm |= bit_of(v);
                }
                if (__builtin_popcount(mm) > d) {
                    fits = false;
                    break;
                }
                r[static_cast<std::size_t>(col.at(mm))] += coef;
            }
            if (fits) rows.push_back(r);
        }
    }
    // Gaussian elimination; infeasible iff a row reduces to 0 = nonzero.
    std::size_t rank = 0;
    for (std::size_t c = 0; c + 1 < width && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][c] == 0) continue;
            const mpq_class f = rows[i][c] / rows[rank][c];
            for (std::size_t j = c; j < width; ++j) rows[i][j] -= f * rows[rank][j];
        }
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i].back() != 0) return false;
    return true;
}

}  // namespace oracle
