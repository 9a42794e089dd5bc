#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pmx/graph.hpp"

namespace pmx {

struct Matching {
    std::vector<Edge> edges;  // sorted

    std::size_t size() const { return edges.size(); }
    bool is_perfect_for(const Graph& g) const { return 2 * edges.size() == static_cast<std::size_t>(g.num_vertices()); }
};

// True iff the edges exist in g and no two share an endpoint.
bool is_matching(const Graph& g, std::span<const Edge> edges);

// Edmonds' blossom algorithm, seeded with a greedy matching. O(V^3).
Matching maximum_matching(const Graph& g);

std::optional<Matching> perfect_matching(const Graph& g);

// A violating vertex set, if any.
struct TutteResult {
    bool ok = true;
    std::optional<std::vector<int>> witness;
};

// For every S: #components(G \ S) <= |S|, except that S = {} only requires
// G to be connected. Exhaustive over 2^n subsets, n <= 20.
TutteResult tutte_all_components_check(const Graph& g);

// Classical Tutte condition: #odd components(G \ S) <= |S| for every S.
// Equivalent to the existence of a perfect matching. n <= 20.
TutteResult tutte_odd_components_check(const Graph& g);

struct FactorWitness {
    std::vector<int> S;
    std::vector<int> T;
};

struct GeneralizedTutteResult {
    bool ok = true;
    std::optional<FactorWitness> witness;
};

enum class ComponentCount {
    // Components C of G - (S ∪ T) with e(C, T) odd (f even): Tutte's
    // f-factor theorem, i.e. ok iff an f-factor exists.
    ParityQualified,
    // Every component counts; S = T = {} only requires connectivity.
    All,
};

// q(G \ (S ∪ T)) <= |S| f - sum_{w in T} (f - |N(w) \ S|) for all disjoint
// S, T. Exhaustive over 3^n pairs, n <= 16. Throws ParameterError for odd f.
GeneralizedTutteResult tutte_generalized_check(const Graph& g, int f,
                                               ComponentCount mode = ComponentCount::ParityQualified);

struct FactorSubgraph {
    int f = 0;
    std::vector<Edge> edges;  // sorted
};

bool is_f_factor(const Graph& g, int f, std::span<const Edge> edges);

// Spanning f-regular subgraph via Tutte's gadget: vertex v becomes deg(v)
// external nodes (one per incident edge) plus deg(v) - f internal nodes
// joined completely to them; original edges join external nodes. Edges whose
// external nodes are matched to each other form the factor.
// Throws ParameterError if f is odd, negative, or exceeds the minimum degree.
std::optional<FactorSubgraph> f_factor(const Graph& g, int f);

struct PmLemmaReport {
    bool ok = true;
    std::optional<std::vector<int>> witness;  // violating S ⊆ U, in parent labels
    int min_degree_in_u = 0;
    bool degree_precondition = false;    // min degree of G[U] >= 0.9 d
    bool spectral_precondition = false;  // lambda < d / 50
};

// Exhaustive audit that #components(G[U \ S]) <= |S| for every S ⊆ U
// (S = {} requires G[U] connected). |U| <= 20.
PmLemmaReport pm_lemma_check(const Graph& g, int d, double lambda, std::span<const int> u);

}  // namespace pmx
