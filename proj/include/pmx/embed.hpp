#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmx/error.hpp"
#include "pmx/graph.hpp"

namespace pmx {

struct SubdivisionSpec {
    Graph pattern{0};
    int min_len = 3;     // odd
    int max_len = 0;     // 0: no cap beyond |B|
    int max_degree = 5;  // bound on the pattern's maximum degree
};

// Branch map plus one path (G vertex ids, psi(u) first) per pattern edge,
// aligned with pattern.edges().
struct Embedding {
    std::vector<int> psi;
    std::vector<std::vector<int>> paths;

    std::vector<int> lengths() const;
    // |V(H)| + sum of (length - 1).
    std::size_t vertex_count() const;
    std::vector<int> vertices() const;  // sorted
    std::vector<Edge> edges() const;    // sorted
};

struct EmbedOptions {
    std::uint64_t seed = 1;
    int restarts = 20;
    // Node budget of the simple-path fallback search, per pattern edge.
    long search_budget = 200'000;
    // Preferred pairwise distance of branch vertices in G[B]; relaxed
    // towards 1 when no placement exists.
    int spacing = 4;
};

class EmbeddingFailure : public ConvergenceError {
public:
    EmbeddingFailure(const std::string& what, Edge stuck) : ConvergenceError(what), stuck_(stuck) {}
    Edge stuck_edge() const { return stuck_; }

private:
    Edge stuck_;
};

// Odd-subdivision topological embedding of spec.pattern into G[B].
Embedding embed_topological(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec,
                            const EmbedOptions& opts = {});

// First violated invariant, or nullopt when the embedding is valid.
std::optional<std::string> embedding_problem(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec,
                                             const Embedding& e);
bool verify_embedding(const Graph& g, const std::vector<int>& b, const SubdivisionSpec& spec, const Embedding& e);

}  // namespace pmx
