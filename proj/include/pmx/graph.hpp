#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmx {

// Undirected edge, always stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    auto operator<=>(const Edge&) const = default;
};

// Simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);

    // Throws ParameterError on self-loops, parallel edges or out-of-range endpoints.
    Graph(int n, std::vector<Edge> edges);

    int num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }

    // Sorted lexicographically.
    const std::vector<Edge>& edges() const { return edges_; }

    // Sorted ascending.
    std::span<const int> neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }

    bool has_edge(int u, int v) const;

    // Position of the edge in edges(), if present.
    std::optional<std::size_t> edge_index(int u, int v) const;

    std::optional<int> regular_degree() const;
    int min_degree() const;
    int max_degree() const;

    bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
};

// G[W] with the label maps needed to translate back to the parent graph.
struct InducedSubgraph {
    Graph graph;
    std::vector<int> to_parent;    // new label -> parent label
    std::vector<int> from_parent;  // parent label -> new label, or -1
};

InducedSubgraph induced_subgraph(const Graph& g, std::span<const int> vertices);

// Graph with the given edges removed (vertex set unchanged).
Graph remove_edges(const Graph& g, std::span<const Edge> removed);

Graph complement(const Graph& g);

// Disjoint union, second graph relabelled by offset a.num_vertices().
Graph disjoint_union(const Graph& a, const Graph& b);

// Number of connected components; vertices outside `alive` (bitmask over
// vertex ids, empty = all) are ignored.
int count_components(const Graph& g, const std::vector<char>& alive = {});

// Catalogue: "K<n>", "C<n>", "P<n>", "star<k>", "petersen", "petersen9"
// (Petersen minus vertex 9). Petersen labelling: outer cycle 0-1-2-3-4,
// spokes i-(i+5), inner pentagram (5+i)-(5+(i+2)%5).
Graph named_graph(std::string_view name);

// Pairing model with loop/multi-edge rejection; after `pairing_attempts`
// rejected pairings the last one is repaired with double-edge swaps.
// Dense requests (d > (n-1)/2) are built as complements of sparse ones.
struct RandomRegularOptions {
    int pairing_attempts = 50;
    std::int64_t swap_budget = 200'000'000;
};

Graph random_regular(int n, int d, std::uint64_t seed, const RandomRegularOptions& opts = {});

// Text edge list: "n m" then m lines "u v" with u < v.
Graph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const Graph& g);
Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);

}  // namespace pmx
