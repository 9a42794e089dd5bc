#include "pmx/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pmx/error.hpp"

namespace pmx {

Graph::Graph(int n) : n_(n), adjacency_(static_cast<std::size_t>(n)) {
    if (n < 0) throw ParameterError("graph: negative vertex count");
}

Graph::Graph(int n, std::vector<Edge> edges) : Graph(n) {
    for (const auto& e : edges) {
        if (e.u < 0 || e.v >= n) {
            throw ParameterError("graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                 ") out of range for n=" + std::to_string(n));
        }
        if (e.u == e.v) throw ParameterError("graph: self-loop at " + std::to_string(e.u));
    }
    std::sort(edges.begin(), edges.end());
    if (auto it = std::adjacent_find(edges.begin(), edges.end()); it != edges.end()) {
        throw ParameterError("graph: parallel edge (" + std::to_string(it->u) + "," + std::to_string(it->v) + ")");
    }
    edges_ = std::move(edges);
    for (const auto& e : edges_) {
        adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
        adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<std::size_t> Graph::edge_index(int u, int v) const {
    Edge key(u, v);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
}

std::optional<int> Graph::regular_degree() const {
    if (n_ == 0) return 0;
    int d = degree(0);
    for (int v = 1; v < n_; ++v) {
        if (degree(v) != d) return std::nullopt;
    }
    return d;
}

int Graph::min_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = (v == 0) ? degree(v) : std::min(best, degree(v));
    return best;
}

int Graph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const int> vertices) {
    InducedSubgraph out;
    out.from_parent.assign(static_cast<std::size_t>(g.num_vertices()), -1);
    for (int v : vertices) {
        if (v < 0 || v >= g.num_vertices()) {
            throw ParameterError("induced_subgraph: vertex " + std::to_string(v) + " out of range");
        }
        if (out.from_parent[static_cast<std::size_t>(v)] != -1) continue;
        out.from_parent[static_cast<std::size_t>(v)] = static_cast<int>(out.to_parent.size());
        out.to_parent.push_back(v);
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        int a = out.from_parent[static_cast<std::size_t>(e.u)];
        int b = out.from_parent[static_cast<std::size_t>(e.v)];
        if (a >= 0 && b >= 0) edges.emplace_back(a, b);
    }
    out.graph = Graph(static_cast<int>(out.to_parent.size()), std::move(edges));
    return out;
}

Graph remove_edges(const Graph& g, std::span<const Edge> removed) {
    std::vector<Edge> drop(removed.begin(), removed.end());
    std::sort(drop.begin(), drop.end());
    std::vector<Edge> kept;
    kept.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        if (!std::binary_search(drop.begin(), drop.end(), e)) kept.push_back(e);
    }
    return Graph(g.num_vertices(), std::move(kept));
}

Graph complement(const Graph& g) {
    std::vector<Edge> edges;
    for (int u = 0; u < g.num_vertices(); ++u) {
        auto nb = g.neighbors(u);
        auto it = nb.begin();
        for (int v = u + 1; v < g.num_vertices(); ++v) {
            while (it != nb.end() && *it < v) ++it;
            if (it == nb.end() || *it != v) edges.emplace_back(u, v);
        }
    }
    return Graph(g.num_vertices(), std::move(edges));
}

Graph disjoint_union(const Graph& a, const Graph& b) {
    std::vector<Edge> edges = a.edges();
    int off = a.num_vertices();
    for (const auto& e : b.edges()) edges.emplace_back(e.u + off, e.v + off);
    return Graph(a.num_vertices() + b.num_vertices(), std::move(edges));
}

int count_components(const Graph& g, const std::vector<char>& alive) {
    const int n = g.num_vertices();
    auto is_alive = [&](int v) { return alive.empty() || alive[static_cast<std::size_t>(v)]; };
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack;
    int comps = 0;
    for (int s = 0; s < n; ++s) {
        if (!is_alive(s) || seen[static_cast<std::size_t>(s)]) continue;
        ++comps;
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.neighbors(v)) {
                if (is_alive(w) && !seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
        }
    }
    return comps;
}

namespace {

std::optional<int> parse_suffix(std::string_view name, std::string_view prefix) {
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto rest = name.substr(prefix.size());
    int value = 0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
    if (ec != std::errc{} || ptr != rest.data() + rest.size() || value < 0) return std::nullopt;
    return value;
}

Graph petersen() {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return Graph(10, std::move(edges));
}

}  // namespace

Graph named_graph(std::string_view name) {
    if (name == "petersen") return petersen();
    if (name == "petersen9") {
        std::vector<int> keep{0, 1, 2, 3, 4, 5, 6, 7, 8};
        return induced_subgraph(petersen(), keep).graph;
    }
    if (auto k = parse_suffix(name, "star")) {
        std::vector<Edge> edges;
        for (int i = 1; i <= *k; ++i) edges.emplace_back(0, i);
        return Graph(*k + 1, std::move(edges));
    }
    if (auto n = parse_suffix(name, "K")) {
        std::vector<Edge> edges;
        for (int u = 0; u < *n; ++u)
            for (int v = u + 1; v < *n; ++v) edges.emplace_back(u, v);
        return Graph(*n, std::move(edges));
    }
    if (auto n = parse_suffix(name, "C")) {
        if (*n < 3) throw ParameterError("named_graph: cycle needs at least 3 vertices");
        std::vector<Edge> edges;
        for (int i = 0; i < *n; ++i) edges.emplace_back(i, (i + 1) % *n);
        return Graph(*n, std::move(edges));
    }
    if (auto n = parse_suffix(name, "P")) {
        std::vector<Edge> edges;
        for (int i = 0; i + 1 < *n; ++i) edges.emplace_back(i, i + 1);
        return Graph(*n, std::move(edges));
    }
    throw ParameterError("named_graph: unknown graph '" + std::string(name) + "'");
}

Graph read_edge_list(std::istream& in) {
    std::string line;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw FormatError("edge list: missing header line");
    long long n = -1, m = -1;
    {
        std::istringstream hs(line);
        if (!(hs >> n >> m) || n < 0 || m < 0) throw FormatError("edge list: bad header '" + line + "'");
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_line()) throw FormatError("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        std::istringstream ls(line);
        long long u = -1, v = -1;
        if (!(ls >> u >> v)) throw FormatError("edge list: bad edge line '" + line + "'");
        if (u < 0 || v >= n || u >= v) {
            throw FormatError("edge list: invalid edge '" + line + "'");
        }
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    try {
        return Graph(static_cast<int>(n), std::move(edges));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("edge list: ") + e.what());
    }
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return read_edge_list(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_edge_list(out, g);
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace pmx
