#include <numeric>

#include "doctest.h"
#include "pmx/embed.hpp"
#include "pmx/error.hpp"
#include "pmx/graph.hpp"
#include "pmx/partition.hpp"

using namespace pmx;

namespace {

// Exhaustive search for an odd subdivision of h in g: every injective branch
// map, then every simple path per pattern edge with disjoint interiors.
class ExhaustiveRouter {
public:
    ExhaustiveRouter(const Graph& g, const Graph& h, int min_len, int max_len)
        : g_(g), h_(h), min_len_(min_len), max_len_(max_len), used_(static_cast<std::size_t>(g.num_vertices()), 0) {}

    bool exists() {
        psi_.assign(static_cast<std::size_t>(h_.num_vertices()), -1);
        return place(0);
    }

private:
    bool place(int hv) {
        if (hv == h_.num_vertices()) return route(0);
        for (int v = 0; v < g_.num_vertices(); ++v) {
            if (used_[static_cast<std::size_t>(v)]) continue;
            used_[static_cast<std::size_t>(v)] = 1;
            psi_[static_cast<std::size_t>(hv)] = v;
            if (place(hv + 1)) return true;
            used_[static_cast<std::size_t>(v)] = 0;
        }
        return false;
    }

    bool route(std::size_t i) {
        if (i == h_.num_edges()) return true;
        const Edge& e = h_.edges()[i];
        return walk(psi_[static_cast<std::size_t>(e.u)], psi_[static_cast<std::size_t>(e.v)], 0, i);
    }

    bool walk(int v, int t, int len, std::size_t i) {
        for (int w : g_.neighbors(v)) {
            if (w == t) {
                const int l = len + 1;
                if (l % 2 == 1 && l >= min_len_ && route(i + 1)) return true;
                continue;
            }
            if (used_[static_cast<std::size_t>(w)] || len + 2 > max_len_) continue;
            used_[static_cast<std::size_t>(w)] = 1;
            const bool ok = walk(w, t, len + 1, i);
            used_[static_cast<std::size_t>(w)] = 0;
            if (ok) return true;
        }
        return false;
    }

    const Graph& g_;
    const Graph& h_;
    int min_len_, max_len_;
    std::vector<char> used_;
    std::vector<int> psi_;
};

std::vector<int> all_vertices(const Graph& g) {
    std::vector<int> out(static_cast<std::size_t>(g.num_vertices()));
    std::iota(out.begin(), out.end(), 0);
    return out;
}

}  // namespace

TEST_CASE("K4 into Petersen: router agrees with exhaustive search") {
    Graph p = named_graph("petersen");
    Graph k4 = named_graph("K4");
    const auto b = all_vertices(p);
    for (int min_len : {1, 3}) {
        const bool exists = ExhaustiveRouter(p, k4, min_len, 9).exists();
        SubdivisionSpec spec{k4, min_len, 9, 5};
        if (exists) {
            Embedding e = embed_topological(p, b, spec);
            CHECK(verify_embedding(p, b, spec, e));
            for (int s : e.lengths()) CHECK(s % 2 == 1);
        } else {
            CHECK_THROWS_AS(embed_topological(p, b, spec), EmbeddingFailure);
        }
    }
}

TEST_CASE("no odd subdivision in a bipartite host with min_len 3 for a triangle") {
    // Any cycle in a bipartite graph is even, but three odd paths make an odd cycle.
    Graph host = named_graph("C8");
    Graph tri = named_graph("C3");
    CHECK(!ExhaustiveRouter(host, tri, 1, 8).exists());
    SubdivisionSpec spec{tri, 1, 0, 5};
    CHECK_THROWS_AS(embed_topological(host, all_vertices(host), spec), EmbeddingFailure);
}

TEST_CASE("C7 and petersen9 embed into G[B] of a random regular graph") {
    Graph g = random_regular(151, 20, 1);
    PartitionParams pp;
    pp.seed = 1;
    Partition part = find_partition(g, 20, pp);
    for (const char* name : {"C7", "petersen9"}) {
        SubdivisionSpec spec{named_graph(name), 3, 0, 5};
        Embedding e = embed_topological(g, part.B, spec);
        CHECK(!embedding_problem(g, part.B, spec, e));
        CHECK(e.vertex_count() == e.vertices().size());
        const auto sigma = e.lengths();
        std::size_t sum = 0;
        for (int s : sigma) sum += static_cast<std::size_t>(s - 1);
        CHECK(e.vertex_count() == spec.pattern.num_vertices() + sum);
        CHECK(e.edges().size() == static_cast<std::size_t>(std::accumulate(sigma.begin(), sigma.end(), 0)));
    }
}

TEST_CASE("embedding is a pure function of the seed") {
    Graph g = random_regular(101, 16, 2);
    Partition part = find_partition(g, 16, {});
    SubdivisionSpec spec{named_graph("C7"), 3, 0, 5};
    EmbedOptions o;
    o.seed = 5;
    Embedding a = embed_topological(g, part.B, spec, o), b = embed_topological(g, part.B, spec, o);
    CHECK(a.psi == b.psi);
    CHECK(a.paths == b.paths);
}

TEST_CASE("embedding_problem names the broken invariant") {
    Graph g = random_regular(101, 16, 2);
    Partition part = find_partition(g, 16, {});
    SubdivisionSpec spec{named_graph("C7"), 3, 0, 5};
    const Embedding good = embed_topological(g, part.B, spec);
    REQUIRE(!embedding_problem(g, part.B, spec, good));

    Embedding e = good;
    e.paths[0].pop_back();
    CHECK(embedding_problem(g, part.B, spec, e).value().find("does not join") != std::string::npos);

    e = good;
    e.psi[1] = e.psi[0];
    CHECK(embedding_problem(g, part.B, spec, e).has_value());

    e = good;
    e.paths.pop_back();
    CHECK(embedding_problem(g, part.B, spec, e).value().find("path count") != std::string::npos);

    // An interior vertex moved outside B.
    e = good;
    std::vector<int> shrunk;
    for (int v : part.B)
        if (v != e.paths[0][1]) shrunk.push_back(v);
    CHECK(embedding_problem(g, shrunk, spec, e).value().find("leaves B") != std::string::npos);

    SubdivisionSpec longer = spec;
    longer.min_len = 101;
    CHECK(embedding_problem(g, part.B, longer, good).value().find("shorter") != std::string::npos);
}

TEST_CASE("embed parameter errors") {
    Graph g = named_graph("petersen");
    const auto b = all_vertices(g);
    CHECK_THROWS_AS(embed_topological(g, b, SubdivisionSpec{named_graph("C3"), 2, 0, 5}), ParameterError);
    CHECK_THROWS_AS(embed_topological(g, b, SubdivisionSpec{named_graph("star6"), 1, 0, 5}), ParameterError);
    CHECK_THROWS_AS(embed_topological(g, {0, 1}, SubdivisionSpec{named_graph("C3"), 1, 0, 5}), ParameterError);
    std::vector<int> bad_b{0, 99};
    CHECK_THROWS_AS(embed_topological(g, bad_b, SubdivisionSpec{named_graph("K2"), 1, 0, 5}), ParameterError);
}

TEST_CASE("a failing embedding names the stuck pattern edge") {
    Graph g = random_regular(51, 10, 1);
    Partition part = find_partition(g, 10, {});
    SubdivisionSpec spec{named_graph("petersen9"), 3, 0, 5};
    try {
        embed_topological(g, part.B, spec);
        FAIL("expected an embedding failure");
    } catch (const EmbeddingFailure& e) {
        CHECK(named_graph("petersen9").has_edge(e.stuck_edge().u, e.stuck_edge().v));
    }
}
