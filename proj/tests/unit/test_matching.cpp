#include <random>

#include "doctest.h"
#include "pmx/error.hpp"
#include "pmx/graph.hpp"
#include "pmx/matching.hpp"
#include "oracles.hpp"

using namespace pmx;

TEST_CASE("blossom matches exhaustive search on random graphs") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 11);
        const double p = 0.15 + 0.1 * static_cast<double>(rng() % 6);
        Graph g = oracle::random_graph(n, p, rng);
        Matching m = maximum_matching(g);
        CHECK(is_matching(g, m.edges));
        CHECK(static_cast<int>(m.size()) == oracle::max_matching_size(g));
        CHECK(perfect_matching(g).has_value() == oracle::has_perfect_matching(g));
    }
}

TEST_CASE("blossom handles odd cycles that need contraction") {
    // Two triangles joined by a path: the perfect matching must use the
    // bridge edges, which greedy seeding can miss.
    Graph g(6, {Edge(0, 1), Edge(1, 2), Edge(0, 2), Edge(2, 3), Edge(3, 4), Edge(4, 5), Edge(3, 5)});
    auto m = perfect_matching(g);
    REQUIRE(m);
    CHECK(m->size() == 3);
    CHECK(!perfect_matching(named_graph("petersen9")));
    CHECK(perfect_matching(named_graph("petersen")));
}

TEST_CASE("is_matching rejects shared endpoints and non-edges") {
    Graph g = named_graph("C5");
    std::vector<Edge> shared{Edge(0, 1), Edge(1, 2)};
    std::vector<Edge> missing{Edge(0, 2)};
    CHECK(!is_matching(g, shared));
    CHECK(!is_matching(g, missing));
}

TEST_CASE("Tutte checks") {
    auto star = tutte_all_components_check(named_graph("star3"));
    CHECK(!star.ok);
    REQUIRE(star.witness);
    CHECK(*star.witness == std::vector<int>{0});
    CHECK(tutte_all_components_check(named_graph("K4")).ok);
    // A disconnected graph fails at S = {} in the all-components variant but
    // has a perfect matching.
    Graph two = disjoint_union(named_graph("K2"), named_graph("K2"));
    CHECK(!tutte_all_components_check(two).ok);
    CHECK(tutte_odd_components_check(two).ok);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        Graph g = oracle::random_graph(2 + static_cast<int>(rng() % 8), 0.4, rng);
        CHECK(tutte_odd_components_check(g).ok == oracle::has_perfect_matching(g));
        // The stronger condition implies a perfect matching on even n.
        if (g.num_vertices() % 2 == 0 && tutte_all_components_check(g).ok) CHECK(oracle::has_perfect_matching(g));
    }
    CHECK_THROWS_AS(tutte_all_components_check(named_graph("C21")), GuardError);
}

TEST_CASE("f-factor agrees with backtracking") {
    std::mt19937_64 rng(12);
    int found = 0;
    for (int trial = 0; trial < 80; ++trial) {
        Graph g = oracle::random_graph(4 + static_cast<int>(rng() % 7), 0.6, rng);
        for (int f = 0; f <= std::min(4, g.min_degree()); f += 2) {
            auto r = f_factor(g, f);
            CHECK(r.has_value() == oracle::has_f_factor(g, f));
            if (r) {
                CHECK(is_f_factor(g, f, r->edges));
                ++found;
            }
        }
    }
    CHECK(found > 50);
}

TEST_CASE("f-factor on regular graphs and generalized Tutte") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Graph g = random_regular(24, 8, seed);
        for (int f = 2; f <= 4; f += 2) {
            auto r = f_factor(g, f);
            REQUIRE(r);
            CHECK(is_f_factor(g, f, r->edges));
        }
    }
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Graph g = oracle::random_graph(4 + static_cast<int>(rng() % 5), 0.5, rng);
        if (g.min_degree() < 2) continue;
        auto t = tutte_generalized_check(g, 2);
        CHECK(t.ok == oracle::has_f_factor(g, 2));
        if (t.ok) CHECK(f_factor(g, 2).has_value());
    }
    CHECK_THROWS_AS(f_factor(named_graph("K4"), 1), ParameterError);
    CHECK_THROWS_AS(f_factor(named_graph("C5"), 4), ParameterError);
    CHECK_THROWS_AS(tutte_generalized_check(named_graph("K4"), 3), ParameterError);
}

TEST_CASE("perfect-matching lemma audit") {
    Graph g = random_regular(16, 8, 3);
    std::vector<int> u(16);
    std::iota(u.begin(), u.end(), 0);
    auto r = pm_lemma_check(g, 8, 2.0, u);
    CHECK(r.ok);
    CHECK(r.min_degree_in_u == 8);
    CHECK(r.degree_precondition);
    CHECK(!r.spectral_precondition);  // 2.0 is not below 8/50
    std::vector<int> star_u{0, 1, 2, 3};
    auto s = pm_lemma_check(named_graph("star3"), 3, 1.0, star_u);
    CHECK(!s.ok);
}
