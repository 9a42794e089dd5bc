#include <random>
#include <sstream>

#include "doctest.h"
#include "pmx/constraints.hpp"
#include "pmx/error.hpp"
#include "pmx/graph.hpp"
#include "oracles.hpp"

using namespace pmx;

namespace {

Polynomial P(const char* text) { return parse_polynomial(text); }

// Number of spanning subgraphs with the given degrees, by enumeration.
bool has_b_subgraph(const Graph& g, const std::vector<long long>& b) {
    const auto m = g.num_edges();
    for (std::uint64_t s = 0; s < (1ULL << m); ++s) {
        std::vector<long long> deg(static_cast<std::size_t>(g.num_vertices()), 0);
        for (std::size_t i = 0; i < m; ++i)
            if (s >> i & 1ULL) ++deg[static_cast<std::size_t>(g.edges()[i].u)], ++deg[static_cast<std::size_t>(g.edges()[i].v)];
        if (deg == b) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("polynomial arithmetic and text form") {
    Polynomial a = P("x_0_1 + 2*x_0_2 + -1");
    CHECK(to_string(a) == to_string(P(to_string(a).c_str())));
    Polynomial sq = a * a;
    CHECK(sq.degree() == 2);
    CHECK(sq.multilinear().degree() == 2);
    CHECK((a - a).is_zero());
    CHECK(P("3/4*x_0_1").monic() == P("x_0_1"));
    CHECK(P("x_0_1^2 + -1*x_0_1").multilinear().is_zero());
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK_THROWS_AS(parse_polynomial("x_0_1 + + 1"), FormatError);
    CHECK_THROWS_AS(parse_variable("y_1"), FormatError);
    CHECK_THROWS_AS(parse_rational("1/0"), FormatError);
}

TEST_CASE("encodings have the expected shape") {
    Graph g = named_graph("K4");
    auto pm = encode_pm(g);
    CHECK(pm.vars.size() == 6);
    CHECK(pm.count(EquationTag::Booleanity) == 6);
    CHECK(pm.count(EquationTag::Vertex) == 4);
    CHECK(pm.meta.source == "pm");
    auto tw = encode_card(g, 2, true);
    CHECK(tw.vars.size() == 12);
    CHECK(tw.count(EquationTag::Booleanity) == 12);
    CHECK(tw.count(EquationTag::TwinLink) == 6);
    for (const auto& eq : pm.equations)
        if (eq.tag == EquationTag::Vertex) CHECK(eq.poly.variables().size() == 3);
    CHECK_THROWS_AS(encode_card(g, std::vector<long long>{1, 1}), ParameterError);
}

TEST_CASE("normalize is canonical") {
    ConstraintSystem cs;
    cs.equations.push_back({P("2*x_0_1 + -2"), EquationTag::Other, -1});
    cs.equations.push_back({P("x_0_1 + -1"), EquationTag::Other, -1});
    cs.equations.push_back({P("0"), EquationTag::Other, -1});
    cs.equations.push_back({P("3*x_0_2^2 + -3*x_0_2"), EquationTag::Booleanity, -1});
    cs.equations.push_back({P("x_0_1^2.x_0_2 + x_0_1"), EquationTag::Other, -1});
    cs.refresh_variables();
    auto n = normalize(cs);
    CHECK(n.equations.size() == 3);
    // Booleanity stays raw; the cubic term is reduced.
    bool saw_raw = false, saw_ml = false;
    for (const auto& eq : n.equations) {
        if (eq.poly == P("x_0_2^2 + -1*x_0_2")) saw_raw = true;
        if (eq.poly == P("x_0_1.x_0_2 + x_0_1")) saw_ml = true;
    }
    CHECK(saw_raw);
    CHECK(saw_ml);
    CHECK(normalize(n).equations.size() == n.equations.size());
    ConstraintSystem bad;
    bad.equations.push_back({P("x_0_1^2 + -1*x_0_1 + 1"), EquationTag::Other, -1});
    bad.equations.push_back({P("x_0_1 + -1*x_0_1^2 + 2"), EquationTag::Other, -1});
    bad.refresh_variables();
    CHECK(!bad.has_constant_contradiction());
    bad.equations.push_back({P("5"), EquationTag::Other, -1});
    CHECK(bad.has_constant_contradiction());
}

TEST_CASE("literals") {
    Variable y = Variable::x(3, 4);
    CHECK(to_string(Literal::neg(y)) == "~x_3_4");
    CHECK(parse_literal("~x_3_4") == Literal::neg(y));
    CHECK(parse_literal("1") == Literal::one());
    CHECK(Literal::neg(y).complement() == Literal::pos(y));
    CHECK(Literal::zero().complement() == Literal::one());
    CHECK(literal_polynomial(Literal::neg(y)) == P("1 + -1*x_3_4"));
    RestrictOptions tw;
    tw.negation_as_twin = true;
    CHECK(literal_polynomial(Literal::neg(y), tw) == Polynomial::variable(Variable::twin(3, 4)));
    CHECK_THROWS_AS(parse_literal("~1"), FormatError);
}

TEST_CASE("restricting PM(C5) by fixing one matched edge") {
    // x_0_1 = 1 forces x_1_2 = x_0_4 = 0; C5 still has no perfect matching.
    Graph c5 = named_graph("C5");
    auto cs = encode_pm(c5);
    Restriction rho;
    for (const auto& e : c5.edges()) rho.assignment.emplace(Variable::x(e.u, e.v), Literal::pos(Variable::x(e.u, e.v)));
    rho.assignment[Variable::x(0, 1)] = Literal::one();
    rho.assignment[Variable::x(1, 2)] = Literal::zero();
    rho.assignment[Variable::x(0, 4)] = Literal::zero();
    auto r = apply_restriction(cs, rho);
    CHECK(r.vars.size() == 2);
    CHECK(!sat_bruteforce(r));
    Restriction missing = rho;
    missing.assignment.erase(Variable::x(0, 1));
    CHECK_THROWS_AS(apply_restriction(cs, missing), ParameterError);
}

TEST_CASE("twins follow their partner under restriction") {
    Graph k2 = named_graph("K2");
    auto cs = encode_pm(k2, true);
    Restriction rho;
    rho.assignment[Variable::x(0, 1)] = Literal::one();
    auto r = apply_restriction(cs, rho);
    CHECK(r.equations.empty());
    rho.assignment[Variable::twin(0, 1)] = Literal::one();
    CHECK_THROWS_AS(apply_restriction(cs, rho), ParameterError);
}

TEST_CASE("check_equiv with renaming") {
    auto a = encode_pm(named_graph("C3"));
    // The path 0-1-2-3 relabelled as 2-0-3-1.
    auto path = encode_pm(named_graph("P4"));
    auto b = encode_pm(Graph(4, {Edge(0, 2), Edge(0, 3), Edge(1, 3)}));
    std::map<Variable, Variable> map{{Variable::x(0, 1), Variable::x(0, 2)},
                                     {Variable::x(1, 2), Variable::x(0, 3)},
                                     {Variable::x(2, 3), Variable::x(1, 3)}};
    CHECK(check_equiv(path, b, map));
    // Any edge bijection of a triangle is induced by a vertex bijection.
    CHECK(check_equiv(a, a, {{Variable::x(0, 1), Variable::x(1, 2)},
                             {Variable::x(1, 2), Variable::x(0, 2)},
                             {Variable::x(0, 2), Variable::x(0, 1)}}));
    // On P4 swapping an end edge with the middle one is not induced by any
    // vertex map: the leaf equation x_0_1 = 1 would become x_1_2 = 1.
    auto p4 = encode_pm(named_graph("P4"));
    CHECK(!check_equiv(p4, p4, {{Variable::x(0, 1), Variable::x(1, 2)},
                                {Variable::x(1, 2), Variable::x(0, 1)},
                                {Variable::x(2, 3), Variable::x(2, 3)}}));
    CHECK(check_equiv(p4, p4, {{Variable::x(0, 1), Variable::x(2, 3)},
                               {Variable::x(1, 2), Variable::x(1, 2)},
                               {Variable::x(2, 3), Variable::x(0, 1)}}));
    CHECK(check_equiv(a, a));
    CHECK(!check_equiv(a, encode_card(named_graph("C3"), 2)));
    std::map<Variable, Variable> clash{{Variable::x(0, 1), Variable::x(0, 2)},
                                       {Variable::x(1, 2), Variable::x(0, 2)},
                                       {Variable::x(2, 3), Variable::x(1, 3)}};
    CHECK_THROWS_AS(check_equiv(path, b, clash), ParameterError);
    std::map<Variable, Variable> partial{{Variable::x(0, 1), Variable::x(0, 2)}};
    CHECK_THROWS_AS(check_equiv(path, b, partial), ParameterError);
}

TEST_CASE("complementing Card(G, b) gives Card(G, d - b)") {
    Graph g = random_regular(10, 5, 4);
    auto cs = encode_card(g, 2);
    auto [rho, comp] = complement_instance(cs);
    CHECK(rho.assignment.size() == g.num_edges());
    CHECK(check_equiv(comp, encode_card(g, 3)));
    CHECK(comp.meta.b == std::vector<long long>(10, 3));
    CHECK_THROWS_AS(complement_instance(encode_pm(named_graph("P3"))), ParameterError);
}

TEST_CASE("sat_bruteforce agrees with subgraph enumeration") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 120; ++trial) {
        Graph g = oracle::random_graph(2 + static_cast<int>(rng() % 6), 0.5, rng);
        if (g.num_edges() > 14) continue;
        std::vector<long long> b;
        for (int v = 0; v < g.num_vertices(); ++v) b.push_back(static_cast<long long>(rng() % 3));
        auto cs = encode_card(g, b, trial % 2 == 0);
        auto sol = sat_bruteforce(cs);
        CHECK(sol.has_value() == has_b_subgraph(g, b));
        if (sol) CHECK(satisfies(cs, *sol));
        CHECK(sat_bruteforce(encode_pm(g)).has_value() == oracle::has_perfect_matching(g));
    }
    CHECK_THROWS_AS(sat_bruteforce(encode_pm(named_graph("K8"))), GuardError);
}

TEST_CASE("constraint text round trip and errors") {
    auto cs = encode_card(random_regular(8, 3, 2), 1, true);
    std::stringstream buf;
    write_constraints(buf, cs);
    auto back = read_constraints(buf);
    CHECK(back.vars == cs.vars);
    CHECK(back.meta.source == cs.meta.source);
    CHECK(back.meta.b == cs.meta.b);
    REQUIRE(back.meta.graph);
    CHECK(*back.meta.graph == *cs.meta.graph);
    CHECK(check_equiv(back, cs));
    for (std::size_t i = 0; i < cs.equations.size(); ++i) CHECK(back.equations[i].tag == cs.equations[i].tag);

    std::istringstream bad("#vars x_0_1\nx_0_1 + -1\n");
    CHECK_THROWS_AS(read_constraints(bad), FormatError);
    std::istringstream bad2("#vars x_0_1\nx_0_1 + = 0\n");
    try {
        read_constraints(bad2);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}
