#include <random>

#include "doctest.h"
#include "pmx/constraints.hpp"
#include "pmx/error.hpp"
#include "pmx/graph.hpp"
#include "pmx/refute.hpp"
#include "oracles.hpp"

using namespace pmx;

namespace {

Polynomial P(const char* text) { return parse_polynomial(text); }

ConstraintSystem system_of(std::initializer_list<const char*> polys) {
    ConstraintSystem cs;
    for (const char* p : polys) cs.equations.push_back({P(p), EquationTag::Other, -1});
    cs.refresh_variables();
    return cs;
}

// Card(G, b) with random small b, then a random restriction onto a few
// fresh variables.
ConstraintSystem random_system(std::mt19937_64& rng, bool twins) {
    Graph g = oracle::random_graph(3 + static_cast<int>(rng() % 3), 0.6, rng);
    std::vector<long long> b;
    for (int v = 0; v < g.num_vertices(); ++v) b.push_back(static_cast<long long>(rng() % 3));
    return encode_card(g, b, twins);
}

}  // namespace

TEST_CASE("primality") {
    CHECK(is_prime(2));
    CHECK(is_prime(10007));
    CHECK(is_prime(65537));
    CHECK(!is_prime(1));
    CHECK(!is_prime(10005));
    CHECK(!is_prime(65535));
}

TEST_CASE("PC decision matches the dense oracle") {
    std::mt19937_64 rng(77);
    int refuted = 0, compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const bool twins = trial % 3 == 0;
        ConstraintSystem cs = random_system(rng, twins);
        if (cs.vars.size() > (twins ? 16u : 8u)) continue;
        PcOptions o;
        o.eliminate_twins = twins;
        for (std::uint32_t p : {10007u, 3u}) {
            o.prime = p;
            for (int d = 0; d <= 3; ++d) {
                const bool lib = pc_degree_decide(cs, d, o).refuted;
                CHECK(lib == oracle::dense_pc_refutes(cs, d, p));
                refuted += lib;
                ++compared;
            }
        }
    }
    CHECK(compared > 200);
    CHECK(refuted > 20);
}

TEST_CASE("PC on perfect-matching fixtures") {
    // Multilinear degree: PM of an odd cycle dies at degree 1 (summing the
    // vertex equations gives 2 * sum x = n).
    for (const char* name : {"C3", "C5", "C7", "K3", "P3"}) {
        auto r = pc_degree_search(encode_pm(named_graph(name)), 4);
        REQUIRE(r.degree);
        CHECK(*r.degree == 1);
        CHECK(r.runs.size() == 2);
    }
    CHECK(!pc_degree_search(encode_pm(named_graph("C6")), 6).degree);
    // Independent check of K5 through the dense oracle.
    auto k5 = encode_pm(named_graph("K5"));
    auto r = pc_degree_search(k5, 4);
    REQUIRE(r.degree);
    CHECK(*r.degree == 3);
    CHECK(oracle::dense_pc_refutes(k5, 3, 10007));
    CHECK(!oracle::dense_pc_refutes(k5, 2, 10007));
}

TEST_CASE("twins kept as variables versus eliminated") {
    auto cs = encode_pm(named_graph("C5"), true);
    PcOptions keep, elim;
    elim.eliminate_twins = true;
    auto a = pc_degree_search(cs, 4, keep), b = pc_degree_search(cs, 4, elim);
    REQUIRE(a.degree);
    REQUIRE(b.degree);
    CHECK(*b.degree <= *a.degree);
}

TEST_CASE("PC guards") {
    auto c3 = encode_pm(named_graph("C3"));
    PcOptions o;
    o.prime = 10005;
    CHECK_THROWS_AS(pc_degree_decide(c3, 1, o), ParameterError);
    o.prime = 2;
    CHECK_THROWS_AS(pc_degree_decide(c3, 1, o), ParameterError);
    o.allow_char2 = true;
    CHECK_NOTHROW(pc_degree_decide(c3, 1, o));
    CHECK_THROWS_AS(pc_degree_decide(encode_pm(named_graph("K12")), 1), GuardError);
    PcOptions tiny;
    tiny.basis_limit = 10;
    CHECK_THROWS_AS(pc_degree_decide(encode_pm(named_graph("K5")), 3, tiny), GuardError);
    CHECK_THROWS_AS(pc_degree_decide(c3, -1), ParameterError);
    // 1/p in a coefficient cannot be reduced mod p.
    o = {};
    o.prime = 3;
    CHECK_THROWS_AS(pc_degree_decide(system_of({"1/3*x_0_1 + -1"}), 1, o), ParameterError);
}

TEST_CASE("a constant contradiction is refuted at degree 0") {
    auto r = pc_degree_search(system_of({"x_0_1 + -1", "x_0_1"}), 3);
    REQUIRE(r.degree);
    CHECK(*r.degree == 1);
    CHECK(*pc_degree_search(system_of({"2"}), 3).degree == 0);
}

TEST_CASE("SoS verifier is exact") {
    auto cs = system_of({"x_0_1", "x_0_1 + -1"});
    SosCertificate cert{{P("-1"), P("1")}, {}};
    auto v = sos_verify(cs, cert);
    CHECK(v.valid);
    CHECK(v.degree == 1);
    SosCertificate off = cert;
    off.t[1] = P("1000001/1000000");
    CHECK(!sos_verify(cs, off).valid);
    SosCertificate wrong{{P("1")}, {}};
    CHECK_THROWS_AS(sos_verify(cs, wrong), ParameterError);

    // x^2 + 1 = 0: (-1) * (x^2 + 1) + x^2 = -1.
    auto sq = system_of({"x_0_1^2 + 1"});
    SosCertificate sq_cert{{P("-1")}, {P("x_0_1")}};
    auto sv = sos_verify(sq, sq_cert);
    CHECK(sv.valid);
    CHECK(sv.degree == 2);
    sq_cert.s[0] = P("1000001/1000000*x_0_1");
    CHECK(!sos_verify(sq, sq_cert).valid);
}

TEST_CASE("linear certificates are solved exactly and verified") {
    auto c3 = encode_pm(named_graph("C3"));
    auto cert = find_linear_certificate(c3, 2);
    REQUIRE(cert);
    auto v = sos_verify(c3, *cert);
    CHECK(v.valid);
    CHECK(v.degree <= 2);
    CHECK(!find_linear_certificate(encode_pm(named_graph("C4")), 2));
    auto back = certificate_from_json(certificate_to_json(*cert));
    CHECK(sos_verify(c3, back).valid);
    CHECK(back.t == cert->t);
    CHECK_THROWS_AS(certificate_from_json("{\"t\": 3}"), FormatError);
    CHECK_THROWS_AS(certificate_from_json("{\"t\": [[[\"1/x\", []]]], \"s\": []}"), FormatError);
}

TEST_CASE("pseudo-expectation search against the exact affine oracle") {
    for (const char* name : {"C3", "C4", "K2", "P3", "P4", "C5"}) {
        auto cs = encode_pm(named_graph(name));
        for (int d : {0, 2}) {
            const bool affine = oracle::pe_affine_feasible(cs, d);
            auto r = sos_pe_search(cs, d);
            if (!affine) {
                CHECK(r.status == "unknown");
                CHECK(r.note == "affine constraints are inconsistent");
            }
            if (r.status == "feasible") {
                CHECK(affine);
                REQUIRE(r.pe);
                CHECK(r.pe->affine_residual <= 1e-7);
                CHECK(r.pe->psd_residual <= 1e-7);
                CHECK(r.pe->values[0] == 1.0);
            }
        }
    }
    // A graph with a perfect matching has the point mass at that matching.
    auto c4 = sos_pe_search(encode_pm(named_graph("C4")), 2);
    CHECK(c4.status == "feasible");
    CHECK_THROWS_AS(sos_pe_search(encode_pm(named_graph("C4")), 3), ParameterError);
    CHECK_THROWS_AS(sos_pe_search(encode_pm(named_graph("K8")), 2), GuardError);
}
