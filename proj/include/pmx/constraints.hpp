#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmx/graph.hpp"
#include "pmx/polynomial.hpp"

namespace pmx {

enum class EquationTag { Booleanity, Vertex, TwinLink, Other };

std::string to_string(EquationTag tag);
EquationTag parse_tag(std::string_view text);

// poly = 0.
struct Equation {
    Polynomial poly;
    EquationTag tag = EquationTag::Other;
    int source = -1;  // vertex id for vertex equations

    bool operator==(const Equation& o) const { return poly == o.poly; }
};

struct SystemMeta {
    std::optional<Graph> graph;  // present for Card/PM encodings
    std::vector<long long> b;
    std::string source;
};

struct ConstraintSystem {
    std::vector<Variable> vars;  // sorted; exactly the variables used by equations
    std::vector<Equation> equations;
    SystemMeta meta;

    void refresh_variables();
    // Some equation normalizes to a non-zero constant.
    bool has_constant_contradiction() const;
    std::size_t count(EquationTag tag) const;
};

// x_e(1 - x_e) = 0 for every edge, sum_{e ~ v} x_e = b_v for every vertex,
// and with twins also the twin booleanity axioms and 1 - x_e - xb_e = 0.
ConstraintSystem encode_card(const Graph& g, const std::vector<long long>& b, bool twins = false);
ConstraintSystem encode_card(const Graph& g, long long t, bool twins = false);
ConstraintSystem encode_pm(const Graph& g, bool twins = false);

// Canonical form: booleanity-shaped equations c(v^2 - v) are kept raw as
// v^2 - v; every other equation is multilinearized; 0 = 0 is dropped; each
// equation is scaled to leading coefficient 1 (so constant-false equations
// become 1 = 0); duplicates collapse; equations are sorted.
ConstraintSystem normalize(const ConstraintSystem& cs);
Polynomial normalize_polynomial(const Polynomial& p);

// Image of a variable under an affine restriction.
struct Literal {
    enum class Kind { Zero, One, Pos, Neg };
    Kind kind = Kind::Zero;
    Variable var;

    static Literal zero() { return {Kind::Zero, {}}; }
    static Literal one() { return {Kind::One, {}}; }
    static Literal pos(const Variable& v) { return {Kind::Pos, v}; }
    static Literal neg(const Variable& v) { return {Kind::Neg, v}; }

    Literal complement() const;
    bool operator==(const Literal& o) const {
        return kind == o.kind && ((kind != Kind::Pos && kind != Kind::Neg) || var == o.var);
    }
};

std::string to_string(const Literal& l);  // "0", "1", "x_u_v", "~x_u_v"
Literal parse_literal(std::string_view text);

struct Restriction {
    std::map<Variable, Literal> assignment;  // keyed by edge-kind variables
};

struct RestrictOptions {
    // Neg(y) becomes the twin variable yb instead of 1 - y.
    bool negation_as_twin = false;
};

// Polynomial image of a literal: 0, 1, y, and 1 - y (or the twin of y).
Polynomial literal_polynomial(const Literal& l, const RestrictOptions& opts = {});

// Substitutes every variable (twins receive the complement of their
// partner's image) and normalizes. Throws ParameterError for an edge variable
// missing from rho, or an explicit twin entry that is not the complement.
ConstraintSystem apply_restriction(const ConstraintSystem& cs, const Restriction& rho,
                                   const RestrictOptions& opts = {});

// normalize(cs1) renamed by var_map equals normalize(cs2) as sets. Throws
// ParameterError if var_map is not injective or misses a variable of cs1.
bool check_equiv(const ConstraintSystem& cs1, const ConstraintSystem& cs2,
                 const std::map<Variable, Variable>& var_map);
bool check_equiv(const ConstraintSystem& cs1, const ConstraintSystem& cs2);

// Card(G, b) -> Card(G, d - b) via x_e -> ~x_e. Needs a d-regular source graph.
std::pair<Restriction, ConstraintSystem> complement_instance(const ConstraintSystem& cs);

// Exhaustive 0/1 search over the edge-kind variables; twins are forced to the
// complement of their partner. Throws GuardError above max_vars.
std::optional<std::map<Variable, int>> sat_bruteforce(const ConstraintSystem& cs, int max_vars = 24);

// True iff every equation vanishes at the assignment (twins derived).
bool satisfies(const ConstraintSystem& cs, const std::map<Variable, int>& assignment);

// Text format: "#vars ...", "#source ...", "#graph n u-v ...", "#b ...",
// then one "poly = 0  # tag" per line.
void write_constraints(std::ostream& out, const ConstraintSystem& cs);
ConstraintSystem read_constraints(std::istream& in);
ConstraintSystem load_constraints(const std::string& path);
void save_constraints(const std::string& path, const ConstraintSystem& cs);

}  // namespace pmx
