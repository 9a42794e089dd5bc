#pragma once

#include <gmpxx.h>

#include <compare>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmx/graph.hpp"

namespace pmx {

using Rational = mpq_class;

std::string to_string(const Rational& q);
// Accepts "a", "-a", "a/b". Throws FormatError.
Rational parse_rational(std::string_view text);

enum class VarKind : std::uint8_t { Edge = 0, Twin = 1 };

// x_{u,v} (Edge) or its complement twin xb_{u,v}. Ordered by (kind, edge).
struct Variable {
    VarKind kind = VarKind::Edge;
    Edge edge;

    static Variable x(int u, int v) { return {VarKind::Edge, Edge(u, v)}; }
    static Variable twin(int u, int v) { return {VarKind::Twin, Edge(u, v)}; }

    Variable partner() const { return {kind == VarKind::Edge ? VarKind::Twin : VarKind::Edge, edge}; }

    auto operator<=>(const Variable&) const = default;
};

// "x_u_v" / "xb_u_v".
std::string to_string(const Variable& v);
Variable parse_variable(std::string_view name);

// Product of variable powers, factors sorted by variable.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(const Variable& v, int exponent = 1);

    const std::vector<std::pair<Variable, int>>& factors() const { return factors_; }
    int degree() const { return degree_; }
    bool is_one() const { return factors_.empty(); }
    bool contains(const Variable& v) const;

    Monomial operator*(const Monomial& other) const;
    // All exponents clamped to 1.
    Monomial multilinear() const;

    bool operator==(const Monomial& o) const { return factors_ == o.factors_; }

    // Graded order: higher degree first, then lexicographic on factors.
    struct Order {
        bool operator()(const Monomial& a, const Monomial& b) const;
    };

private:
    std::vector<std::pair<Variable, int>> factors_;
    int degree_ = 0;
};

std::string to_string(const Monomial& m);

// Sparse polynomial with exact rational coefficients; zero terms never stored.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, Monomial::Order>;

    Polynomial() = default;
    static Polynomial constant(const Rational& c);
    static Polynomial variable(const Variable& v);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_term() const;
    // -1 for the zero polynomial.
    int degree() const;
    std::set<Variable> variables() const;

    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    Polynomial operator-() const;

    Polynomial multilinear() const;
    // Divides by the leading coefficient (graded order).
    Polynomial monic() const;
    Polynomial substitute(const std::function<Polynomial(const Variable&)>& image) const;
    Polynomial rename(const std::map<Variable, Variable>& map) const;

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    // Total order used to canonicalize equation sets.
    bool operator<(const Polynomial& o) const;

private:
    Terms terms_;
};

// Text form: "c1*m1 + c2*m2 + c0", monomials as '.'-joined factors with
// optional "^k". The zero polynomial prints as "0".
std::string to_string(const Polynomial& p);
Polynomial parse_polynomial(std::string_view text);

}  // namespace pmx
