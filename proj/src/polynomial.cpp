#include "pmx/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "pmx/error.hpp"

namespace pmx {

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto valid = !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/' || ch == '+';
    });
    if (!valid) throw FormatError("bad rational '" + s + "'");
    if (s.front() == '+') s.erase(s.begin());
    Rational q;
    if (q.set_str(s, 10) != 0) throw FormatError("bad rational '" + std::string(text) + "'");
    if (q.get_den() == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    q.canonicalize();
    return q;
}

std::string to_string(const Variable& v) {
    return std::string(v.kind == VarKind::Edge ? "x_" : "xb_") + std::to_string(v.edge.u) + "_" + std::to_string(v.edge.v);
}

Variable parse_variable(std::string_view name) {
    VarKind kind;
    std::string_view rest;
    if (name.substr(0, 3) == "xb_") {
        kind = VarKind::Twin;
        rest = name.substr(3);
    } else if (name.substr(0, 2) == "x_") {
        kind = VarKind::Edge;
        rest = name.substr(2);
    } else {
        throw FormatError("bad variable name '" + std::string(name) + "'");
    }
    auto sep = rest.find('_');
    if (sep == std::string_view::npos) throw FormatError("bad variable name '" + std::string(name) + "'");
    int u = -1, v = -1;
    auto a = rest.substr(0, sep), b = rest.substr(sep + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), u);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), v);
    if (r1.ec != std::errc{} || r1.ptr != a.data() + a.size() || r2.ec != std::errc{} || r2.ptr != b.data() + b.size() ||
        u < 0 || v < 0 || u == v) {
        throw FormatError("bad variable name '" + std::string(name) + "'");
    }
    return {kind, Edge(u, v)};
}

Monomial::Monomial(const Variable& v, int exponent) {
    if (exponent > 0) {
        factors_.emplace_back(v, exponent);
        degree_ = exponent;
    }
}

bool Monomial::contains(const Variable& v) const {
    return std::any_of(factors_.begin(), factors_.end(), [&](const auto& f) { return f.first == v; });
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin(), b = other.factors_.begin();
    while (a != factors_.end() || b != other.factors_.end()) {
        if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            out.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            out.factors_.push_back(*b++);
        } else {
            out.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    out.degree_ = degree_ + other.degree_;
    return out;
}

Monomial Monomial::multilinear() const {
    Monomial out;
    out.factors_ = factors_;
    for (auto& f : out.factors_) f.second = 1;
    out.degree_ = static_cast<int>(out.factors_.size());
    return out;
}

bool Monomial::Order::operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree_ != b.degree_) return a.degree_ > b.degree_;
    return a.factors_ < b.factors_;
}

std::string to_string(const Monomial& m) {
    std::string out;
    for (const auto& [v, e] : m.factors()) {
        if (!out.empty()) out += '.';
        out += to_string(v);
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

Polynomial Polynomial::constant(const Rational& c) {
    Polynomial p;
    p.add_term(Monomial{}, c);
    return p;
}

Polynomial Polynomial::variable(const Variable& v) {
    Polynomial p;
    p.add_term(Monomial(v), 1);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

int Polynomial::degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

std::set<Variable> Polynomial::variables() const {
    std::set<Variable> out;
    for (const auto& [m, c] : terms_)
        for (const auto& f : m.factors()) out.insert(f.first);
    return out;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, coef] : terms_) coef *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Polynomial Polynomial::multilinear() const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.add_term(m.multilinear(), c);
    return out;
}

Polynomial Polynomial::monic() const {
    if (terms_.empty()) return *this;
    Rational lead = terms_.begin()->second;
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c /= lead;
    return out;
}

Polynomial Polynomial::substitute(const std::function<Polynomial(const Variable&)>& image) const {
    Polynomial out;
    std::map<Variable, Polynomial> cache;
    for (const auto& [m, c] : terms_) {
        Polynomial term = Polynomial::constant(c);
        for (const auto& [v, e] : m.factors()) {
            auto it = cache.find(v);
            if (it == cache.end()) it = cache.emplace(v, image(v)).first;
            for (int k = 0; k < e; ++k) term = term * it->second;
        }
        out += term;
    }
    return out;
}

Polynomial Polynomial::rename(const std::map<Variable, Variable>& map) const {
    return substitute([&](const Variable& v) {
        auto it = map.find(v);
        return Polynomial::variable(it == map.end() ? v : it->second);
    });
}

bool Polynomial::operator<(const Polynomial& o) const {
    Monomial::Order order;
    auto a = terms_.begin(), b = o.terms_.begin();
    for (; a != terms_.end() && b != o.terms_.end(); ++a, ++b) {
        if (order(a->first, b->first)) return true;
        if (order(b->first, a->first)) return false;
        if (a->second != b->second) return a->second < b->second;
    }
    return a == terms_.end() && b != o.terms_.end();
}

std::string to_string(const Polynomial& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        if (!m.is_one()) out += "*" + to_string(m);
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Monomial parse_monomial(std::string_view text) {
    Monomial m;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto dot = text.find('.', start);
        auto factor = trim(text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (factor.empty()) throw FormatError("empty factor in monomial '" + std::string(text) + "'");
        int exp = 1;
        if (auto caret = factor.find('^'); caret != std::string_view::npos) {
            auto es = factor.substr(caret + 1);
            auto r = std::from_chars(es.data(), es.data() + es.size(), exp);
            if (r.ec != std::errc{} || r.ptr != es.data() + es.size() || exp < 1) {
                throw FormatError("bad exponent in '" + std::string(factor) + "'");
            }
            factor = factor.substr(0, caret);
        }
        m = m * Monomial(parse_variable(factor), exp);
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return m;
}

}  // namespace

Polynomial parse_polynomial(std::string_view text) {
    Polynomial p;
    text = trim(text);
    if (text.empty()) throw FormatError("empty polynomial");
    // Split on " + " at the top level; coefficients carry their own sign.
    std::size_t start = 0;
    while (true) {
        auto plus = text.find(" + ", start);
        auto term = trim(text.substr(start, plus == std::string_view::npos ? std::string_view::npos : plus - start));
        if (term.empty()) throw FormatError("empty term in '" + std::string(text) + "'");
        auto star = term.find('*');
        if (star == std::string_view::npos) {
            if (!term.empty() && (std::isdigit(static_cast<unsigned char>(term.front())) || term.front() == '-' ||
                                  term.front() == '+')) {
                p.add_term(Monomial{}, parse_rational(term));
            } else {
                p.add_term(parse_monomial(term), 1);
            }
        } else {
            p.add_term(parse_monomial(term.substr(star + 1)), parse_rational(trim(term.substr(0, star))));
        }
        if (plus == std::string_view::npos) break;
        start = plus + 3;
    }
    return p;
}

}  // namespace pmx
