#include "pmx/constraints.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "pmx/error.hpp"

namespace pmx {

std::string to_string(EquationTag tag) {
    switch (tag) {
        case EquationTag::Booleanity: return "booleanity";
        case EquationTag::Vertex: return "vertex";
        case EquationTag::TwinLink: return "twin-link";
        case EquationTag::Other: return "other";
    }
    return "other";
}

EquationTag parse_tag(std::string_view text) {
    if (text == "booleanity") return EquationTag::Booleanity;
    if (text == "vertex") return EquationTag::Vertex;
    if (text == "twin-link") return EquationTag::TwinLink;
    if (text == "other") return EquationTag::Other;
    throw FormatError("unknown equation tag '" + std::string(text) + "'");
}

void ConstraintSystem::refresh_variables() {
    std::set<Variable> all;
    for (const auto& eq : equations) {
        auto vs = eq.poly.variables();
        all.insert(vs.begin(), vs.end());
    }
    vars.assign(all.begin(), all.end());
}

bool ConstraintSystem::has_constant_contradiction() const {
    return std::any_of(equations.begin(), equations.end(), [](const Equation& eq) {
        return eq.poly.is_constant() && !eq.poly.is_zero();
    });
}

std::size_t ConstraintSystem::count(EquationTag tag) const {
    return static_cast<std::size_t>(
        std::count_if(equations.begin(), equations.end(), [tag](const Equation& eq) { return eq.tag == tag; }));
}

namespace {

Polynomial booleanity(const Variable& v) {
    // x (1 - x)
    Polynomial x = Polynomial::variable(v);
    return x * (Polynomial::constant(1) - x);
}

bool booleanity_shaped(const Polynomial& p) {
    if (p.terms().size() != 2) return false;
    auto it = p.terms().begin();
    const auto& [m2, c2] = *it++;
    const auto& [m1, c1] = *it;
    return m2.factors().size() == 1 && m2.factors()[0].second == 2 && m1.factors().size() == 1 &&
           m1.factors()[0].second == 1 && m1.factors()[0].first == m2.factors()[0].first && c1 == -c2;
}

}  // namespace

ConstraintSystem encode_card(const Graph& g, const std::vector<long long>& b, bool twins) {
    if (b.size() != static_cast<std::size_t>(g.num_vertices())) {
        throw ParameterError("encode_card: b has " + std::to_string(b.size()) + " entries for " +
                             std::to_string(g.num_vertices()) + " vertices");
    }
    ConstraintSystem cs;
    for (const auto& e : g.edges()) {
        cs.equations.push_back({booleanity(Variable::x(e.u, e.v)), EquationTag::Booleanity, -1});
    }
    if (twins) {
        for (const auto& e : g.edges()) {
            cs.equations.push_back({booleanity(Variable::twin(e.u, e.v)), EquationTag::Booleanity, -1});
        }
    }
    for (int v = 0; v < g.num_vertices(); ++v) {
        Polynomial p = Polynomial::constant(-Rational(static_cast<long>(b[static_cast<std::size_t>(v)])));
        for (int w : g.neighbors(v)) p += Polynomial::variable(Variable::x(v, w));
        cs.equations.push_back({std::move(p), EquationTag::Vertex, v});
    }
    if (twins) {
        for (const auto& e : g.edges()) {
            Polynomial p = Polynomial::constant(1) - Polynomial::variable(Variable::x(e.u, e.v)) -
                           Polynomial::variable(Variable::twin(e.u, e.v));
            cs.equations.push_back({std::move(p), EquationTag::TwinLink, -1});
        }
    }
    cs.meta.graph = g;
    cs.meta.b = b;
    cs.meta.source = twins ? "card+twins" : "card";
    cs.refresh_variables();
    return cs;
}

ConstraintSystem encode_card(const Graph& g, long long t, bool twins) {
    return encode_card(g, std::vector<long long>(static_cast<std::size_t>(g.num_vertices()), t), twins);
}

ConstraintSystem encode_pm(const Graph& g, bool twins) {
    auto cs = encode_card(g, 1LL, twins);
    cs.meta.source = twins ? "pm+twins" : "pm";
    return cs;
}

Polynomial normalize_polynomial(const Polynomial& p) {
    if (booleanity_shaped(p)) return p.monic();
    return p.multilinear().monic();
}

ConstraintSystem normalize(const ConstraintSystem& cs) {
    std::map<Polynomial, Equation> unique;
    for (const auto& eq : cs.equations) {
        Polynomial p = normalize_polynomial(eq.poly);
        if (p.is_zero()) continue;
        unique.try_emplace(p, Equation{p, eq.tag, eq.source});
    }
    ConstraintSystem out;
    out.meta = cs.meta;
    out.equations.reserve(unique.size());
    for (auto& [p, eq] : unique) out.equations.push_back(std::move(eq));
    out.refresh_variables();
    return out;
}

Literal Literal::complement() const {
    switch (kind) {
        case Kind::Zero: return one();
        case Kind::One: return zero();
        case Kind::Pos: return neg(var);
        case Kind::Neg: return pos(var);
    }
    return *this;
}

std::string to_string(const Literal& l) {
    switch (l.kind) {
        case Literal::Kind::Zero: return "0";
        case Literal::Kind::One: return "1";
        case Literal::Kind::Pos: return to_string(l.var);
        case Literal::Kind::Neg: return "~" + to_string(l.var);
    }
    return "0";
}

Literal parse_literal(std::string_view text) {
    if (text == "0") return Literal::zero();
    if (text == "1") return Literal::one();
    if (!text.empty() && text.front() == '~') return Literal::neg(parse_variable(text.substr(1)));
    return Literal::pos(parse_variable(text));
}

Polynomial literal_polynomial(const Literal& l, const RestrictOptions& opts) {
    switch (l.kind) {
        case Literal::Kind::Zero: return {};
        case Literal::Kind::One: return Polynomial::constant(1);
        case Literal::Kind::Pos: return Polynomial::variable(l.var);
        case Literal::Kind::Neg:
            if (opts.negation_as_twin) return Polynomial::variable(l.var.partner());
            return Polynomial::constant(1) - Polynomial::variable(l.var);
    }
    return {};
}

ConstraintSystem apply_restriction(const ConstraintSystem& cs, const Restriction& rho, const RestrictOptions& opts) {
    std::map<Variable, Polynomial> images;
    for (const auto& v : cs.vars) {
        const Variable base = v.kind == VarKind::Edge ? v : v.partner();
        auto it = rho.assignment.find(base);
        if (it == rho.assignment.end()) {
            throw ParameterError("apply_restriction: dangling variable " + to_string(base));
        }
        Literal lit = v.kind == VarKind::Edge ? it->second : it->second.complement();
        if (v.kind == VarKind::Twin) {
            if (auto explicit_twin = rho.assignment.find(v);
                explicit_twin != rho.assignment.end() && !(explicit_twin->second == lit)) {
                throw ParameterError("apply_restriction: twin " + to_string(v) + " is not mapped to the complement of " +
                                     to_string(base));
            }
        }
        images.emplace(v, literal_polynomial(lit, opts));
    }
    ConstraintSystem out;
    out.meta.source = "restricted(" + cs.meta.source + ")";
    out.equations.reserve(cs.equations.size());
    for (const auto& eq : cs.equations) {
        Polynomial p = eq.poly.substitute([&](const Variable& v) { return images.at(v); });
        out.equations.push_back({std::move(p), eq.tag, eq.source});
    }
    return normalize(out);
}

bool check_equiv(const ConstraintSystem& cs1, const ConstraintSystem& cs2,
                 const std::map<Variable, Variable>& var_map) {
    std::set<Variable> targets;
    for (const auto& [from, to] : var_map) {
        if (!targets.insert(to).second) {
            throw ParameterError("check_equiv: variable map is not injective at " + to_string(to));
        }
    }
    ConstraintSystem a = normalize(cs1), b = normalize(cs2);
    for (const auto& v : a.vars) {
        if (!var_map.count(v)) throw ParameterError("check_equiv: variable map misses " + to_string(v));
    }
    ConstraintSystem renamed;
    for (const auto& eq : a.equations) renamed.equations.push_back({eq.poly.rename(var_map), eq.tag, eq.source});
    renamed = normalize(renamed);
    if (renamed.equations.size() != b.equations.size()) return false;
    for (std::size_t i = 0; i < b.equations.size(); ++i) {
        if (!(renamed.equations[i].poly == b.equations[i].poly)) return false;
    }
    return true;
}

bool check_equiv(const ConstraintSystem& cs1, const ConstraintSystem& cs2) {
    std::map<Variable, Variable> identity;
    for (const auto& v : normalize(cs1).vars) identity.emplace(v, v);
    return check_equiv(cs1, cs2, identity);
}

std::pair<Restriction, ConstraintSystem> complement_instance(const ConstraintSystem& cs) {
    if (!cs.meta.graph) throw ParameterError("complement_instance: system carries no source graph");
    const Graph& g = *cs.meta.graph;
    auto d = g.regular_degree();
    if (!d) throw ParameterError("complement_instance: source graph is not regular");
    Restriction rho;
    for (const auto& e : g.edges()) {
        Variable x = Variable::x(e.u, e.v);
        rho.assignment.emplace(x, Literal::neg(x));
    }
    ConstraintSystem out = apply_restriction(cs, rho);
    out.meta.graph = g;
    out.meta.b.clear();
    for (long long bv : cs.meta.b) out.meta.b.push_back(*d - bv);
    out.meta.source = "complement(" + cs.meta.source + ")";
    return {std::move(rho), std::move(out)};
}

namespace {

struct CompiledTerm {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    long long coef = 0;
};

}  // namespace

std::optional<std::map<Variable, int>> sat_bruteforce(const ConstraintSystem& cs, int max_vars) {
    std::set<Variable> free_set;
    for (const auto& v : cs.vars) free_set.insert(v.kind == VarKind::Edge ? v : v.partner());
    const std::vector<Variable> free(free_set.begin(), free_set.end());
    const int k = static_cast<int>(free.size());
    if (k > max_vars || k > 62) {
        throw GuardError("sat_bruteforce: " + std::to_string(k) + " variables exceeds the limit of " +
                         std::to_string(std::min(max_vars, 62)));
    }
    std::map<Variable, int> index;
    for (int i = 0; i < k; ++i) index.emplace(free[static_cast<std::size_t>(i)], i);

    std::vector<std::vector<CompiledTerm>> compiled;
    for (const auto& eq : cs.equations) {
        mpz_class lcm = 1;
        for (const auto& [m, c] : eq.poly.terms()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
        std::vector<CompiledTerm> terms;
        for (const auto& [m, c] : eq.poly.terms()) {
            CompiledTerm t;
            mpz_class scaled = c.get_num() * (lcm / c.get_den());
            if (!scaled.fits_slong_p()) throw GuardError("sat_bruteforce: coefficient too large");
            t.coef = scaled.get_si();
            for (const auto& [v, e] : m.factors()) {
                if (v.kind == VarKind::Edge) t.pos |= std::uint64_t{1} << index.at(v);
                else t.neg |= std::uint64_t{1} << index.at(v.partner());
            }
            if (t.pos & t.neg) continue;  // x * xb vanishes on every 0/1 point
            terms.push_back(t);
        }
        compiled.push_back(std::move(terms));
    }
    std::sort(compiled.begin(), compiled.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });

    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t a = 0; a < total; ++a) {
        bool ok = true;
        for (const auto& terms : compiled) {
            __int128 sum = 0;
            for (const auto& t : terms) {
                if ((a & t.pos) == t.pos && (a & t.neg) == 0) sum += t.coef;
            }
            if (sum != 0) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::map<Variable, int> out;
            for (int i = 0; i < k; ++i) out.emplace(free[static_cast<std::size_t>(i)], static_cast<int>((a >> i) & 1U));
            return out;
        }
    }
    return std::nullopt;
}

bool satisfies(const ConstraintSystem& cs, const std::map<Variable, int>& assignment) {
    auto value = [&](const Variable& v) -> Polynomial {
        const Variable base = v.kind == VarKind::Edge ? v : v.partner();
        auto it = assignment.find(base);
        if (it == assignment.end()) throw ParameterError("satisfies: no value for " + to_string(base));
        int x = v.kind == VarKind::Edge ? it->second : 1 - it->second;
        return Polynomial::constant(x);
    };
    return std::all_of(cs.equations.begin(), cs.equations.end(),
                       [&](const Equation& eq) { return eq.poly.substitute(value).is_zero(); });
}

void write_constraints(std::ostream& out, const ConstraintSystem& cs) {
    out << "#vars";
    for (const auto& v : cs.vars) out << ' ' << to_string(v);
    out << '\n';
    if (!cs.meta.source.empty()) out << "#source " << cs.meta.source << '\n';
    if (cs.meta.graph) {
        out << "#graph " << cs.meta.graph->num_vertices();
        for (const auto& e : cs.meta.graph->edges()) out << ' ' << e.u << '-' << e.v;
        out << '\n';
    }
    if (!cs.meta.b.empty()) {
        out << "#b";
        for (long long bv : cs.meta.b) out << ' ' << bv;
        out << '\n';
    }
    for (const auto& eq : cs.equations) {
        out << to_string(eq.poly) << " = 0  # " << to_string(eq.tag);
        if (eq.source >= 0) out << ' ' << eq.source;
        out << '\n';
    }
}

ConstraintSystem read_constraints(std::istream& in) {
    ConstraintSystem cs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            if (line.rfind("#", 0) == 0) {
                std::istringstream hs(line);
                std::string key;
                hs >> key;
                if (key == "#source") {
                    std::getline(hs >> std::ws, cs.meta.source);
                } else if (key == "#graph") {
                    int n = 0;
                    if (!(hs >> n)) throw FormatError("bad #graph header");
                    std::vector<Edge> edges;
                    std::string tok;
                    while (hs >> tok) {
                        auto dash = tok.find('-');
                        if (dash == std::string::npos) throw FormatError("bad edge '" + tok + "' in #graph");
                        edges.emplace_back(std::stoi(tok.substr(0, dash)), std::stoi(tok.substr(dash + 1)));
                    }
                    cs.meta.graph = Graph(n, std::move(edges));
                } else if (key == "#b") {
                    long long bv;
                    while (hs >> bv) cs.meta.b.push_back(bv);
                }
                // "#vars" is recomputed from the equations.
                continue;
            }
            Equation eq;
            std::string body = line;
            bool tagged = false;
            if (auto hash = body.find('#'); hash != std::string::npos) {
                std::istringstream ts(body.substr(hash + 1));
                std::string tag;
                if (ts >> tag) {
                    eq.tag = parse_tag(tag);
                    tagged = true;
                    int src;
                    if (ts >> src) eq.source = src;
                }
                body = body.substr(0, hash);
            }
            auto eqpos = body.find('=');
            if (eqpos == std::string::npos) throw FormatError("missing '='");
            eq.poly = parse_polynomial(body.substr(0, eqpos)) - parse_polynomial(body.substr(eqpos + 1));
            if (!tagged && booleanity_shaped(eq.poly)) eq.tag = EquationTag::Booleanity;
            cs.equations.push_back(std::move(eq));
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const ParameterError& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::logic_error& e) {
            throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cs.refresh_variables();
    return cs;
}

ConstraintSystem load_constraints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    try {
        return read_constraints(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_constraints(const std::string& path, const ConstraintSystem& cs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_constraints(out, cs);
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace pmx
