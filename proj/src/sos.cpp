#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pmx/error.hpp"
#include "pmx/refute.hpp"

namespace pmx {

SosVerdict sos_verify(const ConstraintSystem& cs, const SosCertificate& cert) {
    if (cert.t.size() != cs.equations.size()) {
        throw ParameterError("sos_verify: certificate has " + std::to_string(cert.t.size()) + " multipliers for " +
                             std::to_string(cs.equations.size()) + " equations");
    }
    SosVerdict out;
    Polynomial total;
    for (std::size_t i = 0; i < cert.t.size(); ++i) {
        if (cert.t[i].is_zero()) continue;
        total += cert.t[i] * cs.equations[i].poly;
        out.degree = std::max(out.degree, cert.t[i].degree() + std::max(cs.equations[i].poly.degree(), 0));
    }
    for (const auto& s : cert.s) {
        if (s.is_zero()) continue;
        total += s * s;
        out.degree = std::max(out.degree, 2 * s.degree());
    }
    out.valid = total == Polynomial::constant(-1);
    return out;
}

namespace {

// Every monomial (with powers) of degree <= k over vars.
std::vector<Monomial> raw_monomials(const std::vector<Variable>& vars, int k) {
    std::vector<Monomial> out{Monomial{}};
    std::vector<std::pair<Monomial, std::size_t>> frontier{{Monomial{}, 0}};
    for (int deg = 1; deg <= k; ++deg) {
        std::vector<std::pair<Monomial, std::size_t>> next;
        for (const auto& [m, first] : frontier) {
            for (std::size_t i = first; i < vars.size(); ++i) {
                Monomial grown = m * Monomial(vars[i]);
                out.push_back(grown);
                next.emplace_back(grown, i);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

std::optional<SosCertificate> find_linear_certificate(const ConstraintSystem& cs, int degree,
                                                      const std::vector<Polynomial>& squares) {
    std::set<Variable> var_set(cs.vars.begin(), cs.vars.end());
    for (const auto& eq : cs.equations) {
        auto vs = eq.poly.variables();
        var_set.insert(vs.begin(), vs.end());
    }
    const std::vector<Variable> vars(var_set.begin(), var_set.end());

    Polynomial target = Polynomial::constant(-1);
    for (const auto& s : squares) target -= s * s;

    struct Unknown {
        std::size_t eq;
        Monomial m;
    };
    std::vector<Unknown> unknowns;
    std::vector<Polynomial> products;
    std::map<Monomial, std::size_t, Monomial::Order> row_of;
    auto row_index = [&](const Monomial& m) { return row_of.try_emplace(m, row_of.size()).first->second; };
    for (const auto& [m, c] : target.terms()) row_index(m);
    for (std::size_t i = 0; i < cs.equations.size(); ++i) {
        const Polynomial& p = cs.equations[i].poly;
        if (p.is_zero()) continue;
        const int room = degree - std::max(p.degree(), 0);
        if (room < 0) continue;
        for (const auto& m : raw_monomials(vars, room)) {
            Polynomial prod;
            for (const auto& [pm, c] : p.terms()) prod.add_term(pm * m, c);
            for (const auto& [pm, c] : prod.terms()) row_index(pm);
            unknowns.push_back({i, m});
            products.push_back(std::move(prod));
        }
    }
    const std::size_t rows = row_of.size(), cols = unknowns.size();
    if (rows * (cols + 1) > 50'000'000) throw GuardError("find_linear_certificate: linear system too large");

    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols + 1));
    for (std::size_t j = 0; j < cols; ++j)
        for (const auto& [m, c] : products[j].terms()) a[row_of.at(m)][j] = c;
    for (const auto& [m, c] : target.terms()) a[row_of.at(m)][cols] = c;

    // Reduced row echelon form.
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t sel = r;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[r]);
        Rational inv = 1 / a[r][c];
        for (auto& v : a[r]) v *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rational f = a[i][c];
            for (std::size_t k = c; k <= cols; ++k) a[i][k] -= f * a[r][k];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (a[i][cols] != 0) return std::nullopt;

    SosCertificate cert;
    cert.t.assign(cs.equations.size(), Polynomial{});
    cert.s = squares;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        const auto& u = unknowns[pivot_cols[i]];
        cert.t[u.eq].add_term(u.m, a[i][cols]);
    }
    return cert;
}

namespace {

using nlohmann::json;

json poly_to_json(const Polynomial& p) {
    json out = json::array();
    for (const auto& [m, c] : p.terms()) {
        json names = json::array();
        for (const auto& [v, e] : m.factors())
            for (int k = 0; k < e; ++k) names.push_back(to_string(v));
        out.push_back(json::array({to_string(c), names}));
    }
    return out;
}

Polynomial poly_from_json(const json& j) {
    if (!j.is_array()) throw FormatError("certificate polynomial must be an array of terms");
    Polynomial p;
    for (const auto& term : j) {
        if (!term.is_array() || term.size() != 2 || !term[1].is_array()) {
            throw FormatError("certificate term must be [coefficient, [variables]]");
        }
        Rational c = term[0].is_string() ? parse_rational(term[0].get<std::string>())
                                         : Rational(term[0].get<long>());
        Monomial m;
        for (const auto& name : term[1]) m = m * Monomial(parse_variable(name.get<std::string>()));
        p.add_term(m, c);
    }
    return p;
}

}  // namespace

std::string certificate_to_json(const SosCertificate& cert) {
    json j;
    j["t"] = json::array();
    j["s"] = json::array();
    for (const auto& p : cert.t) j["t"].push_back(poly_to_json(p));
    for (const auto& p : cert.s) j["s"].push_back(poly_to_json(p));
    return j.dump(1);
}

SosCertificate certificate_from_json(const std::string& text) {
    SosCertificate cert;
    try {
        json j = json::parse(text);
        for (const auto& p : j.at("t")) cert.t.push_back(poly_from_json(p));
        if (j.contains("s"))
            for (const auto& p : j.at("s")) cert.s.push_back(poly_from_json(p));
    } catch (const json::exception& e) {
        throw FormatError(std::string("certificate: ") + e.what());
    }
    return cert;
}

SosCertificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return certificate_from_json(buf.str());
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

void save_certificate(const std::string& path, const SosCertificate& cert) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << certificate_to_json(cert) << '\n';
}

PeResult sos_pe_search(const ConstraintSystem& cs, int d, const PeOptions& opts) {
    if (d < 0 || d % 2 != 0) throw ParameterError("sos_pe_search: degree must be even and non-negative");

    // Twins become 1 - x; booleanity is implicit in multilinear moments.
    std::vector<Polynomial> axioms;
    std::set<Variable> var_set;
    for (const auto& eq : cs.equations) {
        Polynomial q = eq.poly
                           .substitute([](const Variable& v) {
                               return v.kind == VarKind::Twin ? Polynomial::constant(1) - Polynomial::variable(v.partner())
                                                              : Polynomial::variable(v);
                           })
                           .multilinear();
        if (q.is_zero()) continue;
        auto vs = q.variables();
        var_set.insert(vs.begin(), vs.end());
        axioms.push_back(std::move(q));
    }
    const std::vector<Variable> vars(var_set.begin(), var_set.end());
    const int k = static_cast<int>(vars.size());
    if (k > 63) throw GuardError("sos_pe_search: more than 63 variables");
    std::map<Variable, int> var_index;
    for (int i = 0; i < k; ++i) var_index.emplace(vars[static_cast<std::size_t>(i)], i);

    auto masks_up_to = [k](int deg) {
        std::vector<std::uint64_t> out;
        const std::uint64_t total = std::uint64_t{1} << k;
        for (int s = 0; s <= std::min(deg, k); ++s)
            for (std::uint64_t m = 0; m < total; ++m)
                if (__builtin_popcountll(m) == s) out.push_back(m);
        return out;
    };
    if (k > 24) throw GuardError("sos_pe_search: more than 24 variables");
    const auto half = masks_up_to(d / 2);
    if (half.size() > 500) throw GuardError("sos_pe_search: moment matrix larger than 500 x 500");
    const auto full = masks_up_to(d);
    std::map<std::uint64_t, int> full_index;
    for (std::size_t i = 0; i < full.size(); ++i) full_index.emplace(full[i], static_cast<int>(i));

    const int h = static_cast<int>(half.size()), f = static_cast<int>(full.size());
    std::vector<int> entry(static_cast<std::size_t>(h * h));
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(f);
    for (int a = 0; a < h; ++a)
        for (int b = 0; b < h; ++b) {
            int idx = full_index.at(half[static_cast<std::size_t>(a)] | half[static_cast<std::size_t>(b)]);
            entry[static_cast<std::size_t>(a * h + b)] = idx;
            weight[idx] += 1;
        }

    // Affine constraints: E[1] = 1 and E[q m] = 0 whenever deg(q m) <= d.
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<double> rhs;
    rows.push_back({{full_index.at(0), 1.0}});
    rhs.push_back(1.0);
    for (const auto& q : axioms) {
        std::vector<std::pair<std::uint64_t, double>> terms;
        for (const auto& [m, c] : q.terms()) {
            std::uint64_t mask = 0;
            for (const auto& fac : m.factors()) mask |= std::uint64_t{1} << var_index.at(fac.first);
            terms.emplace_back(mask, c.get_d());
        }
        for (std::uint64_t m : full) {
            std::map<int, double> row;
            bool fits = true;
            for (const auto& [tm, c] : terms) {
                auto it = full_index.find(tm | m);
                if (it == full_index.end()) {
                    fits = false;
                    break;
                }
                row[it->second] += c;
            }
            if (!fits) continue;
            std::vector<std::pair<int, double>> sparse;
            for (auto [i, c] : row)
                if (c != 0) sparse.emplace_back(i, c);
            if (sparse.empty()) continue;
            rows.push_back(std::move(sparse));
            rhs.push_back(0.0);
        }
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), f);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    const Eigen::VectorXd sqrt_w = weight.cwiseSqrt();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (auto [i, c] : rows[r]) a(static_cast<Eigen::Index>(r), i) = c / sqrt_w[i];
        b[static_cast<Eigen::Index>(r)] = rhs[r];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);

    PeResult out;
    out.status = "unknown";
    {
        Eigen::VectorXd z0 = cod.solve(b);
        if ((a * z0 - b).norm() > 1e-8 * std::max(1.0, b.norm())) {
            out.note = "affine constraints are inconsistent";
            return out;
        }
    }
    auto project_affine = [&](Eigen::VectorXd& y) {
        Eigen::VectorXd z = y.cwiseProduct(sqrt_w);
        z -= cod.solve(a * z - b);
        y = z.cwiseQuotient(sqrt_w);
    };
    auto moment = [&](const Eigen::VectorXd& y) {
        Eigen::MatrixXd m(h, h);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) m(i, j) = y[entry[static_cast<std::size_t>(i * h + j)]];
        return m;
    };

    Eigen::VectorXd y(f);
    for (int i = 0; i < f; ++i) y[i] = std::ldexp(1.0, -__builtin_popcountll(full[static_cast<std::size_t>(i)]));
    project_affine(y);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    for (int it = 0; it <= opts.iterations; ++it) {
        eig.compute(moment(y));
        const double lambda_min = eig.eigenvalues().minCoeff();
        const double affine = (a * y.cwiseProduct(sqrt_w) - b).lpNorm<Eigen::Infinity>();
        out.iterations = it;
        if (lambda_min >= -opts.tol && affine <= opts.tol) {
            out.status = "feasible";
            PseudoExpectation pe;
            pe.degree = d;
            for (std::size_t i = 0; i < full.size(); ++i) {
                std::vector<Variable> mono;
                for (int v = 0; v < k; ++v)
                    if (full[i] >> v & 1U) mono.push_back(vars[static_cast<std::size_t>(v)]);
                pe.monomials.push_back(std::move(mono));
                pe.values.push_back(y[static_cast<Eigen::Index>(i)]);
            }
            pe.values[static_cast<std::size_t>(full_index.at(0))] = 1.0;
            pe.affine_residual = affine;
            pe.psd_residual = std::max(0.0, -lambda_min);
            out.pe = std::move(pe);
            return out;
        }
        if (it == opts.iterations) break;
        Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXd p = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().transpose();
        Eigen::VectorXd next = Eigen::VectorXd::Zero(f);
        for (int i = 0; i < h; ++i)
            for (int j = 0; j < h; ++j) next[entry[static_cast<std::size_t>(i * h + j)]] += p(i, j);
        y = next.cwiseQuotient(weight);
        project_affine(y);
    }
    out.note = "iteration budget exhausted";
    return out;
}

}  // namespace pmx
