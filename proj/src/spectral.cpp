#include "pmx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pmx/error.hpp"

namespace pmx {

std::string to_string(SpectralMethod m) {
    return m == SpectralMethod::DenseJacobi ? "dense-jacobi" : "power-deflate";
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, double tol,
                                       std::vector<double>* eigenvectors, std::int64_t* sweeps) {
    const auto N = static_cast<std::size_t>(n);
    if (a.size() != N * N) throw ParameterError("jacobi_eigenvalues: matrix size mismatch");
    std::vector<double> v;
    if (eigenvectors) {
        v.assign(N * N, 0.0);
        for (std::size_t i = 0; i < N; ++i) v[i * N + i] = 1.0;
    }
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * N + j]; };
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = i + 1; j < N; ++j) s += at(i, j) * at(i, j);
        return std::sqrt(2.0 * s);
    };

    std::int64_t sweep = 0;
    const std::int64_t max_sweeps = 100;
    for (; sweep < max_sweeps && off_norm() > tol; ++sweep) {
        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                double apq = at(p, q);
                if (apq == 0.0) continue;
                double app = at(p, p), aqq = at(q, q);
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                double* rp = &a[p * N];
                double* rq = &a[q * N];
                for (std::size_t k = 0; k < N; ++k) {
                    double x = rp[k], y = rq[k];
                    rp[k] = c * x - s * y;
                    rq[k] = s * x + c * y;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    a[k * N + p] = rp[k];
                    a[k * N + q] = rq[k];
                }
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                if (eigenvectors) {
                    for (std::size_t k = 0; k < N; ++k) {
                        double vkp = v[k * N + p], vkq = v[k * N + q];
                        v[k * N + p] = c * vkp - s * vkq;
                        v[k * N + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if (sweeps) *sweeps = sweep;

    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return at(x, x) > at(y, y); });
    std::vector<double> values(N);
    for (std::size_t i = 0; i < N; ++i) values[i] = at(order[i], order[i]);
    if (eigenvectors) {
        eigenvectors->assign(N * N, 0.0);
        for (std::size_t col = 0; col < N; ++col)
            for (std::size_t k = 0; k < N; ++k) (*eigenvectors)[k * N + col] = v[k * N + order[col]];
    }
    return values;
}

namespace {

void multiply(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
    for (int v = 0; v < g.num_vertices(); ++v) {
        double s = 0.0;
        for (int w : g.neighbors(v)) s += x[static_cast<std::size_t>(w)];
        y[static_cast<std::size_t>(v)] = s;
    }
}

double norm(const std::vector<double>& x) { return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0)); }

void project_out(std::vector<double>& x, const std::vector<double>& unit) {
    double dot = std::inner_product(x.begin(), x.end(), unit.begin(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= dot * unit[i];
}

std::vector<double> random_unit(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> x(n);
    for (auto& xi : x) xi = gauss(rng);
    double nx = norm(x);
    for (auto& xi : x) xi /= nx;
    return x;
}

// Principal eigenvector: all-ones for regular graphs, otherwise power
// iteration on A + Delta*I (shift keeps the spectrum non-negative).
std::vector<double> principal_vector(const Graph& g, const SpectralOptions& opts, std::int64_t& steps) {
    const auto n = static_cast<std::size_t>(g.num_vertices());
    if (g.regular_degree()) return std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const double shift = g.max_degree();
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n))), y(n);
    for (; steps < opts.max_iterations; ++steps) {
        multiply(g, x, y);
        for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
        double ny = norm(y);
        if (ny == 0.0) return x;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= ny;
            diff = std::max(diff, std::abs(y[i] - x[i]));
        }
        x.swap(y);
        if (diff < opts.tol) return x;
    }
    throw ConvergenceError("spectral_gap: principal eigenvector did not converge");
}

// Power iteration on A^2 restricted to the complement of the principal
// direction; sqrt of the Rayleigh quotient is the largest |lambda_i|, i >= 2.
double deflated_power(const Graph& g, const SpectralOptions& opts, std::int64_t& steps) {
    const auto n = static_cast<std::size_t>(g.num_vertices());
    if (n <= 1) return 0.0;
    std::vector<double> top = principal_vector(g, opts, steps);
    std::vector<double> x = random_unit(n, opts.seed), y(n), z(n);
    project_out(x, top);
    double nx = norm(x);
    if (nx == 0.0) return 0.0;
    for (auto& xi : x) xi /= nx;

    const double residual_goal = std::sqrt(opts.tol) * 0.1;
    for (; steps < opts.max_iterations; ++steps) {
        multiply(g, x, y);
        project_out(y, top);
        multiply(g, y, z);
        project_out(z, top);
        double mu = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res += (z[i] - mu * x[i]) * (z[i] - mu * x[i]);
        res = std::sqrt(res);
        double nz = norm(z);
        if (nz == 0.0) return 0.0;
        if (res <= residual_goal * std::max(1.0, mu)) return std::sqrt(mu);
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] / nz;
    }
    throw ConvergenceError("spectral_gap: power iteration did not converge within " +
                           std::to_string(opts.max_iterations) + " steps");
}

}  // namespace

SpectralReport spectral_gap(const Graph& g, const SpectralOptions& opts) {
    SpectralReport report;
    report.degree = g.regular_degree();
    report.method = opts.method;
    report.tol = opts.tol;
    const int n = g.num_vertices();
    if (n == 0) return report;

    if (opts.method == SpectralMethod::DenseJacobi) {
        const auto N = static_cast<std::size_t>(n);
        std::vector<double> a(N * N, 0.0);
        for (const auto& e : g.edges()) {
            a[static_cast<std::size_t>(e.u) * N + static_cast<std::size_t>(e.v)] = 1.0;
            a[static_cast<std::size_t>(e.v) * N + static_cast<std::size_t>(e.u)] = 1.0;
        }
        report.eigenvalues = jacobi_eigenvalues(std::move(a), n, opts.tol, nullptr, &report.iterations);
        // The principal eigenvalue is the largest one (Perron-Frobenius).
        double lam = 0.0;
        for (std::size_t i = 1; i < N; ++i) lam = std::max(lam, std::abs(report.eigenvalues[i]));
        report.lambda = lam;
        return report;
    }
    std::int64_t steps = 0;
    report.lambda = deflated_power(g, opts, steps);
    report.iterations = steps;
    return report;
}

std::int64_t count_cross_edges(const Graph& g, std::span<const int> s, std::span<const int> t) {
    std::vector<char> in_t(static_cast<std::size_t>(g.num_vertices()), 0);
    for (int v : t) {
        if (v < 0 || v >= g.num_vertices()) throw ParameterError("mixing_check: vertex out of range");
        in_t[static_cast<std::size_t>(v)] = 1;
    }
    std::int64_t count = 0;
    for (int v : s) {
        if (v < 0 || v >= g.num_vertices()) throw ParameterError("mixing_check: vertex out of range");
        for (int w : g.neighbors(v)) count += in_t[static_cast<std::size_t>(w)];
    }
    return count;
}

MixingResult mixing_check(const Graph& g, int d, double lambda, std::span<const int> s,
                          std::span<const int> t, double slack) {
    MixingResult r;
    r.e_st = count_cross_edges(g, s, t);
    const double ss = static_cast<double>(s.size()), tt = static_cast<double>(t.size());
    const double n = g.num_vertices() > 0 ? g.num_vertices() : 1.0;
    r.lhs = std::abs(static_cast<double>(r.e_st) - static_cast<double>(d) / n * ss * tt);
    r.rhs = lambda * std::sqrt(ss * tt);
    r.holds = r.lhs <= r.rhs + slack * std::max(1.0, r.rhs);
    return r;
}

}  // namespace pmx
