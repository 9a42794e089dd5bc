#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmx/graph.hpp"

namespace pmx {

enum class SpectralMethod { DenseJacobi, PowerDeflate };

std::string to_string(SpectralMethod m);

struct SpectralReport {
    std::optional<int> degree;       // set iff the graph is regular
    double lambda = 0.0;             // max |lambda_i| over non-principal eigenvalues
    std::vector<double> eigenvalues; // dense mode only, sorted descending
    SpectralMethod method = SpectralMethod::DenseJacobi;
    double tol = 1e-10;
    std::int64_t iterations = 0;     // sweeps (dense) or power steps (iterative)
};

struct SpectralOptions {
    SpectralMethod method = SpectralMethod::DenseJacobi;
    double tol = 1e-10;
    std::int64_t max_iterations = 200'000;
    std::uint64_t seed = 1;
};

// Throws ConvergenceError when the iterative mode runs out of steps.
SpectralReport spectral_gap(const Graph& g, const SpectralOptions& opts = {});

// Eigenvalues of a dense symmetric matrix (row-major, size n*n) by cyclic
// Jacobi rotations, sorted descending. Optional eigenvectors are returned
// column-wise in the same order.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n, double tol,
                                       std::vector<double>* eigenvectors = nullptr,
                                       std::int64_t* sweeps = nullptr);

struct MixingResult {
    bool holds = true;
    double lhs = 0.0;
    double rhs = 0.0;
    std::int64_t e_st = 0;
};

// |e(S,T) - (d/n)|S||T|| <= lambda * sqrt(|S||T|); edges inside S∩T count
// twice. `slack` absorbs floating-point error in a computed lambda.
MixingResult mixing_check(const Graph& g, int d, double lambda, std::span<const int> s,
                          std::span<const int> t, double slack = 1e-9);

// e(S,T) with the double-counting convention above.
std::int64_t count_cross_edges(const Graph& g, std::span<const int> s, std::span<const int> t);

}  // namespace pmx
