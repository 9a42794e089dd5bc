#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmx/constraints.hpp"

namespace pmx {

struct PcOptions {
    std::uint32_t prime = 10007;
    bool allow_char2 = false;
    // Cap on the number of multilinear monomials of degree <= d.
    std::size_t basis_limit = 2'000'000;
    // Substitute xb = 1 - x before the run instead of keeping twins.
    bool eliminate_twins = false;
};

struct PcResult {
    int degree = 0;
    bool refuted = false;
    std::size_t dimension = 0;  // rows of the final span
    std::uint32_t field = 0;
};

bool is_prime(std::uint64_t p);

// Decides whether a degree-d PC refutation exists over F_p. Multilinear
// arithmetic throughout: booleanity is built into the monomial basis.
PcResult pc_degree_decide(const ConstraintSystem& cs, int d, const PcOptions& opts = {});

struct PcSearchResult {
    std::optional<int> degree;  // empty: not refuted up to d_max
    int d_max = 0;
    std::vector<PcResult> runs;
};

// Sweeps d = 0, 1, ..., d_max and stops at the first refutation.
PcSearchResult pc_degree_search(const ConstraintSystem& cs, int d_max, const PcOptions& opts = {});

// sum_i t_i p_i + sum_j s_j^2 = -1, with p_i the equations of the system.
struct SosCertificate {
    std::vector<Polynomial> t;
    std::vector<Polynomial> s;
};

struct SosVerdict {
    bool valid = false;
    int degree = 0;
};

// Raw expansion in exact rationals, no multilinear reduction. Throws
// ParameterError when t does not have one entry per equation.
SosVerdict sos_verify(const ConstraintSystem& cs, const SosCertificate& cert);

// Solves sum_i t_i p_i = -1 - sum_j s_j^2 for the t_i with
// deg(t_i) + deg(p_i) <= degree, exactly over the rationals.
std::optional<SosCertificate> find_linear_certificate(const ConstraintSystem& cs, int degree,
                                                      const std::vector<Polynomial>& squares = {});

// {"t": [poly...], "s": [poly...]}, poly = [["num/den", ["x_0_1", ...]], ...].
std::string certificate_to_json(const SosCertificate& cert);
SosCertificate certificate_from_json(const std::string& text);
SosCertificate load_certificate(const std::string& path);
void save_certificate(const std::string& path, const SosCertificate& cert);

struct PeOptions {
    int iterations = 5000;
    double tol = 1e-7;
};

struct PseudoExpectation {
    int degree = 0;
    std::vector<std::vector<Variable>> monomials;  // multilinear, degree <= d
    std::vector<double> values;
    double affine_residual = 0;
    double psd_residual = 0;  // max(0, -lambda_min) of the moment matrix
};

struct PeResult {
    std::string status;  // "feasible" or "unknown"
    std::string note;
    int iterations = 0;
    std::optional<PseudoExpectation> pe;
};

// Best-effort numerical search for a degree-d pseudo-expectation over the
// edge variables (twins replaced by complements). Never reports infeasible.
PeResult sos_pe_search(const ConstraintSystem& cs, int d, const PeOptions& opts = {});

}  // namespace pmx
