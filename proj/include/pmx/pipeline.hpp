#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmx/constraints.hpp"
#include "pmx/embed.hpp"
#include "pmx/graph.hpp"
#include "pmx/refute.hpp"

namespace pmx {

struct PipelineConfig {
    // Graph: a file, or random_regular(n, d, graph_seed).
    std::string graph_file;
    int n = 0;
    int d = 0;
    std::uint64_t graph_seed = 1;

    int t = 1;
    // Pattern: a named graph ("C7", "petersen9", ...) or an edge-list file.
    std::string pattern = "C7";
    std::string pattern_file;

    std::string profile = "desk";  // "desk" or "paper"
    double c = 0.70;
    double gamma = 0.20;
    bool epsilon_check = false;
    int min_len = 3;
    int max_len = 0;

    std::uint64_t seed = 1;  // partition and embedding
    std::int64_t max_resamples = 1'000'000;
    int embed_restarts = 20;
    // Fresh partitions tried when the embedding fails.
    int partition_attempts = 5;
    long search_budget = 200'000;
    bool twin_audit = true;
};

// Applies the profile's defaults for c, gamma and epsilon_check.
void apply_profile(PipelineConfig& cfg, const std::string& profile);

// TOML-style "key = value" lines; '#' starts a comment. Keys that are absent
// keep their defaults; "profile" is applied before the other keys.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::string& path);

struct ParityLedger {
    int n = 0;
    int pattern_vertices = 0;
    std::int64_t sum_sigma_minus_one = 0;
    std::int64_t embedded_vertices = 0;  // |V(G_psi)|
    std::int64_t u_size = 0;
    bool u_even = false;
    bool count_matches = false;  // |V(G_psi)| = |V(H)| + sum(sigma - 1)
    bool operator==(const ParityLedger&) const = default;
};

enum class RunStatus { Success, StageFailure };

struct PipelineReport {
    RunStatus status = RunStatus::StageFailure;
    std::string failed_stage;
    std::string message;
    std::vector<std::string> deviations;

    // Instance.
    int n = 0;
    int d = 0;
    int t = 0;
    int t_effective = 0;
    bool complemented = false;
    std::string pattern;
    int pattern_vertices = 0;
    int pattern_edges = 0;

    // Spectral.
    double lambda = 0;
    std::string spectral_method;
    double epsilon = 0;
    bool epsilon_ok = false;
    bool lambda_below_d_over_50 = false;

    // Partition.
    double c = 0;
    double gamma = 0;
    int partition_attempts = 0;
    bool partition_satisfied = false;
    std::int64_t partition_iterations = 0;
    int partition_restarts = 0;
    std::size_t partition_violations = 0;
    std::vector<int> A;
    std::vector<int> B;
    std::size_t edges_in_b = 0;
    bool b_at_least_n_over_20 = false;

    // Embedding.
    std::vector<int> psi;
    std::vector<std::vector<int>> paths;
    std::vector<int> sigma;

    // Matching and factor.
    std::vector<Edge> matching;
    int min_degree_g_prime = 0;
    std::vector<Edge> factor;

    // Restriction over the edge variables of G, as literal strings.
    std::map<std::string, std::string> rho;

    // Audits.
    ParityLedger parity;
    bool disjoint_ok = false;
    bool vertex_audit_ok = false;
    bool equiv_ok = false;
    std::optional<bool> equiv_twins_ok;

    std::map<std::string, double> timings_ms;

    bool operator==(const PipelineReport&) const = default;
};

std::string to_string(RunStatus s);

// The whole construction. Throws ParameterError when the configuration
// violates a precondition (even t, even n, irregular G, ...); a failing
// stage is reported through status/failed_stage with the partial audits.
PipelineReport run_construction(const PipelineConfig& cfg);

// Same, with the graph and pattern supplied directly.
PipelineReport run_construction(const Graph& g, const Graph& pattern, const PipelineConfig& cfg);

// The restriction recorded in a report, parsed back into literals.
Restriction report_restriction(const PipelineReport& r);
// y variable -> pattern edge variable, for check_equiv.
std::map<Variable, Variable> report_variable_map(const PipelineReport& r);
Graph resolve_pattern(const PipelineConfig& cfg);

struct ExperimentSpec {
    // "pm-cycle", "pm-complete", "pm-matching" or "restricted-cycle".
    std::string family = "pm-cycle";
    std::vector<int> sizes;
    std::uint32_t prime = 10007;
    int d_max = 6;
    std::vector<std::uint64_t> seeds{1};
    bool parallel = true;
};

struct ExperimentRow {
    std::string family;
    int n = 0;
    int d = 0;
    int t = 1;
    std::uint64_t seed = 0;
    int variables = 0;
    std::optional<int> degree;             // minimal PC degree, if <= d_max
    int d_max = 0;
    std::optional<int> restricted_degree;  // restricted-cycle only
    std::optional<bool> monotone;          // restricted degree <= degree
    std::string error;                     // guard message, if any
    double wall_ms = 0;
};

struct ExperimentTable {
    ExperimentSpec spec;
    std::vector<ExperimentRow> rows;  // ordered by (n, seed)
};

ExperimentTable run_degree_experiment(const ExperimentSpec& spec);

enum class ExportFormat { Json, Csv, Text };
ExportFormat parse_format(const std::string& name);

std::string report_to_json(const PipelineReport& r, bool include_timings = false);
PipelineReport report_from_json(const std::string& text);
std::string report_to_csv(const PipelineReport& r);
std::string report_to_text(const PipelineReport& r);

std::string table_to_json(const ExperimentTable& t);
std::string table_to_csv(const ExperimentTable& t);
std::string table_to_text(const ExperimentTable& t);

// Writes the chosen rendering; IoError names the path on failure.
void export_report(const PipelineReport& r, const std::string& path, ExportFormat format, bool include_timings = false);
void export_table(const ExperimentTable& t, const std::string& path, ExportFormat format);

}  // namespace pmx
