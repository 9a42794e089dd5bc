#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "pmx/error.hpp"
#include "pmx/pipeline.hpp"

namespace pmx {

using nlohmann::json;

ExportFormat parse_format(const std::string& name) {
    if (name == "json") return ExportFormat::Json;
    if (name == "csv") return ExportFormat::Csv;
    if (name == "text" || name == "txt") return ExportFormat::Text;
    throw ParameterError("unknown export format '" + name + "' (expected json, csv or text)");
}

namespace {

json edges_to_json(const std::vector<Edge>& edges) {
    json out = json::array();
    for (const auto& e : edges) out.push_back({e.u, e.v});
    return out;
}

std::vector<Edge> edges_from_json(const json& j) {
    std::vector<Edge> out;
    for (const auto& e : j) out.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return out;
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

std::string report_to_json(const PipelineReport& r, bool include_timings) {
    json j;
    j["status"] = to_string(r.status);
    j["failed_stage"] = r.failed_stage;
    j["message"] = r.message;
    j["deviations"] = r.deviations;
    j["instance"] = {{"n", r.n},
                     {"d", r.d},
                     {"t", r.t},
                     {"t_effective", r.t_effective},
                     {"complemented", r.complemented},
                     {"pattern", r.pattern},
                     {"pattern_vertices", r.pattern_vertices},
                     {"pattern_edges", r.pattern_edges}};
    j["spectral"] = {{"lambda", r.lambda},
                     {"method", r.spectral_method},
                     {"epsilon", r.epsilon},
                     {"epsilon_ok", r.epsilon_ok},
                     {"lambda_below_d_over_50", r.lambda_below_d_over_50}};
    j["partition"] = {{"c", r.c},
                      {"gamma", r.gamma},
                      {"attempts", r.partition_attempts},
                      {"satisfied", r.partition_satisfied},
                      {"iterations", r.partition_iterations},
                      {"restarts", r.partition_restarts},
                      {"violations", r.partition_violations},
                      {"A", r.A},
                      {"B", r.B},
                      {"edges_in_B", r.edges_in_b},
                      {"B_at_least_n_over_20", r.b_at_least_n_over_20}};
    j["embedding"] = {{"psi", r.psi}, {"paths", r.paths}, {"sigma", r.sigma}};
    j["matching"] = edges_to_json(r.matching);
    j["min_degree_g_prime"] = r.min_degree_g_prime;
    j["factor"] = edges_to_json(r.factor);
    j["rho"] = r.rho;
    j["audits"] = {{"parity",
                    {{"n", r.parity.n},
                     {"pattern_vertices", r.parity.pattern_vertices},
                     {"sum_sigma_minus_one", r.parity.sum_sigma_minus_one},
                     {"embedded_vertices", r.parity.embedded_vertices},
                     {"u_size", r.parity.u_size},
                     {"u_even", r.parity.u_even},
                     {"count_matches", r.parity.count_matches}}},
                   {"disjoint_ok", r.disjoint_ok},
                   {"vertex_audit_ok", r.vertex_audit_ok},
                   {"equiv_ok", r.equiv_ok},
                   {"equiv_twins_ok", r.equiv_twins_ok ? json(*r.equiv_twins_ok) : json(nullptr)}};
    if (include_timings) j["timings_ms"] = r.timings_ms;
    return j.dump(1) + "\n";
}

PipelineReport report_from_json(const std::string& text) {
    PipelineReport r;
    try {
        json j = json::parse(text);
        const std::string status = j.at("status").get<std::string>();
        if (status == "success") r.status = RunStatus::Success;
        else if (status == "stage-failure") r.status = RunStatus::StageFailure;
        else throw FormatError("report: unknown status '" + status + "'");
        r.failed_stage = j.at("failed_stage").get<std::string>();
        r.message = j.at("message").get<std::string>();
        r.deviations = j.at("deviations").get<std::vector<std::string>>();
        const auto& in = j.at("instance");
        r.n = in.at("n");
        r.d = in.at("d");
        r.t = in.at("t");
        r.t_effective = in.at("t_effective");
        r.complemented = in.at("complemented");
        r.pattern = in.at("pattern");
        r.pattern_vertices = in.at("pattern_vertices");
        r.pattern_edges = in.at("pattern_edges");
        const auto& sp = j.at("spectral");
        r.lambda = sp.at("lambda");
        r.spectral_method = sp.at("method");
        r.epsilon = sp.at("epsilon");
        r.epsilon_ok = sp.at("epsilon_ok");
        r.lambda_below_d_over_50 = sp.at("lambda_below_d_over_50");
        const auto& pa = j.at("partition");
        r.c = pa.at("c");
        r.gamma = pa.at("gamma");
        r.partition_attempts = pa.at("attempts");
        r.partition_satisfied = pa.at("satisfied");
        r.partition_iterations = pa.at("iterations");
        r.partition_restarts = pa.at("restarts");
        r.partition_violations = pa.at("violations");
        r.A = pa.at("A").get<std::vector<int>>();
        r.B = pa.at("B").get<std::vector<int>>();
        r.edges_in_b = pa.at("edges_in_B");
        r.b_at_least_n_over_20 = pa.at("B_at_least_n_over_20");
        const auto& em = j.at("embedding");
        r.psi = em.at("psi").get<std::vector<int>>();
        r.paths = em.at("paths").get<std::vector<std::vector<int>>>();
        r.sigma = em.at("sigma").get<std::vector<int>>();
        r.matching = edges_from_json(j.at("matching"));
        r.min_degree_g_prime = j.at("min_degree_g_prime");
        r.factor = edges_from_json(j.at("factor"));
        r.rho = j.at("rho").get<std::map<std::string, std::string>>();
        const auto& au = j.at("audits");
        const auto& par = au.at("parity");
        r.parity.n = par.at("n");
        r.parity.pattern_vertices = par.at("pattern_vertices");
        r.parity.sum_sigma_minus_one = par.at("sum_sigma_minus_one");
        r.parity.embedded_vertices = par.at("embedded_vertices");
        r.parity.u_size = par.at("u_size");
        r.parity.u_even = par.at("u_even");
        r.parity.count_matches = par.at("count_matches");
        r.disjoint_ok = au.at("disjoint_ok");
        r.vertex_audit_ok = au.at("vertex_audit_ok");
        r.equiv_ok = au.at("equiv_ok");
        if (!au.at("equiv_twins_ok").is_null()) r.equiv_twins_ok = au.at("equiv_twins_ok").get<bool>();
        if (j.contains("timings_ms")) r.timings_ms = j.at("timings_ms").get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("report: ") + e.what());
    }
    return r;
}

std::string report_to_csv(const PipelineReport& r) {
    std::ostringstream out;
    out << "status,failed_stage,n,d,t,t_effective,complemented,pattern,lambda,partition_satisfied,"
           "partition_iterations,B_size,sum_sigma_minus_one,u_size,u_even,matching_size,factor_size,"
           "disjoint_ok,vertex_audit_ok,equiv_ok\n";
    out << to_string(r.status) << ',' << r.failed_stage << ',' << r.n << ',' << r.d << ',' << r.t << ',' << r.t_effective
        << ',' << r.complemented << ',' << r.pattern << ',' << fmt(r.lambda) << ',' << r.partition_satisfied << ','
        << r.partition_iterations << ',' << r.B.size() << ',' << r.parity.sum_sigma_minus_one << ',' << r.parity.u_size
        << ',' << r.parity.u_even << ',' << r.matching.size() << ',' << r.factor.size() << ',' << r.disjoint_ok << ','
        << r.vertex_audit_ok << ',' << r.equiv_ok << '\n';
    return out.str();
}

std::string report_to_text(const PipelineReport& r) {
    std::ostringstream out;
    out << "status: " << to_string(r.status);
    if (r.status != RunStatus::Success) out << " at " << r.failed_stage << ": " << r.message;
    out << "\n";
    out << "instance: n=" << r.n << " d=" << r.d << " t=" << r.t;
    if (r.complemented) out << " (complemented to t=" << r.t_effective << ")";
    out << " pattern=" << r.pattern << " (" << r.pattern_vertices << " vertices, " << r.pattern_edges << " edges)\n";
    out << "spectral: lambda=" << fmt(r.lambda) << " via " << r.spectral_method << ", lambda < d/50: " << r.lambda_below_d_over_50
        << ", lambda < eps d: " << r.epsilon_ok << "\n";
    out << "partition: c=" << r.c << " gamma=" << r.gamma << " satisfied=" << r.partition_satisfied
        << " resamples=" << r.partition_iterations << " |A|=" << r.A.size() << " |B|=" << r.B.size()
        << " |E(G[B])|=" << r.edges_in_b << "\n";
    out << "embedding: sigma =";
    for (int s : r.sigma) out << ' ' << s;
    out << "\n";
    out << "parity: |V(G_psi)|=" << r.parity.embedded_vertices << " = " << r.parity.pattern_vertices << " + "
        << r.parity.sum_sigma_minus_one << ", |U|=" << r.parity.u_size << (r.parity.u_even ? " (even)" : " (odd)") << "\n";
    out << "matching: " << r.matching.size() << " edges; min degree of G' = " << r.min_degree_g_prime << "; factor: "
        << r.factor.size() << " edges\n";
    out << "audits: disjoint_ok=" << r.disjoint_ok << " vertex_audit_ok=" << r.vertex_audit_ok << " equiv_ok=" << r.equiv_ok;
    if (r.equiv_twins_ok) out << " equiv_twins_ok=" << *r.equiv_twins_ok;
    out << "\n";
    for (const auto& d : r.deviations) out << "deviation: " << d << "\n";
    out << "timings (ms):";
    for (const auto& [stage, ms] : r.timings_ms) out << ' ' << stage << '=' << std::fixed << std::setprecision(2) << ms;
    out << "\n";
    return out.str();
}

namespace {

std::string degree_cell(const std::optional<int>& d, int d_max) {
    return d ? std::to_string(*d) : "not refuted <= " + std::to_string(d_max);
}

}  // namespace

std::string table_to_json(const ExperimentTable& t) {
    json j;
    j["family"] = t.spec.family;
    j["prime"] = t.spec.prime;
    j["d_max"] = t.spec.d_max;
    j["rows"] = json::array();
    for (const auto& r : t.rows) {
        json row = {{"family", r.family}, {"n", r.n},           {"d", r.d},         {"t", r.t},
                    {"seed", r.seed},     {"variables", r.variables}, {"d_max", r.d_max}, {"wall_ms", r.wall_ms}};
        row["min_degree"] = r.degree ? json(*r.degree) : json(nullptr);
        if (r.restricted_degree) row["restricted_degree"] = *r.restricted_degree;
        if (r.monotone) row["monotone"] = *r.monotone;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(row);
    }
    return j.dump(1) + "\n";
}

std::string table_to_csv(const ExperimentTable& t) {
    std::ostringstream out;
    out << "family,n,d,t,seed,variables,min_degree,d_max,restricted_degree,monotone,wall_ms,error\n";
    for (const auto& r : t.rows) {
        out << r.family << ',' << r.n << ',' << r.d << ',' << r.t << ',' << r.seed << ',' << r.variables << ','
            << degree_cell(r.degree, r.d_max) << ',' << r.d_max << ','
            << (r.restricted_degree ? std::to_string(*r.restricted_degree) : "") << ','
            << (r.monotone ? (*r.monotone ? "true" : "false") : "") << ',' << std::fixed << std::setprecision(3)
            << r.wall_ms << ',' << '"' << r.error << '"' << '\n';
        out.unsetf(std::ios::fixed);
    }
    return out.str();
}

std::string table_to_text(const ExperimentTable& t) {
    std::ostringstream out;
    out << "family " << t.spec.family << ", p = " << t.spec.prime << ", d_max = " << t.spec.d_max << "\n";
    for (const auto& r : t.rows) {
        out << "  n=" << r.n << " vars=" << r.variables << " degree=" << degree_cell(r.degree, r.d_max);
        if (r.restricted_degree) out << " restricted=" << *r.restricted_degree;
        if (r.monotone) out << (*r.monotone ? " monotone" : " NOT monotone");
        if (!r.error.empty()) out << " error: " << r.error;
        out << "\n";
    }
    return out.str();
}

void export_report(const PipelineReport& r, const std::string& path, ExportFormat format, bool include_timings) {
    switch (format) {
        case ExportFormat::Json: write_file(path, report_to_json(r, include_timings)); break;
        case ExportFormat::Csv: write_file(path, report_to_csv(r)); break;
        case ExportFormat::Text: write_file(path, report_to_text(r)); break;
    }
}

void export_table(const ExperimentTable& t, const std::string& path, ExportFormat format) {
    switch (format) {
        case ExportFormat::Json: write_file(path, table_to_json(t)); break;
        case ExportFormat::Csv: write_file(path, table_to_csv(t)); break;
        case ExportFormat::Text: write_file(path, table_to_text(t)); break;
    }
}

}  // namespace pmx
