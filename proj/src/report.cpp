#include "sstat/report.hpp"

#include <cstdio>
#include <fstream>

#include "sstat/util.hpp"

namespace sstat {

json json_real(double v) { return format_real17(v); }

json json_matrix(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(json_real(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json json_vector(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(json_real(x));
    return out;
}

std::string hex_u64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json to_json(const GenerationSummary& s) {
    return {{"rows_written", s.rows_written},
            {"bytes_written", s.bytes_written},
            {"checksum", hex_u64(s.checksum)}};
}

json to_json(const ConversionSummary& s) {
    json j = {{"rows", s.rows}, {"bytes", s.bytes}};
    if (s.checksum_present) j["checksum"] = hex_u64(s.checksum);
    return j;
}

json to_json(const ValidationReport& r) {
    json spots = json::array();
    for (const auto& s : r.rows_checked) spots.push_back({{"row", s.row}, {"match", s.match}});
    json j = {{"header_ok", r.header_ok},
              {"size_ok", r.size_ok},
              {"counts_ok", r.counts_ok},
              {"rows_checked", std::move(spots)},
              {"verdict", r.verdict ? "pass" : "fail"},
              {"failures", r.failures}};
    if (r.checksum_ok.has_value()) j["checksum_ok"] = *r.checksum_ok;
    return j;
}

json to_json(const ColumnSumResult& r) {
    json j = {{"float_sum", json_real(r.float_sum)}};
    if (r.exact_sum.has_value()) {
        j["exact_sum"] = to_string(*r.exact_sum);
        j["float_matches_exact"] = r.float_matches_exact;
        j["float_approximate"] = !r.float_matches_exact;
    }
    if (r.exact_note.has_value()) j["exact_note"] = *r.exact_note;
    return j;
}

json to_json(const CancellationDiagnostics& d) {
    return {{"kappa", json_vector(d.kappa)},
            {"threshold", json_real(d.threshold)},
            {"flagged_columns", d.flagged_columns},
            {"negative_variance_columns", d.negative_variance_columns}};
}

json to_json(const AnalysisResult& r) {
    json j = {{"n", r.n},
              {"ddof", r.ddof},
              {"precision", r.precision == PrecisionMode::Binary64 ? "binary64" : "binary32"},
              {"included_columns", r.included_columns},
              {"column_names", r.column_names},
              {"mean", json_vector(r.mean)},
              {"covariance", json_matrix(r.covariance)},
              {"diagnostics", to_json(r.diagnostics)}};
    if (r.correlation.has_value()) j["correlation"] = json_matrix(*r.correlation);
    return j;
}

json to_json(const PcaResult& r) {
    return {{"basis", r.basis == PcaBasis::Correlation ? "correlation" : "covariance"},
            {"n", r.n},
            {"included_columns", r.included_columns},
            {"column_names", r.column_names},
            {"eigenvalues", json_vector(r.eigenvalues)},
            {"variance_percent", json_vector(r.variance_percent)},
            {"cumulative_percent", json_vector(r.cumulative_percent)},
            {"loadings", json_matrix(r.loadings)},
            {"negative_variance_flagged", r.negative_variance_flagged}};
}

json make_run_report(const std::string& command, json config) {
    return {{"artifact", {{"name", "sstat"}, {"version", "1.0.0"}}},
            {"report_version", 1},
            {"command", command},
            {"config", std::move(config)},
            {"stages", json::array()}};
}

void append_stage(json& report, const std::string& stage, double seconds, json results) {
    report["stages"].push_back(
        {{"stage", stage}, {"seconds", seconds}, {"results", std::move(results)}});
}

void write_report(const json& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << report.dump(2) << "\n";
    if (!out) throw IoError("write failure on " + path.string());
}

} // namespace sstat
