#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "sstat/analysis.hpp"
#include "sstat/binfile.hpp"
#include "sstat/datagen.hpp"
#include "sstat/pca.hpp"
#include "sstat/reduce.hpp"

namespace sstat {

/// Report JSON conventions (report_version 1): binary64 payload values are
/// encoded as strings with 17 significant digits so they round-trip
/// bit-exactly through any JSON parser; 64-bit checksums are hex strings;
/// wide-integer sums are decimal strings; counts and timings are plain
/// JSON numbers.
using json = nlohmann::json;

json json_real(double v);
json json_matrix(const Matrix& m);
json json_vector(const std::vector<double>& v);
std::string hex_u64(std::uint64_t v);

json to_json(const GenerationSummary& s);
json to_json(const ConversionSummary& s);
json to_json(const ValidationReport& r);
json to_json(const ColumnSumResult& r);
json to_json(const CancellationDiagnostics& d);
json to_json(const AnalysisResult& r);
json to_json(const PcaResult& r);

/// Shared envelope: {artifact, report_version, command, config, stages:[]}.
json make_run_report(const std::string& command, json config);
void append_stage(json& report, const std::string& stage, double seconds, json results);
void write_report(const json& report, const std::filesystem::path& path);

} // namespace sstat
