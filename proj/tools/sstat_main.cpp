// sstat — one-pass sufficient-statistics engine over CSV/binary datasets:
// generate, convert, validate, sum, suffstats, analyze, pca, pipeline.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sstat/analysis.hpp"
#include "sstat/binfile.hpp"
#include "sstat/csv.hpp"
#include "sstat/datagen.hpp"
#include "sstat/errors.hpp"
#include "sstat/pca.hpp"
#include "sstat/reduce.hpp"
#include "sstat/report.hpp"
#include "sstat/suffstats.hpp"
#include "sstat/util.hpp"

namespace fs = std::filesystem;
using namespace sstat;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1; // operational or validation failure
constexpr int kExitUsage = 2;   // bad invocation

struct CommonConfig {
    std::string report_path;
    std::size_t chunk_rows = 1u << 20;
    unsigned workers = 0; // 0 = default_worker_count()
    std::string precision = "binary64";
    std::string kind; // "", "table1", "iid"
    std::size_t iid_cols = 10;
    double iid_lo = 0.0;
    double iid_hi = 1.0;
    bool header = false;
    std::vector<std::size_t> id_cols{0};

    unsigned worker_count() const { return workers == 0 ? default_worker_count() : workers; }
    PrecisionMode precision_mode() const {
        return precision == "binary32" ? PrecisionMode::Binary32Diagnostic
                                       : PrecisionMode::Binary64;
    }
};

void add_report_flag(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--report", cfg.report_path, "write a JSON run report to this path");
}

void add_parallel_flags(CLI::App* cmd, CommonConfig& cfg) {
    cmd->add_option("--chunk-rows", cfg.chunk_rows, "rows per streamed chunk")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--workers", cfg.workers,
                    "worker threads (default: hardware concurrency)")
        ->envname("SSTAT_WORKERS");
    cmd->add_option("--precision", cfg.precision, "accumulation precision")
        ->check(CLI::IsMember({"binary64", "binary32"}))
        ->capture_default_str();
}

void add_kind_flags(CLI::App* cmd, CommonConfig& cfg, bool with_generation_params) {
    cmd->add_option("--kind", cfg.kind, "dataset schema: table1 or iid")
        ->check(CLI::IsMember({"table1", "iid"}));
    if (with_generation_params) {
        cmd->add_option("--iid-cols", cfg.iid_cols, "IidUniform: variable count")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--iid-lo", cfg.iid_lo, "IidUniform: lower bound")
            ->capture_default_str();
        cmd->add_option("--iid-hi", cfg.iid_hi, "IidUniform: upper bound (exclusive)")
            ->capture_default_str();
    }
}

GeneratorKind make_kind(const CommonConfig& cfg) {
    if (cfg.kind == "iid") return GeneratorKind::iid_uniform(cfg.iid_cols, cfg.iid_lo, cfg.iid_hi);
    return GeneratorKind::table1();
}

// Schema for reading an existing file: a declared kind wins; otherwise
// generic names around the file's column count.
DatasetSchema resolve_schema(const CommonConfig& cfg, std::size_t column_count) {
    DatasetSchema schema;
    if (cfg.kind == "table1") {
        schema = DatasetSchema::table1();
    } else if (cfg.kind == "iid") {
        schema = DatasetSchema::iid_uniform(column_count > 0 ? column_count - 1 : cfg.iid_cols);
    } else {
        schema = DatasetSchema::generic(column_count, false);
        schema.identifier_columns = cfg.id_cols;
        std::sort(schema.identifier_columns.begin(), schema.identifier_columns.end());
        schema.identifier_columns.erase(std::unique(schema.identifier_columns.begin(),
                                                    schema.identifier_columns.end()),
                                        schema.identifier_columns.end());
    }
    schema.validate();
    if (schema.column_count() != column_count)
        throw std::invalid_argument("schema declares " + std::to_string(schema.column_count()) +
                                    " columns but the file has " + std::to_string(column_count));
    return schema;
}

std::size_t csv_column_count(const fs::path& csv, bool header) {
    std::ifstream in(csv, std::ios::binary);
    if (!in) throw IoError("cannot open " + csv.string());
    std::string line;
    if (header && !std::getline(in, line)) throw FormatError("empty file: " + csv.string());
    if (!std::getline(in, line)) throw FormatError("no data rows in " + csv.string());
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

void maybe_write_report(const json& report, const std::string& path) {
    if (!path.empty()) write_report(report, path);
}

int fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kExitFailure;
}

// ---------------------------------------------------------------- generate

int cmd_generate(const CommonConfig& cfg, std::uint64_t rows, std::uint64_t seed,
                 const std::string& out) {
    StopWatch watch;
    GenerateOptions options;
    options.header = cfg.header;
    auto summary = generate_csv(rows, make_kind(cfg), seed, out, options);
    const double seconds = watch.seconds();
    std::printf("generated %llu rows (%llu bytes) in %.2fs -> %s\n",
                static_cast<unsigned long long>(summary.rows_written),
                static_cast<unsigned long long>(summary.bytes_written), seconds, out.c_str());

    json report = make_run_report("generate", {{"rows", rows},
                                               {"kind", cfg.kind.empty() ? "table1" : cfg.kind},
                                               {"seed", seed},
                                               {"out", out},
                                               {"header", cfg.header}});
    append_stage(report, "generate", seconds, to_json(summary));
    maybe_write_report(report, cfg.report_path);
    return kExitOk;
}

// ----------------------------------------------------------------- convert

int cmd_convert(const CommonConfig& cfg, const std::string& csv, const std::string& out,
                bool no_checksum) {
    StopWatch watch;
    DatasetSchema schema = resolve_schema(cfg, csv_column_count(csv, cfg.header));
    ConvertOptions options;
    options.chunk_rows = cfg.chunk_rows;
    options.with_checksum = !no_checksum;
    options.csv.expect_header = cfg.header;
    auto summary = convert_csv_to_binary(csv, out, schema, options);
    const double seconds = watch.seconds();
    std::printf("converted %llu rows x %zu columns (%llu bytes) in %.2fs -> %s\n",
                static_cast<unsigned long long>(summary.rows), schema.column_count(),
                static_cast<unsigned long long>(summary.bytes), seconds, out.c_str());
    if (summary.checksum_present)
        std::printf("payload checksum %s\n", hex_u64(summary.checksum).c_str());

    json report = make_run_report("convert", {{"csv", csv},
                                              {"out", out},
                                              {"chunk_rows", cfg.chunk_rows},
                                              {"checksum", !no_checksum}});
    append_stage(report, "convert", seconds, to_json(summary));
    maybe_write_report(report, cfg.report_path);
    return kExitOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const CommonConfig& cfg, const std::string& bin, const std::string& csv,
                 std::size_t spots, const std::string& checksum_mode) {
    StopWatch watch;
    DatasetSchema schema = resolve_schema(cfg, csv_column_count(csv, cfg.header));
    ValidateOptions options;
    options.spot_count = spots;
    if (checksum_mode == "on") options.with_checksum = true;
    if (checksum_mode == "off") options.with_checksum = false;
    options.csv.expect_header = cfg.header;
    auto report = validate_binary(bin, csv, schema, options);
    const double seconds = watch.seconds();

    std::printf("header %s, size %s, counts %s\n", report.header_ok ? "ok" : "BAD",
                report.size_ok ? "ok" : "BAD", report.counts_ok ? "ok" : "BAD");
    for (const auto& s : report.rows_checked)
        std::printf("spot row %llu: %s\n", static_cast<unsigned long long>(s.row),
                    s.match ? "match" : "MISMATCH");
    if (report.checksum_ok.has_value())
        std::printf("checksum: %s\n", *report.checksum_ok ? "ok" : "BAD");
    for (const auto& f : report.failures) std::printf("failure: %s\n", f.c_str());
    std::printf("verdict: %s (%.2fs)\n", report.verdict ? "pass" : "fail", seconds);

    json jr = make_run_report("validate", {{"bin", bin},
                                           {"csv", csv},
                                           {"spots", spots},
                                           {"checksum", checksum_mode}});
    append_stage(jr, "validate", seconds, to_json(report));
    maybe_write_report(jr, cfg.report_path);
    return report.verdict ? kExitOk : kExitFailure;
}

// --------------------------------------------------------------------- sum

int cmd_sum(const CommonConfig& cfg, const std::string& bin, std::size_t column,
            bool no_identifier_check) {
    StopWatch watch;
    BinaryReader probe(bin);
    const std::uint64_t n = probe.rows();

    ReductionPlan plan;
    plan.partition = plan_partitions(n, cfg.chunk_rows);
    plan.worker_count = cfg.worker_count();
    plan.precision = cfg.precision_mode();
    ReductionTimings timings;
    auto result = column_sum(bin, column, plan, &timings);
    const double seconds = watch.seconds();

    std::printf("column %zu over %llu rows: float sum %s\n", column,
                static_cast<unsigned long long>(n), format_real17(result.float_sum).c_str());
    if (result.exact_sum.has_value()) {
        std::printf("exact sum %s (%s)\n", to_string(*result.exact_sum).c_str(),
                    result.float_matches_exact ? "float path exact"
                                               : "float path approximate");
    } else if (result.exact_note.has_value()) {
        std::printf("exact sum unavailable: %s\n", result.exact_note->c_str());
    }

    bool identifier_ok = true;
    json expectation;
    if (column == 0 && !no_identifier_check) {
        const int128 expected = static_cast<int128>(n) * (static_cast<int128>(n) + 1) / 2;
        identifier_ok = result.exact_sum.has_value() && *result.exact_sum == expected;
        std::printf("identifier check: expected %s -> %s\n", to_string(expected).c_str(),
                    identifier_ok ? "match" : "MISMATCH");
        expectation = {{"expected", to_string(expected)}, {"match", identifier_ok}};
    }
    std::printf("%.2fs (read %.2fs, accumulate %.2fs)\n", seconds, timings.read_seconds,
                timings.work_seconds);

    json report = make_run_report("sum", {{"bin", bin},
                                          {"column", column},
                                          {"chunk_rows", cfg.chunk_rows},
                                          {"workers", plan.worker_count},
                                          {"precision", cfg.precision}});
    json results = to_json(result);
    if (!expectation.is_null()) results["identifier_check"] = expectation;
    results["read_seconds"] = timings.read_seconds;
    results["accumulate_seconds"] = timings.work_seconds;
    append_stage(report, "sum", seconds, results);
    maybe_write_report(report, cfg.report_path);
    return identifier_ok ? kExitOk : kExitFailure;
}

// --------------------------------------------------------------- suffstats

int cmd_suffstats(const CommonConfig& cfg, const std::string& bin, const std::string& out) {
    StopWatch watch;
    BinaryReader probe(bin);
    DatasetSchema schema = resolve_schema(cfg, probe.columns());

    ReductionPlan plan;
    plan.partition = plan_partitions(probe.rows(), cfg.chunk_rows);
    plan.worker_count = cfg.worker_count();
    plan.precision = cfg.precision_mode();
    ReductionTimings timings;
    auto ss = dataset_suffstats(bin, schema, plan, &timings);
    save_suffstats(ss, out);
    const double seconds = watch.seconds();

    std::printf("sufficient statistics over %llu rows x %zu columns in %.2fs "
                "(read %.2fs, accumulate %.2fs, %llu bytes) -> %s\n",
                static_cast<unsigned long long>(ss.n), schema.column_count(), seconds,
                timings.read_seconds, timings.work_seconds,
                static_cast<unsigned long long>(timings.bytes_read), out.c_str());

    json report = make_run_report("suffstats", {{"bin", bin},
                                                {"out", out},
                                                {"chunk_rows", cfg.chunk_rows},
                                                {"workers", plan.worker_count},
                                                {"precision", cfg.precision}});
    append_stage(report, "suffstats", seconds,
                 {{"n", ss.n},
                  {"columns", schema.column_count()},
                  {"read_seconds", timings.read_seconds},
                  {"accumulate_seconds", timings.work_seconds},
                  {"bytes_read", timings.bytes_read}});
    maybe_write_report(report, cfg.report_path);
    return kExitOk;
}

// ----------------------------------------------------------------- analyze

void print_matrix_14(const Matrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c)
            std::printf("%s%.14f", c == 0 ? "" : "\t", m(r, c));
        std::printf("\n");
    }
}

struct SelectionFlags {
    bool include_identifier = false;
    std::vector<std::size_t> drop;
    int ddof = 1;
};

void add_selection_flags(CLI::App* cmd, SelectionFlags& sel) {
    cmd->add_flag("--include-identifier", sel.include_identifier,
                  "keep identifier columns (reproduces the cancellation pathology)");
    cmd->add_option("--drop", sel.drop, "additional column indices to exclude");
    cmd->add_option("--ddof", sel.ddof, "variance denominator offset")
        ->check(CLI::Range(0, 1))
        ->capture_default_str();
}

int cmd_analyze(const CommonConfig& cfg, const std::string& stats_path,
                const SelectionFlags& sel) {
    StopWatch watch;
    SuffStats ss = load_suffstats(stats_path);
    AnalysisOptions options;
    options.include_identifiers = sel.include_identifier;
    options.extra_drop = sel.drop;
    options.ddof = sel.ddof;
    AnalysisResult result = analyze(ss, options);
    const double seconds = watch.seconds();

    std::printf("n = %llu, %zu columns included, ddof = %d, precision = %s\n",
                static_cast<unsigned long long>(result.n), result.included_columns.size(),
                result.ddof,
                result.precision == PrecisionMode::Binary64 ? "binary64" : "binary32");
    std::printf("columns:");
    for (const auto& name : result.column_names) std::printf(" %s", name.c_str());
    std::printf("\nmeans:");
    for (double m : result.mean) std::printf(" %s", format_real17(m).c_str());
    std::printf("\n");
    if (!result.diagnostics.flagged_columns.empty()) {
        std::printf("cancellation flags (kappa > %.2f):", result.diagnostics.threshold);
        for (std::size_t j : result.diagnostics.flagged_columns)
            std::printf(" %s (%.4f)", result.column_names[j].c_str(),
                        result.diagnostics.kappa[j]);
        std::printf("\n");
    }
    for (std::size_t j : result.diagnostics.negative_variance_columns)
        std::printf("NEGATIVE variance in column %s: %s\n", result.column_names[j].c_str(),
                    format_real17(result.covariance(j, j)).c_str());

    json report = make_run_report("analyze", {{"stats", stats_path},
                                              {"include_identifier", sel.include_identifier},
                                              {"drop", sel.drop},
                                              {"ddof", sel.ddof}});
    append_stage(report, "analyze", seconds, to_json(result));
    maybe_write_report(report, cfg.report_path);

    if (!result.correlation.has_value()) {
        try {
            correlation(result.covariance);
        } catch (const CancellationError& e) {
            std::string names;
            for (std::size_t j : e.columns()) names += " " + result.column_names[j];
            return fail(std::string(e.what()) + " (columns:" + names + ")");
        }
        return fail("correlation undefined");
    }
    if (result.covariance.rows() <= 12) {
        std::printf("correlation matrix:\n");
        print_matrix_14(*result.correlation);
    }
    return kExitOk;
}

// --------------------------------------------------------------------- pca

int cmd_pca(const CommonConfig& cfg, const std::string& stats_path, const SelectionFlags& sel,
            const std::string& basis_name) {
    StopWatch watch;
    SuffStats ss = load_suffstats(stats_path);
    PcaOptions options;
    options.include_identifiers = sel.include_identifier;
    options.extra_drop = sel.drop;
    options.ddof = sel.ddof;
    const PcaBasis basis =
        basis_name == "covariance" ? PcaBasis::Covariance : PcaBasis::Correlation;
    PcaResult result = run_pca(ss, basis, options);
    const double seconds = watch.seconds();

    std::printf("%s", format_pca_table(result).c_str());
    std::printf("(%.3fs)\n", seconds);

    json report = make_run_report("pca", {{"stats", stats_path},
                                          {"basis", basis_name},
                                          {"include_identifier", sel.include_identifier},
                                          {"drop", sel.drop},
                                          {"ddof", sel.ddof}});
    append_stage(report, "pca", seconds, to_json(result));
    maybe_write_report(report, cfg.report_path);
    return kExitOk;
}

// ---------------------------------------------------------------- pipeline

int cmd_pipeline(const CommonConfig& cfg, std::uint64_t rows, std::uint64_t seed,
                 const std::string& workdir, const SelectionFlags& sel,
                 const std::string& basis_name, bool skip_csv_compare) {
    fs::create_directories(workdir);
    const fs::path csv = fs::path(workdir) / "data.csv";
    const fs::path bin = fs::path(workdir) / "data.bin";
    const fs::path sidecar = fs::path(workdir) / "stats.ssf";
    const std::string report_path =
        cfg.report_path.empty() ? (fs::path(workdir) / "report.json").string() : cfg.report_path;

    const GeneratorKind kind = make_kind(cfg);
    const DatasetSchema schema = kind.schema();
    json report = make_run_report("pipeline", {{"rows", rows},
                                               {"kind", cfg.kind.empty() ? "table1" : cfg.kind},
                                               {"seed", seed},
                                               {"workdir", workdir},
                                               {"chunk_rows", cfg.chunk_rows},
                                               {"workers", cfg.worker_count()},
                                               {"precision", cfg.precision},
                                               {"basis", basis_name},
                                               {"ddof", sel.ddof},
                                               {"include_identifier", sel.include_identifier}});
    auto finish = [&](int code) {
        write_report(report, report_path);
        std::printf("report -> %s\n", report_path.c_str());
        return code;
    };

    // generate
    {
        StopWatch watch;
        auto summary = generate_csv(rows, kind, seed, csv);
        append_stage(report, "generate", watch.seconds(), to_json(summary));
        std::printf("[1/8] generate: %llu rows -> %s (%.2fs)\n",
                    static_cast<unsigned long long>(summary.rows_written), csv.c_str(),
                    watch.seconds());
    }
    // convert
    ConversionSummary conversion;
    {
        StopWatch watch;
        ConvertOptions options;
        options.chunk_rows = cfg.chunk_rows;
        conversion = convert_csv_to_binary(csv, bin, schema, options);
        append_stage(report, "convert", watch.seconds(), to_json(conversion));
        std::printf("[2/8] convert: %llu bytes -> %s (%.2fs)\n",
                    static_cast<unsigned long long>(conversion.bytes), bin.c_str(),
                    watch.seconds());
    }
    // validate
    {
        StopWatch watch;
        ValidateOptions options;
        auto validation = validate_binary(bin, csv, schema, options);
        append_stage(report, "validate", watch.seconds(), to_json(validation));
        std::printf("[3/8] validate: %s (%.2fs)\n", validation.verdict ? "pass" : "FAIL",
                    watch.seconds());
        if (!validation.verdict) {
            fail("binary validation failed; stopping pipeline");
            return finish(kExitFailure);
        }
    }
    // identifier sum
    ReductionPlan plan;
    plan.partition = plan_partitions(rows, cfg.chunk_rows);
    plan.worker_count = cfg.worker_count();
    plan.precision = cfg.precision_mode();
    {
        StopWatch watch;
        auto sum = column_sum(bin, 0, plan);
        const int128 expected = static_cast<int128>(rows) * (static_cast<int128>(rows) + 1) / 2;
        const bool ok = sum.exact_sum.has_value() && *sum.exact_sum == expected;
        json results = to_json(sum);
        results["identifier_check"] = {{"expected", to_string(expected)}, {"match", ok}};
        append_stage(report, "sum", watch.seconds(), results);
        std::printf("[4/8] sum: identifier %s (%.2fs)\n", ok ? "match" : "MISMATCH",
                    watch.seconds());
        if (!ok) {
            fail("identifier column sum does not match n(n+1)/2; stopping pipeline");
            return finish(kExitFailure);
        }
    }
    // csv-parsing suffstats pass (sequential; the binary pass must match it
    // bit-for-bit)
    SuffStats csv_stats = SuffStats::empty(schema, plan.precision);
    double csv_pass_seconds = 0.0;
    if (!skip_csv_compare) {
        StopWatch watch;
        CsvStream stream = open_csv_stream(csv, schema);
        while (auto chunk = stream.next_chunk(cfg.chunk_rows))
            csv_stats = merge_suffstats(std::move(csv_stats),
                                        accumulate_chunk(*chunk, schema, plan.precision));
        csv_pass_seconds = watch.seconds();
        append_stage(report, "suffstats_csv", csv_pass_seconds,
                     {{"n", csv_stats.n}, {"source", "csv"}});
        std::printf("[5/8] suffstats over CSV (sequential): %.2fs\n", csv_pass_seconds);
    } else {
        std::printf("[5/8] suffstats over CSV: skipped\n");
    }
    // binary suffstats
    SuffStats stats;
    {
        StopWatch watch;
        ReductionTimings timings;
        stats = dataset_suffstats(bin, schema, plan, &timings);
        save_suffstats(stats, sidecar);
        const double seconds = watch.seconds();
        append_stage(report, "suffstats", seconds,
                     {{"n", stats.n},
                      {"read_seconds", timings.read_seconds},
                      {"accumulate_seconds", timings.work_seconds},
                      {"bytes_read", timings.bytes_read},
                      {"sidecar", sidecar.string()}});
        std::printf("[6/8] suffstats over binary (%u workers): %.2fs -> %s\n",
                    plan.worker_count, seconds, sidecar.c_str());
        if (!skip_csv_compare) {
            if (!(stats == csv_stats)) {
                fail("binary-path and CSV-path sufficient statistics differ; stopping pipeline");
                return finish(kExitFailure);
            }
            const double ratio = csv_pass_seconds / std::max(seconds, 1e-9);
            report["stages"].back()["results"]["csv_vs_binary_speedup"] = ratio;
            std::printf("      CSV pass / binary pass: %.1fx (paths agree bit-exactly)\n", ratio);
        }
    }
    // analyze
    AnalysisResult analysis;
    {
        StopWatch watch;
        AnalysisOptions options;
        options.include_identifiers = sel.include_identifier;
        options.extra_drop = sel.drop;
        options.ddof = sel.ddof;
        analysis = analyze(stats, options);
        append_stage(report, "analyze", watch.seconds(), to_json(analysis));
        std::printf("[7/8] analyze: %zu columns, correlation %s (%.2fs)\n",
                    analysis.included_columns.size(),
                    analysis.correlation.has_value() ? "defined" : "UNDEFINED",
                    watch.seconds());
        if (!analysis.correlation.has_value()) {
            std::string names;
            for (std::size_t j : analysis.diagnostics.negative_variance_columns)
                names += " " + analysis.column_names[j];
            fail("correlation undefined; negative-variance columns:" + names);
            return finish(kExitFailure);
        }
    }
    // pca
    {
        StopWatch watch;
        PcaOptions options;
        options.include_identifiers = sel.include_identifier;
        options.extra_drop = sel.drop;
        options.ddof = sel.ddof;
        const PcaBasis basis =
            basis_name == "covariance" ? PcaBasis::Covariance : PcaBasis::Correlation;
        auto pca = run_pca(stats, basis, options);
        append_stage(report, "pca", watch.seconds(), to_json(pca));
        std::printf("[8/8] pca (%s basis): leading eigenvalue %s (%.2fs)\n", basis_name.c_str(),
                    format_real17(pca.eigenvalues.front()).c_str(), watch.seconds());
        std::printf("%s", format_pca_table(pca).c_str());
    }
    return finish(kExitOk);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sstat: single-pass sufficient statistics, validation, and PCA "
                 "over large CSV/binary datasets"};
    app.require_subcommand(1);

    CommonConfig cfg;

    // generate
    auto* generate = app.add_subcommand("generate", "write a synthetic CSV dataset");
    std::uint64_t gen_rows = 0;
    std::uint64_t gen_seed = 42;
    std::string gen_out;
    generate->add_option("--rows", gen_rows, "rows to generate")
        ->required()
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    generate->add_option("--out", gen_out, "output CSV path")->required();
    generate->add_flag("--header", cfg.header, "emit a header line");
    add_kind_flags(generate, cfg, true);
    add_report_flag(generate, cfg);

    // convert
    auto* convert = app.add_subcommand("convert", "convert CSV to the binary dataset format");
    std::string conv_csv, conv_out;
    bool conv_no_checksum = false;
    convert->add_option("--csv", conv_csv, "input CSV path")->required();
    convert->add_option("--out", conv_out, "output binary path")->required();
    convert->add_flag("--no-checksum", conv_no_checksum, "skip the payload checksum");
    convert->add_flag("--header", cfg.header, "input has a header line");
    add_kind_flags(convert, cfg, false);
    convert->add_option("--chunk-rows", cfg.chunk_rows, "rows per streamed chunk")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_report_flag(convert, cfg);

    // validate
    auto* validate = app.add_subcommand("validate", "validate a binary file against its CSV");
    std::string val_bin, val_csv, val_checksum = "auto";
    std::size_t val_spots = 8;
    validate->add_option("--bin", val_bin, "binary dataset path")->required();
    validate->add_option("--csv", val_csv, "CSV source path")->required();
    validate->add_option("--spots", val_spots, "sampled rows to compare")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    validate->add_option("--checksum", val_checksum, "payload checksum: auto, on, off")
        ->check(CLI::IsMember({"auto", "on", "off"}))
        ->capture_default_str();
    validate->add_flag("--header", cfg.header, "CSV has a header line");
    add_kind_flags(validate, cfg, false);
    add_report_flag(validate, cfg);

    // sum
    auto* sum = app.add_subcommand("sum", "column sum over a binary dataset");
    std::string sum_bin;
    std::size_t sum_column = 0;
    bool sum_no_id_check = false;
    sum->add_option("--bin", sum_bin, "binary dataset path")->required();
    sum->add_option("--column", sum_column, "column index (0-based)")->capture_default_str();
    sum->add_flag("--no-identifier-check", sum_no_id_check,
                  "skip the n(n+1)/2 comparison for column 0");
    add_parallel_flags(sum, cfg);
    add_report_flag(sum, cfg);

    // suffstats
    auto* suffstats = app.add_subcommand("suffstats",
                                         "single-pass sufficient statistics over a binary dataset");
    std::string ss_bin, ss_out;
    suffstats->add_option("--bin", ss_bin, "binary dataset path")->required();
    suffstats->add_option("--out", ss_out, "sidecar output path")->required();
    add_kind_flags(suffstats, cfg, false);
    suffstats->add_option("--id-cols", cfg.id_cols,
                          "identifier column indices for generic schemas")
        ->capture_default_str();
    add_parallel_flags(suffstats, cfg);
    add_report_flag(suffstats, cfg);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze",
                                           "means/covariance/correlation from a sidecar");
    std::string an_stats;
    SelectionFlags an_sel;
    analyze_cmd->add_option("--stats", an_stats, "sufficient-statistics sidecar")->required();
    add_selection_flags(analyze_cmd, an_sel);
    add_report_flag(analyze_cmd, cfg);

    // pca
    auto* pca_cmd = app.add_subcommand("pca", "principal component analysis from a sidecar");
    std::string pca_stats, pca_basis = "correlation";
    SelectionFlags pca_sel;
    pca_cmd->add_option("--stats", pca_stats, "sufficient-statistics sidecar")->required();
    pca_cmd->add_option("--basis", pca_basis, "basis matrix")
        ->check(CLI::IsMember({"correlation", "covariance"}))
        ->capture_default_str();
    add_selection_flags(pca_cmd, pca_sel);
    add_report_flag(pca_cmd, cfg);

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline",
                                        "generate -> convert -> validate -> sum -> suffstats -> "
                                        "analyze -> pca");
    std::uint64_t pl_rows = 0, pl_seed = 42;
    std::string pl_workdir, pl_basis = "correlation";
    bool pl_skip_csv_compare = false;
    SelectionFlags pl_sel;
    pipeline->add_option("--rows", pl_rows, "rows to generate")
        ->required()
        ->check(CLI::PositiveNumber);
    pipeline->add_option("--seed", pl_seed, "generator seed")->capture_default_str();
    pipeline->add_option("--workdir", pl_workdir, "working directory for pipeline files")
        ->required();
    pipeline->add_option("--basis", pl_basis, "PCA basis")
        ->check(CLI::IsMember({"correlation", "covariance"}))
        ->capture_default_str();
    pipeline->add_flag("--skip-csv-compare", pl_skip_csv_compare,
                       "skip the CSV-pass comparison stage");
    add_kind_flags(pipeline, cfg, true);
    add_selection_flags(pipeline, pl_sel);
    add_parallel_flags(pipeline, cfg);
    add_report_flag(pipeline, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e); // prints help or the error message
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(cfg, gen_rows, gen_seed, gen_out);
        if (convert->parsed()) return cmd_convert(cfg, conv_csv, conv_out, conv_no_checksum);
        if (validate->parsed())
            return cmd_validate(cfg, val_bin, val_csv, val_spots, val_checksum);
        if (sum->parsed()) return cmd_sum(cfg, sum_bin, sum_column, sum_no_id_check);
        if (suffstats->parsed()) return cmd_suffstats(cfg, ss_bin, ss_out);
        if (analyze_cmd->parsed()) return cmd_analyze(cfg, an_stats, an_sel);
        if (pca_cmd->parsed()) return cmd_pca(cfg, pca_stats, pca_sel, pca_basis);
        if (pipeline->parsed())
            return cmd_pipeline(cfg, pl_rows, pl_seed, pl_workdir, pl_sel, pl_basis,
                                pl_skip_csv_compare);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        return fail(e.what());
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kExitUsage;
}
