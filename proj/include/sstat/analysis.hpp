#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sstat/linalg.hpp"
#include "sstat/suffstats.hpp"

namespace sstat {

/// Per-column cancellation severity: kappa_j = n*mean_j^2 / S_jj, the share
/// of the raw second moment explained by the mean term. 1 means the
/// centered part is entirely lost to the subtraction. Columns with
/// kappa > 0.5 are flagged; negative variances are recorded, never
/// clamped.
struct CancellationDiagnostics {
    std::vector<double> kappa;
    std::vector<std::size_t> flagged_columns;           // kappa > threshold
    std::vector<std::size_t> negative_variance_columns; // Cov_jj < 0
    double threshold = 0.5;
};

struct CovarianceResult {
    Matrix cov;
    CancellationDiagnostics diagnostics;
    std::uint64_t n = 0;
    int ddof = 1;
};

/// Restricts sufficient statistics to the kept columns (subvector of s,
/// principal submatrix of S). The raw data is never touched.
SuffStats exclude_columns(const SuffStats& ss, const std::vector<std::size_t>& drop);

/// mean_j = s_j / n.
std::vector<double> means(const SuffStats& ss);

/// Cov = (S - n mu mu^T) / (n - ddof), the raw-moment path the pipeline
/// accumulates. Negative diagonal entries are reported in the diagnostics.
CovarianceResult covariance(const SuffStats& ss, int ddof = 1);

/// R_jk = Cov_jk / sqrt(Cov_jj Cov_kk), diagonal forced to exactly 1.
/// Throws CancellationError naming the offending columns when any
/// Cov_jj <= 0.
Matrix correlation(const Matrix& cov);

struct AnalysisOptions {
    bool include_identifiers = false;      // keep schema identifier columns
    std::vector<std::size_t> extra_drop;   // additional columns to exclude
    int ddof = 1;
};

struct AnalysisResult {
    std::vector<std::size_t> included_columns; // original column indices
    std::vector<std::string> column_names;
    std::vector<double> mean;
    Matrix covariance;
    std::optional<Matrix> correlation; // present iff all variances > 0
    CancellationDiagnostics diagnostics;
    std::uint64_t n = 0;
    int ddof = 1;
    PrecisionMode precision = PrecisionMode::Binary64;
};

/// Full derivation from a sidecar-loadable SuffStats: exclusion (schema
/// identifiers by default), means, covariance, correlation when defined.
AnalysisResult analyze(const SuffStats& ss, const AnalysisOptions& options = {});

} // namespace sstat
