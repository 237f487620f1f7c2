#include "sstat/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "sstat/errors.hpp"

namespace sstat {

SuffStats exclude_columns(const SuffStats& ss, const std::vector<std::size_t>& drop) {
    const std::size_t p = ss.schema.column_count();
    std::vector<bool> dropped(p, false);
    for (std::size_t d : drop) {
        if (d >= p)
            throw std::out_of_range("exclude_columns: column " + std::to_string(d) +
                                    " out of range");
        dropped[d] = true;
    }
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < p; ++j)
        if (!dropped[j]) kept.push_back(j);
    if (kept.empty())
        throw std::invalid_argument("exclude_columns: cannot drop every column");
    if (kept.size() == p) return ss;

    SuffStats out;
    out.n = ss.n;
    out.precision = ss.precision;
    out.schema.column_names.reserve(kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) {
        out.schema.column_names.push_back(ss.schema.column_names[kept[j]]);
        if (ss.schema.is_identifier(kept[j])) out.schema.identifier_columns.push_back(j);
    }
    out.sums.reserve(kept.size());
    for (std::size_t j : kept) out.sums.push_back(ss.sums[j]);
    out.cross = SymPacked(kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j)
        for (std::size_t k = j; k < kept.size(); ++k)
            out.cross.ref(j, k) = ss.cross.at(kept[j], kept[k]);
    return out;
}

std::vector<double> means(const SuffStats& ss) {
    if (ss.n == 0) throw std::invalid_argument("means: no observations");
    std::vector<double> mu(ss.sums.size());
    for (std::size_t j = 0; j < mu.size(); ++j)
        mu[j] = ss.sums[j] / static_cast<double>(ss.n);
    return mu;
}

CovarianceResult covariance(const SuffStats& ss, int ddof) {
    if (ddof != 0 && ddof != 1) throw std::invalid_argument("covariance: ddof must be 0 or 1");
    if (ss.n <= static_cast<std::uint64_t>(ddof))
        throw std::invalid_argument("covariance: need n > ddof");

    const std::size_t p = ss.sums.size();
    const double n = static_cast<double>(ss.n);
    const double denom = static_cast<double>(ss.n - static_cast<std::uint64_t>(ddof));
    const std::vector<double> mu = means(ss);

    CovarianceResult result;
    result.n = ss.n;
    result.ddof = ddof;
    result.cov = Matrix(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j; k < p; ++k) {
            const double c = (ss.cross.at(j, k) - n * mu[j] * mu[k]) / denom;
            result.cov(j, k) = result.cov(k, j) = c;
        }

    result.diagnostics.kappa.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        const double sjj = ss.cross.at(j, j);
        const double kappa = sjj > 0.0 ? n * mu[j] * mu[j] / sjj : 0.0;
        result.diagnostics.kappa[j] = kappa;
        if (kappa > result.diagnostics.threshold)
            result.diagnostics.flagged_columns.push_back(j);
        if (result.cov(j, j) < 0.0)
            result.diagnostics.negative_variance_columns.push_back(j);
    }
    return result;
}

Matrix correlation(const Matrix& cov) {
    if (cov.rows() != cov.cols())
        throw std::invalid_argument("correlation: matrix must be square");
    const std::size_t p = cov.rows();
    std::vector<std::size_t> bad;
    for (std::size_t j = 0; j < p; ++j)
        if (!(cov(j, j) > 0.0)) bad.push_back(j);
    if (!bad.empty()) {
        std::string what = "correlation undefined: non-positive variance in column";
        what += bad.size() > 1 ? "s" : "";
        for (std::size_t j : bad) what += " " + std::to_string(j);
        throw CancellationError(bad, what);
    }
    std::vector<double> inv_sd(p);
    for (std::size_t j = 0; j < p; ++j) inv_sd[j] = 1.0 / std::sqrt(cov(j, j));
    Matrix r(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        r(j, j) = 1.0;
        for (std::size_t k = j + 1; k < p; ++k)
            r(j, k) = r(k, j) = cov(j, k) * inv_sd[j] * inv_sd[k];
    }
    return r;
}

AnalysisResult analyze(const SuffStats& ss, const AnalysisOptions& options) {
    std::vector<std::size_t> drop = options.extra_drop;
    if (!options.include_identifiers)
        drop.insert(drop.end(), ss.schema.identifier_columns.begin(),
                    ss.schema.identifier_columns.end());
    std::sort(drop.begin(), drop.end());
    drop.erase(std::unique(drop.begin(), drop.end()), drop.end());

    const std::size_t p = ss.schema.column_count();
    SuffStats kept = exclude_columns(ss, drop);

    AnalysisResult result;
    result.n = kept.n;
    result.ddof = options.ddof;
    result.precision = kept.precision;
    for (std::size_t j = 0; j < p; ++j)
        if (!std::binary_search(drop.begin(), drop.end(), j)) result.included_columns.push_back(j);
    result.column_names = kept.schema.column_names;
    result.mean = means(kept);

    CovarianceResult cov = covariance(kept, options.ddof);
    result.covariance = std::move(cov.cov);
    result.diagnostics = std::move(cov.diagnostics);

    bool all_positive = true;
    for (std::size_t j = 0; j < result.covariance.rows(); ++j)
        all_positive = all_positive && result.covariance(j, j) > 0.0;
    if (all_positive) result.correlation = correlation(result.covariance);
    return result;
}

} // namespace sstat
