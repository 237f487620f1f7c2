#include <doctest.h>

#include <cmath>

#include "sstat/analysis.hpp"
#include "sstat/datagen.hpp"
#include "sstat/errors.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace sstat;

namespace {

Chunk chunk_of(std::vector<std::vector<double>> rows) {
    Chunk chunk;
    chunk.row_count = rows.size();
    chunk.column_count = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows) chunk.values.insert(chunk.values.end(), r.begin(), r.end());
    return chunk;
}

Chunk table1_chunk(std::uint64_t n, std::uint64_t seed) {
    Chunk chunk;
    chunk.row_count = n;
    chunk.column_count = 11;
    chunk.values.reserve(n * 11);
    for (std::uint64_t i = 1; i <= n; ++i) {
        auto row = generate_row(GeneratorKind::table1(), seed, i);
        chunk.values.insert(chunk.values.end(), row.begin(), row.end());
    }
    return chunk;
}

SuffStats identifier_stats(std::uint64_t n, PrecisionMode precision = PrecisionMode::Binary64) {
    SuffStats total = SuffStats::empty(DatasetSchema::generic(1), precision);
    Chunk chunk;
    chunk.column_count = 1;
    const std::uint64_t block = 1u << 20;
    for (std::uint64_t start = 0; start < n; start += block) {
        const std::uint64_t m = std::min(block, n - start);
        chunk.start_row = start;
        chunk.row_count = m;
        chunk.values.clear();
        for (std::uint64_t i = 0; i < m; ++i)
            chunk.values.push_back(static_cast<double>(start + i + 1));
        total = merge_suffstats(std::move(total),
                                accumulate_chunk(chunk, total.schema, precision));
    }
    return total;
}

} // namespace

TEST_CASE("exclude_columns drops the identifier and remaps the schema") {
    auto ss = accumulate_chunk(table1_chunk(100, 2), DatasetSchema::table1());
    auto kept = exclude_columns(ss, {0});
    CHECK(kept.schema.column_count() == 10);
    CHECK(kept.schema.column_names[0] == "B");
    CHECK(kept.schema.identifier_columns.empty());
    CHECK(kept.n == ss.n);
    CHECK(kept.sums[0] == ss.sums[1]);
    CHECK(kept.cross.at(0, 0) == ss.cross.at(1, 1));
    CHECK(kept.cross.at(0, 9) == ss.cross.at(1, 10));

    auto same = exclude_columns(ss, {});
    CHECK(same == ss);

    CHECK_THROWS_AS(exclude_columns(ss, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}),
                    std::invalid_argument);
    CHECK_THROWS_AS(exclude_columns(ss, {11}), std::out_of_range);
}

TEST_CASE("exclusion commutes with covariance") {
    auto ss = accumulate_chunk(table1_chunk(10000, 4), DatasetSchema::table1());
    // restrict then derive
    auto restricted = covariance(exclude_columns(ss, {0}), 1);
    // derive then take the principal submatrix
    auto full = covariance(ss, 1);
    for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t k = 0; k < 10; ++k) {
            const double a = restricted.cov(j, k);
            const double b = full.cov(j + 1, k + 1);
            CHECK(a == b); // same inputs, same arithmetic
        }
    // means commute exactly
    auto mu_restricted = means(exclude_columns(ss, {0}));
    auto mu_full = means(ss);
    for (std::size_t j = 0; j < 10; ++j) CHECK(mu_restricted[j] == mu_full[j + 1]);
}

TEST_CASE("means: identifier rows 1..n average to (n+1)/2 exactly") {
    auto ss = identifier_stats(1000000);
    auto mu = means(ss);
    CHECK(mu[0] == 500000.5);
}

TEST_CASE("means: constant column") {
    auto ss = accumulate_chunk(chunk_of({{7.25}, {7.25}, {7.25}}), DatasetSchema::generic(1));
    CHECK(means(ss)[0] == 7.25);
    CHECK_THROWS_AS(means(SuffStats::empty(DatasetSchema::generic(1))), std::invalid_argument);
}

TEST_CASE("means: Table1 column B lands within 3 sigma of 5.5") {
    auto ss = accumulate_chunk(table1_chunk(100000, 42), DatasetSchema::table1());
    auto mu = means(ss);
    // sd(uniform{3..8}) = sqrt(35/12)
    const double sigma = std::sqrt(35.0 / 12.0) / std::sqrt(100000.0);
    CHECK(std::fabs(mu[1] - 5.5) <= 3.0 * sigma);
}

TEST_CASE("covariance: two-point hand case") {
    auto ss = accumulate_chunk(chunk_of({{0.0, 0.0}, {2.0, 2.0}}), DatasetSchema::generic(2, false));
    auto result = covariance(ss, 1);
    CHECK(result.cov(0, 0) == 2.0);
    CHECK(result.cov(0, 1) == 2.0);
    CHECK(result.cov(1, 0) == 2.0);
    CHECK(result.cov(1, 1) == 2.0);
}

TEST_CASE("covariance: identifier variance matches n(n+1)/12 in binary64") {
    const std::uint64_t n = 1000000;
    auto result = covariance(identifier_stats(n), 1);
    const double expected = static_cast<double>(n) * (n + 1) / 12.0;
    CHECK(std::fabs(result.cov(0, 0) - expected) <= 1e-9 * expected);
}

TEST_CASE("covariance guards the denominator") {
    auto one_row = accumulate_chunk(chunk_of({{1.0}}), DatasetSchema::generic(1));
    CHECK_THROWS_AS(covariance(one_row, 1), std::invalid_argument);
    CHECK_NOTHROW(covariance(one_row, 0));
    CHECK_THROWS_AS(covariance(one_row, 2), std::invalid_argument);
}

TEST_CASE("binary32 diagnostic mode degrades the identifier variance at desk scale") {
    // single-range binary32 accumulation of rows 1..1e7, the most degraded
    // legitimate configuration
    const std::uint64_t n = 10000000;
    SuffStats ss = SuffStats::empty(DatasetSchema::generic(1), PrecisionMode::Binary32Diagnostic);
    Chunk chunk;
    chunk.column_count = 1;
    chunk.row_count = n;
    chunk.values.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) chunk.values[i] = static_cast<double>(i + 1);
    ss = accumulate_chunk(chunk, ss.schema, PrecisionMode::Binary32Diagnostic);

    auto result = covariance(ss, 1);
    const double expected = static_cast<double>(n) * (n + 1) / 12.0;
    const double relative_error = std::fabs(result.cov(0, 0) - expected) / expected;
    CHECK((result.cov(0, 0) < 0.0 || relative_error > 0.10));
    // cancellation severity of the identifier: 3(n+1)/(2(2n+1)) -> 0.75
    CHECK(result.diagnostics.kappa[0] > 0.5);
    REQUIRE(result.diagnostics.flagged_columns.size() >= 1);
    CHECK(result.diagnostics.flagged_columns[0] == 0);

    // binary64 at the same scale stays accurate
    auto good = covariance(identifier_stats(n), 1);
    CHECK(std::fabs(good.cov(0, 0) - expected) <= 1e-9 * expected);
}

TEST_CASE("identifier kappa exceeds 0.7 from n = 10^4 and is flagged") {
    for (std::uint64_t n : {std::uint64_t{10000}, std::uint64_t{100000}}) {
        auto result = covariance(identifier_stats(n), 1);
        const double nn = static_cast<double>(n);
        const double closed_form = 3.0 * (nn + 1.0) / (2.0 * (2.0 * nn + 1.0));
        CHECK(result.diagnostics.kappa[0] == doctest::Approx(closed_form).epsilon(1e-9));
        CHECK(result.diagnostics.kappa[0] > 0.7);
        CHECK(!result.diagnostics.flagged_columns.empty());
    }
}

TEST_CASE("negative variances are recorded, never clamped") {
    // crafted stats where cancellation has already destroyed the variance:
    // n=4, s=4 (mean 1), S=3 < n*mean^2
    SuffStats ss = SuffStats::empty(DatasetSchema::generic(1, false));
    ss.n = 4;
    ss.sums = {4.0};
    ss.cross.ref(0, 0) = 3.0;
    auto result = covariance(ss, 1);
    CHECK(result.cov(0, 0) == doctest::Approx(-1.0 / 3.0));
    REQUIRE(result.diagnostics.negative_variance_columns.size() == 1);
    CHECK(result.diagnostics.negative_variance_columns[0] == 0);
    CHECK_THROWS_AS(correlation(result.cov), CancellationError);
}

TEST_CASE("correlation basics") {
    Matrix cov(2, 2);
    cov(0, 0) = cov(0, 1) = cov(1, 0) = cov(1, 1) = 2.0;
    auto r = correlation(cov);
    CHECK(r(0, 0) == 1.0); // diagonal is forced exactly
    CHECK(r(1, 1) == 1.0);
    CHECK(r(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

    Matrix diag(3, 3);
    diag(0, 0) = 4.0;
    diag(1, 1) = 9.0;
    diag(2, 2) = 16.0;
    auto id = correlation(diag);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) CHECK(id(j, k) == (j == k ? 1.0 : 0.0));
}

TEST_CASE("correlation names every offending column") {
    Matrix cov(3, 3);
    cov(0, 0) = 1.0;
    cov(1, 1) = -2.0;
    cov(2, 2) = 0.0;
    try {
        correlation(cov);
        FAIL("expected CancellationError");
    } catch (const CancellationError& e) {
        CHECK(e.columns() == std::vector<std::size_t>{1, 2});
    }
}

TEST_CASE("correlation of Table1 variables is finite and within [-1, 1]") {
    auto ss = accumulate_chunk(table1_chunk(100000, 6), DatasetSchema::table1());
    auto result = analyze(ss);
    REQUIRE(result.correlation.has_value());
    const Matrix& r = *result.correlation;
    REQUIRE(r.rows() == 10);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(r(j, j) == 1.0);
        for (std::size_t k = 0; k < 10; ++k) {
            CHECK(std::isfinite(r(j, k)));
            CHECK(std::fabs(r(j, k)) <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("analysis correlation agrees with the two-pass reference") {
    Chunk chunk = table1_chunk(100000, 6);
    auto ss = accumulate_chunk(chunk, DatasetSchema::table1());
    auto result = analyze(ss);
    REQUIRE(result.correlation.has_value());

    auto ref = oracles::two_pass_covariance(chunk.values, 11, 1);
    for (std::size_t j = 0; j < 10; ++j)
        for (std::size_t k = 0; k < 10; ++k) {
            const double expected = ref.cov(j + 1, k + 1) /
                                    std::sqrt(ref.cov(j + 1, j + 1) * ref.cov(k + 1, k + 1));
            CHECK(std::fabs((*result.correlation)(j, k) - expected) <= 1e-8);
        }
}

TEST_CASE("translation exposes the cancellation mechanism") {
    // same data, one column shifted by a large constant
    const std::size_t n = 20000;
    std::vector<std::vector<double>> base(n);
    for (std::size_t i = 0; i < n; ++i) {
        RowRng rng(1234, i + 1);
        base[i] = {rng.next_unit(), rng.next_unit()};
    }
    const double shift = 1.0e4;
    auto shifted = base;
    for (auto& row : shifted) row[0] += shift;

    auto schema = DatasetSchema::generic(2, false);
    auto cm_base = accumulate_comoments(chunk_of(base), schema);
    auto cm_shifted = accumulate_comoments(chunk_of(shifted), schema);
    auto ss_base = accumulate_chunk(chunk_of(base), schema);
    auto ss_shifted = accumulate_chunk(chunk_of(shifted), schema);

    const double var_true = comoments_covariance(cm_base, 1)(0, 0);
    const double var_cm = comoments_covariance(cm_shifted, 1)(0, 0);
    const double var_ss = covariance(ss_shifted, 1).cov(0, 0);

    // mean shifts by the constant
    CHECK(means(ss_shifted)[0] == doctest::Approx(means(ss_base)[0] + shift).epsilon(1e-12));
    // centered path holds the variance
    const double cm_error = std::fabs(var_cm - var_true) / var_true;
    CHECK(cm_error <= 1e-10);
    // raw-moment path degrades beyond the centered path's error
    const double ss_error = std::fabs(var_ss - var_true) / var_true;
    CHECK(ss_error > cm_error);
    // and the diagnostics see the mean term dominating
    auto diag = covariance(ss_shifted, 1).diagnostics;
    CHECK(diag.kappa[0] > 0.999);
    CHECK(!diag.flagged_columns.empty());
}

TEST_CASE("analyze excludes identifiers by default and can include them") {
    auto ss = accumulate_chunk(table1_chunk(1000, 8), DatasetSchema::table1());
    auto excluded = analyze(ss);
    CHECK(excluded.included_columns.size() == 10);
    CHECK(excluded.included_columns[0] == 1);
    CHECK(excluded.column_names[0] == "B");

    AnalysisOptions options;
    options.include_identifiers = true;
    auto included = analyze(ss, options);
    CHECK(included.included_columns.size() == 11);
    CHECK(included.column_names[0] == "A");

    options.include_identifiers = false;
    options.extra_drop = {1, 10}; // drops B and K on top of the identifier
    auto dropped = analyze(ss, options);
    CHECK(dropped.included_columns.size() == 8);
    CHECK(dropped.column_names[0] == "C");
}
