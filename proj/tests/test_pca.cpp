#include <doctest.h>

#include <cmath>
#include <random>

#include "sstat/datagen.hpp"
#include "sstat/errors.hpp"
#include "sstat/pca.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace sstat;

namespace {

Matrix random_symmetric(std::size_t p, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Matrix m(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j; k < p; ++k) m(j, k) = m(k, j) = normal(rng);
    return m;
}

double reconstruction_error(const Matrix& m, const EigenDecomposition& eig) {
    const std::size_t p = m.rows();
    double worst = 0.0;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
            double r = 0.0;
            for (std::size_t i = 0; i < p; ++i)
                r += eig.eigenvectors(j, i) * eig.eigenvalues[i] * eig.eigenvectors(k, i);
            worst = std::max(worst, std::fabs(r - 0.5 * (m(j, k) + m(k, j))));
        }
    return worst;
}

double orthonormality_error(const Matrix& v) {
    const std::size_t p = v.rows();
    double worst = 0.0;
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < p; ++i) dot += v(i, a) * v(i, b);
            worst = std::max(worst, std::fabs(dot - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

SuffStats iid_stats(std::uint64_t n, std::size_t p_vars, std::uint64_t seed, double lo = 0.0,
                    double hi = 1.0) {
    const GeneratorKind kind = GeneratorKind::iid_uniform(p_vars, lo, hi);
    SuffStats total = SuffStats::empty(kind.schema());
    Chunk chunk;
    chunk.column_count = p_vars + 1;
    const std::uint64_t block = 1u << 16;
    for (std::uint64_t start = 0; start < n; start += block) {
        const std::uint64_t m = std::min(block, n - start);
        chunk.start_row = start;
        chunk.row_count = m;
        chunk.values.clear();
        for (std::uint64_t i = 0; i < m; ++i) {
            auto row = generate_row(kind, seed, start + i + 1);
            chunk.values.insert(chunk.values.end(), row.begin(), row.end());
        }
        total = merge_suffstats(std::move(total), accumulate_chunk(chunk, total.schema));
    }
    return total;
}

} // namespace

TEST_CASE("identity matrix has a flat unit spectrum") {
    auto eig = eigh_symmetric(Matrix::identity(10));
    for (double v : eig.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("2x2 hand case: eigenpairs of [[2,1],[1,2]]") {
    Matrix m(2, 2);
    m(0, 0) = m(1, 1) = 2.0;
    m(0, 1) = m(1, 0) = 1.0;
    auto eig = eigh_symmetric(m);
    CHECK(eig.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    // sign convention makes the largest-magnitude entry positive
    CHECK(eig.eigenvectors(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(eig.eigenvectors(1, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(std::fabs(eig.eigenvectors(0, 1)) == doctest::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(eig.eigenvectors(0, 1) * eig.eigenvectors(1, 1) < 0.0);
}

TEST_CASE("random symmetric matrices: reconstruction, orthonormality, oracle, trace") {
    std::mt19937_64 rng(20250101);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t p = 2 + trial % 11; // up to 12
        Matrix m = random_symmetric(p, rng, trial % 3 == 0 ? 100.0 : 1.0);
        auto eig = eigh_symmetric(m);

        const double norm = frobenius_norm(m);
        CHECK(reconstruction_error(m, eig) <= 1e-10 * std::max(norm, 1e-30));
        CHECK(orthonormality_error(eig.eigenvectors) <= 1e-10);

        // descending order
        for (std::size_t i = 1; i < p; ++i) CHECK(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);

        // independent bisection oracle (ascending)
        auto oracle = oracles::eig_bisection(m);
        for (std::size_t i = 0; i < p; ++i)
            CHECK(std::fabs(eig.eigenvalues[i] - oracle[p - 1 - i]) <=
                  1e-8 * std::max(1.0, norm));

        // trace preservation
        double trace = 0.0, sum = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            trace += m(i, i);
            sum += eig.eigenvalues[i];
        }
        CHECK(std::fabs(sum - trace) <= 1e-12 * std::max(std::fabs(trace), norm));
    }
}

TEST_CASE("degenerate eigenvalues: the eigenspace projector is right") {
    // eigenvalue 2 with multiplicity 2, eigenvalue 1 simple, in a rotated basis
    Matrix m(3, 3);
    m(0, 0) = 2.0;
    m(1, 1) = 1.5;
    m(2, 2) = 1.5;
    m(1, 2) = m(2, 1) = 0.5; // eigenvalues 2, 2, 1
    auto eig = eigh_symmetric(m);
    CHECK(eig.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(eig.eigenvalues[2] == doctest::Approx(1.0).epsilon(1e-12));
    // projector onto the eigenvalue-2 subspace: P = sum of vv^T over that pair
    Matrix projector(3, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k)
                projector(j, k) += eig.eigenvectors(j, i) * eig.eigenvectors(k, i);
    // apply P to M: P M = 2 P on the subspace; equivalently M P = 2 P
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            double mp = 0.0;
            for (std::size_t i = 0; i < 3; ++i) mp += m(j, i) * projector(i, k);
            CHECK(mp == doctest::Approx(2.0 * projector(j, k)).epsilon(1e-10));
        }
}

TEST_CASE("eigh_symmetric rejects bad input") {
    CHECK_THROWS_AS(eigh_symmetric(Matrix(2, 3)), std::invalid_argument);
    Matrix nan_matrix(2, 2);
    nan_matrix(0, 1) = std::nan("");
    CHECK_THROWS_AS(eigh_symmetric(nan_matrix), std::invalid_argument);
}

TEST_CASE("run_pca on a single variable") {
    auto ss = iid_stats(1000, 1, 3);
    auto result = run_pca(ss, PcaBasis::Covariance);
    REQUIRE(result.eigenvalues.size() == 1);
    CHECK(result.variance_percent[0] == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(result.cumulative_percent[0] == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("a dominant column captures almost all covariance-basis variance") {
    auto ss = iid_stats(20000, 4, 5);
    // scale one variable by 100: multiply its sums by 100 and cross terms accordingly
    const std::size_t j_scaled = 1; // first non-identifier column
    const double factor = 100.0;
    ss.sums[j_scaled] *= factor;
    for (std::size_t k = 0; k < ss.schema.column_count(); ++k) {
        const double f = k == j_scaled ? factor * factor : factor;
        ss.cross.ref(j_scaled, k) *= f;
    }
    auto result = run_pca(ss, PcaBasis::Covariance);
    CHECK(result.variance_percent[0] > 99.0);
    // the dominant loading points along the scaled variable
    CHECK(std::fabs(result.loadings(0, 0)) > 0.999);
}

TEST_CASE("correlation-basis eigenvalues sum to the variable count") {
    auto ss = iid_stats(50000, 10, 11);
    auto result = run_pca(ss, PcaBasis::Correlation);
    REQUIRE(result.eigenvalues.size() == 10);
    double sum = 0.0;
    for (double v : result.eigenvalues) sum += v;
    CHECK(std::fabs(sum - 10.0) <= 1e-12 * 10.0);
    // cumulative percentages are nondecreasing and end at 100
    for (std::size_t i = 1; i < 10; ++i)
        CHECK(result.cumulative_percent[i] >= result.cumulative_percent[i - 1] - 1e-12);
    CHECK(std::fabs(result.cumulative_percent[9] - 100.0) <= 1e-9);
}

TEST_CASE("near-uniform spectrum on independent uniform columns") {
    const std::uint64_t n = 100000;
    auto ss = iid_stats(n, 10, 17);
    auto result = run_pca(ss, PcaBasis::Correlation);
    const double spread = result.eigenvalues.front() - result.eigenvalues.back();
    // calibrated spectrum-spread bound for iid data (see acceptance suite)
    CHECK(spread <= 64.0 / std::sqrt(static_cast<double>(n)));
    for (double v : result.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("loadings are orthonormal and deterministically signed") {
    auto ss = iid_stats(20000, 6, 23);
    auto a = run_pca(ss, PcaBasis::Correlation);
    CHECK(orthonormality_error(a.loadings) <= 1e-10);
    for (std::size_t i = 0; i < a.eigenvalues.size(); ++i) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < a.eigenvalues.size(); ++j)
            if (std::fabs(a.loadings(j, i)) > best) {
                best = std::fabs(a.loadings(j, i));
                arg = j;
            }
        CHECK(a.loadings(arg, i) > 0.0);
    }
    // bit-identical across repeated runs
    auto b = run_pca(ss, PcaBasis::Correlation);
    CHECK(a.eigenvalues == b.eigenvalues);
    CHECK(a.loadings == b.loadings);
}

TEST_CASE("correlation basis propagates CancellationError") {
    SuffStats ss = SuffStats::empty(DatasetSchema::generic(2, false));
    ss.n = 4;
    ss.sums = {4.0, 0.0};
    ss.cross.ref(0, 0) = 3.0; // variance negative by construction
    ss.cross.ref(1, 1) = 10.0;
    CHECK_THROWS_AS(run_pca(ss, PcaBasis::Correlation), CancellationError);
    // covariance basis decomposes but flags
    auto result = run_pca(ss, PcaBasis::Covariance);
    CHECK(result.negative_variance_flagged);
}

TEST_CASE("pca table formatting carries the Table 3 row shape") {
    auto ss = iid_stats(5000, 3, 29);
    auto result = run_pca(ss, PcaBasis::Correlation);
    auto table = format_pca_table(result);
    CHECK(table.find("PC1: Eigenvalue = ") != std::string::npos);
    CHECK(table.find("Variance % = ") != std::string::npos);
    CHECK(table.find("Cumulative % = ") != std::string::npos);
    CHECK(table.find("Loadings") != std::string::npos);
}
