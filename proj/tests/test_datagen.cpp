#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "sstat/datagen.hpp"
#include "sstat/errors.hpp"
#include "sstat/rng.hpp"

#include "oracles.hpp"
#include "test_support.hpp"

using namespace sstat;

namespace {
std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

TEST_CASE("rand_between stays inside the inclusive range") {
    RowRng rng(123, 1);
    for (int i = 0; i < 10000; ++i) {
        auto v = rand_between(3, 8, rng);
        CHECK(v >= 3);
        CHECK(v <= 8);
    }
    // all six values appear
    std::set<std::int64_t> seen;
    RowRng rng2(5, 9);
    for (int i = 0; i < 1000; ++i) seen.insert(rand_between(3, 8, rng2));
    CHECK(seen == std::set<std::int64_t>{3, 4, 5, 6, 7, 8});
}

TEST_CASE("rand_between single-point range") {
    RowRng rng(0, 0);
    CHECK(rand_between(5, 5, rng) == 5);
}

TEST_CASE("rand_between rejects inverted ranges") {
    RowRng rng(0, 0);
    CHECK_THROWS_AS(rand_between(8, 3, rng), std::invalid_argument);
}

TEST_CASE("rand_between(1,10) bucket frequencies at seed 0 pass the 5-sigma bound") {
    // sigma = sqrt(n * p * (1-p)) = sqrt(1e6 * 0.1 * 0.9) = 300
    std::array<std::int64_t, 10> counts{};
    const std::uint64_t draws_per_row = 10;
    for (std::uint64_t row = 1; row <= 100000; ++row) {
        RowRng rng(0, row);
        for (std::uint64_t k = 0; k < draws_per_row; ++k)
            counts[static_cast<std::size_t>(rand_between(1, 10, rng) - 1)]++;
    }
    for (auto c : counts) {
        CHECK(std::llabs(c - 100000) <= 1500);
    }
}

TEST_CASE("per-row streams are reproducible and order-independent") {
    RowRng a(42, 1000);
    RowRng b(42, 1000);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    // different rows give different streams
    RowRng c(42, 1001);
    CHECK(RowRng(42, 1000).next_u64() != c.next_u64());
    // different seeds give different streams
    CHECK(RowRng(43, 1000).next_u64() != RowRng(42, 1000).next_u64());
}

TEST_CASE("make_record fixed values") {
    // find records hitting the documented cases across a few seeds
    bool saw_c1 = false, saw_d1 = false, saw_b3c1d1_like = false;
    for (std::uint64_t i = 1; i <= 20000 && !(saw_c1 && saw_d1 && saw_b3c1d1_like); ++i) {
        RowRng rng(7, i);
        Table1Record r = make_record(i, rng);
        if (r.c == 1) {
            saw_c1 = true;
            CHECK(r.g == 54.0); // trunc(|cos(1 rad)|*100)
            CHECK(r.i == 642.0); // round(|1/tan(1 rad)|*1000)
        }
        if (r.d == 1) {
            saw_d1 = true;
            CHECK(r.h == 84.0); // trunc(|sin(1 rad)|*100)
            CHECK(r.j == doctest::Approx(1.5574077).epsilon(1e-6));
        }
        if (r.c == 1 && r.d == 1) {
            saw_b3c1d1_like = true;
            CHECK(r.e == 0.0); // ln(1) = 0
            CHECK(r.f == 0.0);
            CHECK(r.k == 1); // K = D / C = 1 / 1
        }
        if (r.d < r.c) CHECK(r.k == 0); // e.g. 1/3 integer-divides to 0
    }
    CHECK(saw_c1);
    CHECK(saw_d1);
    CHECK(saw_b3c1d1_like);
}

TEST_CASE("make_record ranges and derived-column consistency") {
    for (std::uint64_t i = 1; i <= 100000; ++i) {
        RowRng rng(42, i);
        Table1Record r = make_record(i, rng);
        CHECK(r.index == i);
        REQUIRE(r.b >= 3);
        REQUIRE(r.b <= 8);
        REQUIRE(r.c >= 1);
        REQUIRE(r.c <= 10);
        REQUIRE(r.d >= 1);
        REQUIRE(r.d <= 100);
        // recompute E..K from B, C, D
        const double b = static_cast<double>(r.b);
        const double c = static_cast<double>(r.c);
        const double d = static_cast<double>(r.d);
        REQUIRE(r.e == std::trunc(std::log(c) / std::log(b) * 100.0));
        REQUIRE(r.f == std::round(std::log(d) / std::log(b) * 10000.0));
        REQUIRE(r.g == std::trunc(std::fabs(std::cos(c)) * 100.0));
        REQUIRE(r.h == std::trunc(std::fabs(std::sin(d)) * 100.0));
        REQUIRE(r.i == std::round(std::fabs(1.0 / std::tan(c)) * 1000.0));
        REQUIRE(r.j == std::fabs(std::tan(d)));
        REQUIRE(r.k == r.d / r.c);
    }
}

TEST_CASE("generate_csv writes the identifier as the line number") {
    auto path = test_file("gen10.csv");
    auto summary = generate_csv(10, GeneratorKind::table1(), 42, path);
    CHECK(summary.rows_written == 10);
    std::ifstream in(path);
    std::string line;
    int k = 0;
    while (std::getline(in, line)) {
        ++k;
        CHECK(line.substr(0, line.find(',')) == std::to_string(k));
    }
    CHECK(k == 10);
}

TEST_CASE("generate_csv is deterministic: identical runs give identical bytes") {
    auto a = test_file("det_a.csv");
    auto b = test_file("det_b.csv");
    auto sa = generate_csv(1000000, GeneratorKind::table1(), 42, a);
    auto sb = generate_csv(1000000, GeneratorKind::table1(), 42, b);
    CHECK(sa.checksum == sb.checksum);
    CHECK(sa.bytes_written == sb.bytes_written);
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("generate_csv header flag emits the schema names") {
    auto path = test_file("hdr.csv");
    GenerateOptions options;
    options.header = true;
    generate_csv(2, GeneratorKind::table1(), 1, path, options);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "A,B,C,D,E,F,G,H,I,J,K");
}

TEST_CASE("generate_csv rejects zero rows and bad uniform bounds") {
    CHECK_THROWS_AS(generate_csv(0, GeneratorKind::table1(), 1, test_file("zero.csv")),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_csv(1, GeneratorKind::iid_uniform(3, 1.0, 1.0), 1,
                                 test_file("flat.csv")),
                    std::invalid_argument);
}

TEST_CASE("generate_csv fails with an I/O error on an unwritable path") {
    CHECK_THROWS_AS(generate_csv(1, GeneratorKind::table1(), 1,
                                 "/nonexistent_dir_xyz/out.csv"),
                    IoError);
}

TEST_CASE("IidUniform columns stay in range and pairwise correlations are tiny") {
    auto path = test_file("iid.csv");
    const std::size_t p_vars = 10;
    generate_csv(100000, GeneratorKind::iid_uniform(p_vars, 0.0, 1.0), 7, path);
    auto rows = oracles::reference_parse_csv(path, p_vars + 1);
    const std::size_t p = p_vars + 1;
    const std::uint64_t n = rows.size() / p;
    REQUIRE(n == 100000);
    for (std::uint64_t r = 0; r < n; ++r)
        for (std::size_t j = 1; j < p; ++j) {
            REQUIRE(rows[r * p + j] >= 0.0);
            REQUIRE(rows[r * p + j] < 1.0);
        }
    // |r| < 0.02 for every variable pair (5/sqrt(N) bound)
    auto two_pass = oracles::two_pass_covariance(rows, p, 1);
    for (std::size_t j = 1; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k) {
            const double r_jk = two_pass.cov(j, k) /
                                std::sqrt(two_pass.cov(j, j) * two_pass.cov(k, k));
            CHECK(std::fabs(r_jk) < 0.02);
        }
    std::filesystem::remove(path);
}
