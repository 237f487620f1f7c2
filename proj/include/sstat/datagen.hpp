#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sstat/rng.hpp"
#include "sstat/schema.hpp"

namespace sstat {

/// Which synthetic dataset to produce.
///
/// Table1 is the 11-column dataset: identifier A, uniform integers B, C, D,
/// and derived variables E..K. IidUniform is the control dataset: an
/// identifier followed by p mutually independent uniform reals on [lo, hi).
struct GeneratorKind {
    enum class Tag { Table1, IidUniform };

    Tag tag = Tag::Table1;
    std::size_t iid_columns = 10;
    double iid_lo = 0.0;
    double iid_hi = 1.0;

    static GeneratorKind table1() { return {Tag::Table1, 0, 0.0, 0.0}; }
    static GeneratorKind iid_uniform(std::size_t p, double lo, double hi) {
        return {Tag::IidUniform, p, lo, hi};
    }

    DatasetSchema schema() const {
        return tag == Tag::Table1 ? DatasetSchema::table1()
                                  : DatasetSchema::iid_uniform(iid_columns);
    }

    std::size_t stored_column_count() const {
        return tag == Tag::Table1 ? 11 : iid_columns + 1;
    }
};

/// One generated Table1 record. B, C, D are drawn (in that order) from the
/// row's stream; E..K derive from them. cot(C) is an intermediate only.
struct Table1Record {
    std::uint64_t index; // A
    std::int64_t b, c, d;
    double e, f, g, h, i, j;
    std::int64_t k;

    std::vector<double> columns() const {
        return {static_cast<double>(index),
                static_cast<double>(b),
                static_cast<double>(c),
                static_cast<double>(d),
                e,
                f,
                g,
                h,
                i,
                j,
                static_cast<double>(k)};
    }
};

/// Builds the record for 1-based row `index` from its keyed stream. Trig
/// arguments are radians; int() truncates toward zero; round() is
/// half-away-from-zero; K is integer division.
Table1Record make_record(std::uint64_t index, RowRng& rng);

/// The stored column values of row `index` (1-based) for any generator
/// kind. Exactly the values the CSV text round-trips to.
std::vector<double> generate_row(const GeneratorKind& kind, std::uint64_t seed,
                                 std::uint64_t index);

struct GenerationSummary {
    std::uint64_t rows_written = 0;
    std::uint64_t bytes_written = 0;
    std::uint64_t checksum = 0; // FNV-1a 64 of the emitted bytes
};

struct GenerateOptions {
    bool header = false;
};

/// Writes n_rows records as CSV: ASCII, LF line endings, comma delimiter,
/// no quoting. Integral values print without a decimal point, other reals
/// with 17 significant digits. Deterministic: identical (n_rows, kind,
/// seed) give byte-identical files.
GenerationSummary generate_csv(std::uint64_t n_rows, const GeneratorKind& kind,
                               std::uint64_t seed, const std::filesystem::path& out_path,
                               const GenerateOptions& options = {});

} // namespace sstat
