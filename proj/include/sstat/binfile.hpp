#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "sstat/checksum.hpp"
#include "sstat/chunk.hpp"
#include "sstat/csv.hpp"
#include "sstat/schema.hpp"

namespace sstat {

/// Fixed-width binary dataset: a 64-byte header followed by n*p binary64
/// values, row-major, little-endian. This layout is normative.
///
///   offset  size  field
///        0     8  magic "SSTATBIN"
///        8     4  format version (u32 LE) = 1
///       12     8  row count n (u64 LE)
///       20     4  column count p (u32 LE)
///       24     8  payload checksum (u64 LE, FNV-1a 64; valid iff flags bit 0)
///       32     4  flags (u32 LE; bit 0 = checksum present, others reserved)
///       36    28  reserved, must be zero
///
/// File size is exactly 64 + n*p*8 bytes.
struct BinaryHeader {
    std::uint32_t version = 1;
    std::uint64_t row_count = 0;
    std::uint32_t column_count = 0;
    std::optional<std::uint64_t> checksum;

    static constexpr std::size_t kSize = 64;
    static constexpr char kMagic[9] = "SSTATBIN";

    std::uint64_t expected_file_size() const {
        return kSize + row_count * static_cast<std::uint64_t>(column_count) * 8;
    }

    void encode(unsigned char out[kSize]) const;
    /// Throws FormatError on bad magic/version/flags/reserved bytes.
    static BinaryHeader decode(const unsigned char in[kSize]);
};

struct ConversionSummary {
    std::uint64_t rows = 0;
    std::uint64_t bytes = 0; // total file size
    std::uint64_t checksum = 0;
    bool checksum_present = false;
};

/// Streaming writer: header is patched once the row count is known, so a
/// single pass over the source suffices.
class BinaryWriter {
public:
    BinaryWriter(const std::filesystem::path& path, std::uint32_t column_count,
                 bool with_checksum = true);
    ~BinaryWriter();

    void append(const Chunk& chunk);
    void append_row(const double* values, std::size_t count);

    /// Patches the header and closes the file. Must be called exactly once;
    /// at least one row must have been written.
    ConversionSummary finish();

private:
    void write_bytes(const unsigned char* data, std::size_t size);

    std::filesystem::path path_;
    std::ofstream out_;
    std::uint32_t column_count_;
    bool with_checksum_;
    std::uint64_t rows_ = 0;
    Fnv1a64 checksum_;
    bool finished_ = false;
    std::vector<unsigned char> scratch_;
};

/// Random-access reader. The constructor validates header and file size.
class BinaryReader {
public:
    explicit BinaryReader(const std::filesystem::path& path);

    const BinaryHeader& header() const { return header_; }
    std::uint64_t rows() const { return header_.row_count; }
    std::uint32_t columns() const { return header_.column_count; }

    /// Reads `count` rows starting at `start_row` (0-based). Throws
    /// std::out_of_range when the range exceeds the dataset.
    Chunk read_rows(std::uint64_t start_row, std::uint64_t count);

private:
    std::filesystem::path path_;
    std::ifstream in_;
    BinaryHeader header_;
    std::vector<unsigned char> scratch_;
};

struct ConvertOptions {
    std::size_t chunk_rows = 1u << 20;
    bool with_checksum = true;
    CsvReadOptions csv;
};

/// One-pass CSV to binary conversion with bounded memory. Every stored
/// value is the exact binary64 the CSV parser produced.
ConversionSummary convert_csv_to_binary(const std::filesystem::path& csv_path,
                                        const std::filesystem::path& bin_path,
                                        const DatasetSchema& schema,
                                        const ConvertOptions& options = {});

/// Convenience single-shot read.
Chunk read_rows(const std::filesystem::path& bin_path, std::uint64_t start_row,
                std::uint64_t count);

struct SpotCheck {
    std::uint64_t row = 0;
    bool match = false;
};

struct ValidationReport {
    bool header_ok = false;
    bool size_ok = false;
    bool counts_ok = false;
    std::vector<SpotCheck> rows_checked;
    std::optional<bool> checksum_ok;
    bool verdict = false;
    std::vector<std::string> failures;

    void fail(const std::string& message) { failures.push_back(message); }
};

struct ValidateOptions {
    std::size_t spot_count = 8;
    /// nullopt = verify checksum iff the header carries one; true = require
    /// and verify; false = skip.
    std::optional<bool> with_checksum;
    CsvReadOptions csv;
};

/// Post-conversion validation against the CSV source: header/size
/// consistency, row and column counts, bit-exact spot checks of sampled
/// rows (always including first, middle, last), and optionally the whole
/// payload checksum. Failures land in the report verdict; this never
/// throws for content problems.
ValidationReport validate_binary(const std::filesystem::path& bin_path,
                                 const std::filesystem::path& csv_path,
                                 const DatasetSchema& schema,
                                 const ValidateOptions& options = {});

} // namespace sstat
