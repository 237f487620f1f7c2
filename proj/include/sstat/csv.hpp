#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sstat/chunk.hpp"
#include "sstat/schema.hpp"

namespace sstat {

enum class CsvErrorPolicy {
    FailFast,     // throw CsvParseError at the first bad line
    SkipAndCount, // drop bad lines, count them
};

struct CsvReadOptions {
    bool expect_header = false;
    CsvErrorPolicy policy = CsvErrorPolicy::FailFast;
};

/// Sequential, chunked CSV reader. Fields are parsed as binary64 with
/// strict syntax: integer or decimal literals with optional exponent, no
/// surrounding spaces. Lines split on LF; one trailing CR is stripped.
class CsvStream {
public:
    CsvStream(const std::filesystem::path& path, DatasetSchema schema,
              CsvReadOptions options = {});

    /// Up to max_rows parsed rows; the final chunk may be short. Returns
    /// nullopt at end of stream (and keeps returning it).
    std::optional<Chunk> next_chunk(std::size_t max_rows);

    std::uint64_t rows_delivered() const { return rows_delivered_; }
    std::uint64_t rows_skipped() const { return rows_skipped_; }
    const DatasetSchema& schema() const { return schema_; }

private:
    bool fill_buffer();
    bool read_line(std::string_view& line);
    // Parses one line into `out` (appending). Throws or skips per policy;
    // returns false when the line was skipped.
    bool parse_line(std::string_view line, std::vector<double>& out);

    std::filesystem::path path_;
    DatasetSchema schema_;
    CsvReadOptions options_;
    std::ifstream file_;
    std::vector<char> buffer_;
    std::size_t buf_pos_ = 0;
    std::size_t buf_len_ = 0;
    bool file_exhausted_ = false;
    std::string carry_; // partial line spanning buffer refills
    bool carry_active_ = false;
    std::vector<std::string_view> fields_; // scratch for parse_line
    std::uint64_t data_row_ = 0; // 1-based counter of data lines seen
    std::uint64_t rows_delivered_ = 0;
    std::uint64_t rows_skipped_ = 0;
    bool at_end_ = false;
};

/// Opens a CSV positioned at row 0, validating existence/readability (and
/// the header when options.expect_header).
CsvStream open_csv_stream(const std::filesystem::path& path, DatasetSchema schema,
                          CsvReadOptions options = {});

} // namespace sstat
