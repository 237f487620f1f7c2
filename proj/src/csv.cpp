#include "sstat/csv.hpp"

#include <charconv>
#include <cstring>

#include "sstat/errors.hpp"

namespace sstat {

namespace {
constexpr std::size_t kBufferSize = 1 << 20;

// Strict binary64 literal: the whole token must be consumed.
bool parse_field(std::string_view token, double& out) {
    if (token.empty()) return false;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out, std::chars_format::general);
    return ec == std::errc() && ptr == last;
}
} // namespace

CsvStream::CsvStream(const std::filesystem::path& path, DatasetSchema schema,
                     CsvReadOptions options)
    : path_(path), schema_(std::move(schema)), options_(options) {
    schema_.validate();
    std::error_code ec;
    if (!std::filesystem::exists(path_, ec) || ec)
        throw IoError("no such file: " + path_.string());
    if (!std::filesystem::is_regular_file(path_, ec) || ec)
        throw IoError("not a readable file: " + path_.string());
    file_.open(path_, std::ios::binary);
    if (!file_) throw IoError("cannot open " + path_.string());
    buffer_.resize(kBufferSize);

    if (options_.expect_header) {
        std::string_view line;
        if (!read_line(line))
            throw FormatError("missing header line in " + path_.string());
        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view name = comma == std::string_view::npos
                                        ? line.substr(start)
                                        : line.substr(start, comma - start);
            if (col >= schema_.column_count() || name != schema_.column_names[col])
                throw SchemaMismatchError("header mismatch in " + path_.string() +
                                          " at column " + std::to_string(col + 1));
            ++col;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (col != schema_.column_count())
            throw SchemaMismatchError("header has " + std::to_string(col) + " columns, schema has " +
                                      std::to_string(schema_.column_count()));
    }
}

bool CsvStream::fill_buffer() {
    if (file_exhausted_) return false;
    file_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    buf_len_ = static_cast<std::size_t>(file_.gcount());
    buf_pos_ = 0;
    if (buf_len_ == 0) {
        file_exhausted_ = true;
        return false;
    }
    return true;
}

bool CsvStream::read_line(std::string_view& line) {
    carry_.clear();
    carry_active_ = false;
    while (true) {
        if (buf_pos_ >= buf_len_) {
            if (!fill_buffer()) {
                if (carry_active_ && !carry_.empty()) {
                    // final line without trailing newline
                    if (carry_.back() == '\r') carry_.pop_back();
                    line = carry_;
                    return true;
                }
                return false;
            }
        }
        const char* begin = buffer_.data() + buf_pos_;
        const char* end = buffer_.data() + buf_len_;
        const char* nl = static_cast<const char*>(memchr(begin, '\n', static_cast<std::size_t>(end - begin)));
        if (nl != nullptr) {
            std::size_t len = static_cast<std::size_t>(nl - begin);
            buf_pos_ += len + 1;
            if (carry_active_) {
                carry_.append(begin, len);
                if (!carry_.empty() && carry_.back() == '\r') carry_.pop_back();
                line = carry_;
                return true;
            }
            if (len > 0 && begin[len - 1] == '\r') --len;
            line = std::string_view(begin, len);
            return true;
        }
        carry_.append(begin, static_cast<std::size_t>(end - begin));
        carry_active_ = true;
        buf_pos_ = buf_len_;
    }
}

bool CsvStream::parse_line(std::string_view line, std::vector<double>& out) {
    const std::size_t p = schema_.column_count();
    const std::size_t out_start = out.size();

    fields_.clear();
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields_.push_back(line.substr(start));
            break;
        }
        fields_.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }

    if (fields_.size() != p) {
        if (options_.policy == CsvErrorPolicy::FailFast)
            throw CsvParseError(data_row_, fields_.size(), "",
                                "row " + std::to_string(data_row_) + ": expected " +
                                    std::to_string(p) + " fields, got " +
                                    std::to_string(fields_.size()));
        ++rows_skipped_;
        return false;
    }

    for (std::size_t col = 0; col < p; ++col) {
        double v;
        if (!parse_field(fields_[col], v)) {
            if (options_.policy == CsvErrorPolicy::FailFast)
                throw CsvParseError(data_row_, col + 1, std::string(fields_[col]),
                                    "row " + std::to_string(data_row_) + ", column " +
                                        std::to_string(col + 1) + ": malformed numeric field \"" +
                                        std::string(fields_[col]) + "\"");
            out.resize(out_start);
            ++rows_skipped_;
            return false;
        }
        out.push_back(v);
    }
    return true;
}

std::optional<Chunk> CsvStream::next_chunk(std::size_t max_rows) {
    if (max_rows == 0) throw std::invalid_argument("next_chunk: max_rows must be >= 1");
    if (at_end_) return std::nullopt;

    Chunk chunk;
    chunk.start_row = rows_delivered_;
    chunk.column_count = schema_.column_count();
    chunk.values.reserve(max_rows * chunk.column_count);

    std::string_view line;
    while (chunk.row_count < max_rows) {
        if (!read_line(line)) {
            at_end_ = true;
            break;
        }
        ++data_row_;
        if (parse_line(line, chunk.values)) ++chunk.row_count;
    }
    if (chunk.row_count == 0) return std::nullopt;
    rows_delivered_ += chunk.row_count;
    return chunk;
}

CsvStream open_csv_stream(const std::filesystem::path& path, DatasetSchema schema,
                          CsvReadOptions options) {
    return CsvStream(path, std::move(schema), options);
}

} // namespace sstat
