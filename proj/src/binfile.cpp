#include "sstat/binfile.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "sstat/checksum.hpp"
#include "sstat/errors.hpp"
#include "sstat/util.hpp"

namespace sstat {

namespace {
constexpr std::uint32_t kFlagChecksum = 1u;
} // namespace

void BinaryHeader::encode(unsigned char out[kSize]) const {
    std::memset(out, 0, kSize);
    std::memcpy(out, kMagic, 8);
    put_u32le(out + 8, version);
    put_u64le(out + 12, row_count);
    put_u32le(out + 20, column_count);
    put_u64le(out + 24, checksum.value_or(0));
    put_u32le(out + 32, checksum.has_value() ? kFlagChecksum : 0);
}

BinaryHeader BinaryHeader::decode(const unsigned char in[kSize]) {
    if (std::memcmp(in, kMagic, 8) != 0)
        throw FormatError("bad magic: not a binary dataset file");
    BinaryHeader h;
    h.version = get_u32le(in + 8);
    if (h.version != 1)
        throw FormatError("unsupported format version " + std::to_string(h.version));
    h.row_count = get_u64le(in + 12);
    h.column_count = get_u32le(in + 20);
    std::uint64_t checksum = get_u64le(in + 24);
    std::uint32_t flags = get_u32le(in + 32);
    if ((flags & ~kFlagChecksum) != 0)
        throw FormatError("unknown header flags");
    if (flags & kFlagChecksum) h.checksum = checksum;
    else if (checksum != 0)
        throw FormatError("checksum field set without checksum flag");
    for (std::size_t i = 36; i < kSize; ++i)
        if (in[i] != 0) throw FormatError("reserved header bytes are not zero");
    if (h.column_count == 0) throw FormatError("column count is zero");
    return h;
}

BinaryWriter::BinaryWriter(const std::filesystem::path& path, std::uint32_t column_count,
                           bool with_checksum)
    : path_(path), column_count_(column_count), with_checksum_(with_checksum) {
    if (column_count_ == 0)
        throw std::invalid_argument("BinaryWriter: column count must be >= 1");
    out_.open(path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open " + path_.string() + " for writing");
    unsigned char header[BinaryHeader::kSize] = {0};
    write_bytes(header, sizeof header); // placeholder, patched in finish()
}

BinaryWriter::~BinaryWriter() = default;

void BinaryWriter::write_bytes(const unsigned char* data, std::size_t size) {
    out_.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out_)
        throw IoError("write failure on " + path_.string() + " after " +
                      std::to_string(rows_) + " rows");
}

void BinaryWriter::append_row(const double* values, std::size_t count) {
    if (count != column_count_)
        throw std::invalid_argument("append_row: value count does not match column count");
    scratch_.resize(count * 8);
    doubles_to_le_bytes(values, count, scratch_.data());
    if (with_checksum_) checksum_.update(scratch_.data(), scratch_.size());
    write_bytes(scratch_.data(), scratch_.size());
    rows_ += 1;
}

void BinaryWriter::append(const Chunk& chunk) {
    if (chunk.column_count != column_count_)
        throw std::invalid_argument("append: chunk column count does not match file");
    const std::size_t n = chunk.row_count * chunk.column_count;
    scratch_.resize(n * 8);
    doubles_to_le_bytes(chunk.values.data(), n, scratch_.data());
    if (with_checksum_) checksum_.update(scratch_.data(), scratch_.size());
    write_bytes(scratch_.data(), scratch_.size());
    rows_ += chunk.row_count;
}

ConversionSummary BinaryWriter::finish() {
    if (finished_) throw std::logic_error("BinaryWriter::finish called twice");
    finished_ = true;
    if (rows_ == 0) {
        out_.close();
        std::error_code ec;
        std::filesystem::remove(path_, ec);
        throw FormatError("refusing to write empty dataset (row count must be >= 1): " +
                          path_.string());
    }
    out_.flush();
    if (!out_) throw IoError("write failure on " + path_.string());

    BinaryHeader header;
    header.row_count = rows_;
    header.column_count = column_count_;
    if (with_checksum_) header.checksum = checksum_.value();
    unsigned char bytes[BinaryHeader::kSize];
    header.encode(bytes);
    out_.seekp(0);
    write_bytes(bytes, sizeof bytes);
    out_.close();
    if (!out_) throw IoError("write failure closing " + path_.string());

    ConversionSummary summary;
    summary.rows = rows_;
    summary.bytes = header.expected_file_size();
    summary.checksum = header.checksum.value_or(0);
    summary.checksum_present = header.checksum.has_value();
    return summary;
}

BinaryReader::BinaryReader(const std::filesystem::path& path) : path_(path) {
    std::error_code ec;
    if (!std::filesystem::exists(path_, ec) || ec)
        throw IoError("no such file: " + path_.string());
    in_.open(path_, std::ios::binary);
    if (!in_) throw IoError("cannot open " + path_.string());
    unsigned char bytes[BinaryHeader::kSize];
    in_.read(reinterpret_cast<char*>(bytes), sizeof bytes);
    if (static_cast<std::size_t>(in_.gcount()) != sizeof bytes)
        throw FormatError("file too small for header: " + path_.string());
    header_ = BinaryHeader::decode(bytes);
    const std::uint64_t actual = std::filesystem::file_size(path_);
    if (actual != header_.expected_file_size())
        throw FormatError("file size mismatch in " + path_.string() + ": header implies " +
                          std::to_string(header_.expected_file_size()) + " bytes, file has " +
                          std::to_string(actual));
}

Chunk BinaryReader::read_rows(std::uint64_t start_row, std::uint64_t count) {
    if (count == 0) throw std::invalid_argument("read_rows: count must be >= 1");
    if (start_row >= header_.row_count || count > header_.row_count - start_row)
        throw std::out_of_range("read_rows: rows [" + std::to_string(start_row) + ", " +
                                std::to_string(start_row + count) + ") exceed dataset of " +
                                std::to_string(header_.row_count) + " rows");
    const std::uint64_t p = header_.column_count;
    const std::uint64_t values = count * p;
    Chunk chunk;
    chunk.start_row = start_row;
    chunk.row_count = static_cast<std::size_t>(count);
    chunk.column_count = static_cast<std::size_t>(p);
    chunk.values.resize(static_cast<std::size_t>(values));
    scratch_.resize(static_cast<std::size_t>(values * 8));
    in_.seekg(static_cast<std::streamoff>(BinaryHeader::kSize + start_row * p * 8));
    in_.read(reinterpret_cast<char*>(scratch_.data()),
             static_cast<std::streamsize>(scratch_.size()));
    if (static_cast<std::uint64_t>(in_.gcount()) != values * 8)
        throw FormatError("truncated read from " + path_.string());
    le_bytes_to_doubles(scratch_.data(), static_cast<std::size_t>(values), chunk.values.data());
    return chunk;
}

ConversionSummary convert_csv_to_binary(const std::filesystem::path& csv_path,
                                        const std::filesystem::path& bin_path,
                                        const DatasetSchema& schema,
                                        const ConvertOptions& options) {
    CsvStream stream = open_csv_stream(csv_path, schema, options.csv);
    BinaryWriter writer(bin_path, static_cast<std::uint32_t>(schema.column_count()),
                        options.with_checksum);
    while (auto chunk = stream.next_chunk(options.chunk_rows)) writer.append(*chunk);
    return writer.finish();
}

Chunk read_rows(const std::filesystem::path& bin_path, std::uint64_t start_row,
                std::uint64_t count) {
    BinaryReader reader(bin_path);
    return reader.read_rows(start_row, count);
}

ValidationReport validate_binary(const std::filesystem::path& bin_path,
                                 const std::filesystem::path& csv_path,
                                 const DatasetSchema& schema,
                                 const ValidateOptions& options) {
    ValidationReport report;

    // (a) header and file-size consistency
    BinaryHeader header;
    try {
        std::ifstream in(bin_path, std::ios::binary);
        if (!in) throw IoError("cannot open " + bin_path.string());
        unsigned char bytes[BinaryHeader::kSize];
        in.read(reinterpret_cast<char*>(bytes), sizeof bytes);
        if (static_cast<std::size_t>(in.gcount()) != sizeof bytes)
            throw FormatError("file too small for header");
        header = BinaryHeader::decode(bytes);
        report.header_ok = true;
    } catch (const Error& e) {
        report.fail(std::string("header: ") + e.what());
        report.verdict = false;
        return report;
    }
    const std::uint64_t actual_size = std::filesystem::file_size(bin_path);
    report.size_ok = actual_size == header.expected_file_size();
    if (!report.size_ok)
        report.fail("size: expected " + std::to_string(header.expected_file_size()) +
                    " bytes (64 + n*p*8), found " + std::to_string(actual_size));

    const std::uint64_t n = header.row_count;
    const std::uint32_t p = header.column_count;

    // Spot rows: always first, middle, last, plus evenly spaced extras.
    std::set<std::uint64_t> spots;
    if (n > 0) {
        spots.insert(0);
        spots.insert(n / 2);
        spots.insert(n - 1);
        const std::size_t want = std::max<std::size_t>(options.spot_count, 3);
        for (std::size_t k = 0; spots.size() < std::min<std::uint64_t>(want, n); ++k)
            spots.insert((n * (k + 1)) / (want + 1));
    }

    // (b) row/column counts vs. CSV, collecting the spot rows in one pass
    std::uint64_t csv_rows = 0;
    bool csv_cols_ok = true;
    std::vector<std::pair<std::uint64_t, std::vector<double>>> csv_spot_rows;
    try {
        CsvStream stream = open_csv_stream(csv_path, schema, options.csv);
        auto next_spot = spots.begin();
        while (auto chunk = stream.next_chunk(1u << 16)) {
            const std::uint64_t first = chunk->start_row;
            const std::uint64_t last = first + chunk->row_count;
            while (next_spot != spots.end() && *next_spot < last) {
                if (*next_spot >= first) {
                    auto row = chunk->row(static_cast<std::size_t>(*next_spot - first));
                    csv_spot_rows.emplace_back(*next_spot,
                                               std::vector<double>(row.begin(), row.end()));
                }
                ++next_spot;
            }
            csv_rows = last;
        }
    } catch (const Error& e) {
        report.fail(std::string("csv: ") + e.what());
        csv_cols_ok = false;
    }
    report.counts_ok = csv_cols_ok && csv_rows == n && schema.column_count() == p;
    if (csv_cols_ok && csv_rows != n)
        report.fail("counts: binary header declares " + std::to_string(n) + " rows, CSV has " +
                    std::to_string(csv_rows));
    if (schema.column_count() != p)
        report.fail("counts: binary header declares " + std::to_string(p) + " columns, schema has " +
                    std::to_string(schema.column_count()));

    // (c) bit-exact spot comparisons
    if (report.size_ok && report.counts_ok) {
        try {
            BinaryReader reader(bin_path);
            for (const auto& [row_index, csv_row] : csv_spot_rows) {
                Chunk bin_row = reader.read_rows(row_index, 1);
                bool match = csv_row.size() == bin_row.values.size() &&
                             std::memcmp(csv_row.data(), bin_row.values.data(),
                                         csv_row.size() * sizeof(double)) == 0;
                report.rows_checked.push_back({row_index, match});
                if (!match)
                    report.fail("spot row " + std::to_string(row_index) +
                                " differs from CSV source");
            }
        } catch (const Error& e) {
            report.fail(std::string("spot checks: ") + e.what());
        }
    }

    // (d) whole-payload checksum
    const bool want_checksum = options.with_checksum.value_or(header.checksum.has_value());
    if (want_checksum) {
        if (!header.checksum.has_value()) {
            report.checksum_ok = false;
            report.fail("checksum: requested but the header carries none");
        } else if (!report.size_ok) {
            report.checksum_ok = false;
            report.fail("checksum: skipped, file size is wrong");
        } else {
            const std::uint64_t recomputed =
                Fnv1a64::of_file_range(bin_path, BinaryHeader::kSize, n * p * 8ull);
            report.checksum_ok = recomputed == *header.checksum;
            if (!*report.checksum_ok)
                report.fail("checksum: stored and recomputed payload checksums differ");
        }
    }

    bool spots_ok = !report.rows_checked.empty() || n == 0;
    for (const auto& s : report.rows_checked) spots_ok = spots_ok && s.match;
    report.verdict = report.header_ok && report.size_ok && report.counts_ok && spots_ok &&
                     report.checksum_ok.value_or(true) && report.failures.empty();
    return report;
}

} // namespace sstat
