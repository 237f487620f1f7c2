#include "sstat/datagen.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sstat/checksum.hpp"
#include "sstat/errors.hpp"
#include "sstat/util.hpp"

namespace sstat {

Table1Record make_record(std::uint64_t index, RowRng& rng) {
    if (index < 1) throw std::invalid_argument("make_record: index must be >= 1");
    Table1Record r;
    r.index = index;
    r.b = rand_between(3, 8, rng);
    r.c = rand_between(1, 10, rng);
    r.d = rand_between(1, 100, rng);

    const double b = static_cast<double>(r.b);
    const double c = static_cast<double>(r.c);
    const double d = static_cast<double>(r.d);

    r.e = std::trunc(std::log(c) / std::log(b) * 100.0);
    r.f = std::round(std::log(d) / std::log(b) * 10000.0);
    r.g = std::trunc(std::fabs(std::cos(c)) * 100.0);
    r.h = std::trunc(std::fabs(std::sin(d)) * 100.0);
    const double cot_c = 1.0 / std::tan(c);
    r.i = std::round(std::fabs(cot_c) * 1000.0);
    r.j = std::fabs(std::tan(d));
    r.k = r.d / r.c;
    return r;
}

std::vector<double> generate_row(const GeneratorKind& kind, std::uint64_t seed,
                                 std::uint64_t index) {
    RowRng rng(seed, index);
    if (kind.tag == GeneratorKind::Tag::Table1) {
        return make_record(index, rng).columns();
    }
    std::vector<double> row;
    row.reserve(kind.iid_columns + 1);
    row.push_back(static_cast<double>(index));
    const double span = kind.iid_hi - kind.iid_lo;
    for (std::size_t j = 0; j < kind.iid_columns; ++j)
        row.push_back(kind.iid_lo + rng.next_unit() * span);
    return row;
}

GenerationSummary generate_csv(std::uint64_t n_rows, const GeneratorKind& kind,
                               std::uint64_t seed, const std::filesystem::path& out_path,
                               const GenerateOptions& options) {
    if (n_rows < 1) throw std::invalid_argument("generate_csv: n_rows must be >= 1");
    if (kind.tag == GeneratorKind::Tag::IidUniform) {
        if (kind.iid_columns < 1)
            throw std::invalid_argument("generate_csv: IidUniform needs at least one column");
        if (!(kind.iid_lo < kind.iid_hi))
            throw std::invalid_argument("generate_csv: IidUniform needs lo < hi");
    }

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + out_path.string() + " for writing");

    GenerationSummary summary;
    Fnv1a64 checksum;
    std::string buf;
    buf.reserve(1 << 20);

    auto flush = [&] {
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out)
            throw IoError("write failure on " + out_path.string() + " after " +
                          std::to_string(summary.rows_written) + " rows");
        checksum.update(buf.data(), buf.size());
        summary.bytes_written += buf.size();
        buf.clear();
    };

    if (options.header) {
        const auto schema = kind.schema();
        for (std::size_t j = 0; j < schema.column_count(); ++j) {
            if (j > 0) buf.push_back(',');
            buf += schema.column_names[j];
        }
        buf.push_back('\n');
    }

    for (std::uint64_t i = 1; i <= n_rows; ++i) {
        const auto row = generate_row(kind, seed, i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) buf.push_back(',');
            buf += format_value(row[j]);
        }
        buf.push_back('\n');
        ++summary.rows_written;
        if (buf.size() >= (1 << 20)) flush();
    }
    flush();
    out.close();
    if (!out)
        throw IoError("write failure closing " + out_path.string());

    summary.checksum = checksum.value();
    return summary;
}

} // namespace sstat
