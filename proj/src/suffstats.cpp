#include "sstat/suffstats.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "sstat/errors.hpp"
#include "sstat/util.hpp"

namespace sstat {

SuffStats SuffStats::empty(DatasetSchema schema, PrecisionMode precision) {
    schema.validate();
    SuffStats ss;
    ss.sums.assign(schema.column_count(), 0.0);
    ss.cross = SymPacked(schema.column_count());
    ss.schema = std::move(schema);
    ss.precision = precision;
    return ss;
}

CoMoments CoMoments::empty(DatasetSchema schema) {
    schema.validate();
    CoMoments cm;
    cm.mean.assign(schema.column_count(), 0.0);
    cm.m2 = SymPacked(schema.column_count());
    cm.schema = std::move(schema);
    return cm;
}

namespace {

void check_chunk(const Chunk& chunk, const DatasetSchema& schema) {
    if (chunk.column_count != schema.column_count())
        throw SchemaMismatchError("chunk has " + std::to_string(chunk.column_count) +
                                  " columns, schema has " +
                                  std::to_string(schema.column_count()));
    for (std::size_t r = 0; r < chunk.row_count; ++r)
        for (std::size_t c = 0; c < chunk.column_count; ++c)
            if (!std::isfinite(chunk.at(r, c)))
                throw NonFiniteError(chunk.start_row + r, c,
                                     "non-finite value at row " +
                                         std::to_string(chunk.start_row + r) + ", column " +
                                         std::to_string(c));
}

// Accumulation core, templated over the accumulator type. In
// Binary32Diagnostic mode every value is cast to binary32 and all sums are
// kept in binary32; results are stored widened to binary64.
template <typename Acc>
void accumulate_into(const Chunk& chunk, std::vector<double>& sums, SymPacked& cross) {
    const std::size_t p = chunk.column_count;
    std::vector<Acc> s(p, Acc(0));
    std::vector<Acc> S(cross.packed_size(), Acc(0));
    std::vector<Acc> x(p);
    for (std::size_t r = 0; r < chunk.row_count; ++r) {
        const double* row = chunk.values.data() + r * p;
        for (std::size_t j = 0; j < p; ++j) {
            x[j] = static_cast<Acc>(row[j]);
            s[j] += x[j];
        }
        Acc* out = S.data();
        for (std::size_t j = 0; j < p; ++j) {
            const Acc xj = x[j];
            for (std::size_t k = j; k < p; ++k) *out++ += xj * x[k];
        }
    }
    for (std::size_t j = 0; j < p; ++j) sums[j] = static_cast<double>(s[j]);
    for (std::size_t i = 0; i < S.size(); ++i) cross.data()[i] = static_cast<double>(S[i]);
}

} // namespace

SuffStats accumulate_chunk(const Chunk& chunk, const DatasetSchema& schema,
                           PrecisionMode precision) {
    check_chunk(chunk, schema);
    SuffStats ss = SuffStats::empty(schema, precision);
    ss.n = chunk.row_count;
    if (precision == PrecisionMode::Binary32Diagnostic)
        accumulate_into<float>(chunk, ss.sums, ss.cross);
    else
        accumulate_into<double>(chunk, ss.sums, ss.cross);
    return ss;
}

SuffStats merge_suffstats(SuffStats a, const SuffStats& b) {
    if (a.schema != b.schema)
        throw SchemaMismatchError("merge_suffstats: schemas differ");
    if (a.precision != b.precision)
        throw SchemaMismatchError("merge_suffstats: precision modes differ");
    a.n += b.n;
    if (a.precision == PrecisionMode::Binary32Diagnostic) {
        for (std::size_t j = 0; j < a.sums.size(); ++j)
            a.sums[j] = static_cast<double>(static_cast<float>(a.sums[j]) +
                                            static_cast<float>(b.sums[j]));
        for (std::size_t i = 0; i < a.cross.packed_size(); ++i)
            a.cross.data()[i] = static_cast<double>(static_cast<float>(a.cross.data()[i]) +
                                                    static_cast<float>(b.cross.data()[i]));
    } else {
        for (std::size_t j = 0; j < a.sums.size(); ++j) a.sums[j] += b.sums[j];
        for (std::size_t i = 0; i < a.cross.packed_size(); ++i)
            a.cross.data()[i] += b.cross.data()[i];
    }
    return a;
}

CoMoments accumulate_comoments(const Chunk& chunk, const DatasetSchema& schema) {
    check_chunk(chunk, schema);
    CoMoments cm = CoMoments::empty(schema);
    const std::size_t p = chunk.column_count;
    cm.n = chunk.row_count;
    if (cm.n == 0) return cm;
    // chunk-local two-pass: mean first, then centered products (row-major,
    // ascending pairs) — the chunk is already in memory
    for (std::size_t r = 0; r < chunk.row_count; ++r) {
        const double* row = chunk.values.data() + r * p;
        for (std::size_t j = 0; j < p; ++j) cm.mean[j] += row[j];
    }
    for (std::size_t j = 0; j < p; ++j) cm.mean[j] /= static_cast<double>(cm.n);
    std::vector<double> delta(p);
    for (std::size_t r = 0; r < chunk.row_count; ++r) {
        const double* row = chunk.values.data() + r * p;
        for (std::size_t j = 0; j < p; ++j) delta[j] = row[j] - cm.mean[j];
        double* out = cm.m2.data();
        for (std::size_t j = 0; j < p; ++j) {
            const double dj = delta[j];
            for (std::size_t k = j; k < p; ++k) *out++ += dj * delta[k];
        }
    }
    return cm;
}

CoMoments merge_comoments(CoMoments a, const CoMoments& b) {
    if (a.schema != b.schema)
        throw SchemaMismatchError("merge_comoments: schemas differ");
    if (b.n == 0) return a;
    if (a.n == 0) {
        CoMoments copy = b;
        return copy;
    }
    const std::size_t p = a.mean.size();
    const double na = static_cast<double>(a.n);
    const double nb = static_cast<double>(b.n);
    const double n = na + nb;
    std::vector<double> delta(p);
    for (std::size_t j = 0; j < p; ++j) delta[j] = b.mean[j] - a.mean[j];
    const double scale = na * nb / n;
    double* out = a.m2.data();
    const double* bm2 = b.m2.data();
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j; k < p; ++k) {
            *out = *out + *bm2 + delta[j] * delta[k] * scale;
            ++out;
            ++bm2;
        }
    for (std::size_t j = 0; j < p; ++j) a.mean[j] += delta[j] * (nb / n);
    a.n += b.n;
    return a;
}

Matrix comoments_covariance(const CoMoments& cm, int ddof) {
    if (cm.n <= static_cast<std::uint64_t>(ddof))
        throw std::invalid_argument("comoments_covariance: need n > ddof");
    const double denom = static_cast<double>(cm.n - static_cast<std::uint64_t>(ddof));
    const std::size_t p = cm.mean.size();
    Matrix cov(p, p);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j; k < p; ++k) cov(j, k) = cov(k, j) = cm.m2.at(j, k) / denom;
    return cov;
}

namespace {
constexpr char kSidecarMagic[9] = "SSTATSUF";
constexpr std::uint32_t kSidecarVersion = 1;

void write_exact(std::ofstream& out, const void* data, std::size_t size,
                 const std::filesystem::path& path) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("write failure on " + path.string());
}

void read_exact(std::ifstream& in, void* data, std::size_t size,
                const std::filesystem::path& path) {
    in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(in.gcount()) != size)
        throw FormatError("truncated sufficient-statistics file: " + path.string());
}
} // namespace

void save_suffstats(const SuffStats& ss, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");

    unsigned char word[8];
    write_exact(out, kSidecarMagic, 8, path);
    put_u32le(word, kSidecarVersion);
    write_exact(out, word, 4, path);
    put_u32le(word, static_cast<std::uint32_t>(ss.precision));
    write_exact(out, word, 4, path);
    put_u64le(word, ss.n);
    write_exact(out, word, 8, path);
    const std::uint32_t p = static_cast<std::uint32_t>(ss.schema.column_count());
    put_u32le(word, p);
    write_exact(out, word, 4, path);
    put_u32le(word, static_cast<std::uint32_t>(ss.schema.identifier_columns.size()));
    write_exact(out, word, 4, path);
    for (std::size_t id : ss.schema.identifier_columns) {
        put_u32le(word, static_cast<std::uint32_t>(id));
        write_exact(out, word, 4, path);
    }
    for (const std::string& name : ss.schema.column_names) {
        put_u32le(word, static_cast<std::uint32_t>(name.size()));
        write_exact(out, word, 4, path);
        write_exact(out, name.data(), name.size(), path);
    }
    std::vector<unsigned char> bytes(std::max(ss.sums.size(), ss.cross.packed_size()) * 8);
    doubles_to_le_bytes(ss.sums.data(), ss.sums.size(), bytes.data());
    write_exact(out, bytes.data(), ss.sums.size() * 8, path);
    doubles_to_le_bytes(ss.cross.data(), ss.cross.packed_size(), bytes.data());
    write_exact(out, bytes.data(), ss.cross.packed_size() * 8, path);
    out.close();
    if (!out) throw IoError("write failure closing " + path.string());
}

SuffStats load_suffstats(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    unsigned char word[8];
    char magic[8];
    read_exact(in, magic, 8, path);
    if (std::memcmp(magic, kSidecarMagic, 8) != 0)
        throw FormatError("bad magic: not a sufficient-statistics file: " + path.string());
    read_exact(in, word, 4, path);
    if (get_u32le(word) != kSidecarVersion)
        throw FormatError("unsupported sufficient-statistics version in " + path.string());
    read_exact(in, word, 4, path);
    const std::uint32_t precision = get_u32le(word);
    if (precision > 1) throw FormatError("unknown precision mode in " + path.string());
    SuffStats ss;
    ss.precision = static_cast<PrecisionMode>(precision);
    read_exact(in, word, 8, path);
    ss.n = get_u64le(word);
    read_exact(in, word, 4, path);
    const std::uint32_t p = get_u32le(word);
    if (p == 0) throw FormatError("zero columns in " + path.string());
    read_exact(in, word, 4, path);
    const std::uint32_t id_count = get_u32le(word);
    if (id_count > p) throw FormatError("identifier count exceeds columns in " + path.string());
    ss.schema.identifier_columns.resize(id_count);
    for (std::uint32_t i = 0; i < id_count; ++i) {
        read_exact(in, word, 4, path);
        ss.schema.identifier_columns[i] = get_u32le(word);
    }
    ss.schema.column_names.resize(p);
    for (std::uint32_t i = 0; i < p; ++i) {
        read_exact(in, word, 4, path);
        const std::uint32_t len = get_u32le(word);
        if (len > (1u << 20)) throw FormatError("implausible column-name length in " + path.string());
        ss.schema.column_names[i].resize(len);
        if (len > 0) read_exact(in, ss.schema.column_names[i].data(), len, path);
    }
    ss.schema.validate();
    ss.sums.resize(p);
    ss.cross = SymPacked(p);
    std::vector<unsigned char> bytes(std::max(ss.sums.size(), ss.cross.packed_size()) * 8);
    read_exact(in, bytes.data(), ss.sums.size() * 8, path);
    le_bytes_to_doubles(bytes.data(), ss.sums.size(), ss.sums.data());
    read_exact(in, bytes.data(), ss.cross.packed_size() * 8, path);
    le_bytes_to_doubles(bytes.data(), ss.cross.packed_size(), ss.cross.data());
    // must be exactly at end of file
    char extra;
    in.read(&extra, 1);
    if (in.gcount() != 0)
        throw FormatError("trailing bytes after sufficient statistics in " + path.string());
    return ss;
}

SuffStats dataset_suffstats(const std::filesystem::path& dataset, const DatasetSchema& schema,
                            const ReductionPlan& plan, ReductionTimings* timings) {
    const PrecisionMode precision = plan.precision;
    auto per_chunk = [&schema, precision](const Chunk& chunk) {
        return accumulate_chunk(chunk, schema, precision);
    };
    auto merge = [](SuffStats a, SuffStats b) { return merge_suffstats(std::move(a), b); };
    return run_reduction(dataset, plan, per_chunk, merge, SuffStats::empty(schema, precision),
                         timings);
}

} // namespace sstat
