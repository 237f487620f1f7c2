#include "sstat/reduce.hpp"

#include <cmath>
#include <cstdlib>

namespace sstat {

Partition plan_partitions(std::uint64_t n_rows, std::uint64_t chunk_rows) {
    if (chunk_rows == 0) throw std::invalid_argument("plan_partitions: chunk_rows must be >= 1");
    if (n_rows == 0) throw std::invalid_argument("plan_partitions: n_rows must be >= 1");
    Partition partition;
    partition.ranges.reserve(static_cast<std::size_t>((n_rows + chunk_rows - 1) / chunk_rows));
    for (std::uint64_t start = 0; start < n_rows; start += chunk_rows)
        partition.ranges.push_back({start, std::min(chunk_rows, n_rows - start)});
    return partition;
}

namespace {

struct SumPartial {
    double f64 = 0.0;
    float f32 = 0.0f;
    int128 exact = 0;
    bool exact_ok = true;
    std::optional<std::string> note;
};

constexpr double kInt63 = 9223372036854775808.0; // 2^63

} // namespace

ColumnSumResult column_sum(const std::filesystem::path& dataset, std::size_t column,
                           const ReductionPlan& plan, ReductionTimings* timings) {
    {
        BinaryReader probe(dataset);
        if (column >= probe.columns())
            throw std::out_of_range("column_sum: column " + std::to_string(column) +
                                    " out of range, dataset has " +
                                    std::to_string(probe.columns()) + " columns");
    }
    const bool diag32 = plan.precision == PrecisionMode::Binary32Diagnostic;

    auto per_chunk = [column, diag32](const Chunk& chunk) {
        SumPartial p;
        for (std::size_t r = 0; r < chunk.row_count; ++r) {
            const double v = chunk.at(r, column);
            if (diag32)
                p.f32 += static_cast<float>(v);
            else
                p.f64 += v;
            if (p.exact_ok) {
                if (v == std::trunc(v) && std::fabs(v) < kInt63) {
                    p.exact += static_cast<int128>(v);
                } else {
                    p.exact_ok = false;
                    p.note = "non-integral value at row " +
                             std::to_string(chunk.start_row + r) + "; exact sum unavailable";
                }
            }
        }
        return p;
    };
    auto merge = [diag32](SumPartial a, SumPartial b) {
        if (diag32)
            a.f32 += b.f32;
        else
            a.f64 += b.f64;
        a.exact += b.exact;
        if (!b.exact_ok && a.exact_ok) {
            a.exact_ok = false;
            a.note = b.note;
        }
        return a;
    };

    SumPartial total =
        run_reduction(dataset, plan, per_chunk, merge, SumPartial{}, timings);

    ColumnSumResult result;
    result.float_sum = diag32 ? static_cast<double>(total.f32) : total.f64;
    if (total.exact_ok) {
        result.exact_sum = total.exact;
        result.float_matches_exact = double_equals_int128(result.float_sum, total.exact);
    } else {
        result.exact_note = total.note;
    }
    return result;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("SSTAT_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

} // namespace sstat
