#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "sstat/binfile.hpp"
#include "sstat/errors.hpp"
#include "sstat/util.hpp"

namespace sstat {

struct RowRange {
    std::uint64_t start_row = 0;
    std::uint64_t row_count = 0;

    bool operator==(const RowRange&) const = default;
};

/// Disjoint, contiguous, ordered ranges whose union is exactly [0, n).
struct Partition {
    std::vector<RowRange> ranges;

    std::uint64_t total_rows() const {
        std::uint64_t n = 0;
        for (const auto& r : ranges) n += r.row_count;
        return n;
    }
};

/// ceil(n_rows / chunk_rows) ranges; all but possibly the last hold
/// chunk_rows rows.
Partition plan_partitions(std::uint64_t n_rows, std::uint64_t chunk_rows);

enum class PrecisionMode : std::uint32_t {
    Binary64 = 0,
    /// Accumulates partials in binary32. A diagnostic lens: reproduces at
    /// desk scale the cancellation pathologies that full-scale runs hit.
    Binary32Diagnostic = 1,
};

enum class MergeOrder { ByRangeIndex };

struct ReductionPlan {
    Partition partition;
    unsigned worker_count = 1;
    MergeOrder merge_order = MergeOrder::ByRangeIndex;
    PrecisionMode precision = PrecisionMode::Binary64;
};

struct ReductionTimings {
    double read_seconds = 0.0; // summed across workers
    double work_seconds = 0.0;
    std::uint64_t bytes_read = 0;
};

/// Runs per_chunk over every range of the plan on a pool of workers and
/// folds the partial results in ascending range order starting from
/// `identity`. The merge order is fixed, so the result is bit-identical
/// for any worker_count.
///
/// per_chunk must be pure (no shared mutable state); partial results are
/// moved between threads. A per-chunk failure aborts the reduction and is
/// reported as ReductionError with the lowest failing range index.
template <class Partial, class PerChunk, class Merge>
Partial run_reduction(const std::filesystem::path& dataset, const ReductionPlan& plan,
                      PerChunk per_chunk, Merge merge, Partial identity,
                      ReductionTimings* timings = nullptr) {
    if (plan.worker_count < 1)
        throw std::invalid_argument("run_reduction: worker_count must be >= 1");
    {
        BinaryReader probe(dataset);
        if (probe.rows() != plan.partition.total_rows())
            throw std::invalid_argument(
                "run_reduction: partition covers " + std::to_string(plan.partition.total_rows()) +
                " rows but dataset has " + std::to_string(probe.rows()));
    }

    const std::size_t range_count = plan.partition.ranges.size();
    std::vector<std::optional<Partial>> partials(range_count);
    std::atomic<std::size_t> next_range{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::size_t error_range = range_count;
    std::string error_message;
    std::atomic<std::int64_t> read_ns{0}, work_ns{0};
    std::atomic<std::uint64_t> bytes_read{0};

    auto worker = [&] {
        std::size_t current = 0;
        try {
            BinaryReader reader(dataset);
            while (!failed.load(std::memory_order_relaxed)) {
                const std::size_t i = next_range.fetch_add(1);
                if (i >= range_count) break;
                current = i;
                const RowRange& range = plan.partition.ranges[i];
                StopWatch read_watch;
                Chunk chunk = reader.read_rows(range.start_row, range.row_count);
                read_ns.fetch_add(static_cast<std::int64_t>(read_watch.seconds() * 1e9));
                bytes_read.fetch_add(chunk.values.size() * 8);
                StopWatch work_watch;
                partials[i] = per_chunk(chunk);
                work_ns.fetch_add(static_cast<std::int64_t>(work_watch.seconds() * 1e9));
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!failed.load() || current < error_range) {
                error_range = current;
                error_message = e.what();
            }
            failed.store(true);
        }
    };

    const unsigned pool = static_cast<unsigned>(
        std::min<std::size_t>(plan.worker_count, std::max<std::size_t>(range_count, 1)));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (unsigned t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    if (failed.load())
        throw ReductionError(error_range, "range " + std::to_string(error_range) +
                                              " failed: " + error_message);

    if (timings != nullptr) {
        timings->read_seconds = static_cast<double>(read_ns.load()) * 1e-9;
        timings->work_seconds = static_cast<double>(work_ns.load()) * 1e-9;
        timings->bytes_read = bytes_read.load();
    }

    Partial result = std::move(identity);
    for (std::size_t i = 0; i < range_count; ++i)
        result = merge(std::move(result), std::move(*partials[i]));
    return result;
}

/// Result of summing one column over the whole dataset. float_sum is
/// accumulated in the plan's precision. exact_sum uses 128-bit integer
/// accumulation and is present only when every value in the column is
/// integral and within +/-2^63 (the identifier validation path).
struct ColumnSumResult {
    double float_sum = 0.0;
    std::optional<int128> exact_sum;
    /// When exact_sum is present: whether the float path reproduced it
    /// exactly. False means the float result is approximate.
    bool float_matches_exact = false;
    std::optional<std::string> exact_note; // why exact_sum is absent
};

ColumnSumResult column_sum(const std::filesystem::path& dataset, std::size_t column,
                           const ReductionPlan& plan, ReductionTimings* timings = nullptr);

/// Default worker count: hardware concurrency, overridable by the
/// SSTAT_WORKERS environment variable.
unsigned default_worker_count();

} // namespace sstat
