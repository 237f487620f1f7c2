#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sstat/chunk.hpp"
#include "sstat/linalg.hpp"
#include "sstat/reduce.hpp"
#include "sstat/schema.hpp"

namespace sstat {

/// Sufficient statistics of one pass over the data: observation count n,
/// per-column sums s, and the cross-product matrix S = X^T X (packed upper
/// triangle; symmetric by construction). Everything downstream (means,
/// covariance, correlation, PCA) derives from these three without touching
/// the raw data again.
struct SuffStats {
    std::uint64_t n = 0;
    std::vector<double> sums;
    SymPacked cross;
    DatasetSchema schema;
    PrecisionMode precision = PrecisionMode::Binary64;

    static SuffStats empty(DatasetSchema schema,
                           PrecisionMode precision = PrecisionMode::Binary64);

    bool operator==(const SuffStats&) const = default;
};

/// Centered co-moments: running mean and M2 = sum (x-mean)(x-mean)^T.
/// The numerically stable companion of SuffStats; merged across chunks via
/// the pairwise update. Always accumulated in binary64.
struct CoMoments {
    std::uint64_t n = 0;
    std::vector<double> mean;
    SymPacked m2;
    DatasetSchema schema;

    static CoMoments empty(DatasetSchema schema);

    bool operator==(const CoMoments&) const = default;
};

/// Accumulates one chunk. Order is fixed: row-major, ascending rows,
/// ascending column pairs; reference implementations that follow the same
/// order reproduce the result bit-exactly. Throws NonFiniteError (with the
/// absolute row and the column) on non-finite input.
SuffStats accumulate_chunk(const Chunk& chunk, const DatasetSchema& schema,
                           PrecisionMode precision = PrecisionMode::Binary64);

/// Elementwise merge (n, s, S). Operands must share schema and precision.
SuffStats merge_suffstats(SuffStats a, const SuffStats& b);

CoMoments accumulate_comoments(const Chunk& chunk, const DatasetSchema& schema);
CoMoments merge_comoments(CoMoments a, const CoMoments& b);

/// Sample (ddof=1) or population (ddof=0) covariance from co-moments.
Matrix comoments_covariance(const CoMoments& cm, int ddof);

/// Sidecar persistence, bit-exact round trip. Layout (little-endian):
/// magic "SSTATSUF", version u32 = 1, precision u32, n u64, p u32,
/// identifier count u32 + indices u32 each, p names (u32 length + bytes),
/// s as p binary64, packed upper triangle of S as p(p+1)/2 binary64.
void save_suffstats(const SuffStats& ss, const std::filesystem::path& path);
SuffStats load_suffstats(const std::filesystem::path& path);

/// Whole-dataset sufficient statistics through the parallel reduction
/// engine (fixed merge order: bit-identical for any worker count).
SuffStats dataset_suffstats(const std::filesystem::path& dataset, const DatasetSchema& schema,
                            const ReductionPlan& plan, ReductionTimings* timings = nullptr);

} // namespace sstat
