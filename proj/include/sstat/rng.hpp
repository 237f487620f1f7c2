#pragma once

#include <cstdint>
#include <stdexcept>

namespace sstat {

/// SplitMix64 stream keyed by (seed, row index).
///
/// Every row of a dataset gets its own stream whose draws depend only on
/// the seed and the row index, never on how many rows other workers have
/// produced. That makes generation reproducible across runs and across any
/// partitioning of the row space.
class RowRng {
public:
    RowRng(std::uint64_t seed, std::uint64_t row_index)
        : base_(mix(mix(seed) ^ mix(row_index + kGolden))) {}

    std::uint64_t next_u64() { return mix(base_ + (++position_) * kGolden); }

    /// Uniform in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    std::uint64_t position() const { return position_; }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t position_ = 0;
};

/// Uniform integer in [lo, hi], both ends inclusive. Reduction is by
/// modulo; for the spans used here (at most a few hundred values) the bias
/// is below span/2^64 and unmeasurable.
inline std::int64_t rand_between(std::int64_t lo, std::int64_t hi, RowRng& rng) {
    if (lo > hi) throw std::invalid_argument("rand_between: lo > hi");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng.next_u64()); // full 64-bit range
    return lo + static_cast<std::int64_t>(rng.next_u64() % span);
}

} // namespace sstat
