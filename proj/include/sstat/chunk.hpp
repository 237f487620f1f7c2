#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sstat {

/// A contiguous block of rows, row-major binary64. Chunks delivered by a
/// stream satisfy start_row(k+1) = start_row(k) + row_count(k): no gaps,
/// no overlap.
struct Chunk {
    std::uint64_t start_row = 0;
    std::size_t row_count = 0;
    std::size_t column_count = 0;
    std::vector<double> values; // row_count * column_count

    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * column_count, column_count};
    }

    double at(std::size_t r, std::size_t c) const { return values[r * column_count + c]; }
};

} // namespace sstat
