#pragma once

#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "sstat/errors.hpp"

namespace sstat {

using int128 = __int128;

/// Formats a binary64 for CSV/report output: integral values (within the
/// exactly-representable integer range) print without a decimal point,
/// everything else with 17 significant digits so the text re-parses to the
/// same bit pattern.
std::string format_value(double v);

/// Always 17 significant digits (round-trip safe), regardless of
/// integrality. Used where a uniform column of text is preferable.
std::string format_real17(double v);

std::string to_string(int128 v);

/// True when the double holds exactly the same integer as `v`.
bool double_equals_int128(double d, int128 v);

// Little-endian scalar serialization. The on-disk formats are normative
// little-endian; these helpers keep the writers correct on any host.

inline void put_u32le(unsigned char* out, std::uint32_t v) {
    out[0] = static_cast<unsigned char>(v);
    out[1] = static_cast<unsigned char>(v >> 8);
    out[2] = static_cast<unsigned char>(v >> 16);
    out[3] = static_cast<unsigned char>(v >> 24);
}

inline void put_u64le(unsigned char* out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

inline void put_f64le(unsigned char* out, double v) {
    put_u64le(out, std::bit_cast<std::uint64_t>(v));
}

inline std::uint32_t get_u32le(const unsigned char* in) {
    return static_cast<std::uint32_t>(in[0]) | (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) | (static_cast<std::uint32_t>(in[3]) << 24);
}

inline std::uint64_t get_u64le(const unsigned char* in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
    return v;
}

inline double get_f64le(const unsigned char* in) {
    return std::bit_cast<double>(get_u64le(in));
}

/// Bulk copy between a double array and its little-endian byte image.
void doubles_to_le_bytes(const double* src, std::size_t count, unsigned char* dst);
void le_bytes_to_doubles(const unsigned char* src, std::size_t count, double* dst);

class StopWatch {
public:
    StopWatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    void reset() { start_ = std::chrono::steady_clock::now(); }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace sstat
