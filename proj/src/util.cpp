#include "sstat/util.hpp"

#include <array>
#include <bit>
#include <cinttypes>
#include <cstdio>

namespace sstat {

namespace {
constexpr double kMaxExactInteger = 9007199254740992.0; // 2^53
}

std::string format_real17(double v) {
    std::array<char, 64> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    (void)ec;
    return std::string(buf.data(), ptr);
}

std::string format_value(double v) {
    if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) <= kMaxExactInteger) {
        std::array<char, 32> buf;
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       static_cast<long long>(v));
        (void)ec;
        return std::string(buf.data(), ptr);
    }
    return format_real17(v);
}

std::string to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string digits;
    while (u != 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) digits.push_back('-');
    return std::string(digits.rbegin(), digits.rend());
}

bool double_equals_int128(double d, int128 v) {
    if (!std::isfinite(d) || d != std::trunc(d)) return false;
    // Integral doubles of magnitude below 2^127 convert to int128 exactly.
    if (std::fabs(d) >= 0x1p127) return false;
    return static_cast<int128>(d) == v;
}

void doubles_to_le_bytes(const double* src, std::size_t count, unsigned char* dst) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(dst, src, count * sizeof(double));
    } else {
        for (std::size_t i = 0; i < count; ++i) put_f64le(dst + 8 * i, src[i]);
    }
}

void le_bytes_to_doubles(const unsigned char* src, std::size_t count, double* dst) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(dst, src, count * sizeof(double));
    } else {
        for (std::size_t i = 0; i < count; ++i) dst[i] = get_f64le(src + 8 * i);
    }
}

} // namespace sstat
