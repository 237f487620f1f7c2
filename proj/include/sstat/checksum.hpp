#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

namespace sstat {

/// Streaming FNV-1a 64-bit checksum. This is the fixed whole-file checksum
/// algorithm of the binary dataset format: offset basis
/// 14695981039346656037, prime 1099511628211, bytes folded in file order.
class Fnv1a64 {
public:
    void update(const void* data, std::size_t size) {
        const auto* p = static_cast<const unsigned char*>(data);
        std::uint64_t h = hash_;
        for (std::size_t i = 0; i < size; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL;
        }
        hash_ = h;
    }

    std::uint64_t value() const { return hash_; }

    static std::uint64_t of_bytes(const void* data, std::size_t size) {
        Fnv1a64 f;
        f.update(data, size);
        return f.value();
    }

    /// Checksum of a byte range of a file (throws IoError on read failure).
    static std::uint64_t of_file_range(const std::filesystem::path& path,
                                       std::uint64_t offset, std::uint64_t length);

private:
    std::uint64_t hash_ = 14695981039346656037ULL;
};

} // namespace sstat
