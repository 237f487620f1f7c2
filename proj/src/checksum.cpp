#include "sstat/checksum.hpp"

#include <fstream>
#include <vector>

#include "sstat/errors.hpp"

namespace sstat {

std::uint64_t Fnv1a64::of_file_range(const std::filesystem::path& path,
                                     std::uint64_t offset, std::uint64_t length) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for checksum");
    in.seekg(static_cast<std::streamoff>(offset));
    Fnv1a64 f;
    std::vector<char> buf(1 << 20);
    std::uint64_t remaining = length;
    while (remaining > 0) {
        std::size_t want = static_cast<std::size_t>(
            std::min<std::uint64_t>(remaining, buf.size()));
        in.read(buf.data(), static_cast<std::streamsize>(want));
        std::size_t got = static_cast<std::size_t>(in.gcount());
        if (got == 0) throw IoError("unexpected end of file while checksumming " + path.string());
        f.update(buf.data(), got);
        remaining -= got;
    }
    return f.value();
}

} // namespace sstat
