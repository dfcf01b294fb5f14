#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dopo::optics {

struct Frame;

struct Pgm16 {
    unsigned width = 0;
    unsigned height = 0;
    std::vector<std::uint16_t> samples;  // row-major
};

/// Binary P5 with maxval 65535 and big-endian samples. Intensities are mapped
/// linearly by `scale` = 65535 / max (0 for an all-dark frame), which is
/// returned so the caller can record it.
double write_pgm16(const std::filesystem::path& path, const Frame& frame);

/// Reads a file produced by write_pgm16 (comments and maxval other than
/// 65535 are rejected).
[[nodiscard]] Pgm16 read_pgm16(const std::filesystem::path& path);

}  // namespace dopo::optics
