#include "dopo_shor/pgm.hpp"

#include "dopo_shor/optics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

namespace dopo::optics {

double write_pgm16(const std::filesystem::path& path, const Frame& frame) {
    const double peak = frame.max();
    const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;

    std::vector<unsigned char> data(frame.intensity.size() * 2);
    for (std::size_t i = 0; i < frame.intensity.size(); ++i) {
        const double v = std::round(frame.intensity[i] * scale);
        const auto sample = static_cast<std::uint16_t>(std::clamp(v, 0.0, 65535.0));
        data[2 * i] = static_cast<unsigned char>(sample >> 8);
        data[2 * i + 1] = static_cast<unsigned char>(sample & 0xFF);
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << "P5\n" << frame.width << ' ' << frame.height << "\n65535\n";
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error("short write on " + path.string());
    return scale;
}

Pgm16 read_pgm16(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string magic;
    unsigned maxval = 0;
    Pgm16 img;
    in >> magic >> img.width >> img.height >> maxval;
    if (!in || magic != "P5" || maxval != 65535)
        throw std::runtime_error(path.string() + " is not a 16-bit P5 image");
    in.get();  // single whitespace before the raster

    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    std::vector<unsigned char> data(count * 2);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (in.gcount() != static_cast<std::streamsize>(data.size()))
        throw std::runtime_error(path.string() + " is truncated");
    img.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        img.samples[i] = static_cast<std::uint16_t>((data[2 * i] << 8) | data[2 * i + 1]);
    return img;
}

}  // namespace dopo::optics
