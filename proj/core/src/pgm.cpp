#include "pluripot/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pluripot/errors.hpp"

namespace pluripot {

std::string Pgm16::to_bytes() const {
    if (width < 1 || height < 1) throw ConfigError("Pgm16: empty image");
    if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ConfigError("Pgm16: pixel count does not match dimensions");
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) +
                      "\n65535\n";
    out.reserve(out.size() + pixels.size() * 2);
    for (std::uint16_t p : pixels) {
        out += static_cast<char>(p >> 8); // big-endian per the format
        out += static_cast<char>(p & 0xff);
    }
    return out;
}

void Pgm16::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("Pgm16: cannot open " + path);
    const std::string bytes = to_bytes();
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("Pgm16: write failed for " + path);
}

HeatmapScale finite_range(const std::vector<double>& values) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo <= hi)) return {0.0, 1.0};  // nothing finite
    if (lo == hi) return {lo, lo + 1.0}; // flat data
    return {lo, hi};
}

Pgm16 heatmap(const std::vector<double>& values, int width, int height,
              HeatmapScale scale) {
    if (width < 1 || height < 1) throw ConfigError("heatmap: empty image");
    if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ConfigError("heatmap: value count does not match dimensions");
    if (!(scale.vmax > scale.vmin)) throw ConfigError("heatmap: degenerate scale");

    Pgm16 img;
    img.width = width;
    img.height = height;
    img.pixels.resize(values.size());
    const double span = scale.vmax - scale.vmin;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!std::isfinite(v)) {
            img.pixels[i] = 0;
            continue;
        }
        const double t = std::clamp((v - scale.vmin) / span, 0.0, 1.0);
        img.pixels[i] = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    }
    return img;
}

} // namespace pluripot
