#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pluripot {

// Row-major 16-bit grayscale image, top row first.
struct Pgm16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;

    std::string to_bytes() const; // binary P5, maxval 65535, big-endian samples
    void write(const std::string& path) const;
};

struct HeatmapScale {
    double vmin = 0.0;
    double vmax = 1.0;
};

// [vmin, vmax] of the finite entries; degenerate or all-nonfinite data get a
// unit-width fallback so the linear map below stays defined.
HeatmapScale finite_range(const std::vector<double>& values);

// Linear map vmin -> 0, vmax -> 65535, clamped; non-finite values (the
// -infinity hit exactly on the branched set, NaN) map to 0.
Pgm16 heatmap(const std::vector<double>& values, int width, int height,
              HeatmapScale scale);

} // namespace pluripot
