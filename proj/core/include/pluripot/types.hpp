#pragma once

#include <complex>

namespace pluripot {

using Cx = std::complex<double>;

// A point of C^2 written as (z, w).  z is the base coordinate the branched
// covers live over; w is the fiber coordinate.
struct Point {
    Cx z{};
    Cx w{};
};

inline double norm2(const Point& p) {
    return std::norm(p.z) + std::norm(p.w);
}

inline double dist(const Point& a, const Point& b) {
    return std::sqrt(std::norm(a.z - b.z) + std::norm(a.w - b.w));
}

} // namespace pluripot
