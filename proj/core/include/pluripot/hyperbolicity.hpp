#pragma once

#include <cstdint>
#include <optional>

#include "pluripot/analysis.hpp"
#include "pluripot/potentials.hpp"
#include "pluripot/types.hpp"

namespace pluripot {

// Outcome of growing an affine holomorphic disk inside the sublevel region
// U_t = {phi_total < t}.  `direction` is a unit vector of C^2; the disk is
// center + r e^{i theta} direction.  `radius` is the largest certified-inside
// radius found; when `capped` the growth hit the configured ceiling instead
// of the region boundary and `violating_angle` is empty.
struct DiskProbeResult {
    Point center{};
    Point direction{};
    double radius = 0.0;
    int boundary_samples = 0;
    std::optional<double> violating_angle;
    bool capped = false;
};

struct DiskProbeOptions {
    int interior_rings = 8;    // sampled rings strictly inside the boundary ring
    double initial_radius = 1e-3;
    double max_radius = 64.0;  // growth ceiling; reaching it sets `capped`
};

// Largest r (to absolute tolerance tol) such that every sampled point of the
// closed disk of radius r lies in U_t: `angular_samples` points on each of
// interior_rings + 1 rings.  Bracket by doubling from initial_radius, then
// bisect.  Points whose potential evaluation fails (e.g. exactly on a pole)
// count as outside, so the returned radius is always the certified one.
// Throws CenterOutside when the center itself is not in U_t.
DiskProbeResult affine_disk_radius(Point center, Point direction, double t,
                                   const PotentialParams& params,
                                   int angular_samples = 64, double tol = 1e-4,
                                   const DiskProbeOptions& opts = {});

struct R0SearchOptions {
    Box4 box = Box4::cube(2.0); // centers are drawn with (z,w) in this box
    int angular_samples = 64;
    double tol = 1e-4;
    DiskProbeOptions probe{};
    std::int64_t max_attempts_per_center = 1000;
};

struct EmpiricalR0 {
    double r0_hat = 0.0;
    DiskProbeResult argmax{};
    int probes = 0;
    bool any_capped = false;
};

// Maximum affine disk radius over seeded random probes.  Centers are taken on
// the level-`params.level` branched set itself (random z in the box, random
// sheet), which guarantees center in U_t for every t and concentrates the
// search where the region is fattest; directions are uniform on the unit
// sphere of C^2.  Reproducible for a fixed seed.
EmpiricalR0 empirical_r0(double t, const PotentialParams& params, int centers,
                         std::uint64_t seed, const R0SearchOptions& opts = {});

// Euclidean distance scaled by 1/r0: a Kobayashi-distance lower bound valid
// whenever r0 upper-bounds the radii of all holomorphic disks in the region.
double kobayashi_lower_bound(Point zeta1, Point zeta2, double r0);

} // namespace pluripot
