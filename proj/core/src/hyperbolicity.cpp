#include "pluripot/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pluripot/errors.hpp"
#include "pluripot/rng.hpp"
#include "pluripot/wermer.hpp"

namespace pluripot {

namespace {

bool in_sublevel(const Point& zeta, double t, const PotentialParams& params) {
    try {
        return phi_total(zeta.z, zeta.w, params) < t;
    } catch (const Error&) {
        return false; // unevaluable sample counts as outside: keep the radius sound
    }
}

struct RingScan {
    bool inside = true;
    double bad_angle = 0.0;
};

// Samples interior_rings + 1 concentric rings up to radius r; reports the
// first violating angle if any sampled point leaves U_t.
RingScan scan_disk(const Point& center, const Point& dir, double r, double t,
                   const PotentialParams& params, int angular_samples,
                   int interior_rings) {
    for (int ring = interior_rings + 1; ring >= 1; --ring) {
        const double rr = r * ring / (interior_rings + 1);
        for (int a = 0; a < angular_samples; ++a) {
            const double theta = 2.0 * std::numbers::pi * a / angular_samples;
            const Cx lambda = rr * Cx(std::cos(theta), std::sin(theta));
            const Point zeta{center.z + lambda * dir.z, center.w + lambda * dir.w};
            if (!in_sublevel(zeta, t, params)) return {false, theta};
        }
    }
    return {true, 0.0};
}

} // namespace

DiskProbeResult affine_disk_radius(Point center, Point direction, double t,
                                   const PotentialParams& params, int angular_samples,
                                   double tol, const DiskProbeOptions& opts) {
    if (angular_samples < 4) throw ConfigError("affine_disk_radius: need >= 4 angles");
    if (!(tol > 0.0)) throw ConfigError("affine_disk_radius: tolerance must be positive");
    if (opts.interior_rings < 0) throw ConfigError("affine_disk_radius: bad ring count");
    if (!(opts.initial_radius > 0.0) || !(opts.max_radius > opts.initial_radius))
        throw ConfigError("affine_disk_radius: bad radius range");
    const double dn = std::sqrt(norm2(direction));
    if (std::abs(dn - 1.0) > 1e-9)
        throw ConfigError("affine_disk_radius: direction must have unit norm");
    if (!in_sublevel(center, t, params))
        throw CenterOutside("affine_disk_radius: center is not inside the sublevel region");

    DiskProbeResult res;
    res.center = center;
    res.direction = direction;
    res.boundary_samples = angular_samples;

    const auto scan = [&](double r) {
        return scan_disk(center, direction, r, t, params, angular_samples,
                         opts.interior_rings);
    };

    // Grow a bracket [lo inside, hi outside] by doubling.
    double lo = 0.0;
    double hi = opts.initial_radius;
    RingScan hi_scan = scan(hi);
    while (hi_scan.inside) {
        lo = hi;
        hi *= 2.0;
        if (hi > opts.max_radius) {
            res.radius = lo;
            res.capped = true;
            return res;
        }
        hi_scan = scan(hi);
    }

    double bad_angle = hi_scan.bad_angle;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const RingScan s = scan(mid);
        if (s.inside) {
            lo = mid;
        } else {
            hi = mid;
            bad_angle = s.bad_angle;
        }
    }
    res.radius = lo;
    res.violating_angle = bad_angle;
    return res;
}

namespace {

// Unit vector of C^2 from four Gaussian draws (dims base..base+3).
Point random_direction(const CounterRng& rng, std::int64_t i, int base) {
    const auto gauss_pair = [&](int dim) {
        const double u1 = std::max(rng.uniform(i, dim), 1e-300);
        const double u2 = rng.uniform(i, dim + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        return Cx(r * std::cos(2.0 * std::numbers::pi * u2),
                  r * std::sin(2.0 * std::numbers::pi * u2));
    };
    const Cx a = gauss_pair(base);
    const Cx b = gauss_pair(base + 2);
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n < 1e-12) return {Cx(1.0, 0.0), Cx(0.0, 0.0)};
    return {a / n, b / n};
}

} // namespace

EmpiricalR0 empirical_r0(double t, const PotentialParams& params, int centers,
                         std::uint64_t seed, const R0SearchOptions& opts) {
    if (centers < 1) throw ConfigError("empirical_r0: need at least one center");
    if (!opts.box.valid()) throw ConfigError("empirical_r0: degenerate search box");

    const CounterRng rng(seed);
    const int n = params.level;
    const double sheets = std::pow(2.0, n);

    EmpiricalR0 out;
    std::int64_t counter = 0;
    for (int c = 0; c < centers; ++c) {
        // Rejection loop: a random point of the branched set with z in the
        // box, kept once its w also falls inside the box.
        Point center{};
        bool found = false;
        for (std::int64_t attempt = 0; attempt < opts.max_attempts_per_center; ++attempt) {
            const std::int64_t i = counter++;
            const Cx z{rng.uniform(i, 0, opts.box.lo[0], opts.box.hi[0]),
                       rng.uniform(i, 1, opts.box.lo[1], opts.box.hi[1])};
            const auto bits = static_cast<std::uint64_t>(rng.uniform(i, 2) * sheets);
            const SheetLabel sigma{std::min(bits, static_cast<std::uint64_t>(sheets) - 1),
                                   n};
            Cx w;
            try {
                w = sheet_value(z, sigma, params.sched);
            } catch (const Error&) {
                continue; // z landed on a pole; draw again
            }
            if (w.real() < opts.box.lo[2] || w.real() > opts.box.hi[2] ||
                w.imag() < opts.box.lo[3] || w.imag() > opts.box.hi[3])
                continue;
            // The confinement terms can push points of the branched set above
            // the threshold at large |Re z| or |Im z|; only points that are
            // actually inside the sublevel region qualify as probe centers.
            if (!in_sublevel({z, w}, t, params)) continue;
            center = {z, w};
            found = true;
            break;
        }
        if (!found)
            throw EmptySet("empirical_r0: no on-set center found inside the box");

        const Point dir = random_direction(rng, counter++, 0);
        const DiskProbeResult probe = affine_disk_radius(center, dir, t, params,
                                                         opts.angular_samples, opts.tol,
                                                         opts.probe);
        ++out.probes;
        out.any_capped = out.any_capped || probe.capped;
        if (probe.radius > out.r0_hat) {
            out.r0_hat = probe.radius;
            out.argmax = probe;
        }
    }
    return out;
}

double kobayashi_lower_bound(Point zeta1, Point zeta2, double r0) {
    if (!(r0 > 0.0)) throw ConfigError("kobayashi_lower_bound: r0 must be positive");
    return dist(zeta1, zeta2) / r0;
}

} // namespace pluripot
