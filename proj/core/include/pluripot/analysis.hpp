#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pluripot/potentials.hpp"
#include "pluripot/types.hpp"

namespace pluripot {

using ScalarField = std::function<double(const Point&)>;

// 2x2 Hermitian matrix of mixed second derivatives d^2 f / dz_i dz_j-bar,
// estimated by centered differences along complex lines.  The diagonal is
// real by construction; h12 carries the off-diagonal entry.
struct HessianEstimate {
    double h11 = 0.0;
    double h22 = 0.0;
    Cx h12{};
    double step = 0.0;
    int richardson_order = 2; // 2 = plain, 4 = one extrapolation

    double min_eigenvalue() const;
    double max_abs_entry() const;
};

// 17-evaluation polarization stencil (center shared), one optional Richardson
// pass at h/2.  Throws StencilSingularity if any stencil value is nonfinite
// or the field's domain is violated at a stencil point.
HessianEstimate fd_complex_hessian(const ScalarField& f, Point zeta, double h,
                                   bool richardson = true);

// Conservative lower bound for the C^2-distance from (z,w) to the level-n
// branched set: fiber gap shrunk by the sheet Lipschitz constant in z.
double variety_distance_bound(Cx z, Cx w, const PotentialParams& params);

struct LeviResult {
    double min_eig = 0.0;
    double bound = 0.0;   // required curvature at the point
    bool pass = false;
    double dist_bound = 0.0;
    PointClass cls = PointClass::OutsideU;
};

// Verifies the curvature floor of the rescaled potential at one admissible
// point: lambda_min(H(phi_tilde)) >= rho_tilde'(|zeta|^2) - tol.
// Admissible means classified inside U and at distance >= 10 h from the
// branched set.
LeviResult levi_check(Point zeta, const PotentialParams& params,
                      double h = 1e-4, double tol = 1e-2);

// f(zeta0 + r u)/log r minimized over sampled unit directions u, per radius.
// Approximates the normalized pole strength of f at zeta0 as r -> 0.
struct RatioProfile {
    std::vector<double> radii;   // strictly decreasing, in (0,1)
    std::vector<double> ratios;  // per-radius direction minimum
    std::vector<int> errors;     // samples skipped per radius (domain errors)
};

RatioProfile lelong_ratio_profile(const ScalarField& f, Point zeta0,
                                  std::vector<double> radii,
                                  int random_directions = 32,
                                  std::uint64_t seed = 1);

// Axis-aligned box in R^4, coordinates ordered (Re z, Im z, Re w, Im w).
struct Box4 {
    double lo[4] = {-1.0, -1.0, -1.0, -1.0};
    double hi[4] = {1.0, 1.0, 1.0, 1.0};

    static Box4 cube(double half);
    double volume() const;
    bool valid() const;
};

struct VolumeEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    std::int64_t hits = 0;
    std::int64_t exceptions = 0; // predicate failures, counted as misses
    std::uint64_t seed = 0;
};

// Plain Monte Carlo hit counting with counter-based per-sample draws:
// bit-reproducible for a fixed seed regardless of thread count.
VolumeEstimate mc_volume(const std::function<bool(const Point&)>& pred, const Box4& box,
                         std::int64_t n_samples, std::uint64_t seed, int threads = 1);

// Volumes of {inside the inner domain, rescaled potential <= -a/delta} for a
// decreasing ladder of deltas, all deltas sharing one sample stream so the
// hit counts are exactly nested.
std::vector<VolumeEstimate> sublevel_decay_profile(const Box4& K, double a,
                                                   const std::vector<double>& deltas,
                                                   const PotentialParams& params,
                                                   std::int64_t n_samples, std::uint64_t seed,
                                                   int threads = 1);

} // namespace pluripot
