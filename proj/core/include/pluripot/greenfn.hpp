#pragma once

#include <cstdint>
#include <vector>

#include "pluripot/analysis.hpp"
#include "pluripot/potentials.hpp"
#include "pluripot/types.hpp"

namespace pluripot {

// Radial C-infinity cutoff: 1 inside `inner`, 0 outside `outer`, the
// classical exp(-1/x) blend in between.
struct CutoffProfile {
    double inner = 0.5;
    double outer = 1.0;
};

// The cutoff as a function of the norm s = ||zeta||, and of a point.
double chi_radial(double s, const CutoffProfile& profile = {});
double chi_cutoff(const Point& zeta, const CutoffProfile& profile = {});

// Numeric curvature-floor witness for chi(||zeta||) log||zeta||^2: the most
// negative Hessian eigenvalue over a radial grid of the annulus
// 1/4 <= ||zeta|| <= 1.25, sign-flipped, clamped at zero, padded by 10%.
// The integrand is unitarily invariant, so sweeping points (s, 0) covers the
// whole annulus exactly.
struct C1Estimate {
    double value = 0.0;     // max(0, -worst_eig) * 1.1
    double worst_eig = 0.0; // most negative eigenvalue encountered
    double worst_radius = 0.0;
    int grid_points = 0;    // points that evaluated cleanly
    int stencil_errors = 0; // points skipped (excluded from the max)
};

C1Estimate c1_estimate(const CutoffProfile& profile = {}, int grid_density = 400,
                       double h = 1e-5);

// delta * phi_tilde(zeta) + chi(zeta - zeta_k) log||zeta - zeta_k||.
// Exactly delta * phi_tilde once ||zeta - zeta_k|| clears the cutoff's outer
// radius; -infinity at zeta_k and on the branched set.  Throws OutsideDomain
// where phi_tilde is undefined.
double u_delta_k(const Point& zeta, double delta, const Point& zeta_k,
                 const PotentialParams& params, const CutoffProfile& profile = {});

struct PshFailure {
    Point zeta{};
    double min_eig = 0.0;
    double required = 0.0;
    double dist_bound = 0.0; // distance bound to the branched set, for tracing
};

struct PshCertificateOptions {
    // Rejection-sampling window for "inner domain" draws.  The default covers
    // where the inner domain lives under the default parameter set; widen it
    // when the potential parameters move the domain.
    Box4 sample_box{{-0.05, -0.05, -0.1, -0.1}, {0.05, 0.05, 0.1, 0.1}};
    double ball_radius = 1.0;
    std::int64_t max_draws = 500'000'000;
    std::uint64_t seed = 1;
    int c1_grid_density = 400;
    double c1_h = 1e-5;
    std::size_t max_recorded_failures = 32;
};

struct PshCertificate {
    double pass_fraction = 0.0; // passes / samples
    std::int64_t samples = 0;
    std::int64_t passes = 0;
    std::int64_t stencil_errors = 0;
    std::int64_t draws = 0;
    double c1 = 0.0;
    std::vector<PshFailure> failures; // first max_recorded_failures offenders
};

// Certifies the curvature floor of u_{delta,k} on random points of the
// ball of radius ball_radius around zeta_k intersected with the inner
// domain: at each sample, lambda_min of the finite-difference Hessian must
// reach delta * rho_tilde'(||zeta||^2) - c1 - tol.  Stencil blowups are
// logged and count against the pass fraction.  Throws EmptySet when the
// draw budget runs out before `samples` points are found.
PshCertificate psh_certificate(double delta, const Point& zeta_k,
                               const PotentialParams& params, std::int64_t samples,
                               double h = 1e-4, double tol = 1e-2,
                               const PshCertificateOptions& opts = {},
                               const CutoffProfile& profile = {});

} // namespace pluripot
