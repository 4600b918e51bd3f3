#include "pluripot/greenfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pluripot/errors.hpp"
#include "pluripot/rng.hpp"

namespace pluripot {

namespace {

void check_profile(const CutoffProfile& p) {
    if (!(p.inner > 0.0) || !(p.outer > p.inner))
        throw ConfigError("CutoffProfile: need 0 < inner < outer");
}

} // namespace

double chi_radial(double s, const CutoffProfile& profile) {
    check_profile(profile);
    if (s <= profile.inner) return 1.0;
    if (s >= profile.outer) return 0.0;
    const double y = (s - profile.inner) / (profile.outer - profile.inner);
    const double a = std::exp(-1.0 / y);
    const double b = std::exp(-1.0 / (1.0 - y));
    return b / (a + b);
}

double chi_cutoff(const Point& zeta, const CutoffProfile& profile) {
    return chi_radial(std::sqrt(norm2(zeta)), profile);
}

C1Estimate c1_estimate(const CutoffProfile& profile, int grid_density, double h) {
    check_profile(profile);
    if (grid_density < 2) throw ConfigError("c1_estimate: grid density must be >= 2");
    if (!(h > 0.0)) throw ConfigError("c1_estimate: step must be positive");

    const ScalarField f = [profile](const Point& zeta) {
        const double n2 = norm2(zeta);
        const double chi = chi_radial(std::sqrt(n2), profile);
        if (chi == 0.0) return 0.0;
        return chi * std::log(n2);
    };

    C1Estimate est;
    est.worst_eig = std::numeric_limits<double>::infinity();
    const double s_lo = 0.25;
    const double s_hi = 1.25;
    for (int i = 0; i <= grid_density; ++i) {
        const double s = s_lo + (s_hi - s_lo) * i / grid_density;
        HessianEstimate H;
        try {
            H = fd_complex_hessian(f, {Cx(s, 0.0), Cx(0.0, 0.0)}, h, true);
        } catch (const Error&) {
            ++est.stencil_errors;
            continue;
        }
        const double lam = H.min_eigenvalue();
        if (lam < est.worst_eig) {
            est.worst_eig = lam;
            est.worst_radius = s;
        }
        ++est.grid_points;
    }
    if (est.grid_points == 0)
        throw StencilSingularity("c1_estimate: every grid point failed to evaluate");
    est.value = std::max(0.0, -est.worst_eig) * 1.1;
    return est;
}

double u_delta_k(const Point& zeta, double delta, const Point& zeta_k,
                 const PotentialParams& params, const CutoffProfile& profile) {
    if (!(delta > 0.0)) throw ConfigError("u_delta_k: delta must be positive");
    const double pt = phi_tilde(zeta.z, zeta.w, params);
    const double s = dist(zeta, zeta_k);
    const double chi = chi_radial(s, profile);
    if (chi == 0.0) return delta * pt; // exact: the log term is absent, not tiny
    return delta * pt + chi * std::log(s);
}

PshCertificate psh_certificate(double delta, const Point& zeta_k,
                               const PotentialParams& params, std::int64_t samples,
                               double h, double tol, const PshCertificateOptions& opts,
                               const CutoffProfile& profile) {
    if (!(delta > 0.0)) throw ConfigError("psh_certificate: delta must be positive");
    if (samples < 1) throw ConfigError("psh_certificate: need at least one sample");
    if (!(h > 0.0)) throw ConfigError("psh_certificate: step must be positive");
    if (tol < 0.0) throw ConfigError("psh_certificate: tolerance must be >= 0");
    if (!(opts.ball_radius > 0.0)) throw ConfigError("psh_certificate: bad ball radius");
    if (!opts.sample_box.valid()) throw ConfigError("psh_certificate: degenerate sample box");

    PshCertificate cert;
    cert.c1 = c1_estimate(profile, opts.c1_grid_density, opts.c1_h).value;

    const ScalarField f = [&](const Point& zeta) {
        return u_delta_k(zeta, delta, zeta_k, params, profile);
    };
    const CounterRng rng(opts.seed);
    const Box4& box = opts.sample_box;

    for (std::int64_t i = 0; i < opts.max_draws && cert.samples < samples; ++i) {
        ++cert.draws;
        const Point zeta{Cx(rng.uniform(i, 0, box.lo[0], box.hi[0]),
                            rng.uniform(i, 1, box.lo[1], box.hi[1])),
                         Cx(rng.uniform(i, 2, box.lo[2], box.hi[2]),
                            rng.uniform(i, 3, box.lo[3], box.hi[3]))};
        if (dist(zeta, zeta_k) > opts.ball_radius) continue;
        PointClass cls;
        try {
            cls = classify_point(zeta.z, zeta.w, params);
        } catch (const Error&) {
            continue;
        }
        if (cls != PointClass::InA) continue;

        ++cert.samples;
        const double required =
            delta * params.rho_tilde.eval(norm2(zeta)).d1 - cert.c1 - tol;
        try {
            const HessianEstimate H = fd_complex_hessian(f, zeta, h, true);
            const double lam = H.min_eigenvalue();
            if (lam >= required) {
                ++cert.passes;
            } else if (cert.failures.size() < opts.max_recorded_failures) {
                cert.failures.push_back({zeta, lam, required,
                                         variety_distance_bound(zeta.z, zeta.w, params)});
            }
        } catch (const Error&) {
            ++cert.stencil_errors;
        }
    }
    if (cert.samples < samples)
        throw EmptySet("psh_certificate: found " + std::to_string(cert.samples) + " of " +
                       std::to_string(samples) + " samples within the draw budget");
    cert.pass_fraction = static_cast<double>(cert.passes) / static_cast<double>(cert.samples);
    return cert;
}

} // namespace pluripot
