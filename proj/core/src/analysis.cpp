#include "pluripot/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <thread>

#include "pluripot/errors.hpp"
#include "pluripot/rng.hpp"
#include "pluripot/wermer.hpp"

namespace pluripot {

namespace {

const double kNegInf = -std::numeric_limits<double>::infinity();

// Field value with every failure mode folded into StencilSingularity, so the
// Hessian either comes back fully finite or not at all.
double probe(const ScalarField& f, const Point& p) {
    double v;
    try {
        v = f(p);
    } catch (const Error& e) {
        throw StencilSingularity(std::string("stencil point failed: ") + e.what());
    }
    if (!std::isfinite(v)) throw StencilSingularity("stencil point is not finite");
    return v;
}

struct Direction {
    Cx dz, dw;
};

// Laplacian of f along the complex line zeta + tau*v, tau in C, divided by 4:
// the Hermitian form of f applied to (v, v).
double line_form(const ScalarField& f, const Point& zeta, double fc,
                 const Direction& v, double h) {
    const auto at = [&](Cx tau) {
        return probe(f, Point{zeta.z + tau * v.dz, zeta.w + tau * v.dw});
    };
    const Cx i{0.0, 1.0};
    const double sum = at(Cx{h, 0.0}) + at(Cx{-h, 0.0}) + at(i * h) + at(-i * h);
    return (sum - 4.0 * fc) / (4.0 * h * h);
}

HessianEstimate hessian_once(const ScalarField& f, const Point& zeta, double fc, double h) {
    const Direction e1{Cx{1.0, 0.0}, Cx{0.0, 0.0}};
    const Direction e2{Cx{0.0, 0.0}, Cx{1.0, 0.0}};
    const Direction mix{Cx{1.0, 0.0}, Cx{1.0, 0.0}};
    const Direction mixi{Cx{1.0, 0.0}, Cx{0.0, 1.0}};

    HessianEstimate out;
    out.step = h;
    out.richardson_order = 2;
    out.h11 = line_form(f, zeta, fc, e1, h);
    out.h22 = line_form(f, zeta, fc, e2, h);
    // Polarization: form(e1+e2) = h11 + h22 + 2 Re h12,
    //               form(e1+i e2) = h11 + h22 - 2 Im h12.
    const double d = line_form(f, zeta, fc, mix, h);
    const double di = line_form(f, zeta, fc, mixi, h);
    out.h12 = Cx{(d - out.h11 - out.h22) / 2.0, -(di - out.h11 - out.h22) / 2.0};
    return out;
}

} // namespace

double HessianEstimate::min_eigenvalue() const {
    const double mid = 0.5 * (h11 + h22);
    return mid - std::hypot(0.5 * (h11 - h22), std::abs(h12));
}

double HessianEstimate::max_abs_entry() const {
    return std::max({std::abs(h11), std::abs(h22), std::abs(h12)});
}

HessianEstimate fd_complex_hessian(const ScalarField& f, Point zeta, double h, bool richardson) {
    if (!(h > 0.0)) throw ConfigError("fd_complex_hessian: step must be positive");
    const double fc = probe(f, zeta);
    HessianEstimate coarse = hessian_once(f, zeta, fc, h);
    if (!richardson) return coarse;

    const HessianEstimate fine = hessian_once(f, zeta, fc, h / 2.0);
    HessianEstimate out;
    out.step = h;
    out.richardson_order = 4;
    out.h11 = (4.0 * fine.h11 - coarse.h11) / 3.0;
    out.h22 = (4.0 * fine.h22 - coarse.h22) / 3.0;
    out.h12 = (4.0 * fine.h12 - coarse.h12) / 3.0;
    return out;
}

double variety_distance_bound(Cx z, Cx w, const PotentialParams& params) {
    const SliceSet s = slice_points(z, params.level, params.sched, params.max_level);
    double fiber = std::numeric_limits<double>::infinity();
    for (const Cx& r : s.points) fiber = std::min(fiber, std::abs(w - r));

    // Sheets move at rate |sum sigma_k eps_k / (2 s_k)| <= G in z, so a fiber
    // gap v guarantees C^2 distance at least v / sqrt(1 + G^2).
    double G = 0.0;
    for (std::int64_t k = 1; k <= params.level; ++k)
        G += params.sched.epsilon(k) / (2.0 * std::abs(sqrt_branch(z, k)));
    return fiber / std::sqrt(1.0 + G * G);
}

LeviResult levi_check(Point zeta, const PotentialParams& params, double h, double tol) {
    LeviResult res;
    res.cls = classify_point(zeta.z, zeta.w, params);
    if (res.cls != PointClass::InA && res.cls != PointClass::InU_NotA)
        throw OutsideDomain("levi_check: point is not inside U");

    res.dist_bound = variety_distance_bound(zeta.z, zeta.w, params);
    if (res.dist_bound < 10.0 * h)
        throw TooCloseToVariety("levi_check: stencil too close to the branched set");

    const ScalarField field = [&params](const Point& p) {
        return phi_tilde(p.z, p.w, params);
    };
    const HessianEstimate H = fd_complex_hessian(field, zeta, h, true);
    res.min_eig = H.min_eigenvalue();
    res.bound = params.rho_tilde.eval(norm2(zeta)).d1;
    res.pass = res.min_eig >= res.bound - tol;
    return res;
}

RatioProfile lelong_ratio_profile(const ScalarField& f, Point zeta0,
                                  std::vector<double> radii, int random_directions,
                                  std::uint64_t seed) {
    if (radii.empty()) throw ConfigError("lelong_ratio_profile: need at least one radius");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || !(radii[i] < 1.0))
            throw ConfigError("lelong_ratio_profile: radii must lie in (0,1)");
        if (i > 0 && !(radii[i] < radii[i - 1]))
            throw ConfigError("lelong_ratio_profile: radii must strictly decrease");
    }
    if (random_directions < 0) throw ConfigError("lelong_ratio_profile: bad direction count");

    // Coordinate directions first, then seeded unit vectors on the C^2 sphere.
    std::vector<std::array<Cx, 2>> dirs = {
        {Cx{1, 0}, Cx{0, 0}}, {Cx{0, 1}, Cx{0, 0}}, {Cx{0, 0}, Cx{1, 0}}, {Cx{0, 0}, Cx{0, 1}}};
    CounterRng rng(seed);
    for (int j = 0; j < random_directions; ++j) {
        double g[4];
        for (int d = 0; d < 4; ++d) {
            // Box-Muller from the counter stream; two uniforms per normal.
            const double u1 = rng.uniform(static_cast<std::uint64_t>(j), 2 * d);
            const double u2 = rng.uniform(static_cast<std::uint64_t>(j), 2 * d + 1);
            g[d] = std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(6.283185307179586 * u2);
        }
        const double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
        if (n < 1e-12) { --j; continue; }
        dirs.push_back({Cx{g[0] / n, g[1] / n}, Cx{g[2] / n, g[3] / n}});
    }

    RatioProfile prof;
    prof.radii = std::move(radii);
    prof.ratios.reserve(prof.radii.size());
    prof.errors.assign(prof.radii.size(), 0);
    for (std::size_t ri = 0; ri < prof.radii.size(); ++ri) {
        const double r = prof.radii[ri];
        const double lg = std::log(r);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& u : dirs) {
            double v;
            try {
                v = f(Point{zeta0.z + r * u[0], zeta0.w + r * u[1]});
            } catch (const Error&) {
                ++prof.errors[ri];
                continue;
            }
            if (!std::isfinite(v)) { ++prof.errors[ri]; continue; }
            best = std::min(best, v / lg);
        }
        prof.ratios.push_back(best);
    }
    return prof;
}

Box4 Box4::cube(double half) {
    Box4 b;
    for (int i = 0; i < 4; ++i) {
        b.lo[i] = -half;
        b.hi[i] = half;
    }
    return b;
}

double Box4::volume() const {
    double v = 1.0;
    for (int i = 0; i < 4; ++i) v *= hi[i] - lo[i];
    return v;
}

bool Box4::valid() const {
    for (int i = 0; i < 4; ++i)
        if (!(hi[i] > lo[i]) || !std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
    return true;
}

namespace {

Point sample_point(const CounterRng& rng, const Box4& box, std::int64_t i) {
    double c[4];
    for (int d = 0; d < 4; ++d)
        c[d] = rng.uniform(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(d),
                           box.lo[d], box.hi[d]);
    return {Cx{c[0], c[1]}, Cx{c[2], c[3]}};
}

// Shared driver: count per-sample outcomes over [0,N) with a deterministic
// per-index stream, splitting the index range over threads.  `eval` returns
// a bitmask of satisfied predicates (bit j = j-th counter) or -1 on error.
void run_counting(std::int64_t n_samples, int threads, const Box4& box, std::uint64_t seed,
                  const std::function<int(const Point&)>& eval,
                  std::vector<std::int64_t>& hits_out, std::int64_t& exceptions_out,
                  std::size_t n_counters) {
    const CounterRng rng(seed);
    const int nt = std::max(1, threads);
    std::vector<std::vector<std::int64_t>> hits(static_cast<std::size_t>(nt),
                                                std::vector<std::int64_t>(n_counters, 0));
    std::vector<std::int64_t> exceptions(static_cast<std::size_t>(nt), 0);

    auto worker = [&](int t) {
        const std::int64_t begin = n_samples * t / nt;
        const std::int64_t end = n_samples * (t + 1) / nt;
        auto& local = hits[static_cast<std::size_t>(t)];
        for (std::int64_t i = begin; i < end; ++i) {
            const int mask = eval(sample_point(rng, box, i));
            if (mask < 0) {
                ++exceptions[static_cast<std::size_t>(t)];
                continue;
            }
            for (std::size_t j = 0; j < n_counters; ++j)
                if (mask & (1 << j)) ++local[j];
        }
    };

    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    hits_out.assign(n_counters, 0);
    exceptions_out = 0;
    for (int t = 0; t < nt; ++t) {
        for (std::size_t j = 0; j < n_counters; ++j) hits_out[j] += hits[static_cast<std::size_t>(t)][j];
        exceptions_out += exceptions[static_cast<std::size_t>(t)];
    }
}

VolumeEstimate make_estimate(const Box4& box, std::int64_t hits, std::int64_t n,
                             std::int64_t exceptions, std::uint64_t seed) {
    VolumeEstimate est;
    est.samples = n;
    est.hits = hits;
    est.exceptions = exceptions;
    est.seed = seed;
    const double vol = box.volume();
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    est.value = p * vol;
    est.stderr_ = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return est;
}

} // namespace

VolumeEstimate mc_volume(const std::function<bool(const Point&)>& pred, const Box4& box,
                         std::int64_t n_samples, std::uint64_t seed, int threads) {
    if (n_samples < 1) throw ConfigError("mc_volume: need at least one sample");
    if (!box.valid()) throw ConfigError("mc_volume: degenerate box");

    std::vector<std::int64_t> hits;
    std::int64_t exceptions = 0;
    run_counting(n_samples, threads, box, seed,
                 [&pred](const Point& p) -> int {
                     try {
                         return pred(p) ? 1 : 0;
                     } catch (...) {
                         return -1;
                     }
                 },
                 hits, exceptions, 1);
    return make_estimate(box, hits[0], n_samples, exceptions, seed);
}

std::vector<VolumeEstimate> sublevel_decay_profile(const Box4& K, double a,
                                                   const std::vector<double>& deltas,
                                                   const PotentialParams& params,
                                                   std::int64_t n_samples, std::uint64_t seed,
                                                   int threads) {
    if (!(a > 0.0)) throw ConfigError("sublevel_decay_profile: a must be positive");
    if (deltas.empty() || deltas.size() > 31)
        throw ConfigError("sublevel_decay_profile: need 1..31 deltas");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw ConfigError("sublevel_decay_profile: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw ConfigError("sublevel_decay_profile: deltas must strictly decrease");
    }
    if (n_samples < 1) throw ConfigError("sublevel_decay_profile: need at least one sample");
    if (!K.valid()) throw ConfigError("sublevel_decay_profile: degenerate box");

    std::vector<double> thresholds(deltas.size());
    for (std::size_t j = 0; j < deltas.size(); ++j) thresholds[j] = -a / deltas[j];

    // One field evaluation per sample feeds every threshold, so the counts
    // are nested by construction, not merely within statistical error.
    const auto eval = [&](const Point& p) -> int {
        double ptil;
        try {
            if (classify_point(p.z, p.w, params) != PointClass::InA) return 0;
            ptil = phi_tilde(p.z, p.w, params);
        } catch (const Error&) {
            return -1;
        }
        int mask = 0;
        for (std::size_t j = 0; j < thresholds.size(); ++j)
            if (ptil <= thresholds[j]) mask |= 1 << j;
        return mask;
    };

    std::vector<std::int64_t> hits;
    std::int64_t exceptions = 0;
    run_counting(n_samples, threads, K, seed, eval, hits, exceptions, deltas.size());

    std::vector<VolumeEstimate> out;
    out.reserve(deltas.size());
    for (std::size_t j = 0; j < deltas.size(); ++j)
        out.push_back(make_estimate(K, hits[j], n_samples, exceptions, seed));
    return out;
}

} // namespace pluripot
