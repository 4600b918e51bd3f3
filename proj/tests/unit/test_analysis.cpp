#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "pluripot/analysis.hpp"
#include "pluripot/errors.hpp"
#include "pluripot/potentials.hpp"
#include "pluripot/rng.hpp"
#include "pluripot/wermer.hpp"

using namespace pluripot;

TEST_SUITE("analysis") {

TEST_CASE("complex hessian of the squared norm is the identity") {
    const ScalarField f = [](const Point& p) { return norm2(p); };
    const HessianEstimate H = fd_complex_hessian(f, {Cx(0.3, -0.2), Cx(0.1, 0.4)}, 1e-4);
    CHECK(H.h11 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(H.h22 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(H.h12) < 1e-7); // mixed entry: two subtractions of noise floor
    CHECK(H.richardson_order == 4);
}

TEST_CASE("complex hessian weights the coordinates it is told to") {
    const ScalarField f = [](const Point& p) {
        return std::norm(p.z) + 2.0 * std::norm(p.w);
    };
    const HessianEstimate H = fd_complex_hessian(f, {Cx(0.5, 0.1), Cx(-0.3, 0.2)}, 1e-4);
    CHECK(H.h11 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(H.h22 == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(H.min_eigenvalue() == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("complex hessian vanishes on pluriharmonic fields") {
    // Re(z^2 + 3 z w) is the real part of a holomorphic function, so every
    // mixed second derivative must cancel.
    const ScalarField f = [](const Point& p) {
        return (p.z * p.z + 3.0 * p.z * p.w).real();
    };
    const HessianEstimate H = fd_complex_hessian(f, {Cx(0.7, 0.3), Cx(-0.4, 0.5)}, 1e-4);
    CHECK(std::abs(H.h11) < 1e-7);
    CHECK(std::abs(H.h22) < 1e-7);
    CHECK(std::abs(H.h12) < 1e-7);
}

TEST_CASE("complex hessian resolves off-diagonal coupling") {
    // f = Re(z conj(w)) has d^2 f / dz dwbar = 1/2, purely off-diagonal.
    const ScalarField f = [](const Point& p) {
        return (p.z * std::conj(p.w)).real();
    };
    const HessianEstimate H = fd_complex_hessian(f, {Cx(0.2, 0.6), Cx(0.4, -0.1)}, 1e-4);
    CHECK(std::abs(H.h11) < 1e-8);
    CHECK(std::abs(H.h22) < 1e-8);
    CHECK(H.h12.real() == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(std::abs(H.h12.imag()) < 1e-8);
}

TEST_CASE("richardson extrapolation beats the plain stencil") {
    // |z|^4 has curvature 4|z|^2 with a nontrivial fourth derivative, so the
    // h^2 error term is visible at coarse steps.
    const Point at{Cx(0.8, 0.0), Cx(0.0, 0.0)};
    const double exact = 4.0 * std::norm(at.z);
    const ScalarField f = [](const Point& p) {
        return std::norm(p.z) * std::norm(p.z);
    };
    const double plain = std::abs(fd_complex_hessian(f, at, 1e-2, false).h11 - exact);
    const double extrap = std::abs(fd_complex_hessian(f, at, 1e-2, true).h11 - exact);
    CHECK(extrap < 0.05 * plain);
    // Halving the step cuts the plain error by about four.
    const double plain_half = std::abs(fd_complex_hessian(f, at, 5e-3, false).h11 - exact);
    CHECK(plain_half < 0.3 * plain);
}

TEST_CASE("stencil failures surface as stencil errors") {
    const ScalarField throws_right = [](const Point& p) -> double {
        if (p.z.real() > 0.10005) throw OutsideDomain("field domain edge");
        return norm2(p);
    };
    CHECK_THROWS_AS(fd_complex_hessian(throws_right, {Cx(0.1, 0.0), Cx(0.0, 0.0)}, 1e-3),
                    StencilSingularity);
    const ScalarField goes_nan = [](const Point& p) {
        return p.z.real() > 0.10005 ? std::nan("") : 1.0;
    };
    CHECK_THROWS_AS(fd_complex_hessian(goes_nan, {Cx(0.1, 0.0), Cx(0.0, 0.0)}, 1e-3),
                    StencilSingularity);
    const ScalarField fine = [](const Point& p) { return norm2(p); };
    CHECK_THROWS_AS(fd_complex_hessian(fine, {Cx(0.0, 0.0), Cx(0.0, 0.0)}, 0.0),
                    ConfigError);
}

TEST_CASE("eigenvalue helpers on a synthetic hermitian matrix") {
    // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
    HessianEstimate H;
    H.h11 = 2.0;
    H.h22 = 2.0;
    H.h12 = Cx(0.0, 1.0);
    CHECK(H.min_eigenvalue() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(H.max_abs_entry() == 2.0);
}

TEST_CASE("variety distance bound is a genuine lower bound") {
    PotentialParams params;
    const CounterRng rng(13);
    for (std::uint64_t i = 0; i < 30; ++i) {
        const Cx z(rng.uniform(i, 0, -1.5, 1.5), rng.uniform(i, 1, -1.5, 1.5));
        const Cx w(rng.uniform(i, 2, -1.0, 1.0), rng.uniform(i, 3, -1.0, 1.0));
        const double bound = variety_distance_bound(z, w, params);
        CHECK(bound >= 0.0);
        // The fiber gap over the same z upper-bounds the distance to the set,
        // so the reported bound can never exceed it.
        const SliceSet s = slice_points(z, params.level, params.sched);
        double fiber = std::numeric_limits<double>::infinity();
        for (const Cx& r : s.points) fiber = std::min(fiber, std::abs(w - r));
        CHECK(bound <= fiber + 1e-15);
    }
    // On a stored root the fiber gap is zero, and so is the bound.
    const Cx z0(0.31, 0.17);
    const Cx w0 = sheet_value(z0, SheetLabel{0, 6}, params.sched);
    CHECK(variety_distance_bound(z0, w0, params) == 0.0);
}

TEST_CASE("levi check at a frozen admissible point") {
    PotentialParams params;
    const Point zeta{Cx(-0.0099735244652782717, -0.02546049025329146),
                     Cx(0.040255353266103244, -0.045081820912793627)};
    const LeviResult r = levi_check(zeta, params, 1e-4, 1e-2);
    CHECK(r.cls == PointClass::InA);
    CHECK(r.pass);
    CHECK(r.bound == doctest::Approx(1.0).epsilon(1e-12)); // norm below the blend point
    CHECK(r.min_eig >= r.bound - 1e-2);
    CHECK(r.dist_bound > 1e-3);
}

TEST_CASE("levi check refuses unusable points") {
    PotentialParams params;
    // Outside U entirely.
    CHECK_THROWS_AS(levi_check({Cx(5.0, 5.0), Cx(9.0, 0.0)}, params, 1e-4, 1e-2),
                    OutsideDomain);
    // Exactly on a stored root: distance bound zero, stencil would straddle
    // the set.
    const Cx z0(0.02, -0.01);
    const Cx w0 = sheet_value(z0, SheetLabel{0, 6}, params.sched);
    CHECK_THROWS_AS(levi_check({z0, w0}, params, 1e-4, 1e-2), TooCloseToVariety);
}

TEST_CASE("pole-strength ratios of a pure logarithmic pole are one") {
    // f = log distance-to-zeta0 has strength exactly 1 at zeta0 from every
    // direction, which calibrates the ratio probe end to end.
    const Point zeta0{Cx(0.3, 0.1), Cx(0.2, -0.4)};
    const ScalarField f = [zeta0](const Point& p) { return std::log(dist(p, zeta0)); };
    const RatioProfile prof = lelong_ratio_profile(f, zeta0, {1e-3, 1e-5}, 16, 2);
    REQUIRE(prof.ratios.size() == 2);
    CHECK(prof.ratios[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(prof.ratios[1] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(prof.errors[0] == 0);
    CHECK(prof.errors[1] == 0);
}

TEST_CASE("ratio probe scales linearly with pole strength") {
    const Point zeta0{Cx(-0.2, 0.5), Cx(0.0, 0.0)};
    const ScalarField f = [zeta0](const Point& p) { return 3.0 * std::log(dist(p, zeta0)); };
    const RatioProfile prof = lelong_ratio_profile(f, zeta0, {1e-4}, 8, 3);
    CHECK(prof.ratios[0] == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("ratio probe validates its radii") {
    const ScalarField f = [](const Point& p) { return norm2(p); };
    CHECK_THROWS_AS(lelong_ratio_profile(f, {}, {}, 4, 1), ConfigError);
    CHECK_THROWS_AS(lelong_ratio_profile(f, {}, {0.5, 0.5}, 4, 1), ConfigError);
    CHECK_THROWS_AS(lelong_ratio_profile(f, {}, {0.5, 0.7}, 4, 1), ConfigError);
    CHECK_THROWS_AS(lelong_ratio_profile(f, {}, {1.5}, 4, 1), ConfigError);
    CHECK_THROWS_AS(lelong_ratio_profile(f, {}, {0.5}, -1, 1), ConfigError);
}

TEST_CASE("box geometry") {
    const Box4 b = Box4::cube(2.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(b.lo[i] == -2.0);
        CHECK(b.hi[i] == 2.0);
    }
    CHECK(b.volume() == 256.0);
    CHECK(b.valid());
    Box4 bad = b;
    bad.hi[2] = bad.lo[2];
    CHECK_FALSE(bad.valid());
}

TEST_CASE("monte carlo volume recovers the unit 4-ball") {
    // Vol(B^4) = pi^2/2, the classical closed form; 2e5 samples keep the test
    // fast while the 5-sigma band keeps it deterministic-in-practice.
    const auto in_ball = [](const Point& p) { return norm2(p) <= 1.0; };
    const VolumeEstimate est = mc_volume(in_ball, Box4::cube(1.0), 200000, 1);
    const double exact = 4.9348022005446793;
    CHECK(std::abs(est.value - exact) <= 5.0 * est.stderr_);
    CHECK(est.exceptions == 0);
    CHECK(est.hits > 0);
    CHECK(est.samples == 200000);
    // stderr follows the binomial formula on the reported hit count.
    const double p = static_cast<double>(est.hits) / 200000.0;
    CHECK(est.stderr_ ==
          doctest::Approx(16.0 * std::sqrt(p * (1.0 - p) / 200000.0)).epsilon(1e-12));
}

TEST_CASE("monte carlo volume is reproducible and thread-count invariant") {
    const auto in_ball = [](const Point& p) { return norm2(p) <= 1.0; };
    const VolumeEstimate a = mc_volume(in_ball, Box4::cube(1.0), 50000, 17, 1);
    const VolumeEstimate b = mc_volume(in_ball, Box4::cube(1.0), 50000, 17, 1);
    const VolumeEstimate c = mc_volume(in_ball, Box4::cube(1.0), 50000, 17, 4);
    CHECK(a.value == b.value);
    CHECK(a.hits == b.hits);
    CHECK(a.value == c.value);
    CHECK(a.hits == c.hits);
    // A different seed must actually change the draw.
    const VolumeEstimate d = mc_volume(in_ball, Box4::cube(1.0), 50000, 18, 1);
    CHECK(d.hits != a.hits);
}

TEST_CASE("monte carlo volume counts predicate failures as misses") {
    const auto throwing = [](const Point& p) -> bool {
        if (p.z.real() > 0.0) throw OutsideDomain("right half fails");
        return true;
    };
    const auto quiet = [](const Point& p) -> bool { return p.z.real() <= 0.0; };
    const VolumeEstimate t = mc_volume(throwing, Box4::cube(1.0), 20000, 5);
    const VolumeEstimate q = mc_volume(quiet, Box4::cube(1.0), 20000, 5);
    CHECK(t.hits == q.hits);
    CHECK(t.exceptions + t.hits == 20000);
    CHECK(q.exceptions == 0);
}

TEST_CASE("monte carlo volume validates inputs") {
    const auto yes = [](const Point&) { return true; };
    CHECK_THROWS_AS(mc_volume(yes, Box4::cube(1.0), 0, 1), ConfigError);
    Box4 bad = Box4::cube(1.0);
    bad.hi[0] = bad.lo[0];
    CHECK_THROWS_AS(mc_volume(yes, bad, 100, 1), ConfigError);
}

TEST_CASE("sublevel ladder counts are nested and match standalone estimates") {
    PotentialParams params;
    const Box4 pocket{{-0.05, -0.05, -0.1, -0.1}, {0.05, 0.05, 0.1, 0.1}};
    const double a = 0.5;
    const std::vector<double> deltas{1.0, 0.5};
    const auto ladder = sublevel_decay_profile(pocket, a, deltas, params, 20000, 3);
    REQUIRE(ladder.size() == 2);
    CHECK(ladder[0].hits >= ladder[1].hits);

    // Dual route: each rung must equal the plain volume of its explicit
    // predicate under the same seed, because the sample streams coincide.
    for (std::size_t j = 0; j < deltas.size(); ++j) {
        const double threshold = -a / deltas[j];
        const auto pred = [&](const Point& p) {
            if (classify_point(p.z, p.w, params) != PointClass::InA) return false;
            return phi_tilde(p.z, p.w, params) <= threshold;
        };
        const VolumeEstimate direct = mc_volume(pred, pocket, 20000, 3);
        CHECK(ladder[j].hits == direct.hits);
        CHECK(ladder[j].value == direct.value);
    }
}

TEST_CASE("sublevel ladder validates its inputs") {
    PotentialParams params;
    const Box4 box = Box4::cube(1.0);
    CHECK_THROWS_AS(sublevel_decay_profile(box, 0.0, {1.0}, params, 10, 1), ConfigError);
    CHECK_THROWS_AS(sublevel_decay_profile(box, 1.0, {}, params, 10, 1), ConfigError);
    CHECK_THROWS_AS(sublevel_decay_profile(box, 1.0, {1.0, 1.0}, params, 10, 1),
                    ConfigError);
    CHECK_THROWS_AS(sublevel_decay_profile(box, 1.0, {0.5, 1.0}, params, 10, 1),
                    ConfigError);
    CHECK_THROWS_AS(sublevel_decay_profile(box, 1.0, {1.0, -0.5}, params, 10, 1),
                    ConfigError);
}

} // TEST_SUITE
