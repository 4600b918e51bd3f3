#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "pluripot/errors.hpp"
#include "pluripot/potentials.hpp"
#include "pluripot/rng.hpp"

using namespace pluripot;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("potentials") {

TEST_CASE("quadratic confinement profile evaluates c t^2 exactly") {
    const RhoProfile p = RhoProfile::quadratic(2.5);
    const auto e = p.eval(3.0);
    CHECK(e.value == 22.5);
    CHECK(e.derivative == 15.0);
    // Coefficient zero switches the confinement off without a special case.
    const RhoProfile off = RhoProfile::quadratic(0.0);
    CHECK(off.eval(7.0).value == 0.0);
    CHECK(off.eval(7.0).derivative == 0.0);
    CHECK_THROWS_AS(RhoProfile::quadratic(-1.0), ConfigError);
    CHECK_THROWS_AS(p.eval(-0.5), ConfigError);
}

TEST_CASE("exponential confinement profile") {
    const RhoProfile p = RhoProfile::exponential(2.0);
    CHECK(p.eval(0.0).value == 0.0);
    CHECK(p.eval(1.0).value == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-15));
    CHECK(p.eval(1.0).derivative == doctest::Approx(2.0 * std::exp(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(RhoProfile::exponential(0.0), ConfigError);
}

TEST_CASE("table profile interpolates and extends affinely") {
    const RhoProfile p = RhoProfile::table({0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
    CHECK(p.eval(0.5).value == doctest::Approx(0.5));
    CHECK(p.eval(1.5).value == doctest::Approx(2.0));
    CHECK(p.eval(1.5).derivative == doctest::Approx(2.0));
    // Beyond the last sample the final slope continues.
    CHECK(p.eval(4.0).value == doctest::Approx(3.0 + 2.0 * 2.0));
}

TEST_CASE("table profile validates shape") {
    CHECK_THROWS_AS(RhoProfile::table({0.0}, {0.0}), ConfigError);
    CHECK_THROWS_AS(RhoProfile::table({0.5, 1.0}, {0.0, 1.0}), ConfigError);   // t0 != 0
    CHECK_THROWS_AS(RhoProfile::table({0.0, 0.0}, {0.0, 1.0}), ConfigError);   // flat ts
    CHECK_THROWS_AS(RhoProfile::table({0.0, 1.0}, {1.0, 0.0}), ConfigError);   // decreasing
    // Concave table: slopes 2 then 1.
    CHECK_THROWS_AS(RhoProfile::table({0.0, 1.0, 2.0}, {0.0, 2.0, 3.0}), ConfigError);
}

TEST_CASE("rescaling weight is the identity below the blend point") {
    const RhoTildeProfile p{1.0, 1.0};
    for (double t : {0.0, 0.25, 0.6, 1.0}) {
        const auto e = p.eval(t);
        CHECK(e.value == t);
        CHECK(e.d1 == 1.0);
        CHECK(e.d2 == 0.0);
    }
}

TEST_CASE("rescaling weight grows smoothly and superlinearly beyond the blend") {
    const RhoTildeProfile p{1.0, 1.0};
    // Independent recomputation of t + (t-t0)^3 exp(-1/(t-t0)).
    for (double t : {1.5, 2.0, 4.0}) {
        const double s = t - 1.0;
        const double expect = t + s * s * s * std::exp(-1.0 / s);
        CHECK(p.eval(t).value == doctest::Approx(expect).epsilon(1e-14));
    }
    // Reported derivatives must match finite differences of the value.
    const double h = 1e-6;
    for (double t : {1.3, 2.7, 5.0}) {
        const double d1_fd = (p.eval(t + h).value - p.eval(t - h).value) / (2.0 * h);
        const double d2_fd =
            (p.eval(t + h).value - 2.0 * p.eval(t).value + p.eval(t - h).value) / (h * h);
        CHECK(p.eval(t).d1 == doctest::Approx(d1_fd).epsilon(1e-6));
        CHECK(p.eval(t).d2 == doctest::Approx(d2_fd).epsilon(1e-3));
    }
    // Convex, with the slope eventually leaving every linear bound behind.
    CHECK(p.eval(2.0).d2 > 0.0);
    CHECK(p.eval(11.0).d1 > 100.0);
    CHECK_THROWS_AS(p.eval(-1.0), ConfigError);
    CHECK_THROWS_AS((RhoTildeProfile{0.0, 1.0}.eval(1.0)), ConfigError);
    CHECK_THROWS_AS((RhoTildeProfile{1.0, -1.0}.eval(1.0)), ConfigError);
}

TEST_CASE("composite potential is the branch potential plus confinement") {
    PotentialParams params;
    const CounterRng rng(7);
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Cx z(rng.uniform(i, 0, -2.0, 2.0), rng.uniform(i, 1, -2.0, 2.0));
        const Cx w(rng.uniform(i, 2, -2.0, 2.0), rng.uniform(i, 3, -2.0, 2.0));
        const double base = phi_n(z, w, params.level, params.sched);
        if (!std::isfinite(base)) continue;
        const double expect = base + params.rho.eval(std::abs(z.real())).value +
                              params.rho.eval(std::abs(z.imag())).value;
        CHECK(phi_total(z, w, params) == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("rescaled potential composes through the shared helper") {
    PotentialParams params;
    const Cx z(0.02, -0.01), w(0.05, 0.04);
    const double pt = phi_total(z, w, params);
    REQUIRE(pt < 0.0);
    CHECK(phi_tilde(z, w, params) ==
          phi_tilde_from(pt, std::norm(z) + std::norm(w), params.rho_tilde));
}

TEST_CASE("rescaled potential formula on synthetic inputs") {
    const RhoTildeProfile p{1.0, 1.0};
    // phi_total = -e^2 gives -log(e^2) = -2; norm below the blend adds itself.
    CHECK(phi_tilde_from(-std::exp(2.0), 0.5, p) ==
          doctest::Approx(-1.5).epsilon(1e-15));
    CHECK(phi_tilde_from(-kInf, 0.5, p) == -kInf);
    CHECK_THROWS_AS(phi_tilde_from(0.0, 0.5, p), OutsideDomain);
    CHECK_THROWS_AS(phi_tilde_from(1.7, 0.5, p), OutsideDomain);
}

TEST_CASE("rescaled potential rejects points where the base is nonnegative") {
    PotentialParams params;
    // Far off the branched set every root factor exceeds 1, so the base
    // potential is positive and the rescaling is undefined.
    CHECK_THROWS_AS(phi_tilde(Cx(0.3, 0.2), Cx(50.0, 0.0), params), OutsideDomain);
}

TEST_CASE("classification at frozen probe points") {
    PotentialParams params;
    // Both points were found by seeded search over the small pocket where the
    // inner domain lives, then frozen; the classifier must keep agreeing.
    const Cx za(-0.0099735244652782717, -0.02546049025329146);
    const Cx wa(0.040255353266103244, -0.045081820912793627);
    CHECK(classify_point(za, wa, params) == PointClass::InA);

    const Cx zu(0.043299655216000918, 0.035552014182467256);
    const Cx wu(0.072381729446740567, -0.072570875265687354);
    CHECK(classify_point(zu, wu, params) == PointClass::InU_NotA);

    // Far away the confinement dominates and the point is outside U.
    CHECK(classify_point(Cx(5.0, 5.0), Cx(9.0, 0.0), params) == PointClass::OutsideU);
}

TEST_CASE("classification is consistent with the potentials it summarizes") {
    PotentialParams params;
    const CounterRng rng(9);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Cx z(rng.uniform(i, 0, -0.05, 0.05), rng.uniform(i, 1, -0.05, 0.05));
        const Cx w(rng.uniform(i, 2, -0.1, 0.1), rng.uniform(i, 3, -0.1, 0.1));
        const double pt = phi_total(z, w, params);
        const PointClass c = classify_point(z, w, params);
        if (pt == -kInf) {
            CHECK(c == PointClass::OnVariety);
        } else if (pt >= params.t_u) {
            CHECK(c == PointClass::OutsideU);
        } else {
            const double til =
                phi_tilde_from(pt, std::norm(z) + std::norm(w), params.rho_tilde);
            CHECK(c == (til < params.t_a ? PointClass::InA : PointClass::InU_NotA));
        }
    }
}

TEST_CASE("class names for reporting") {
    CHECK(std::string(to_string(PointClass::OnVariety)) == "OnVariety");
    CHECK(std::string(to_string(PointClass::OutsideU)) == "OutsideU");
    CHECK(std::string(to_string(PointClass::InU_NotA)) == "InU_NotA");
    CHECK(std::string(to_string(PointClass::InA)) == "InA");
}

} // TEST_SUITE
