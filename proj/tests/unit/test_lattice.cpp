#include <doctest.h>

#include <cmath>
#include <set>
#include <utility>

#include "pluripot/errors.hpp"
#include "pluripot/lattice.hpp"

using namespace pluripot;

TEST_SUITE("lattice") {

TEST_CASE("spiral enumeration starts 0, 1, 1+i, i, -1+i, -1, -1-i, -i, 1-i, 2-i, 2") {
    // Hand-transcribed counterclockwise square spiral, nothing computed.
    const GaussPoint expected[11] = {
        {0, 0},  {1, 0},  {1, 1},  {0, 1},  {-1, 1}, {-1, 0},
        {-1, -1}, {0, -1}, {1, -1}, {2, -1}, {2, 0},
    };
    for (int k = 0; k < 11; ++k) CHECK(gauss_point(k + 1) == expected[k]);
}

TEST_CASE("spiral ring boundaries") {
    // Ring r occupies indices (2r-1)^2+1 .. (2r+1)^2; the corners below were
    // worked out by hand, walking the ring counterclockwise.
    CHECK(gauss_point(9) == GaussPoint{1, -1});   // last of ring 1
    CHECK(gauss_point(10) == GaussPoint{2, -1});  // first of ring 2
    CHECK(gauss_point(13) == GaussPoint{2, 2});   // ring-2 top-right corner
    CHECK(gauss_point(25) == GaussPoint{2, -2});  // last of ring 2
    CHECK(gauss_point(26) == GaussPoint{3, -2});  // first of ring 3
    CHECK(gauss_point(49) == GaussPoint{3, -3});  // last of ring 3
    for (std::int64_t r = 1; r <= 40; ++r)
        CHECK(gauss_point((2 * r - 1) * (2 * r - 1) + 1) == GaussPoint{r, -r + 1});
}

TEST_CASE("spiral is injective and fills rings exactly") {
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (std::int64_t k = 1; k <= 5000; ++k) {
        const GaussPoint p = gauss_point(k);
        CHECK(seen.emplace(p.re, p.im).second);
        // Every index inside ring r has Chebyshev norm exactly r.
        std::int64_t r = 0;
        while ((2 * r + 1) * (2 * r + 1) < k) ++r;
        CHECK(std::max(std::abs(p.re), std::abs(p.im)) == r);
    }
}

TEST_CASE("spiral rejects nonpositive indices") {
    CHECK_THROWS_AS(gauss_point(0), ConfigError);
    CHECK_THROWS_AS(gauss_point(-4), ConfigError);
}

TEST_CASE("pole is the spiral point as a complex double") {
    CHECK(pole(5) == Cx(-1.0, 1.0));
    CHECK(pole(10) == Cx(2.0, -1.0));
}

TEST_CASE("exponential schedule values") {
    const EpsilonSchedule s = EpsilonSchedule::exponential();
    // exp(-k^2) for k = 1, 2, 3, frozen to their shortest round-trip decimals.
    CHECK(s.epsilon(1) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(s.epsilon(2) == doctest::Approx(0.018315638888734179).epsilon(1e-15));
    CHECK(s.epsilon(3) == doctest::Approx(0.00012340980408667956).epsilon(1e-15));
    // Strict decrease holds while the values stay representable; exp(-k^2)
    // leaves the subnormal range near k = 27 and flushes to exactly zero.
    for (int k = 1; k < 27; ++k) CHECK(s.epsilon(k + 1) < s.epsilon(k));
    CHECK(s.epsilon(28) == 0.0);
    CHECK(s.epsilon(1) > 0.0);
    CHECK_THROWS_AS(s.epsilon(0), ConfigError);
}

TEST_CASE("exponential schedule validates the rate") {
    CHECK_THROWS_AS(EpsilonSchedule::exponential(0.0), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::exponential(-2.0), ConfigError);
}

TEST_CASE("custom schedule continues the head geometrically") {
    // head {1/2, 1/4} with ratio 1/2 is exactly 2^{-k} at every index,
    // because powers of one half are exact in binary.
    const EpsilonSchedule s = EpsilonSchedule::custom({0.5, 0.25}, 0.5);
    CHECK(s.epsilon(1) == 0.5);
    CHECK(s.epsilon(2) == 0.25);
    CHECK(s.epsilon(5) == 0.03125);
    CHECK(s.epsilon(10) == std::pow(2.0, -10));
}

TEST_CASE("custom schedule rejects malformed weights") {
    CHECK_THROWS_AS(EpsilonSchedule::custom({}, 0.5), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5, 0.0}, 0.5), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5, -0.1}, 0.5), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.25, 0.5}, 0.5), ConfigError);  // increasing
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5, 0.5}, 0.5), ConfigError);   // flat
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5}, 0.0), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5}, 1.0), ConfigError);
    CHECK_THROWS_AS(EpsilonSchedule::custom({0.5}, 1.5), ConfigError);
}

TEST_CASE("schedules describe themselves") {
    CHECK(EpsilonSchedule::exponential().describe() == "exp(-1*k^2)");
    CHECK(EpsilonSchedule::custom({0.5}, 0.25).describe().find("ratio=0.25") !=
          std::string::npos);
}

TEST_CASE("tail displacement bound brackets its own leading term") {
    const EpsilonSchedule s = EpsilonSchedule::exponential();
    for (std::int64_t m : {3, 5, 8}) {
        const double lead =
            s.epsilon(m) * std::sqrt(2.0 + std::abs(pole(m)));
        const double bound = tail_delta_bound(m, 2.0, s);
        CHECK(bound >= lead);
        // For exp(-k^2) decay the first dropped term dominates the whole tail.
        CHECK(bound <= 1.05 * lead);
    }
}

TEST_CASE("tail displacement bound is monotone in window start and radius") {
    const EpsilonSchedule s = EpsilonSchedule::exponential();
    double prev = tail_delta_bound(1, 1.0, s);
    for (std::int64_t m = 2; m <= 10; ++m) {
        const double cur = tail_delta_bound(m, 1.0, s);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(tail_delta_bound(4, 8.0, s) >= tail_delta_bound(4, 1.0, s));
}

TEST_CASE("tail displacement bound rejects bad arguments and slow tails") {
    const EpsilonSchedule s = EpsilonSchedule::exponential();
    CHECK_THROWS_AS(tail_delta_bound(0, 1.0, s), ConfigError);
    CHECK_THROWS_AS(tail_delta_bound(1, 0.0, s), ConfigError);
    // ratio 0.99 needs ~70k terms to fall below the floor; a 1000-term budget
    // must fail loudly instead of returning a truncated sum.
    const EpsilonSchedule slow = EpsilonSchedule::custom({1.0}, 0.99);
    CHECK_THROWS_AS(tail_delta_bound(1, 1.0, slow, 1e-300, 1000), DivergentTail);
}

} // TEST_SUITE
