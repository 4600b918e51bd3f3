#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pluripot/types.hpp"

namespace pluripot {

// Exact Gaussian integer, kept as integer pair so callers can test
// enumeration results without rounding concerns.
struct GaussPoint {
    std::int64_t re = 0;
    std::int64_t im = 0;

    Cx to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    bool operator==(const GaussPoint&) const = default;
};

// n-th element (n >= 1) of the counterclockwise square spiral enumeration of
// Z+iZ: 0, 1, 1+i, i, -1+i, -1, -1-i, -i, 1-i, 2-i, 2, ...
// Ring r >= 1 covers indices (2r-1)^2+1 .. (2r+1)^2 and starts at (r, -r+1).
GaussPoint gauss_point(std::int64_t n);

// Same point as a complex double; the workhorse form used by the branch sums.
Cx pole(std::int64_t n);

// Weight sequence eps_1 > eps_2 > ... > 0 attached to the branch terms.
// Construction validates positivity, strict decrease and summability of
// sum_k eps_k sqrt(k); schedules failing any check cannot be built.
class EpsilonSchedule {
public:
    // eps_k = exp(-lambda k^2), lambda > 0.  The default (lambda = 1) keeps
    // the dynamic range of doubles usable through k ~ 26.
    static EpsilonSchedule exponential(double lambda = 1.0);

    // Explicit head values continued by a geometric tail:
    // eps_k = head.back() * ratio^(k - head.size()) for k > head.size().
    static EpsilonSchedule custom(std::vector<double> head, double tail_ratio);

    double epsilon(std::int64_t k) const; // k >= 1

    // Human-readable rule, echoed in reports and config dumps.
    const std::string& describe() const { return desc_; }

private:
    EpsilonSchedule() = default;

    bool exponential_ = true;
    double lambda_ = 1.0;
    std::vector<double> head_;
    double ratio_ = 0.0;
    std::string desc_;
};

// Upper bound for the fiber displacement caused by dropping every branch term
// of index >= m, uniformly over the disk |z| <= R:
//
//     sum_{k >= m} eps_k sqrt(R + |a_k|)
//
// summed until terms fall below `floor`.  Nonincreasing in m, nondecreasing
// in R.  Throws DivergentTail when the partial sums have not settled within
// the iteration budget.
double tail_delta_bound(std::int64_t m, double R, const EpsilonSchedule& sched,
                        double floor = 1e-300, std::int64_t budget = 10'000'000);

} // namespace pluripot
