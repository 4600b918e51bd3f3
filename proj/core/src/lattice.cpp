#include "pluripot/lattice.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pluripot/errors.hpp"

namespace pluripot {

GaussPoint gauss_point(std::int64_t n) {
    if (n < 1) throw ConfigError("gauss_point: index must be >= 1");
    if (n == 1) return {0, 0};

    // Find the ring: ring r covers (2r-1)^2 + 1 .. (2r+1)^2.
    auto r = static_cast<std::int64_t>((std::sqrt(static_cast<double>(n - 1)) + 1.0) / 2.0);
    while (r > 1 && (2 * r - 1) * (2 * r - 1) >= n) --r;
    while ((2 * r + 1) * (2 * r + 1) < n) ++r;

    std::int64_t idx = n - (2 * r - 1) * (2 * r - 1) - 1; // 0-based within the ring
    const std::int64_t leg = 2 * r;

    if (idx < leg) return {r, -r + 1 + idx};          // up the right edge
    idx -= leg;
    if (idx < leg) return {r - 1 - idx, r};           // left along the top
    idx -= leg;
    if (idx < leg) return {-r, r - 1 - idx};          // down the left edge
    idx -= leg;
    return {-r + 1 + idx, -r};                        // right along the bottom
}

Cx pole(std::int64_t n) { return gauss_point(n).to_complex(); }

EpsilonSchedule EpsilonSchedule::exponential(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("EpsilonSchedule: lambda must be positive");
    EpsilonSchedule s;
    s.exponential_ = true;
    s.lambda_ = lambda;
    std::ostringstream os;
    os << "exp(-" << lambda << "*k^2)";
    s.desc_ = os.str();
    return s;
}

EpsilonSchedule EpsilonSchedule::custom(std::vector<double> head, double tail_ratio) {
    if (head.empty()) throw ConfigError("EpsilonSchedule: custom head must be nonempty");
    for (double v : head)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("EpsilonSchedule: weights must be positive and finite");
    for (std::size_t i = 1; i < head.size(); ++i)
        if (!(head[i] < head[i - 1]))
            throw ConfigError("EpsilonSchedule: weights must be strictly decreasing");
    if (!(tail_ratio > 0.0) || !(tail_ratio < 1.0))
        throw ConfigError("EpsilonSchedule: tail ratio must lie in (0,1)");

    EpsilonSchedule s;
    s.exponential_ = false;
    s.head_ = std::move(head);
    s.ratio_ = tail_ratio;
    std::ostringstream os;
    os << "custom(";
    for (std::size_t i = 0; i < s.head_.size(); ++i) {
        if (i) os << ",";
        os << s.head_[i];
    }
    os << ";ratio=" << tail_ratio << ")";
    s.desc_ = os.str();
    return s;
}

double EpsilonSchedule::epsilon(std::int64_t k) const {
    if (k < 1) throw ConfigError("epsilon: index must be >= 1");
    if (exponential_) {
        const double kd = static_cast<double>(k);
        return std::exp(-lambda_ * kd * kd);
    }
    const auto hn = static_cast<std::int64_t>(head_.size());
    if (k <= hn) return head_[static_cast<std::size_t>(k - 1)];
    return head_.back() * std::pow(ratio_, static_cast<double>(k - hn));
}

double tail_delta_bound(std::int64_t m, double R, const EpsilonSchedule& sched,
                        double floor, std::int64_t budget) {
    if (m < 1) throw ConfigError("tail_delta_bound: m must be >= 1");
    if (!(R > 0.0)) throw ConfigError("tail_delta_bound: R must be positive");

    double sum = 0.0;
    for (std::int64_t k = m; k < m + budget; ++k) {
        const GaussPoint a = gauss_point(k);
        const double mod = std::hypot(static_cast<double>(a.re), static_cast<double>(a.im));
        const double term = sched.epsilon(k) * std::sqrt(R + mod);
        sum += term;
        if (term < floor) return sum;
    }
    throw DivergentTail("tail_delta_bound: terms did not fall below the floor within budget");
}

} // namespace pluripot
