#include "pluripot/wermer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pluripot/errors.hpp"

namespace pluripot {

namespace {

constexpr double kOnSetFloor = 1e-300;
const double kNegInf = -std::numeric_limits<double>::infinity();

void check_level(int n, int max_level) {
    if (n < 1) throw ConfigError("level must be >= 1");
    if (n > max_level || n > 62)
        throw LevelTooLarge("level " + std::to_string(n) + " exceeds the configured maximum");
}

} // namespace

Cx sqrt_branch(Cx z, std::int64_t k) {
    const Cx rad = z - pole(k);
    if (rad == Cx{0.0, 0.0}) throw PoleHit("sqrt_branch: z equals lattice point " + std::to_string(k));
    if (rad.imag() == 0.0 && rad.real() < 0.0) {
        // Pin the cut itself to the upper limit regardless of the sign of the
        // zero imaginary part; std::sqrt would map -x - 0i below the cut.
        return {0.0, std::sqrt(-rad.real())};
    }
    return std::sqrt(rad);
}

Cx window_sheet_value(Cx z, SheetLabel sigma, std::int64_t first, std::int64_t last,
                      const EpsilonSchedule& sched) {
    if (first < 1 || last < first) throw ConfigError("window_sheet_value: bad window");
    if (sigma.width != static_cast<int>(last - first + 1))
        throw ConfigError("window_sheet_value: label width does not match window");
    Cx sum{0.0, 0.0};
    for (std::int64_t k = first; k <= last; ++k) {
        const int slot = static_cast<int>(k - first);
        const double coeff = sched.epsilon(k) * sigma.sign(slot);
        sum += coeff * sqrt_branch(z, k);
    }
    return sum;
}

Cx sheet_value(Cx z, SheetLabel sigma, const EpsilonSchedule& sched) {
    return window_sheet_value(z, sigma, 1, sigma.width, sched);
}

std::vector<Cx> window_slice(Cx z0, std::int64_t first, std::int64_t last,
                             const EpsilonSchedule& sched, int max_level) {
    if (first < 1 || last < first) throw ConfigError("window_slice: bad window");
    const int width = static_cast<int>(last - first + 1);
    check_level(width, max_level);

    std::vector<Cx> terms(static_cast<std::size_t>(width));
    for (std::int64_t k = first; k <= last; ++k)
        terms[static_cast<std::size_t>(k - first)] = sched.epsilon(k) * sqrt_branch(z0, k);

    // Per-label ascending-index summation.  A Gray-code running sum would be
    // faster but would lose the exact sigma -> -sigma antisymmetry, which the
    // slice tests rely on bit for bit.
    const std::size_t count = std::size_t{1} << width;
    std::vector<Cx> out(count);
    for (std::size_t bits = 0; bits < count; ++bits) {
        Cx sum{0.0, 0.0};
        for (int slot = 0; slot < width; ++slot) {
            const double sgn = (bits >> slot) & 1u ? -1.0 : 1.0;
            sum += sgn * terms[static_cast<std::size_t>(slot)];
        }
        out[bits] = sum;
    }
    return out;
}

SliceSet slice_points(Cx z0, int n, const EpsilonSchedule& sched, int max_level) {
    check_level(n, max_level);
    SliceSet s;
    s.z0 = z0;
    s.level = n;
    s.points = window_slice(z0, 1, n, sched, max_level);

    s.cluster_gap.resize(static_cast<std::size_t>(n));
    std::vector<double> mods(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        mods[static_cast<std::size_t>(k - 1)] = sched.epsilon(k) * std::abs(sqrt_branch(z0, k));
    double tail = 0.0;
    for (int d = n - 1; d >= 0; --d) {
        s.cluster_gap[static_cast<std::size_t>(d)] = 2.0 * mods[static_cast<std::size_t>(d)] - 2.0 * tail;
        tail += mods[static_cast<std::size_t>(d)];
    }
    return s;
}

namespace {

double phi_recursive(Cx z, Cx w, int n, const EpsilonSchedule& sched) {
    if (n == 1) {
        const double e1 = sched.epsilon(1);
        const Cx q = w * w - e1 * e1 * (z - pole(1));
        const double mag = std::abs(q);
        if (mag < kOnSetFloor) return kNegInf;
        return 0.5 * std::log(mag);
    }
    const Cx t = sched.epsilon(n) * sqrt_branch(z, n);
    const double lo = phi_recursive(z, w - t, n - 1, sched);
    const double hi = phi_recursive(z, w + t, n - 1, sched);
    return 0.5 * (lo + hi);
}

} // namespace

double phi_n(Cx z, Cx w, int n, const EpsilonSchedule& sched, PhiMode mode, int max_level) {
    check_level(n, max_level);
    for (std::int64_t k = 1; k <= n; ++k)
        if (z == pole(k)) throw PoleHit("phi_n: z equals lattice point " + std::to_string(k));

    if (mode == PhiMode::Recursive) return phi_recursive(z, w, n, sched);

    const std::vector<Cx> roots = window_slice(z, 1, n, sched, max_level);
    double acc = 0.0;
    for (const Cx& r : roots) {
        const double mag = std::abs(w - r);
        if (mag < kOnSetFloor) return kNegInf;
        acc += std::log(mag);
    }
    return acc / static_cast<double>(roots.size());
}

namespace {

// Directed sup over A of the distance to B, with B pre-sorted by real part.
// The real-axis window prune keeps slice-sized inputs cheap.
double directed_hausdorff(const std::vector<Cx>& A, std::vector<Cx> B) {
    std::sort(B.begin(), B.end(),
              [](Cx a, Cx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    double worst = 0.0;
    for (const Cx& a : A) {
        auto it = std::lower_bound(B.begin(), B.end(), a.real(),
                                   [](Cx p, double x) { return p.real() < x; });
        double best = std::numeric_limits<double>::infinity();
        // Expand symmetrically while the real gap alone can still beat `best`.
        auto fwd = it;
        while (fwd != B.end() && fwd->real() - a.real() < best) {
            best = std::min(best, std::abs(*fwd - a));
            ++fwd;
        }
        auto bwd = it;
        while (bwd != B.begin()) {
            --bwd;
            if (a.real() - bwd->real() >= best) break;
            best = std::min(best, std::abs(*bwd - a));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

double hausdorff_distance(const std::vector<Cx>& A, const std::vector<Cx>& B) {
    if (A.empty() || B.empty()) throw EmptySet("hausdorff_distance: empty input set");
    return std::max(directed_hausdorff(A, B), directed_hausdorff(B, A));
}

ClusterCertificate cluster_certificate(Cx z0, int n, const EpsilonSchedule& sched, int max_level) {
    const SliceSet s = slice_points(z0, n, sched, max_level);
    ClusterCertificate cert;
    cert.valid = true;
    cert.margin = std::numeric_limits<double>::infinity();
    for (int d = 0; d < n; ++d) {
        const double gap = s.cluster_gap[static_cast<std::size_t>(d)];
        if (gap < cert.margin) {
            cert.margin = gap;
            cert.worst_depth = d;
        }
        if (!(gap > 0.0)) cert.valid = false;
    }
    return cert;
}

} // namespace pluripot
