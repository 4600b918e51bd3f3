#include "pluripot/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pluripot/errors.hpp"

namespace pluripot {

namespace {

double dist_point_segment(Cx p, Cx a, Cx b) {
    const Cx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

// Exact distance from one segment to Z+iZ.  The nearest lattice point to any
// plane point is within sqrt(2)/2, so the bounding box padded by one ring
// always contains the minimizer.
double segment_lattice_clearance(Cx a, Cx b) {
    const auto xlo = static_cast<std::int64_t>(std::floor(std::min(a.real(), b.real()))) - 1;
    const auto xhi = static_cast<std::int64_t>(std::ceil(std::max(a.real(), b.real()))) + 1;
    const auto ylo = static_cast<std::int64_t>(std::floor(std::min(a.imag(), b.imag()))) - 1;
    const auto yhi = static_cast<std::int64_t>(std::ceil(std::max(a.imag(), b.imag()))) + 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t x = xlo; x <= xhi; ++x)
        for (std::int64_t y = ylo; y <= yhi; ++y)
            best = std::min(best, dist_point_segment(
                                      Cx(static_cast<double>(x), static_cast<double>(y)), a, b));
    return best;
}

} // namespace

double PlanarCurve::length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i)
        total += std::abs(vertices[i] - vertices[i - 1]);
    return total;
}

double PlanarCurve::clearance() const {
    if (vertices.empty()) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    if (vertices.size() == 1) return segment_lattice_clearance(vertices[0], vertices[0]);
    for (std::size_t i = 1; i < vertices.size(); ++i)
        best = std::min(best, segment_lattice_clearance(vertices[i - 1], vertices[i]));
    return best;
}

bool PlanarCurve::closed(double tol) const {
    if (vertices.empty()) return false;
    return std::abs(vertices.front() - vertices.back()) <= tol;
}

PlanarCurve concat(PlanarCurve head, const PlanarCurve& tail) {
    if (head.vertices.empty()) return tail;
    if (tail.vertices.empty()) return head;
    if (head.vertices.back() != tail.vertices.front())
        throw ConfigError("concat: curve endpoints do not coincide");
    head.vertices.insert(head.vertices.end(), tail.vertices.begin() + 1, tail.vertices.end());
    return head;
}

PlanarCurve circle_loop(Cx center, double radius, int segments, double base_angle) {
    if (!(radius > 0.0)) throw ConfigError("circle_loop: radius must be positive");
    if (segments < 3) throw ConfigError("circle_loop: need at least 3 segments");
    PlanarCurve loop;
    loop.vertices.reserve(static_cast<std::size_t>(segments) + 1);
    for (int j = 0; j < segments; ++j) {
        const double ang = base_angle + 2.0 * std::numbers::pi * j / segments;
        loop.vertices.push_back(center + radius * Cx(std::cos(ang), std::sin(ang)));
    }
    loop.vertices.push_back(loop.vertices.front()); // bitwise-exact closure
    return loop;
}

namespace {

void check_window(LevelWindow window) {
    if (window.m < 1 || window.n < window.m)
        throw ConfigError("lift: window must satisfy 1 <= m <= n");
    if (window.width() > 62) throw LevelTooLarge("lift: window wider than 62 branches");
}

} // namespace

LiftResult lift_curve(const PlanarCurve& curve, SheetLabel start_sheet, LevelWindow window,
                      const EpsilonSchedule& sched, const LiftOptions& opts) {
    check_window(window);
    if (start_sheet.width != window.width())
        throw ConfigError("lift_curve: label width does not match window");
    if (curve.vertices.empty()) throw ConfigError("lift_curve: empty curve");
    if (!(opts.step_factor > 0.0) || opts.step_factor > 0.49)
        throw ConfigError("lift_curve: step_factor must lie in (0, 0.49]");
    if (!(opts.min_step > 0.0)) throw ConfigError("lift_curve: min_step must be positive");
    if (!(curve.clearance() > 0.0))
        throw ClearanceViolation("lift_curve: curve touches a lattice point");

    const int w = window.width();
    std::vector<Cx> poles(static_cast<std::size_t>(w));
    std::vector<double> eps(static_cast<std::size_t>(w));
    for (int b = 0; b < w; ++b) {
        poles[static_cast<std::size_t>(b)] = pole(window.m + b);
        eps[static_cast<std::size_t>(b)] = sched.epsilon(window.m + b);
    }
    const auto pole_dist = [&](Cx zz) {
        double d = std::numeric_limits<double>::infinity();
        for (const Cx& a : poles) d = std::min(d, std::abs(zz - a));
        return d;
    };

    // The only evolving state: each branch's sign relative to the principal
    // square root, plus its current value for the nearest-value comparison.
    std::vector<int> sign(static_cast<std::size_t>(w));
    std::vector<Cx> val(static_cast<std::size_t>(w));
    Cx z = curve.vertices.front();
    if (pole_dist(z) == 0.0) throw ClearanceViolation("lift_curve: curve starts on a pole");
    for (int b = 0; b < w; ++b) {
        sign[static_cast<std::size_t>(b)] = start_sheet.sign(b);
        val[static_cast<std::size_t>(b)] =
            static_cast<double>(sign[static_cast<std::size_t>(b)]) * sqrt_branch(z, window.m + b);
    }

    const auto tracked_value = [&] {
        Cx s{};
        for (int b = 0; b < w; ++b)
            s += eps[static_cast<std::size_t>(b)] * val[static_cast<std::size_t>(b)];
        return s;
    };

    LiftResult res;
    res.min_clearance_used = pole_dist(z);
    res.path.push_back({z, tracked_value()});

    for (std::size_t i = 1; i < curve.vertices.size(); ++i) {
        const Cx A = curve.vertices[i - 1];
        const Cx B = curve.vertices[i];
        const double seg_len = std::abs(B - A);
        if (seg_len == 0.0) continue;
        double t = 0.0;
        while (t < 1.0) {
            const double d = pole_dist(z);
            res.min_clearance_used = std::min(res.min_clearance_used, d);
            const double step = opts.step_factor * d;
            if (step < opts.min_step)
                throw StepCollapse("lift_curve: adaptive step fell below " +
                                   std::to_string(opts.min_step));
            const double t_next = std::min(1.0, t + step / seg_len);
            if (t_next == t)
                throw StepCollapse("lift_curve: step too small to advance the parameter");
            // Land on the vertex exactly so closed curves end where they began.
            const Cx z_next = t_next >= 1.0 ? B : A + t_next * (B - A);
            for (int b = 0; b < w; ++b) {
                const Cx cand = sqrt_branch(z_next, window.m + b);
                const Cx& prev = val[static_cast<std::size_t>(b)];
                const double keep = std::abs(cand - prev);
                const double flip = std::abs(cand + prev);
                sign[static_cast<std::size_t>(b)] = keep <= flip ? +1 : -1;
                val[static_cast<std::size_t>(b)] =
                    static_cast<double>(sign[static_cast<std::size_t>(b)]) * cand;
            }
            z = z_next;
            t = t_next;
            ++res.steps;
            res.path.push_back({z, tracked_value()});
        }
    }
    res.min_clearance_used = std::min(res.min_clearance_used, pole_dist(z));

    SheetLabel end{0, w};
    for (int b = 0; b < w; ++b)
        if (sign[static_cast<std::size_t>(b)] < 0) end.bits |= std::uint64_t{1} << b;
    res.end_sheet = end;
    res.end_point = {z, window_sheet_value(z, end, window.m, window.n, sched)};
    return res;
}

MonodromyMap MonodromyMap::then(const MonodromyMap& other) const {
    if (!(window == other.window)) throw ConfigError("MonodromyMap: window mismatch");
    return {flip_mask ^ other.flip_mask, window};
}

MonodromyMap monodromy_loop(std::int64_t j, Cx base, double radius, LevelWindow window,
                            const EpsilonSchedule& sched, const LiftOptions& opts) {
    check_window(window);
    if (j < 1) throw ConfigError("monodromy_loop: pole index must be >= 1");
    if (!(radius > 0.0)) throw ConfigError("monodromy_loop: radius must be positive");
    if (radius >= 0.5)
        throw MultiplePolesEnclosed("monodromy_loop: radius " + std::to_string(radius) +
                                    " can reach a second lattice point");

    const Cx center = pole(j);
    const Cx dir = base - center;
    const double base_angle = dir == Cx{} ? 0.0 : std::atan2(dir.imag(), dir.real());
    const PlanarCurve loop = circle_loop(center, radius, 48, base_angle);

    const int w = window.width();
    const LiftResult from_plus = lift_curve(loop, SheetLabel{0, w}, window, sched, opts);
    const std::uint64_t mask = from_plus.end_sheet.bits;
    // The tracking is sign-symmetric, so every start sheet must see the same
    // flip set; lifting each generator sheet re-checks that directly.
    for (int g = 0; g < w; ++g) {
        const SheetLabel gen{std::uint64_t{1} << g, w};
        const LiftResult r = lift_curve(loop, gen, window, sched, opts);
        if (r.end_sheet.bits != (gen.bits ^ mask))
            throw Error("monodromy_loop: generator sheets disagree on the flip set");
    }
    return {mask, window};
}

namespace {

// Center of the unit cell containing z (half-integer coordinates, distance
// >= 1/2 from every lattice line).
Cx cell_center(Cx z) {
    return {std::floor(z.real()) + 0.5, std::floor(z.imag()) + 0.5};
}

void push_vertex(std::vector<Cx>& vs, Cx v) {
    if (vs.empty() || vs.back() != v) vs.push_back(v);
}

// z_from -> z_to through the cell grid: into the start cell's center, one
// horizontal and one vertical leg along half-integer lines, out to z_to.
PlanarCurve grid_route(Cx z_from, Cx z_to) {
    PlanarCurve route;
    if (z_from == z_to) {
        route.vertices.push_back(z_from);
        return route;
    }
    const Cx c0 = cell_center(z_from);
    const Cx c1 = cell_center(z_to);
    push_vertex(route.vertices, z_from);
    push_vertex(route.vertices, c0);
    push_vertex(route.vertices, Cx(c1.real(), c0.imag()));
    push_vertex(route.vertices, c1);
    push_vertex(route.vertices, z_to);
    return route;
}

constexpr double kLoopRadius = 0.3; // clearance 0.3*cos(pi/48) > 1/4
constexpr int kLoopSegments = 48;

// Closed excursion based at z0: grid route to the cell center above-right of
// a_k, radially in to a circle around a_k, once around, and back the same way.
PlanarCurve pole_excursion(Cx z0, std::int64_t k) {
    const Cx a = pole(k);
    const Cx ck = a + Cx(0.5, 0.5);
    const PlanarCurve out = grid_route(z0, ck);

    std::vector<Cx> vs = out.vertices;
    const PlanarCurve ring = circle_loop(a, kLoopRadius, kLoopSegments,
                                         std::numbers::pi / 4.0);
    for (const Cx& v : ring.vertices) push_vertex(vs, v);
    // Return leg: the outbound vertices in reverse, bitwise identical.
    for (auto it = out.vertices.rbegin(); it != out.vertices.rend(); ++it)
        push_vertex(vs, *it);

    PlanarCurve curve;
    curve.vertices = std::move(vs);
    return curve;
}

} // namespace

PlanarCurve connect_sheets(Cx z0, SheetLabel from, SheetLabel to, LevelWindow window,
                           const EpsilonSchedule& sched, const LiftOptions& opts) {
    check_window(window);
    if (from.width != window.width() || to.width != window.width())
        throw ConfigError("connect_sheets: label width does not match window");

    PlanarCurve curve;
    curve.vertices.push_back(z0);
    const std::uint64_t diff = from.bits ^ to.bits;
    for (int b = 0; b < window.width(); ++b)
        if (diff >> b & 1u) curve = concat(std::move(curve), pole_excursion(z0, window.m + b));

    const LiftResult check = lift_curve(curve, from, window, sched, opts);
    if (!(check.end_sheet == to))
        throw Error("connect_sheets: lift verification failed");
    return curve;
}

DecompositionCheck decompose_levels(Cx z, int n, int m, const EpsilonSchedule& sched,
                                    int max_level) {
    if (m < 1 || m >= n) throw ConfigError("decompose_levels: need 1 <= m < n");

    const std::vector<Cx> full = slice_points(z, n, sched, max_level).points;
    const std::vector<Cx> head = slice_points(z, m, sched, max_level).points;
    const std::vector<Cx> tail = window_slice(z, m + 1, n, sched, max_level);

    std::vector<Cx> sums;
    sums.reserve(full.size());
    for (const Cx& t : tail)
        for (const Cx& h : head) sums.push_back(h + t);

    const auto lex = [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::vector<Cx> sorted_full = full;
    std::sort(sorted_full.begin(), sorted_full.end(), lex);
    std::sort(sums.begin(), sums.end(), lex);

    DecompositionCheck cert;
    cert.pairs = static_cast<std::int64_t>(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i)
        cert.max_discrepancy = std::max(cert.max_discrepancy,
                                        std::abs(sums[i] - sorted_full[i]));
    return cert;
}

namespace {

struct Decoded {
    SheetLabel label;
    double residual = 0.0;
};

// Greedy cluster descent: at depth k the two sign choices separate the fiber
// into clusters whose gap certificate is positive for usable schedules, so
// picking the nearer center at each level recovers the label.
Decoded decode_label(Cx z, Cx w, std::int64_t n, const EpsilonSchedule& sched, double tol) {
    Cx partial{};
    std::uint64_t bits = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        const Cx term = sched.epsilon(k) * sqrt_branch(z, k);
        if (std::abs(w - (partial + term)) <= std::abs(w - (partial - term))) {
            partial += term;
        } else {
            partial -= term;
            bits |= std::uint64_t{1} << (k - 1);
        }
    }
    const double residual = std::abs(w - partial);
    if (residual > tol)
        throw OutsideDomain("walk_to_point: endpoint is not on the stage set (residual " +
                            std::to_string(residual) + ")");
    return {SheetLabel{bits, static_cast<int>(n)}, residual};
}

// Lexicographic order on the sign string, slot 0 first, '+' before '-'.
bool lex_smaller(std::uint64_t a, std::uint64_t b, int width) {
    for (int s = 0; s < width; ++s) {
        const unsigned ba = a >> s & 1u;
        const unsigned bb = b >> s & 1u;
        if (ba != bb) return ba < bb;
    }
    return false;
}

double max_vertex_norm(const PlanarCurve& c) {
    double r = 0.0;
    for (const Cx& v : c.vertices) r = std::max(r, std::abs(v));
    return r;
}

} // namespace

WalkResult walk_to_point(Point p, Point q, int n_accuracy, const WalkParams& params) {
    const std::int64_t N = params.big_level;
    if (N < 2) throw ConfigError("walk_to_point: stage level must be >= 2");
    if (N > params.max_level || N > 62)
        throw LevelTooLarge("walk_to_point: stage level exceeds the configured maximum");
    if (n_accuracy < 1) throw ConfigError("walk_to_point: accuracy index must be >= 1");

    const auto on_lattice = [](Cx z) {
        return z == Cx(std::round(z.real()), std::round(z.imag()));
    };
    if (on_lattice(p.z) || on_lattice(q.z))
        throw ClearanceViolation("walk_to_point: endpoint sits on a lattice point");

    const Decoded dp = decode_label(p.z, p.w, N, params.sched, params.decode_tol);
    const Decoded dq = decode_label(q.z, q.w, N, params.sched, params.decode_tol);

    const PlanarCurve base_route = grid_route(p.z, q.z);
    const double target = std::pow(2.0, -static_cast<double>(n_accuracy));

    // Pick the smallest head level whose dropped-tail bound beats the target
    // over a disk covering the whole route, loops included.  The loops depend
    // on the head level, so candidates are built and measured per level.
    for (std::int64_t m = 1; m < N; ++m) {
        const auto head_bits = [&](std::uint64_t bits) {
            return bits & ((std::uint64_t{1} << m) - 1);
        };
        const SheetLabel p_head{head_bits(dp.label.bits), static_cast<int>(m)};
        const SheetLabel q_head{head_bits(dq.label.bits), static_cast<int>(m)};
        const LevelWindow head_window{1, m};

        const LiftResult route_lift =
            lift_curve(base_route, p_head, head_window, params.sched, params.lift);
        const PlanarCurve fix = connect_sheets(q.z, route_lift.end_sheet, q_head, head_window,
                                               params.sched, params.lift);
        const PlanarCurve full_curve = concat(base_route, fix);

        const double R = max_vertex_norm(full_curve);
        const double tdb = tail_delta_bound(m + 1, R, params.sched);
        if (!(tdb < target)) continue;

        // Head geometry settled; now carry p's tail sheet along the curve.
        const LevelWindow tail_window{m + 1, N};
        const int tw = tail_window.width();
        const std::uint64_t p_tail_bits = dp.label.bits >> m;

        const std::vector<Cx> tails =
            window_slice(p.z, m + 1, N, params.sched, params.max_level);
        const Cx own = tails[p_tail_bits];
        std::uint64_t start_bits = p_tail_bits;
        for (std::uint64_t bits = 0; bits < tails.size(); ++bits)
            if (std::abs(tails[bits] - own) <= params.match_tol &&
                lex_smaller(bits, start_bits, tw))
                start_bits = bits;
        const SheetLabel tail_start{start_bits, tw};

        const LiftResult tail_lift =
            lift_curve(full_curve, tail_start, tail_window, params.sched, params.lift);

        const Cx w_star = window_sheet_value(q.z, q_head, 1, m, params.sched) +
                          window_sheet_value(q.z, tail_lift.end_sheet, m + 1, N, params.sched);

        WalkResult res;
        res.q_star = {q.z, w_star};
        res.error = dist(q, res.q_star);
        res.error_bound = 2.0 * tdb;
        res.trace.head_level = m;
        res.trace.radius = R;
        res.trace.tail_budget = res.error_bound;
        res.trace.p_label = dp.label;
        res.trace.q_label = dq.label;
        res.trace.p_residual = dp.residual;
        res.trace.q_residual = dq.residual;
        res.trace.tail_start = tail_start;
        res.trace.tail_end = tail_lift.end_sheet;
        res.trace.route = full_curve;
        res.trace.lift_steps = tail_lift.steps;
        return res;
    }
    throw TailTooLarge("walk_to_point: no head level within stage " + std::to_string(N) +
                       " meets the 2^-" + std::to_string(n_accuracy) + " budget");
}

} // namespace pluripot
