#pragma once

#include <cstdint>
#include <vector>

#include "pluripot/lattice.hpp"
#include "pluripot/types.hpp"
#include "pluripot/wermer.hpp"

namespace pluripot {

// Contiguous branch-index window m..n (inclusive), the branched multifunction
//     w = sum_{k=m..n} sigma_k eps_k sqrt(z - a_k).
// The full stage is the window 1..n.  SheetLabel slot b drives index m + b.
struct LevelWindow {
    std::int64_t m = 1;
    std::int64_t n = 1;

    int width() const { return static_cast<int>(n - m + 1); }
    bool contains(std::int64_t k) const { return m <= k && k <= n; }
    bool operator==(const LevelWindow&) const = default;
};

// Piecewise-linear path in the z-plane.  A single vertex is the constant
// curve.  clearance() is the exact minimum distance from the polyline to
// Z+iZ (segment-to-point, not sampled), so "avoids every branch point" is a
// checkable predicate rather than a hope.
struct PlanarCurve {
    std::vector<Cx> vertices;

    double length() const;
    double clearance() const;
    bool closed(double tol = 0.0) const;
};

// Appends `tail` to `head`; the junction vertices must coincide exactly.
PlanarCurve concat(PlanarCurve head, const PlanarCurve& tail);

// Closed regular polygon (first vertex repeated at the end, bitwise equal)
// around `center`, starting at angle `base_angle`.
PlanarCurve circle_loop(Cx center, double radius, int segments = 48,
                        double base_angle = 0.0);

struct LiftOptions {
    double step_factor = 0.25; // max |dz| = factor * distance to nearest window pole
    double min_step = 1e-12;   // below this the lift aborts rather than guess
};

struct LiftResult {
    SheetLabel end_sheet;       // signs relative to the principal branches
    Point end_point{};          // (z_end, window sheet value there)
    std::vector<Point> path;    // (z, tracked window value) at every accepted step
    std::int64_t steps = 0;
    double min_clearance_used = 0.0; // smallest step-control pole distance seen
};

// Continues every branch sqrt(z - a_k) of the window along the curve by
// nearest-value tracking: after each step the sign nearest the previous
// branch value is kept.  The step bound step_factor * (distance to nearest
// window pole) keeps the per-step drift well under the +/- branch separation,
// so the choice is never ambiguous.  The tracked state is only the sign
// vector; the end point therefore satisfies the window sheet equation
// exactly, with no accumulated drift.
//
// Throws ClearanceViolation if the curve touches Z+iZ, StepCollapse if the
// adaptive step falls below min_step, ConfigError on label/window mismatch.
LiftResult lift_curve(const PlanarCurve& curve, SheetLabel start_sheet,
                      LevelWindow window, const EpsilonSchedule& sched,
                      const LiftOptions& opts = {});

// Deck transformation of a window, recorded as the set of slots whose sign
// flips.  Lifts of loop concatenations compose by XOR of masks.
struct MonodromyMap {
    std::uint64_t flip_mask = 0;
    LevelWindow window{};

    SheetLabel apply(SheetLabel sigma) const {
        return {sigma.bits ^ flip_mask, sigma.width};
    }
    MonodromyMap then(const MonodromyMap& other) const;
    bool identity() const { return flip_mask == 0; }
};

// Monodromy of one counterclockwise circle around pole a_j, derived by
// actually lifting the loop (from the all-plus sheet, then re-checked from
// each single-flip generator sheet).  The circle starts at the point of the
// circle nearest `base`.  Requires 0 < radius < 1/2 so no second lattice
// point can be enclosed or touched; otherwise MultiplePolesEnclosed.
MonodromyMap monodromy_loop(std::int64_t j, Cx base, double radius,
                            LevelWindow window, const EpsilonSchedule& sched,
                            const LiftOptions& opts = {});

// Closed curve based at z0 whose lift carries `from` to `to`: one loop around
// each pole where the labels disagree, reached through the half-integer cell
// grid (segments midway between lattice lines).  The result is verified
// internally by lifting before it is returned.
PlanarCurve connect_sheets(Cx z0, SheetLabel from, SheetLabel to,
                           LevelWindow window, const EpsilonSchedule& sched,
                           const LiftOptions& opts = {});

// Certificate that the stage-n fiber over z is exactly the multiset of sums
// of the stage-m fiber and the (m+1..n) window fiber.
struct DecompositionCheck {
    double max_discrepancy = 0.0;
    std::int64_t pairs = 0; // 2^n sums matched

    bool exact(double tol = 1e-12) const { return max_discrepancy <= tol; }
};

DecompositionCheck decompose_levels(Cx z, int n, int m, const EpsilonSchedule& sched,
                                    int max_level = kDefaultMaxLevel);

// Inputs of the sheet-to-sheet walk on the stage-N set.
struct WalkParams {
    std::int64_t big_level = 16; // N: the stage carrying the endpoints
    EpsilonSchedule sched = EpsilonSchedule::exponential();
    LiftOptions lift{};
    int max_level = kDefaultMaxLevel;
    double decode_tol = 1e-8;  // accepted |w - nearest sheet value| at p, q
    double match_tol = 1e-10;  // tail values this close count as the same sheet
};

struct WalkTrace {
    std::int64_t head_level = 0;  // m: prefix window 1..m carrying the geometry
    double radius = 0.0;          // R: disk certified to contain the whole route
    double tail_budget = 0.0;     // 2 * tail_delta_bound(m+1, R)
    SheetLabel p_label, q_label;  // decoded full stage-N labels
    double p_residual = 0.0, q_residual = 0.0; // decode residuals
    SheetLabel tail_start;        // lexicographically smallest tail sheet matching p
    SheetLabel tail_end;          // tail sheet reached over z_q
    PlanarCurve route;            // full z-plane path including sheet-fixing loops
    std::int64_t lift_steps = 0;
};

struct WalkResult {
    Point q_star{};
    double error = 0.0;       // achieved |q - q_star|
    double error_bound = 0.0; // certified bound (= trace.tail_budget)
    WalkTrace trace;
};

// Walks from p to q through the connected prefix stage: picks the smallest
// head level m whose dropped-tail displacement bound beats 2^{-n_accuracy}
// over the whole route, connects the head sheets of p and q by a planar
// curve through the cell grid, lifts the tail window m+1..N along that same
// curve from p's tail sheet, and returns the arrival point over z_q.  The
// arrival point lies exactly on the stage-N set and differs from q by less
// than 2^{1-n_accuracy}.
//
// Throws TailTooLarge when no head level within stage N meets the budget,
// OutsideDomain when p or q fails to decode as a stage-N point, and lifting
// errors as they arise.
WalkResult walk_to_point(Point p, Point q, int n_accuracy, const WalkParams& params);

} // namespace pluripot
