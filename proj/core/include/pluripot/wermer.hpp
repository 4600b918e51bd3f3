#pragma once

#include <cstdint>
#include <vector>

#include "pluripot/lattice.hpp"
#include "pluripot/types.hpp"

namespace pluripot {

// Largest truncation level the slice/potential routines accept by default.
// 2^22 leaf evaluations keeps a single point under about a second.
inline constexpr int kDefaultMaxLevel = 22;

// Sign vector sigma in {+1,-1}^width selecting one branch of the sum
// sum_k sigma_k eps_k sqrt(z - a_k).  Bit b set means sigma is -1 in slot b,
// so label 0 is the all-plus branch.  Slot b corresponds to branch index
// first + b of whatever window the label is used with (first = 1 for full
// slices).
struct SheetLabel {
    std::uint64_t bits = 0;
    int width = 0;

    int sign(int slot) const { return (bits >> slot) & 1u ? -1 : +1; }
    SheetLabel flipped(int slot) const { return {bits ^ (std::uint64_t{1} << slot), width}; }
    SheetLabel negated() const {
        const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0}
                                               : ((std::uint64_t{1} << width) - 1);
        return {bits ^ mask, width};
    }
    bool operator==(const SheetLabel&) const = default;
};

// Principal value of sqrt(z - a_k): real part >= 0, and imaginary part >= 0
// on the cut (negative real radicand).  Throws PoleHit at z = a_k.
Cx sqrt_branch(Cx z, std::int64_t k);

// sum_{k=1..sigma.width} sigma_k eps_k sqrt(z - a_k), summed in ascending k.
// The fixed order makes sigma -> -sigma negate the value exactly in floating
// point.
Cx sheet_value(Cx z, SheetLabel sigma, const EpsilonSchedule& sched);

// Same sum restricted to branch indices first..last (sigma slot b drives
// index first + b).
Cx window_sheet_value(Cx z, SheetLabel sigma, std::int64_t first, std::int64_t last,
                      const EpsilonSchedule& sched);

// Vertical slice of the level-n branched set over z0: all 2^n branch values,
// indexed by label bits.  cluster_gap[d] (d = 0..n-1) is the separation
// margin when the depth-d prefix clusters split on sign d+1:
//     2 eps_{d+1}|s_{d+1}| - 2 sum_{k=d+2..n} eps_k|s_k|.
struct SliceSet {
    Cx z0{};
    int level = 0;
    std::vector<Cx> points;       // size 2^level, label-indexed
    std::vector<double> cluster_gap;

    const Cx& at(SheetLabel sigma) const { return points[sigma.bits]; }
};

SliceSet slice_points(Cx z0, int n, const EpsilonSchedule& sched,
                      int max_level = kDefaultMaxLevel);

// Slice of the window product over branch indices first..last only.
std::vector<Cx> window_slice(Cx z0, std::int64_t first, std::int64_t last,
                             const EpsilonSchedule& sched, int max_level = kDefaultMaxLevel);

enum class PhiMode {
    Recursive,    // exact half-sum split, O(2^n) time, O(n) memory
    DirectOracle, // enumerate all 2^n roots; the independent cross-check
};

// Normalized log-magnitude potential of the level-n branched set:
// 2^{-n} log|prod_sigma (w - w_sigma(z))|.  Returns -infinity on the set
// itself (a factor magnitude under 1e-300 counts as on-set).
double phi_n(Cx z, Cx w, int n, const EpsilonSchedule& sched,
             PhiMode mode = PhiMode::Recursive, int max_level = kDefaultMaxLevel);

// Symmetric Hausdorff distance between two finite point sets in C.
double hausdorff_distance(const std::vector<Cx>& A, const std::vector<Cx>& B);

// Separation certificate for the binary cluster tree of a slice.  Valid when
// every prefix split is strictly separated, which forces the 2^n slice values
// to be pairwise distinct (Cantor structure at finite level).
struct ClusterCertificate {
    bool valid = false;
    int worst_depth = 0; // depth with the smallest margin
    double margin = 0.0; // that smallest margin
};

ClusterCertificate cluster_certificate(Cx z0, int n, const EpsilonSchedule& sched,
                                       int max_level = kDefaultMaxLevel);

} // namespace pluripot
