#pragma once

#include <stdexcept>
#include <string>

namespace pluripot {

// Base class for everything this library throws on purpose.  Callers that
// want blanket "computation failed, move on" handling (the Monte Carlo
// samplers do this) catch Error; everything else is a logic bug.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Configuration rejected up front: bad schedule, non-convex profile, ...
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Requested recursion level exceeds the supported cap.
struct LevelTooLarge : Error {
    explicit LevelTooLarge(const std::string& msg) : Error(msg) {}
};

// Weight schedule whose tail bound does not go to zero.
struct DivergentTail : Error {
    explicit DivergentTail(const std::string& msg) : Error(msg) {}
};

// A point landed exactly on a branch point where a local computation
// (square root tracking, potential evaluation) loses meaning.
struct PoleHit : Error {
    explicit PoleHit(const std::string& msg) : Error(msg) {}
};

// Point lies outside the region where the requested quantity is defined,
// e.g. the log-composed potential needs a strictly negative argument.
struct OutsideDomain : Error {
    explicit OutsideDomain(const std::string& msg) : Error(msg) {}
};

// A finite-difference stencil straddles a singular point, so the estimate
// would be garbage.
struct StencilSingularity : Error {
    explicit StencilSingularity(const std::string& msg) : Error(msg) {}
};

// The evaluation point is too close to the branched variety for the
// requested stencil width to be trusted.
struct TooCloseToVariety : Error {
    explicit TooCloseToVariety(const std::string& msg) : Error(msg) {}
};

// A planar path passes closer to a branch point than permitted.
struct ClearanceViolation : Error {
    explicit ClearanceViolation(const std::string& msg) : Error(msg) {}
};

// Adaptive continuation shrank its step below the configured floor.
struct StepCollapse : Error {
    explicit StepCollapse(const std::string& msg) : Error(msg) {}
};

// A loop intended to enclose a single branch point encloses several.
struct MultiplePolesEnclosed : Error {
    explicit MultiplePolesEnclosed(const std::string& msg) : Error(msg) {}
};

// The truncation tail at the requested accuracy would need a window larger
// than the configured maximum.
struct TailTooLarge : Error {
    explicit TailTooLarge(const std::string& msg) : Error(msg) {}
};

// Probe disk center does not belong to the target region.
struct CenterOutside : Error {
    explicit CenterOutside(const std::string& msg) : Error(msg) {}
};

// Sampling produced no admissible points, so the requested statistic is
// undefined rather than zero.
struct EmptySet : Error {
    explicit EmptySet(const std::string& msg) : Error(msg) {}
};

} // namespace pluripot
