#pragma once

#include <string>
#include <vector>

#include "pluripot/lattice.hpp"
#include "pluripot/types.hpp"
#include "pluripot/wermer.hpp"

namespace pluripot {

// Convex nondecreasing weight applied to |Re z| and |Im z|.  The quadratic
// default grows fast enough to pinch the sublevel sets; the table variant
// lets experiments feed sampled profiles (validated for convexity).
class RhoProfile {
public:
    static RhoProfile quadratic(double c = 1.0);            // c t^2 (c >= 0; 0 = off)
    static RhoProfile exponential(double lambda = 1.0);     // e^{lambda t} - 1
    static RhoProfile table(std::vector<double> ts, std::vector<double> values);

    struct Eval {
        double value = 0.0;
        double derivative = 0.0; // one-sided on table kinks
    };
    Eval eval(double t) const; // t >= 0

    const std::string& describe() const { return desc_; }

private:
    RhoProfile() = default;

    enum class Kind { Quadratic, Exponential, Table } kind_ = Kind::Quadratic;
    double coeff_ = 1.0;
    std::vector<double> ts_, vals_;
    std::string desc_;
};

inline RhoProfile::Eval rho_eval(double t, const RhoProfile& p) { return p.eval(t); }

// Rescaling weight: identity on [0, t0], then the C-infinity superlinear
// continuation t + amplitude * (t-t0)^3 exp(-1/(t-t0)).  Smooth, convex,
// derivative unbounded.
struct RhoTildeProfile {
    double t0 = 1.0;
    double amplitude = 1.0;

    struct Eval {
        double value = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
    };
    Eval eval(double t) const;
};

inline RhoTildeProfile::Eval rho_tilde_eval(double t, const RhoTildeProfile& p) {
    return p.eval(t);
}

// Everything needed to evaluate the composite potentials at one point.
struct PotentialParams {
    EpsilonSchedule sched = EpsilonSchedule::exponential();
    RhoProfile rho = RhoProfile::quadratic();
    RhoTildeProfile rho_tilde{};
    int level = 6;
    double t_u = -1.0; // sublevel threshold carving U
    double t_a = -1.0; // threshold on the rescaled potential carving the inner domain
    int max_level = kDefaultMaxLevel;
};

// phi_level(z,w) + rho(|Re z|) + rho(|Im z|); -infinity exactly on the
// level-n branched set.
double phi_total(Cx z, Cx w, const PotentialParams& params);

// -log(-phi_total) + rho_tilde(|z|^2 + |w|^2).  Defined where phi_total < 0;
// throws OutsideDomain otherwise.  -infinity on the branched set.
double phi_tilde(Cx z, Cx w, const PotentialParams& params);

// The same composition from an already-computed phi_total value; shared by
// phi_tilde and by tests that pin the formula with synthetic inputs.
double phi_tilde_from(double phi_total_value, double norm_sq, const RhoTildeProfile& p);

enum class PointClass {
    OnVariety, // phi_total = -infinity
    OutsideU,  // phi_total >= t_u
    InU_NotA,  // phi_total < t_u but the rescaled potential >= t_a
    InA,       // both thresholds met
};

PointClass classify_point(Cx z, Cx w, const PotentialParams& params);

const char* to_string(PointClass c);

} // namespace pluripot
