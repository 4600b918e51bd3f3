#include "pluripot/potentials.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pluripot/errors.hpp"

namespace pluripot {

namespace {
const double kNegInf = -std::numeric_limits<double>::infinity();
}

RhoProfile RhoProfile::quadratic(double c) {
    if (c < 0.0 || !std::isfinite(c)) throw ConfigError("RhoProfile: quadratic coefficient must be >= 0");
    RhoProfile p;
    p.kind_ = Kind::Quadratic;
    p.coeff_ = c;
    std::ostringstream os;
    os << "quadratic(" << c << ")";
    p.desc_ = os.str();
    return p;
}

RhoProfile RhoProfile::exponential(double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("RhoProfile: exponential rate must be positive");
    RhoProfile p;
    p.kind_ = Kind::Exponential;
    p.coeff_ = lambda;
    std::ostringstream os;
    os << "exponential(" << lambda << ")";
    p.desc_ = os.str();
    return p;
}

RhoProfile RhoProfile::table(std::vector<double> ts, std::vector<double> values) {
    if (ts.size() != values.size() || ts.size() < 2)
        throw ConfigError("RhoProfile: table needs >= 2 matching samples");
    if (ts.front() != 0.0) throw ConfigError("RhoProfile: table must start at t = 0");
    for (std::size_t i = 1; i < ts.size(); ++i) {
        if (!(ts[i] > ts[i - 1])) throw ConfigError("RhoProfile: table abscissae must increase");
        if (values[i] < values[i - 1]) throw ConfigError("RhoProfile: table must be nondecreasing");
    }
    // Convexity: slopes must be nondecreasing (tolerating round-off).
    double prev = (values[1] - values[0]) / (ts[1] - ts[0]);
    for (std::size_t i = 2; i < ts.size(); ++i) {
        const double slope = (values[i] - values[i - 1]) / (ts[i] - ts[i - 1]);
        if (slope < prev - 1e-12) throw ConfigError("RhoProfile: table is not convex");
        prev = slope;
    }
    RhoProfile p;
    p.kind_ = Kind::Table;
    p.ts_ = std::move(ts);
    p.vals_ = std::move(values);
    p.desc_ = "table(" + std::to_string(p.ts_.size()) + " samples)";
    return p;
}

RhoProfile::Eval RhoProfile::eval(double t) const {
    if (t < 0.0) throw ConfigError("rho_eval: argument must be >= 0");
    switch (kind_) {
        case Kind::Quadratic:
            return {coeff_ * t * t, 2.0 * coeff_ * t};
        case Kind::Exponential: {
            const double e = std::exp(coeff_ * t);
            return {e - 1.0, coeff_ * e};
        }
        case Kind::Table: {
            // Piecewise linear with affine extension beyond the last sample.
            if (t >= ts_.back()) {
                const std::size_t n = ts_.size();
                const double slope = (vals_[n - 1] - vals_[n - 2]) / (ts_[n - 1] - ts_[n - 2]);
                return {vals_.back() + slope * (t - ts_.back()), slope};
            }
            std::size_t i = 1;
            while (ts_[i] < t) ++i;
            const double slope = (vals_[i] - vals_[i - 1]) / (ts_[i] - ts_[i - 1]);
            return {vals_[i - 1] + slope * (t - ts_[i - 1]), slope};
        }
    }
    return {};
}

RhoTildeProfile::Eval RhoTildeProfile::eval(double t) const {
    if (!(t0 > 0.0)) throw ConfigError("RhoTildeProfile: t0 must be positive");
    if (amplitude < 0.0) throw ConfigError("RhoTildeProfile: amplitude must be >= 0");
    if (t < 0.0) throw ConfigError("rho_tilde_eval: argument must be >= 0");

    const double s = t - t0;
    // exp(-1/s) and all its derivative factors vanish to every order at
    // s = 0+, so the linear zone extends smoothly; below this cutoff 1/s
    // would overflow before the exponential kills it.
    if (s <= 1e-12) return {t, 1.0, 0.0};

    const double damp = std::exp(-1.0 / s);
    const double g = s * s * s * damp;
    const double g1 = (3.0 * s * s + s) * damp;
    const double g2 = (6.0 * s + 4.0 + 1.0 / s) * damp;
    return {t + amplitude * g, 1.0 + amplitude * g1, amplitude * g2};
}

double phi_total(Cx z, Cx w, const PotentialParams& params) {
    const double base = phi_n(z, w, params.level, params.sched, PhiMode::Recursive, params.max_level);
    if (base == kNegInf) return kNegInf;
    return base + params.rho.eval(std::abs(z.real())).value + params.rho.eval(std::abs(z.imag())).value;
}

double phi_tilde_from(double phi_total_value, double norm_sq, const RhoTildeProfile& p) {
    if (phi_total_value == kNegInf) return kNegInf;
    if (!(phi_total_value < 0.0))
        throw OutsideDomain("phi_tilde: phi_total must be negative at the point");
    return -std::log(-phi_total_value) + p.eval(norm_sq).value;
}

double phi_tilde(Cx z, Cx w, const PotentialParams& params) {
    const double pt = phi_total(z, w, params);
    return phi_tilde_from(pt, std::norm(z) + std::norm(w), params.rho_tilde);
}

PointClass classify_point(Cx z, Cx w, const PotentialParams& params) {
    const double pt = phi_total(z, w, params);
    if (pt == kNegInf) return PointClass::OnVariety;
    if (pt >= params.t_u) return PointClass::OutsideU;
    // t_u <= 0 would make phi_tilde ill-defined here, but the threshold
    // defaults keep pt < t_u <= -1 < 0 in every supported configuration.
    const double ptil = phi_tilde_from(pt, std::norm(z) + std::norm(w), params.rho_tilde);
    return ptil < params.t_a ? PointClass::InA : PointClass::InU_NotA;
}

const char* to_string(PointClass c) {
    switch (c) {
        case PointClass::OnVariety: return "OnVariety";
        case PointClass::OutsideU: return "OutsideU";
        case PointClass::InU_NotA: return "InU_NotA";
        case PointClass::InA: return "InA";
    }
    return "?";
}

} // namespace pluripot
