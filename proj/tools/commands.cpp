#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "pluripot/continuation.hpp"
#include "pluripot/csv.hpp"
#include "pluripot/errors.hpp"
#include "pluripot/greenfn.hpp"
#include "pluripot/hyperbolicity.hpp"
#include "pluripot/lattice.hpp"
#include "pluripot/pgm.hpp"
#include "pluripot/report.hpp"
#include "pluripot/rng.hpp"
#include "pluripot/wermer.hpp"

namespace pluripot::cli {

namespace {

using nlohmann::json;

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point t0) {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now() - t0).count();
}

json json_cx(Cx z) { return json{z.real(), z.imag()}; }

// Parameters that determine the numbers a run produces.  The output
// directory and the thread count are deliberately absent: neither affects
// a single result bit (thread invariance is checked by the volume battery),
// so runs differing only in those share a parameter hash.
json global_json(const GlobalConfig& g) {
    return json{{"seed", g.seed},
                {"level", g.level},
                {"lambda", g.lambda},
                {"eps_head", g.eps_head},
                {"eps_ratio", g.eps_ratio},
                {"rho_coeff", g.rho_coeff},
                {"rho_tilde_t0", g.rho_tilde_t0},
                {"rho_tilde_amplitude", g.rho_tilde_amplitude},
                {"t_u", g.t_u},
                {"t_a", g.t_a}};
}

// One CSV table whose every row carries the seed and parameter hash.
class CsvSink {
public:
    CsvSink(std::vector<std::string> header, std::uint64_t seed, std::string config_hash)
        : seed_(std::to_string(seed)), hash_(std::move(config_hash)) {
        header.push_back("seed");
        header.push_back("config_hash");
        table_ = std::make_unique<CsvTable>(std::move(header));
    }

    void add(std::vector<std::string> fields) {
        fields.push_back(seed_);
        fields.push_back(hash_);
        table_->add_row(std::move(fields));
    }

    const CsvTable& table() const { return *table_; }

private:
    std::string seed_;
    std::string hash_;
    std::unique_ptr<CsvTable> table_;
};

// Collects invariants, results and artifacts for one run and writes the
// report last, so a crash mid-run leaves no half-true summary behind.
class RunEmitter {
public:
    RunEmitter(const GlobalConfig& g, std::string command, json config)
        : g_(g),
          command_(std::move(command)),
          config_(std::move(config)),
          start_(std::chrono::steady_clock::now()) {
        config_hash_ = hash_hex(fnv1a(config_.dump()));
        std::filesystem::create_directories(g_.out_dir);
    }

    void invariant(std::string name, bool pass, std::string detail) {
        records_.push_back({std::move(name), pass, std::move(detail)});
    }

    json& results() { return results_; }
    const std::string& config_hash() const { return config_hash_; }
    std::uint64_t seed() const { return g_.seed; }

    CsvSink make_table(std::vector<std::string> header) const {
        return CsvSink(std::move(header), g_.seed, config_hash_);
    }

    void write_table(const std::string& name, const CsvSink& sink) {
        const std::string path = artifact_path(name, ".csv");
        sink.table().write(path);
        artifacts_.push_back(path);
    }

    void write_image(const std::string& name, const Pgm16& image, const json& sidecar) {
        const std::string path = artifact_path(name, ".pgm");
        image.write(path);
        artifacts_.push_back(path);
        const std::string side = artifact_path(name + "_scale", ".json");
        write_report(sidecar, side); // sidecar has no volatile fields
        artifacts_.push_back(side);
    }

    int finish() {
        const std::string stamp =
            utc_timestamp() + ";timing_ms=" + std::to_string(elapsed_ms(start_));
        const json report =
            make_report(command_, config_, g_.seed, results_, records_, stamp);
        const std::string path = artifact_path(command_, ".json");
        write_report(report, path);

        bool all = true;
        for (const auto& r : records_) {
            all = all && r.pass;
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
            if (!r.detail.empty()) std::cout << ": " << r.detail;
            std::cout << "\n";
        }
        std::cout << "report " << path << "\n";
        for (const auto& a : artifacts_) std::cout << "artifact " << a << "\n";
        return all ? 0 : 1;
    }

private:
    std::string artifact_path(const std::string& name, const std::string& ext) const {
        return (std::filesystem::path(g_.out_dir) / (name + ext)).string();
    }

    const GlobalConfig& g_;
    std::string command_;
    json config_;
    std::string config_hash_;
    json results_ = json::object();
    std::vector<InvariantRecord> records_;
    std::vector<std::string> artifacts_;
    std::chrono::steady_clock::time_point start_;
};

std::uint64_t draw_bits(const CounterRng& rng, std::int64_t i, int dim, int width) {
    const double u = rng.uniform(i, dim);
    const auto span = static_cast<std::uint64_t>(1) << width;
    const auto b = static_cast<std::uint64_t>(u * static_cast<double>(span));
    return std::min(b, span - 1);
}

std::string pass_ratio(std::int64_t pass, std::int64_t total) {
    return std::to_string(pass) + "/" + std::to_string(total);
}

} // namespace

PotentialParams make_params(const GlobalConfig& g) {
    PotentialParams p;
    p.sched = g.eps_head.empty() ? EpsilonSchedule::exponential(g.lambda)
                                 : EpsilonSchedule::custom(g.eps_head, g.eps_ratio);
    p.rho = RhoProfile::quadratic(g.rho_coeff);
    p.rho_tilde.t0 = g.rho_tilde_t0;
    p.rho_tilde.amplitude = g.rho_tilde_amplitude;
    p.level = g.level;
    p.t_u = g.t_u;
    p.t_a = g.t_a;
    return p;
}

Cx parse_complex(const std::string& text, const std::string& field) {
    const auto fail = [&]() -> Cx {
        throw ConfigError(field + ": cannot parse '" + text + "' as a complex number");
    };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) return fail();

    const auto to_double = [&](std::string part, double sign_only) -> double {
        if (part.empty() || part == "+") return sign_only;
        if (part == "-") return -sign_only;
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            fail();
        }
        if (used != part.size()) fail();
        return v;
    };

    if (s.back() != 'i' && s.back() != 'I') return {to_double(s, 0.0), 0.0};

    s.pop_back();
    // Split before the sign of the imaginary part, skipping exponent signs.
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, to_double(s, 1.0)};
    return {to_double(s.substr(0, split), 0.0), to_double(s.substr(split), 1.0)};
}

Box4 parse_box(const std::vector<double>& values, const std::string& field) {
    Box4 box;
    if (values.size() == 2) {
        box = Box4::cube(0.0);
        for (int i = 0; i < 4; ++i) {
            box.lo[i] = values[0];
            box.hi[i] = values[1];
        }
    } else if (values.size() == 8) {
        for (int i = 0; i < 4; ++i) {
            box.lo[i] = values[2 * i];
            box.hi[i] = values[2 * i + 1];
        }
    } else {
        throw ConfigError(field + ": expected 2 (cube) or 8 (per-axis) values, got " +
                          std::to_string(values.size()));
    }
    if (!box.valid()) throw ConfigError(field + ": box is degenerate (lo >= hi)");
    return box;
}

// ---------------------------------------------------------------------------
// spiral

namespace {

const std::vector<std::pair<std::int64_t, std::int64_t>> kSpiralPrefix = {
    {0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0},
    {-1, -1}, {0, -1}, {1, -1}, {2, -1}, {2, 0}};

void check_spiral(RunEmitter& e, const std::string& prefix, std::int64_t count) {
    bool head_ok = true;
    for (std::size_t k = 0; k < kSpiralPrefix.size(); ++k) {
        const GaussPoint p = gauss_point(static_cast<std::int64_t>(k) + 1);
        head_ok = head_ok && p.re == kSpiralPrefix[k].first &&
                  p.im == kSpiralPrefix[k].second;
    }
    e.invariant(prefix + "prefix-exact", head_ok, "first 11 lattice points");

    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    bool distinct = true;
    for (std::int64_t k = 1; k <= count; ++k) {
        const GaussPoint p = gauss_point(k);
        distinct = distinct && seen.emplace(p.re, p.im).second;
    }
    e.invariant(prefix + "injective", distinct,
                "k = 1.." + std::to_string(count) + " pairwise distinct");

    bool rings = true;
    for (std::int64_t r = 1; (2 * r - 1) * (2 * r - 1) + 1 <= count; ++r) {
        const GaussPoint p = gauss_point((2 * r - 1) * (2 * r - 1) + 1);
        rings = rings && p.re == r && p.im == -r + 1;
    }
    e.invariant(prefix + "ring-starts", rings, "ring r opens at (r, -r+1)");
}

} // namespace

int run_spiral(const GlobalConfig& g, const SpiralOpts& o) {
    json cfg = global_json(g);
    cfg["count"] = o.count;
    RunEmitter e(g, "spiral", cfg);
    if (o.count < 11) throw ConfigError("spiral --count: need at least 11");

    check_spiral(e, "", o.count);

    CsvSink csv = e.make_table({"k", "re", "im"});
    for (std::int64_t k = 1; k <= o.count; ++k) {
        const GaussPoint p = gauss_point(k);
        csv.add({std::to_string(k), std::to_string(p.re), std::to_string(p.im)});
    }
    e.write_table("spiral", csv);
    e.results()["count"] = o.count;
    return e.finish();
}

// ---------------------------------------------------------------------------
// slice

namespace {

void check_slice(RunEmitter& e, const std::string& prefix, Cx z0, int n,
                 const EpsilonSchedule& sched, const SliceSet& s) {
    const auto size = static_cast<std::size_t>(1) << n;
    e.invariant(prefix + "size", s.points.size() == size,
                std::to_string(s.points.size()) + " points");

    bool negation = true;
    const std::uint64_t mask = (size == 0) ? 0 : (size - 1);
    for (std::uint64_t b = 0; b < size; ++b)
        negation = negation && s.points[b] == -s.points[~b & mask];
    e.invariant(prefix + "negation-symmetry", negation,
                "sign-flipped labels negate the value exactly");

    std::set<std::pair<double, double>> uniq;
    for (const Cx& w : s.points) uniq.emplace(w.real(), w.imag());

    // Sign flips on terms whose amplitude falls below the double-precision
    // resolution of the leading term cannot move the stored value, so deep
    // labels legitimately collide bitwise.  Separation is only checkable
    // over the prefix of resolvable bits.
    const double lead = sched.epsilon(1) * std::abs(sqrt_branch(z0, 1));
    const double floor = 8 * std::numeric_limits<double>::epsilon() * lead;
    int resolvable = 0;
    for (int k = 1; k <= n; ++k) {
        if (sched.epsilon(k) * std::abs(sqrt_branch(z0, k)) <= floor) break;
        resolvable = k;
    }
    std::set<std::pair<double, double>> head;
    const std::uint64_t head_count = std::uint64_t{1} << resolvable;
    for (std::uint64_t b = 0; b < head_count; ++b)
        head.emplace(s.points[b].real(), s.points[b].imag());
    e.invariant(prefix + "distinct", head.size() == head_count,
                std::to_string(uniq.size()) + " distinct values; first " +
                    std::to_string(resolvable) + " label bits fully separated");

    const ClusterCertificate cert = cluster_certificate(z0, n, sched);
    e.invariant(prefix + "cluster-certificate", cert.valid,
                "worst depth " + std::to_string(cert.worst_depth) + ", margin " +
                    format_double(cert.margin));
}

} // namespace

int run_slice(const GlobalConfig& g, const SliceOpts& o) {
    json cfg = global_json(g);
    cfg["z0"] = o.z0;
    cfg["n"] = o.n;
    RunEmitter e(g, "slice", cfg);

    const Cx z0 = parse_complex(o.z0, "slice --z0");
    const PotentialParams params = make_params(g);
    const SliceSet s = slice_points(z0, o.n, params.sched);
    check_slice(e, "", z0, o.n, params.sched, s);

    CsvSink csv = e.make_table({"bits", "re", "im"});
    for (std::uint64_t b = 0; b < s.points.size(); ++b)
        csv.add({std::to_string(b), format_double(s.points[b].real()),
                 format_double(s.points[b].imag())});
    e.write_table("slice", csv);
    e.results()["z0"] = json_cx(z0);
    e.results()["n"] = o.n;
    e.results()["points"] = s.points.size();
    return e.finish();
}

// ---------------------------------------------------------------------------
// phi-map

namespace {

void check_oracle_agreement(RunEmitter& e, const std::string& prefix,
                            const PotentialParams& params, int points,
                            std::uint64_t seed) {
    const CounterRng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < points; ++i) {
        const Cx z(rng.uniform(i, 0, -2.0, 2.0), rng.uniform(i, 1, -2.0, 2.0));
        const Cx w(rng.uniform(i, 2, -1.5, 1.5), rng.uniform(i, 3, -1.5, 1.5));
        const double a = phi_n(z, w, params.level, params.sched, PhiMode::Recursive);
        const double b = phi_n(z, w, params.level, params.sched, PhiMode::DirectOracle);
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
    }
    e.invariant(prefix + "oracle-agreement", worst <= 1e-9,
                "recursive vs direct, worst rel " + format_double(worst));
}

} // namespace

int run_phi_map(const GlobalConfig& g, const PhiMapOpts& o) {
    json cfg = global_json(g);
    cfg["mode"] = o.mode;
    cfg["plane"] = o.plane;
    cfg["fix"] = o.fix;
    cfg["window"] = o.window;
    cfg["px"] = o.px;
    cfg["py"] = o.py;
    RunEmitter e(g, "phi-map", cfg);

    if (o.mode != "phi" && o.mode != "phi-tilde")
        throw ConfigError("phi-map --mode: expected 'phi' or 'phi-tilde'");
    if (o.plane != "z" && o.plane != "w")
        throw ConfigError("phi-map --plane: expected 'z' or 'w'");
    if (o.window.size() != 4)
        throw ConfigError("phi-map --window: expected lo_re,lo_im,hi_re,hi_im");
    if (!(o.window[0] < o.window[2]) || !(o.window[1] < o.window[3]))
        throw ConfigError("phi-map --window: degenerate");
    if (o.px < 2 || o.py < 2 || o.px > 4096 || o.py > 4096)
        throw ConfigError("phi-map --px/--py: expected 2..4096");

    const Cx fix = parse_complex(o.fix, "phi-map --fix");
    const PotentialParams params = make_params(g);

    std::vector<double> values(static_cast<std::size_t>(o.px) * o.py);
    std::int64_t nonfinite = 0;
    for (int iy = 0; iy < o.py; ++iy) {
        // top row carries the largest imaginary part
        const double im = o.window[3] - (o.window[3] - o.window[1]) * (iy + 0.5) / o.py;
        for (int ix = 0; ix < o.px; ++ix) {
            const double re =
                o.window[0] + (o.window[2] - o.window[0]) * (ix + 0.5) / o.px;
            const Cx moving(re, im);
            const Cx z = o.plane == "z" ? moving : fix;
            const Cx w = o.plane == "z" ? fix : moving;
            double v;
            try {
                v = o.mode == "phi" ? phi_n(z, w, params.level, params.sched)
                                    : phi_tilde(z, w, params);
            } catch (const Error&) {
                v = std::numeric_limits<double>::quiet_NaN();
            }
            if (!std::isfinite(v)) ++nonfinite;
            values[static_cast<std::size_t>(iy) * o.px + ix] = v;
        }
    }

    const HeatmapScale scale = finite_range(values);
    const Pgm16 img = heatmap(values, o.px, o.py, scale);
    const json sidecar{{"command", "phi-map"},    {"config_hash", e.config_hash()},
                       {"vmin", scale.vmin},      {"vmax", scale.vmax},
                       {"width", o.px},           {"height", o.py},
                       {"nonfinite", nonfinite},  {"mode", o.mode},
                       {"plane", o.plane},        {"window", o.window},
                       {"row0_im", o.window[3]}};
    e.write_image("phi-map", img, sidecar);

    e.invariant("scale-finite", std::isfinite(scale.vmin) && scale.vmin < scale.vmax,
                "[" + format_double(scale.vmin) + ", " + format_double(scale.vmax) + "]");
    if (o.mode == "phi" && params.level <= 14)
        check_oracle_agreement(e, "", params, 16, g.seed);

    e.results()["vmin"] = scale.vmin;
    e.results()["vmax"] = scale.vmax;
    e.results()["nonfinite"] = nonfinite;
    return e.finish();
}

// ---------------------------------------------------------------------------
// levi

namespace {

struct LeviSweep {
    std::int64_t tested = 0;
    std::int64_t passed = 0;
    std::int64_t guarded = 0; // rejected by the near-set step guard
    std::vector<std::pair<Point, LeviResult>> rows;
};

LeviSweep levi_sweep(const PotentialParams& params, const Box4& box,
                     std::int64_t samples, double h, double tol, std::uint64_t seed) {
    LeviSweep out;
    const CounterRng rng(seed);
    const std::int64_t max_draws = std::max<std::int64_t>(samples * 2000, 1000000);
    for (std::int64_t i = 0; i < max_draws && out.tested < samples; ++i) {
        const Point p{{rng.uniform(i, 0, box.lo[0], box.hi[0]),
                       rng.uniform(i, 1, box.lo[1], box.hi[1])},
                      {rng.uniform(i, 2, box.lo[2], box.hi[2]),
                       rng.uniform(i, 3, box.lo[3], box.hi[3])}};
        try {
            if (classify_point(p.z, p.w, params) != PointClass::InA) continue;
            const LeviResult r = levi_check(p, params, h, tol);
            ++out.tested;
            out.passed += r.pass;
            out.rows.emplace_back(p, r);
        } catch (const TooCloseToVariety&) {
            ++out.guarded;
        }
    }
    if (out.tested < samples)
        throw EmptySet("levi: admissible points exhausted before reaching the sample "
                       "count; enlarge the box or lower --samples");
    return out;
}

} // namespace

int run_levi(const GlobalConfig& g, const LeviOpts& o) {
    json cfg = global_json(g);
    cfg["samples"] = o.samples;
    cfg["box"] = o.box;
    cfg["h"] = o.h;
    cfg["tol"] = o.tol;
    RunEmitter e(g, "levi", cfg);

    if (o.samples < 1) throw ConfigError("levi --samples: need at least 1");
    const Box4 box = parse_box(o.box, "levi --box");
    const PotentialParams params = make_params(g);

    const LeviSweep sweep = levi_sweep(params, box, o.samples, o.h, o.tol, g.seed);
    const double frac = static_cast<double>(sweep.passed) / sweep.tested;

    CsvSink csv = e.make_table({"z_re", "z_im", "w_re", "w_im", "min_eig",
                                "bound", "dist_bound", "class", "pass"});
    for (const auto& [p, r] : sweep.rows)
        csv.add({format_double(p.z.real()), format_double(p.z.imag()),
                 format_double(p.w.real()), format_double(p.w.imag()),
                 format_double(r.min_eig), format_double(r.bound),
                 format_double(r.dist_bound), std::string(to_string(r.cls)),
                 r.pass ? "1" : "0"});
    e.write_table("levi", csv);

    e.invariant("pass-fraction", frac >= 0.99,
                pass_ratio(sweep.passed, sweep.tested) + " = " + format_double(frac));
    e.results()["tested"] = sweep.tested;
    e.results()["passed"] = sweep.passed;
    e.results()["pass_fraction"] = frac;
    e.results()["step_guard_rejections"] = sweep.guarded;
    return e.finish();
}

// ---------------------------------------------------------------------------
// lelong

namespace {

struct LelongProbe {
    Cx z0;
    PotentialParams params;
    ScalarField field;
    double expected = 0.0; // bare probe only
};

// Center far enough out that the off-sheet factors of the level-3 product
// balance to O(1), leaving the density ratio clean at small radii.
LelongProbe bare_probe(const GlobalConfig& g, const std::string& z0_text, int level) {
    LelongProbe p;
    p.params = make_params(g);
    p.params.level = level;
    p.z0 = z0_text.empty() ? 100.86 * Cx(0.96, 0.28)
                           : parse_complex(z0_text, "lelong --z0");
    const int n = level;
    const EpsilonSchedule sched = p.params.sched;
    p.field = [n, sched](const Point& zeta) {
        return phi_n(zeta.z, zeta.w, n, sched);
    };
    p.expected = std::pow(2.0, -n);
    return p;
}

// Near-origin center with the three branch amplitudes equalized; the head is
// derived from the center so the probe stays a one-parameter family.
LelongProbe rescaled_probe(const GlobalConfig& g, const std::string& z0_text, int level) {
    LelongProbe p;
    p.z0 = z0_text.empty() ? std::sqrt(0.74) * std::polar(1.0, -2.28)
                           : parse_complex(z0_text, "lelong --z0");
    std::vector<double> head;
    head.reserve(static_cast<std::size_t>(level));
    for (int k = 1; k <= level; ++k)
        head.push_back(0.01 / std::sqrt(std::abs(p.z0 - pole(k))));
    if (!std::is_sorted(head.rbegin(), head.rend()) ||
        std::adjacent_find(head.begin(), head.end()) != head.end())
        throw ConfigError("lelong --z0: equalized amplitudes are not strictly "
                          "decreasing at this center; move it closer to the first pole");
    GlobalConfig gg = g;
    gg.eps_head = head;
    gg.eps_ratio = 0.5;
    gg.level = level;
    p.params = make_params(gg);
    const PotentialParams params = p.params;
    p.field = [params](const Point& zeta) { return phi_tilde(zeta.z, zeta.w, params); };
    return p;
}

} // namespace

int run_lelong(const GlobalConfig& g, const LelongOpts& o) {
    json cfg = global_json(g);
    cfg["probe"] = o.probe;
    cfg["z0"] = o.z0;
    cfg["probe_level"] = o.level;
    cfg["radii"] = o.radii;
    cfg["directions"] = o.directions;
    RunEmitter e(g, "lelong", cfg);

    if (o.probe != "bare" && o.probe != "rescaled")
        throw ConfigError("lelong --probe: expected 'bare' or 'rescaled'");
    if (o.radii.empty()) throw ConfigError("lelong --radii: need at least one radius");

    const LelongProbe probe = o.probe == "bare" ? bare_probe(g, o.z0, o.level)
                                                : rescaled_probe(g, o.z0, o.level);
    const Cx w0 = sheet_value(probe.z0, SheetLabel{0, probe.params.level},
                              probe.params.sched);
    const RatioProfile prof = lelong_ratio_profile(probe.field, {probe.z0, w0}, o.radii,
                                                   o.directions, g.seed);

    CsvSink csv = e.make_table({"radius", "ratio", "skipped"});
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        csv.add({format_double(prof.radii[i]), format_double(prof.ratios[i]),
                 std::to_string(prof.errors[i])});
    e.write_table("lelong", csv);

    const double last = prof.ratios.back();
    if (o.probe == "bare") {
        e.invariant("density-ratio", std::abs(last - probe.expected) <= 0.1 * probe.expected,
                    format_double(last) + " vs " + format_double(probe.expected) +
                        " (10% window)");
    } else {
        e.invariant("ratio-small", last < 0.05, format_double(last) + " < 0.05");
        if (prof.ratios.size() >= 2)
            e.invariant("ratio-shrinking", last < prof.ratios.front(),
                        format_double(last) + " < " + format_double(prof.ratios.front()));
    }
    e.results()["z0"] = json_cx(probe.z0);
    e.results()["w0"] = json_cx(w0);
    e.results()["radii"] = prof.radii;
    e.results()["ratios"] = prof.ratios;
    return e.finish();
}

// ---------------------------------------------------------------------------
// volume

int run_volume(const GlobalConfig& g, const VolumeOpts& o) {
    json cfg = global_json(g);
    cfg["region"] = o.region;
    cfg["radius"] = o.radius;
    cfg["box"] = o.box;
    cfg["N"] = o.n;
    RunEmitter e(g, "volume", cfg);

    if (o.region != "ball4" && o.region != "A" && o.region != "U")
        throw ConfigError("volume --region: expected 'ball4', 'A' or 'U'");
    if (!(o.n >= 1)) throw ConfigError("volume --N: need at least 1 sample");
    const auto n = static_cast<std::int64_t>(std::llround(o.n));

    Box4 box;
    if (!o.box.empty()) {
        box = parse_box(o.box, "volume --box");
    } else if (o.region == "ball4") {
        box = Box4::cube(o.radius);
    } else {
        box = Box4{{-0.05, -0.05, -0.1, -0.1}, {0.05, 0.05, 0.1, 0.1}};
    }

    const PotentialParams params = make_params(g);
    std::function<bool(const Point&)> pred;
    if (o.region == "ball4") {
        if (!(o.radius > 0)) throw ConfigError("volume --radius: must be positive");
        const double r2 = o.radius * o.radius;
        pred = [r2](const Point& p) { return norm2(p) <= r2; };
    } else if (o.region == "A") {
        pred = [params](const Point& p) {
            return classify_point(p.z, p.w, params) == PointClass::InA;
        };
    } else {
        pred = [params](const Point& p) {
            const PointClass c = classify_point(p.z, p.w, params);
            return c == PointClass::InA || c == PointClass::InU_NotA;
        };
    }

    const VolumeEstimate est = mc_volume(pred, box, n, g.seed, g.threads);

    CsvSink csv = e.make_table(
        {"region", "samples", "estimate", "stderr", "hits", "exceptions"});
    csv.add({o.region, std::to_string(est.samples), format_double(est.value),
             format_double(est.stderr_), std::to_string(est.hits),
             std::to_string(est.exceptions)});
    e.write_table("volume", csv);

    if (o.region == "ball4") {
        const double truth = std::numbers::pi * std::numbers::pi / 2.0 *
                             std::pow(o.radius, 4.0);
        e.invariant("ball4-calibration", std::abs(est.value - truth) <= 3.0 * est.stderr_,
                    format_double(est.value) + " vs " + format_double(truth) + " +- 3*" +
                        format_double(est.stderr_));
    }
    e.invariant("exceptions-zero", est.exceptions == 0,
                std::to_string(est.exceptions) + " sampling exceptions");
    e.results()["estimate"] = est.value;
    e.results()["stderr"] = est.stderr_;
    e.results()["hits"] = est.hits;
    e.results()["samples"] = est.samples;
    return e.finish();
}

// ---------------------------------------------------------------------------
// sublevel-decay

int run_sublevel(const GlobalConfig& g, const SublevelOpts& o) {
    json cfg = global_json(g);
    cfg["a"] = o.a;
    cfg["deltas"] = o.deltas;
    cfg["box"] = o.box;
    cfg["N"] = o.n;
    RunEmitter e(g, "sublevel-decay", cfg);

    if (!(o.n >= 1)) throw ConfigError("sublevel-decay --N: need at least 1 sample");
    const auto n = static_cast<std::int64_t>(std::llround(o.n));
    const Box4 box = parse_box(o.box, "sublevel-decay --box");
    const PotentialParams params = make_params(g);

    const std::vector<VolumeEstimate> est =
        sublevel_decay_profile(box, o.a, o.deltas, params, n, g.seed, g.threads);

    CsvSink csv = e.make_table(
        {"delta", "threshold", "estimate", "stderr", "hits", "exceptions"});
    for (std::size_t i = 0; i < est.size(); ++i)
        csv.add({format_double(o.deltas[i]), format_double(-o.a / o.deltas[i]),
                 format_double(est[i].value), format_double(est[i].stderr_),
                 std::to_string(est[i].hits), std::to_string(est[i].exceptions)});
    e.write_table("sublevel-decay", csv);

    bool nested = true;
    for (std::size_t i = 1; i < est.size(); ++i)
        nested = nested && est[i].hits <= est[i - 1].hits;
    e.invariant("counts-nested", nested, "hit counts non-increasing down the ladder");

    bool decay = est.size() >= 2;
    std::string detail;
    for (std::size_t i = 1; i < est.size(); ++i) {
        const double gap = est[i - 1].value - est[i].value;
        const double noise = 3.0 * std::hypot(est[i - 1].stderr_, est[i].stderr_);
        decay = decay && gap > noise;
        if (!detail.empty()) detail += "; ";
        detail += "gap " + format_double(gap) + " vs 3sigma " + format_double(noise);
    }
    e.invariant("strict-decay-3sigma", decay, detail);

    json levels = json::array();
    for (std::size_t i = 0; i < est.size(); ++i)
        levels.push_back(json{{"delta", o.deltas[i]},
                              {"estimate", est[i].value},
                              {"stderr", est[i].stderr_},
                              {"hits", est[i].hits}});
    e.results()["levels"] = levels;
    return e.finish();
}

// ---------------------------------------------------------------------------
// lift

int run_lift(const GlobalConfig& g, const LiftOpts& o) {
    json cfg = global_json(g);
    cfg["kind"] = o.kind;
    cfg["center"] = o.center;
    cfg["radius"] = o.radius;
    cfg["segments"] = o.segments;
    cfg["from"] = o.from;
    cfg["to"] = o.to;
    cfg["start_bits"] = o.start_bits;
    cfg["window_m"] = o.window_m;
    cfg["window_n"] = o.window_n;
    cfg["step_factor"] = o.step_factor;
    RunEmitter e(g, "lift", cfg);

    const LevelWindow window{o.window_m, o.window_n == 0 ? g.level : o.window_n};
    const PotentialParams params = make_params(g);

    PlanarCurve curve;
    if (o.kind == "circle") {
        curve = circle_loop(parse_complex(o.center, "lift --center"), o.radius,
                            o.segments);
    } else if (o.kind == "segment") {
        curve.vertices = {parse_complex(o.from, "lift --from"),
                          parse_complex(o.to, "lift --to")};
    } else {
        throw ConfigError("lift --kind: expected 'circle' or 'segment'");
    }

    LiftOptions opts;
    opts.step_factor = o.step_factor;
    const SheetLabel start{o.start_bits, window.width()};
    const LiftResult r = lift_curve(curve, start, window, params.sched, opts);

    const Cx replay = window_sheet_value(r.end_point.z, r.end_sheet, window.m, window.n,
                                         params.sched);
    const double residual = std::abs(replay - r.end_point.w);
    e.invariant("end-on-variety", residual <= 1e-10,
                "label replay residual " + format_double(residual));
    e.invariant("clearance-positive", r.min_clearance_used > 0.0,
                "min clearance " + format_double(r.min_clearance_used));

    if (o.dump_path) {
        CsvSink csv = e.make_table({"idx", "z_re", "z_im", "w_re", "w_im"});
        for (std::size_t i = 0; i < r.path.size(); ++i)
            csv.add({std::to_string(i), format_double(r.path[i].z.real()),
                     format_double(r.path[i].z.imag()), format_double(r.path[i].w.real()),
                     format_double(r.path[i].w.imag())});
        e.write_table("lift_path", csv);
    }

    e.results()["start_bits"] = o.start_bits;
    e.results()["end_bits"] = r.end_sheet.bits;
    e.results()["flip_mask"] = o.start_bits ^ r.end_sheet.bits;
    e.results()["steps"] = r.steps;
    e.results()["min_clearance"] = r.min_clearance_used;
    e.results()["end_point"] = json{json_cx(r.end_point.z), json_cx(r.end_point.w)};
    return e.finish();
}

// ---------------------------------------------------------------------------
// monodromy

int run_monodromy(const GlobalConfig& g, const MonodromyOpts& o) {
    json cfg = global_json(g);
    cfg["j"] = o.j;
    cfg["base"] = o.base;
    cfg["radius"] = o.radius;
    cfg["window_m"] = o.window_m;
    cfg["window_n"] = o.window_n;
    RunEmitter e(g, "monodromy", cfg);

    const LevelWindow window{o.window_m, o.window_n};
    if (o.j < window.m || o.j > window.n)
        throw ConfigError("monodromy --j: branch index must lie inside the window");
    const PotentialParams params = make_params(g);
    const Cx base = o.base == "auto" ? pole(o.j) + Cx(o.radius, 0.0)
                                     : parse_complex(o.base, "monodromy --base");

    const MonodromyMap m = monodromy_loop(o.j, base, o.radius, window, params.sched);

    const std::uint64_t expected = static_cast<std::uint64_t>(1)
                                   << (o.j - window.m);
    e.invariant("single-generator-flip", m.flip_mask == expected,
                "mask " + std::to_string(m.flip_mask) + ", expected " +
                    std::to_string(expected));
    e.invariant("involution", m.then(m).flip_mask == 0,
                "loop traversed twice restores every sheet");

    e.results()["j"] = o.j;
    e.results()["flip_mask"] = m.flip_mask;
    e.results()["base"] = json_cx(base);
    return e.finish();
}

// ---------------------------------------------------------------------------
// walk

int run_walk(const GlobalConfig& g, const WalkOpts& o) {
    json cfg = global_json(g);
    cfg["n"] = o.n;
    cfg["p_z"] = o.p_z;
    cfg["q_z"] = o.q_z;
    cfg["p_bits"] = o.p_bits;
    cfg["q_bits"] = o.q_bits;
    cfg["big_level"] = o.big_level;
    RunEmitter e(g, "walk", cfg);

    WalkParams params;
    params.big_level = o.big_level;
    params.sched = make_params(g).sched;

    const CounterRng rng(g.seed);
    const auto bits = [&](std::int64_t requested, int dim) -> std::uint64_t {
        if (requested >= 0) return static_cast<std::uint64_t>(requested);
        return draw_bits(rng, 0, dim, o.big_level);
    };
    const Cx pz = parse_complex(o.p_z, "walk --p-z");
    const Cx qz = parse_complex(o.q_z, "walk --q-z");
    const std::uint64_t pb = bits(o.p_bits, 0);
    const std::uint64_t qb = bits(o.q_bits, 1);

    const Point p{pz, sheet_value(pz, SheetLabel{pb, o.big_level}, params.sched)};
    const Point q{qz, sheet_value(qz, SheetLabel{qb, o.big_level}, params.sched)};
    const WalkResult r = walk_to_point(p, q, o.n, params);

    const double target = std::pow(2.0, 1 - o.n);
    e.invariant("error-below-target", r.error < target,
                format_double(r.error) + " < " + format_double(target));
    e.invariant("error-within-bound", r.error <= r.error_bound,
                "a-priori bound " + format_double(r.error_bound));

    e.results()["error"] = r.error;
    e.results()["error_bound"] = r.error_bound;
    e.results()["p_bits"] = pb;
    e.results()["q_bits"] = qb;
    e.results()["head_level"] = r.trace.head_level;
    e.results()["tail_budget"] = r.trace.tail_budget;
    e.results()["lift_steps"] = r.trace.lift_steps;
    e.results()["route_vertices"] = r.trace.route.vertices.size();
    e.results()["q_star"] = json{json_cx(r.q_star.z), json_cx(r.q_star.w)};
    return e.finish();
}

// ---------------------------------------------------------------------------
// disk-probe

namespace {

Point parse_direction(const std::string& text) {
    if (text == "w") return {Cx(0, 0), Cx(1, 0)};
    if (text == "z") return {Cx(1, 0), Cx(0, 0)};
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("disk-probe --dir: expected 'w', 'z' or 'a+bi,c+di'");
    Point dir{parse_complex(text.substr(0, comma), "disk-probe --dir"),
              parse_complex(text.substr(comma + 1), "disk-probe --dir")};
    const double n = std::sqrt(norm2(dir));
    if (!(n > 0)) throw ConfigError("disk-probe --dir: zero direction");
    dir.z /= n;
    dir.w /= n;
    return dir;
}

} // namespace

int run_disk_probe(const GlobalConfig& g, const DiskProbeOpts& o) {
    json cfg = global_json(g);
    cfg["mode"] = o.mode;
    cfg["center_z"] = o.center_z;
    cfg["center_bits"] = o.center_bits;
    cfg["dir"] = o.dir;
    cfg["t"] = o.t;
    cfg["centers"] = o.centers;
    cfg["box"] = o.box;
    cfg["angular"] = o.angular;
    cfg["tol"] = o.tol;
    RunEmitter e(g, "disk-probe", cfg);

    const PotentialParams params = make_params(g);

    if (o.mode == "single") {
        const Cx z = parse_complex(o.center_z, "disk-probe --center-z");
        const Point center{z, sheet_value(z, SheetLabel{o.center_bits, params.level},
                                          params.sched)};
        const DiskProbeResult r = affine_disk_radius(center, parse_direction(o.dir), o.t,
                                                     params, o.angular, o.tol);
        e.invariant("radius-positive", r.radius > 0, format_double(r.radius));
        e.results()["radius"] = r.radius;
        e.results()["capped"] = r.capped;
        if (r.violating_angle)
            e.results()["violating_angle"] = *r.violating_angle;
    } else if (o.mode == "search") {
        R0SearchOptions opts;
        opts.box = parse_box(o.box, "disk-probe --box");
        opts.angular_samples = o.angular;
        opts.tol = o.tol;
        const EmpiricalR0 r = empirical_r0(o.t, params, o.centers, g.seed, opts);
        e.invariant("r0-finite", std::isfinite(r.r0_hat) && !r.any_capped,
                    "r0 " + format_double(r.r0_hat) +
                        (r.any_capped ? " (capped probes!)" : ""));
        e.results()["r0_hat"] = r.r0_hat;
        e.results()["probes"] = r.probes;
        e.results()["argmax_center"] =
            json{json_cx(r.argmax.center.z), json_cx(r.argmax.center.w)};
        e.results()["argmax_radius"] = r.argmax.radius;
    } else {
        throw ConfigError("disk-probe --mode: expected 'single' or 'search'");
    }
    return e.finish();
}

// ---------------------------------------------------------------------------
// green-cert

int run_green_cert(const GlobalConfig& g, const GreenCertOpts& o) {
    json cfg = global_json(g);
    cfg["delta"] = o.delta;
    cfg["zk_z"] = o.zk_z;
    cfg["zk_w"] = o.zk_w;
    cfg["samples"] = o.samples;
    cfg["h"] = o.h;
    cfg["tol"] = o.tol;
    RunEmitter e(g, "green-cert", cfg);

    if (!(o.samples >= 1)) throw ConfigError("green-cert --samples: need at least 1");
    const auto samples = static_cast<std::int64_t>(std::llround(o.samples));
    const Point zk{parse_complex(o.zk_z, "green-cert --zk-z"),
                   parse_complex(o.zk_w, "green-cert --zk-w")};
    const PotentialParams params = make_params(g);

    PshCertificateOptions opts;
    opts.seed = g.seed;
    const PshCertificate cert =
        psh_certificate(o.delta, zk, params, samples, o.h, o.tol, opts);

    CsvSink csv = e.make_table({"samples", "passes", "pass_fraction", "c1",
                                "stencil_errors", "draws"});
    csv.add({std::to_string(cert.samples), std::to_string(cert.passes),
             format_double(cert.pass_fraction), format_double(cert.c1),
             std::to_string(cert.stencil_errors), std::to_string(cert.draws)});
    e.write_table("green-cert", csv);

    if (!cert.failures.empty()) {
        CsvSink fails = e.make_table({"z_re", "z_im", "w_re", "w_im", "min_eig",
                                      "required", "dist_bound"});
        for (const PshFailure& f : cert.failures)
            fails.add({format_double(f.zeta.z.real()), format_double(f.zeta.z.imag()),
                       format_double(f.zeta.w.real()), format_double(f.zeta.w.imag()),
                       format_double(f.min_eig), format_double(f.required),
                       format_double(f.dist_bound)});
        e.write_table("green-cert_failures", fails);
    }

    e.invariant("pass-fraction", cert.pass_fraction >= 0.99,
                pass_ratio(cert.passes, cert.samples) + " = " +
                    format_double(cert.pass_fraction));
    e.results()["pass_fraction"] = cert.pass_fraction;
    e.results()["c1"] = cert.c1;
    e.results()["samples"] = cert.samples;
    e.results()["stencil_errors"] = cert.stencil_errors;
    e.results()["draws"] = cert.draws;
    e.results()["failures_recorded"] = cert.failures.size();
    return e.finish();
}

// ---------------------------------------------------------------------------
// selftest batteries: the per-module invariant suites at reduced scale

namespace {

void battery_spiral(RunEmitter& e, const std::string& p) { check_spiral(e, p, 20000); }

void battery_slice(RunEmitter& e, const std::string& p) {
    const EpsilonSchedule sched = EpsilonSchedule::exponential();
    const Cx z0(0.5, 0.5);
    check_slice(e, p, z0, 8, sched, slice_points(z0, 8, sched));
    const DecompositionCheck d = decompose_levels(Cx(0.37, 0.21), 8, 3, sched);
    e.invariant(p + "window-decomposition", d.exact(),
                "max discrepancy " + format_double(d.max_discrepancy));
}

void battery_phi_map(RunEmitter& e, const std::string& p) {
    GlobalConfig g;
    check_oracle_agreement(e, p, make_params(g), 50, 1);
    const double inf = std::numeric_limits<double>::infinity();
    const Pgm16 img = heatmap({0.0, 1.0, -inf, std::nan("")}, 2, 2, {0.0, 1.0});
    const bool ok = img.pixels == std::vector<std::uint16_t>{0, 65535, 0, 0};
    e.invariant(p + "nonfinite-pixels", ok, "-inf and NaN map to black");
}

void battery_levi(RunEmitter& e, const std::string& p) {
    GlobalConfig g;
    const Box4 box{{-0.05, -0.05, -0.1, -0.1}, {0.05, 0.05, 0.1, 0.1}};
    const LeviSweep s = levi_sweep(make_params(g), box, 100, 1e-4, 1e-2, 1);
    e.invariant(p + "pass-fraction",
                static_cast<double>(s.passed) / s.tested >= 0.99,
                pass_ratio(s.passed, s.tested));
}

void battery_lelong(RunEmitter& e, const std::string& p) {
    // Calibration: the log-distance field has unit density ratio at any center.
    const Point zeta0{Cx(0.3, 0.1), Cx(0.2, -0.4)};
    const ScalarField logdist = [zeta0](const Point& zeta) {
        return std::log(dist(zeta, zeta0));
    };
    const RatioProfile cal = lelong_ratio_profile(logdist, zeta0, {1e-3, 1e-5}, 16, 1);
    const bool cal_ok = std::abs(cal.ratios[0] - 1.0) < 0.02 &&
                        std::abs(cal.ratios[1] - 1.0) < 0.02;
    e.invariant(p + "log-distance-calibration", cal_ok,
                format_double(cal.ratios[0]) + ", " + format_double(cal.ratios[1]));

    GlobalConfig g;
    const LelongProbe probe = bare_probe(g, "", 3);
    const Cx w0 = sheet_value(probe.z0, SheetLabel{0, 3}, probe.params.sched);
    const RatioProfile prof =
        lelong_ratio_profile(probe.field, {probe.z0, w0}, {1e-2, 1e-6}, 32, 1);
    e.invariant(p + "density-ratio",
                std::abs(prof.ratios.back() - 0.125) <= 0.0125,
                format_double(prof.ratios.back()) + " vs 0.125");
}

void battery_volume(RunEmitter& e, const std::string& p) {
    const auto pred = [](const Point& q) { return norm2(q) <= 1.0; };
    const Box4 box = Box4::cube(1.0);
    const VolumeEstimate a = mc_volume(pred, box, 100000, 1);
    const double truth = std::numbers::pi * std::numbers::pi / 2.0;
    e.invariant(p + "ball4-calibration", std::abs(a.value - truth) <= 5.0 * a.stderr_,
                format_double(a.value) + " vs " + format_double(truth));
    const VolumeEstimate b = mc_volume(pred, box, 100000, 1);
    e.invariant(p + "deterministic-rerun", a.value == b.value && a.hits == b.hits,
                "bitwise equal on same seed");
    const VolumeEstimate c = mc_volume(pred, box, 100000, 1, 4);
    e.invariant(p + "thread-invariance", a.value == c.value && a.hits == c.hits,
                "1 vs 4 threads bitwise equal");
}

void battery_sublevel(RunEmitter& e, const std::string& p) {
    GlobalConfig g;
    const auto est = sublevel_decay_profile(Box4::cube(2.0), 1.0, {1.0, 0.5, 0.25, 0.125},
                                            make_params(g), 20000, 1);
    bool nested = true;
    for (std::size_t i = 1; i < est.size(); ++i)
        nested = nested && est[i].hits <= est[i - 1].hits;
    e.invariant(p + "counts-nested", nested, "hit counts non-increasing");
}

void battery_lift(RunEmitter& e, const std::string& p) {
    const EpsilonSchedule sched = EpsilonSchedule::exponential();
    const LevelWindow window{1, 6};
    const PlanarCurve loop = circle_loop(Cx(0, 0), 0.3, 48);
    const LiftResult r = lift_curve(loop, SheetLabel{0, 6}, window, sched);
    e.invariant(p + "loop-flips-branch", r.end_sheet.bits == 1,
                "end bits " + std::to_string(r.end_sheet.bits));

    LiftOptions fine;
    fine.step_factor = 0.125;
    const LiftResult r2 = lift_curve(loop, SheetLabel{0, 6}, window, sched, fine);
    e.invariant(p + "step-halving-stable", r2.end_sheet.bits == r.end_sheet.bits,
                "same end sheet at half step");

    PlanarCurve seg;
    seg.vertices = {Cx(0.5, 0.5), Cx(2.3, -0.7)};
    const LiftResult r3 = lift_curve(seg, SheetLabel{5, 6}, window, sched);
    const Cx replay = window_sheet_value(r3.end_point.z, r3.end_sheet, 1, 6, sched);
    e.invariant(p + "end-on-variety", replay == r3.end_point.w,
                "label replay matches exactly");
}

void battery_monodromy(RunEmitter& e, const std::string& p) {
    const EpsilonSchedule sched = EpsilonSchedule::exponential();
    const LevelWindow window{1, 6};
    bool masks = true;
    MonodromyMap m1;
    m1.window = window;
    for (std::int64_t j = 1; j <= 3; ++j) {
        const MonodromyMap m =
            monodromy_loop(j, pole(j) + Cx(0.3, 0.0), 0.3, window, sched);
        masks = masks && m.flip_mask == (static_cast<std::uint64_t>(1) << (j - 1));
        m1 = m1.then(m);
    }
    e.invariant(p + "generator-flips", masks, "loops around a_1..a_3");
    e.invariant(p + "xor-composition", m1.flip_mask == 0b111,
                "composed mask " + std::to_string(m1.flip_mask));
    const MonodromyMap m = monodromy_loop(2, pole(2) + Cx(0.3, 0.0), 0.3, window, sched);
    e.invariant(p + "involution", m.then(m).flip_mask == 0, "double loop is identity");
}

void battery_walk(RunEmitter& e, const std::string& p) {
    WalkParams params;
    const Cx pz(0.5, 0.5), qz(2.3, -0.7);
    const Point pp{pz, sheet_value(pz, SheetLabel{41389, 16}, params.sched)};
    const Point qq{qz, sheet_value(qz, SheetLabel{5231, 16}, params.sched)};
    const WalkResult r = walk_to_point(pp, qq, 4, params);
    e.invariant(p + "error-below-target", r.error < 0.125,
                format_double(r.error) + " < 0.125");
    e.invariant(p + "error-within-bound", r.error <= r.error_bound,
                "bound " + format_double(r.error_bound));
}

void battery_disk(RunEmitter& e, const std::string& p) {
    GlobalConfig g;
    const PotentialParams params = make_params(g);
    const Cx z0(0.3, 0.2);
    const Point center{z0, sheet_value(z0, SheetLabel{0, params.level}, params.sched)};
    const Point dir{Cx(0, 0), Cx(1, 0)};
    const DiskProbeResult a = affine_disk_radius(center, dir, -1.0, params, 32, 1e-3);
    const DiskProbeResult b = affine_disk_radius(center, dir, -2.0, params, 32, 1e-3);
    e.invariant(p + "radius-positive", a.radius > 0, format_double(a.radius));
    e.invariant(p + "monotone-in-t", a.radius > b.radius,
                format_double(a.radius) + " > " + format_double(b.radius));
}

void battery_green(RunEmitter& e, const std::string& p) {
    e.invariant(p + "cutoff-plateaus",
                chi_radial(0.3) == 1.0 && chi_radial(1.2) == 0.0,
                "inner 1, outer 0, exactly");

    GlobalConfig g;
    const PotentialParams params = make_params(g);
    const Point zk{Cx(0.95, 0), Cx(0, 0)};
    const Point far{Cx(-0.3, 0.05), Cx(0.1, -0.05)}; // more than the cutoff away
    const double u = u_delta_k(far, 0.1, zk, params);
    const double base = 0.1 * phi_tilde(far.z, far.w, params);
    e.invariant(p + "pure-outside-cutoff", u == base,
                "perturbation vanishes exactly beyond the outer radius");

    PshCertificateOptions opts;
    opts.seed = 1;
    const PshCertificate cert = psh_certificate(0.1, zk, params, 100, 1e-4, 1e-2, opts);
    e.invariant(p + "pass-fraction", cert.pass_fraction >= 0.95,
                pass_ratio(cert.passes, cert.samples));
}

struct Battery {
    const char* name;
    void (*fn)(RunEmitter&, const std::string&);
};

constexpr Battery kBatteries[] = {
    {"spiral", battery_spiral},   {"slice", battery_slice},
    {"phi-map", battery_phi_map}, {"levi", battery_levi},
    {"lelong", battery_lelong},   {"volume", battery_volume},
    {"sublevel-decay", battery_sublevel}, {"lift", battery_lift},
    {"monodromy", battery_monodromy},     {"walk", battery_walk},
    {"disk-probe", battery_disk},         {"green-cert", battery_green},
};

} // namespace

int run_selftest(const GlobalConfig& g, const std::string& which) {
    const std::string command =
        which == "all" ? std::string("selftest") : which + "-selftest";
    json cfg = global_json(g);
    cfg["which"] = which;
    RunEmitter e(g, command, cfg);

    bool matched = false;
    for (const Battery& b : kBatteries) {
        if (which != "all" && which != b.name) continue;
        matched = true;
        b.fn(e, which == "all" ? std::string(b.name) + "/" : std::string());
    }
    if (!matched) throw ConfigError("selftest: unknown suite '" + which + "'");
    return e.finish();
}

} // namespace pluripot::cli
