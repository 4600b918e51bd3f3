#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pluripot/analysis.hpp"
#include "pluripot/potentials.hpp"

namespace pluripot::cli {

// Options shared by every subcommand; mirrors the flat INI config keys.
struct GlobalConfig {
    std::uint64_t seed = 1;
    int threads = 1;
    int level = 6;
    double lambda = 1.0;           // exponential schedule decay: eps_k = exp(-lambda k^2)
    std::vector<double> eps_head;  // nonempty: custom schedule head overriding lambda
    double eps_ratio = 0.5;        // geometric tail ratio of the custom schedule
    double rho_coeff = 1.0;        // quadratic confinement coefficient
    double rho_tilde_t0 = 1.0;
    double rho_tilde_amplitude = 1.0;
    double t_u = -1.0;
    double t_a = -1.0;
    std::string out_dir = "out";
};

PotentialParams make_params(const GlobalConfig& g);

// Accepts "a+bi", "a-bi", "a", "bi", "i"; throws ConfigError naming `field`.
Cx parse_complex(const std::string& text, const std::string& field);

// Two values lo,hi give the cube [lo,hi]^4; eight give the full box.
Box4 parse_box(const std::vector<double>& values, const std::string& field);

struct SpiralOpts {
    std::int64_t count = 64;
    bool selftest = false;
};

struct SliceOpts {
    std::string z0 = "0.5+0.5i";
    int n = 8;
    bool selftest = false;
};

struct PhiMapOpts {
    std::string mode = "phi";   // phi | phi-tilde
    std::string plane = "z";    // z | w
    std::string fix = "0+0i";   // the coordinate held fixed
    std::vector<double> window{-2.0, -2.0, 2.0, 2.0}; // lo_re, lo_im, hi_re, hi_im
    int px = 256;
    int py = 256;
    bool selftest = false;
};

struct LeviOpts {
    std::int64_t samples = 1000;
    std::vector<double> box{-0.05, 0.05, -0.05, 0.05, -0.1, 0.1, -0.1, 0.1};
    double h = 1e-4;
    double tol = 1e-2;
    bool selftest = false;
};

struct LelongOpts {
    std::string probe = "bare"; // bare | rescaled
    std::string z0;             // empty: the probe's frozen center
    int level = 3;              // probe stage (independent of the global level)
    std::vector<double> radii{1e-2, 1e-6};
    int directions = 32;
    bool selftest = false;
};

struct VolumeOpts {
    std::string region = "ball4"; // ball4 | A | U
    double radius = 1.0;          // ball4 radius
    std::vector<double> box;      // empty: region-specific default
    double n = 1e6;
    bool selftest = false;
};

struct SublevelOpts {
    double a = 1.0;
    std::vector<double> deltas{1.0, 0.5, 0.25, 0.125};
    std::vector<double> box{-2.0, 2.0};
    double n = 1e6;
    bool selftest = false;
};

struct LiftOpts {
    std::string kind = "circle"; // circle | segment
    std::string center = "0+0i";
    double radius = 0.3;
    int segments = 48;
    std::string from = "0.5+0.5i";
    std::string to = "2.3-0.7i";
    std::uint64_t start_bits = 0;
    int window_m = 1;
    int window_n = 0; // 0: use the global level
    double step_factor = 0.25;
    bool dump_path = false;
    bool selftest = false;
};

struct MonodromyOpts {
    std::int64_t j = 1;
    std::string base = "auto"; // auto: pole(j) + radius
    double radius = 0.35;
    int window_m = 1;
    int window_n = 8;
    bool selftest = false;
};

struct WalkOpts {
    int n = 6;
    std::string p_z = "0.5+0.5i";
    std::string q_z = "2.3-0.7i";
    std::int64_t p_bits = -1; // negative: drawn from the seed
    std::int64_t q_bits = -1;
    int big_level = 16;
    bool selftest = false;
};

struct DiskProbeOpts {
    std::string mode = "search"; // search | single
    std::string center_z = "0.3+0.2i";
    std::uint64_t center_bits = 0;
    std::string dir = "w"; // w | z | "a+bi,c+di"
    double t = -1.0;
    int centers = 200;
    std::vector<double> box{-2.0, 2.0};
    int angular = 64;
    double tol = 1e-4;
    bool selftest = false;
};

struct GreenCertOpts {
    double delta = 0.1;
    std::string zk_z = "0.95+0i";
    std::string zk_w = "0+0i";
    double samples = 1000;
    double h = 1e-4;
    double tol = 1e-2;
    bool selftest = false;
};

int run_spiral(const GlobalConfig& g, const SpiralOpts& o);
int run_slice(const GlobalConfig& g, const SliceOpts& o);
int run_phi_map(const GlobalConfig& g, const PhiMapOpts& o);
int run_levi(const GlobalConfig& g, const LeviOpts& o);
int run_lelong(const GlobalConfig& g, const LelongOpts& o);
int run_volume(const GlobalConfig& g, const VolumeOpts& o);
int run_sublevel(const GlobalConfig& g, const SublevelOpts& o);
int run_lift(const GlobalConfig& g, const LiftOpts& o);
int run_monodromy(const GlobalConfig& g, const MonodromyOpts& o);
int run_walk(const GlobalConfig& g, const WalkOpts& o);
int run_disk_probe(const GlobalConfig& g, const DiskProbeOpts& o);
int run_green_cert(const GlobalConfig& g, const GreenCertOpts& o);

// Reduced-scale invariant suites; `which` is a command name or "all".
int run_selftest(const GlobalConfig& g, const std::string& which);

} // namespace pluripot::cli
