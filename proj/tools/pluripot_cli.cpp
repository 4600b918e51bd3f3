// Command-line front end: thin argument layer over commands.cpp.
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "commands.hpp"
#include "pluripot/errors.hpp"

namespace cli = pluripot::cli;

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for a square-root lattice branched set and its "
                 "plurisubharmonic potentials"};
    app.set_config("--config", "", "Read options from an INI-style config file");
    app.require_subcommand(0, 1);
    app.fallthrough();

    cli::GlobalConfig g;
    bool print_config = false;
    app.add_option("--seed", g.seed, "Base seed for every pseudo-random draw")
        ->capture_default_str();
    app.add_option("--threads", g.threads, "Worker cap for the sampling loops")
        ->capture_default_str();
    app.add_option("--level", g.level, "Construction stage n")->capture_default_str();
    app.add_option("--lambda", g.lambda, "Amplitude decay: eps_k = exp(-lambda k^2)")
        ->capture_default_str();
    app.add_option("--eps-head", g.eps_head,
                   "Explicit leading amplitudes (overrides --lambda)")
        ->delimiter(',');
    app.add_option("--eps-ratio", g.eps_ratio,
                   "Geometric tail ratio used with --eps-head")
        ->capture_default_str();
    app.add_option("--rho-coeff", g.rho_coeff, "Quadratic confinement coefficient")
        ->capture_default_str();
    app.add_option("--rho-tilde-t0", g.rho_tilde_t0, "Radial weight blend point")
        ->capture_default_str();
    app.add_option("--rho-tilde-amplitude", g.rho_tilde_amplitude,
                   "Radial weight blend amplitude")
        ->capture_default_str();
    app.add_option("--t-u", g.t_u, "Outer sublevel threshold")->capture_default_str();
    app.add_option("--t-a", g.t_a, "Inner (rescaled) sublevel threshold")
        ->capture_default_str();
    app.add_option("--out", g.out_dir, "Artifact directory")->capture_default_str();
    app.add_flag("--print-config", print_config,
                 "Print every option with its current value and exit");

    int rc = 0;

    // spiral ------------------------------------------------------------
    cli::SpiralOpts spiral;
    CLI::App* c = app.add_subcommand("spiral", "Emit the pole enumeration as CSV");
    c->add_option("--count", spiral.count, "Poles to emit")->capture_default_str();
    c->add_flag("--selftest", spiral.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = spiral.selftest ? cli::run_selftest(g, "spiral") : cli::run_spiral(g, spiral);
    });

    // slice ---------------------------------------------------------------
    cli::SliceOpts slice;
    c = app.add_subcommand("slice", "All 2^n branch values over one base point");
    c->add_option("--z0", slice.z0, "Base point, e.g. 0.5+0.5i")->capture_default_str();
    c->add_option("--n", slice.n, "Stage")->capture_default_str();
    c->add_flag("--selftest", slice.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = slice.selftest ? cli::run_selftest(g, "slice") : cli::run_slice(g, slice);
    });

    // phi-map -------------------------------------------------------------
    cli::PhiMapOpts phimap;
    c = app.add_subcommand("phi-map", "Heatmap of the potential over a window");
    c->add_option("--mode", phimap.mode, "phi | phi-tilde")->capture_default_str();
    c->add_option("--plane", phimap.plane, "Sweep the z or the w coordinate")
        ->capture_default_str();
    c->add_option("--fix", phimap.fix, "The coordinate held fixed")
        ->capture_default_str();
    c->add_option("--window", phimap.window, "lo_re,lo_im,hi_re,hi_im")
        ->delimiter(',');
    c->add_option("--px", phimap.px, "Pixels per row")->capture_default_str();
    c->add_option("--py", phimap.py, "Rows")->capture_default_str();
    c->add_flag("--selftest", phimap.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = phimap.selftest ? cli::run_selftest(g, "phi-map")
                             : cli::run_phi_map(g, phimap);
    });

    // levi ------------------------------------------------------------------
    cli::LeviOpts levi;
    c = app.add_subcommand("levi", "Hessian lower-bound check over admissible samples");
    c->add_option("--samples", levi.samples, "Admissible points to test")
        ->capture_default_str();
    c->add_option("--box", levi.box, "Sample box: lo,hi or eight per-axis values")
        ->delimiter(',');
    c->add_option("--fd-h", levi.h, "Finite-difference step")->capture_default_str();
    c->add_option("--tol", levi.tol, "Eigenvalue slack")->capture_default_str();
    c->add_flag("--selftest", levi.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = levi.selftest ? cli::run_selftest(g, "levi") : cli::run_levi(g, levi);
    });

    // lelong -----------------------------------------------------------------
    cli::LelongOpts lelong;
    c = app.add_subcommand("lelong", "Density ratio of a potential at a set point");
    c->add_option("--probe", lelong.probe, "bare | rescaled")->capture_default_str();
    c->add_option("--z0", lelong.z0, "Probe center (default: frozen per probe)");
    c->add_option("--probe-level", lelong.level, "Stage of the probe potential")
        ->capture_default_str();
    c->add_option("--radii", lelong.radii, "Decreasing radii in (0,1)")->delimiter(',');
    c->add_option("--dirs", lelong.directions, "Random directions per radius")
        ->capture_default_str();
    c->add_flag("--selftest", lelong.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = lelong.selftest ? cli::run_selftest(g, "lelong") : cli::run_lelong(g, lelong);
    });

    // volume -----------------------------------------------------------------
    cli::VolumeOpts volume;
    c = app.add_subcommand("volume", "Monte Carlo 4-volume of a region");
    c->add_option("--region", volume.region, "ball4 | A | U")->capture_default_str();
    c->add_option("--radius", volume.radius, "ball4 radius")->capture_default_str();
    c->add_option("--box", volume.box, "Sample box: lo,hi or eight per-axis values")
        ->delimiter(',');
    c->add_option("--N", volume.n, "Sample count (accepts 1e6 notation)")
        ->capture_default_str();
    c->add_flag("--selftest", volume.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = volume.selftest ? cli::run_selftest(g, "volume") : cli::run_volume(g, volume);
    });

    // sublevel-decay -----------------------------------------------------------
    cli::SublevelOpts sublevel;
    c = app.add_subcommand("sublevel-decay",
                           "Volume ladder of deep rescaled-potential sublevels");
    c->add_option("--a", sublevel.a, "Threshold scale: levels are -a/delta")
        ->capture_default_str();
    c->add_option("--deltas", sublevel.deltas, "Strictly decreasing ladder")
        ->delimiter(',');
    c->add_option("--box", sublevel.box, "Sample box: lo,hi or eight per-axis values")
        ->delimiter(',');
    c->add_option("--N", sublevel.n, "Sample count")->capture_default_str();
    c->add_flag("--selftest", sublevel.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = sublevel.selftest ? cli::run_selftest(g, "sublevel-decay")
                               : cli::run_sublevel(g, sublevel);
    });

    // lift -------------------------------------------------------------------
    cli::LiftOpts lift;
    c = app.add_subcommand("lift", "Continue a branch value along a planar curve");
    c->add_option("--kind", lift.kind, "circle | segment")->capture_default_str();
    c->add_option("--center", lift.center, "Circle center")->capture_default_str();
    c->add_option("--radius", lift.radius, "Circle radius")->capture_default_str();
    c->add_option("--segments", lift.segments, "Circle polygon vertices")
        ->capture_default_str();
    c->add_option("--from", lift.from, "Segment start")->capture_default_str();
    c->add_option("--to", lift.to, "Segment end")->capture_default_str();
    c->add_option("--start-bits", lift.start_bits, "Starting sheet label")
        ->capture_default_str();
    c->add_option("--window-m", lift.window_m, "First branch index")
        ->capture_default_str();
    c->add_option("--window-n", lift.window_n, "Last branch index (0: global level)")
        ->capture_default_str();
    c->add_option("--step-factor", lift.step_factor, "Step as a fraction of clearance")
        ->capture_default_str();
    c->add_flag("--dump-path", lift.dump_path, "Write the traced points as CSV");
    c->add_flag("--selftest", lift.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = lift.selftest ? cli::run_selftest(g, "lift") : cli::run_lift(g, lift);
    });

    // monodromy -----------------------------------------------------------------
    cli::MonodromyOpts monodromy;
    c = app.add_subcommand("monodromy", "Sheet permutation of one loop around a pole");
    c->add_option("--j", monodromy.j, "Pole index")->capture_default_str();
    c->add_option("--base", monodromy.base, "Loop base point or 'auto'")
        ->capture_default_str();
    c->add_option("--radius", monodromy.radius, "Loop radius, must stay below 1/2")
        ->capture_default_str();
    c->add_option("--window-m", monodromy.window_m, "First branch index")
        ->capture_default_str();
    c->add_option("--window-n", monodromy.window_n, "Last branch index")
        ->capture_default_str();
    c->add_flag("--selftest", monodromy.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = monodromy.selftest ? cli::run_selftest(g, "monodromy")
                                : cli::run_monodromy(g, monodromy);
    });

    // walk -------------------------------------------------------------------
    cli::WalkOpts walk;
    c = app.add_subcommand("walk", "Approximate one deep-stage point from another");
    c->add_option("--n", walk.n, "Accuracy stage: error must fall below 2^(1-n)")
        ->capture_default_str();
    c->add_option("--p-z", walk.p_z, "Start base point")->capture_default_str();
    c->add_option("--q-z", walk.q_z, "Target base point")->capture_default_str();
    c->add_option("--p-bits", walk.p_bits, "Start sheet label (-1: draw from seed)")
        ->capture_default_str();
    c->add_option("--q-bits", walk.q_bits, "Target sheet label (-1: draw from seed)")
        ->capture_default_str();
    c->add_option("--big-level", walk.big_level, "Stage carrying the endpoints")
        ->capture_default_str();
    c->add_flag("--selftest", walk.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = walk.selftest ? cli::run_selftest(g, "walk") : cli::run_walk(g, walk);
    });

    // disk-probe ----------------------------------------------------------------
    cli::DiskProbeOpts disk;
    c = app.add_subcommand("disk-probe",
                           "Largest affine disk inside a sublevel region");
    c->add_option("--mode", disk.mode, "search | single")->capture_default_str();
    c->add_option("--center-z", disk.center_z, "Single-probe base point")
        ->capture_default_str();
    c->add_option("--center-bits", disk.center_bits, "Single-probe sheet label")
        ->capture_default_str();
    c->add_option("--dir", disk.dir, "w | z | a+bi,c+di")->capture_default_str();
    c->add_option("--t", disk.t, "Sublevel threshold")->capture_default_str();
    c->add_option("--centers", disk.centers, "Search probe count")
        ->capture_default_str();
    c->add_option("--box", disk.box, "Search box: lo,hi or eight per-axis values")
        ->delimiter(',');
    c->add_option("--angular", disk.angular, "Boundary samples per ring")
        ->capture_default_str();
    c->add_option("--tol", disk.tol, "Radius bisection tolerance")
        ->capture_default_str();
    c->add_flag("--selftest", disk.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = disk.selftest ? cli::run_selftest(g, "disk-probe")
                           : cli::run_disk_probe(g, disk);
    });

    // green-cert -----------------------------------------------------------------
    cli::GreenCertOpts green;
    c = app.add_subcommand("green-cert",
                           "Curvature certificate for the log-pole perturbation");
    c->add_option("--delta", green.delta, "Perturbation weight")->capture_default_str();
    c->add_option("--zk-z", green.zk_z, "Pole base point")->capture_default_str();
    c->add_option("--zk-w", green.zk_w, "Pole fiber point")->capture_default_str();
    c->add_option("--samples", green.samples, "Admissible sample count")
        ->capture_default_str();
    c->add_option("--fd-h", green.h, "Finite-difference step")->capture_default_str();
    c->add_option("--tol", green.tol, "Eigenvalue slack")->capture_default_str();
    c->add_flag("--selftest", green.selftest, "Run the reduced invariant suite");
    c->callback([&] {
        rc = green.selftest ? cli::run_selftest(g, "green-cert")
                            : cli::run_green_cert(g, green);
    });

    // selftest -----------------------------------------------------------------
    std::string selftest_only = "all";
    c = app.add_subcommand("selftest", "Run every reduced invariant suite");
    c->add_option("--only", selftest_only, "Restrict to one command's suite")
        ->capture_default_str();
    c->callback([&] { rc = cli::run_selftest(g, selftest_only); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const pluripot::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const pluripot::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    if (print_config) {
        std::cout << app.config_to_str(true, true);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 2;
    }
    return rc;
}
