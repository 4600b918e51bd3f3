// Microbenchmarks for the hot paths: the two potential evaluation routes,
// slice enumeration, sheet sums, curve lifting, finite-difference Hessians
// and Monte Carlo volume scans.  Numbers here guide level/sample budget
// choices in the tool defaults; they assert nothing.

#include <benchmark/benchmark.h>

#include "pluripot/analysis.hpp"
#include "pluripot/continuation.hpp"
#include "pluripot/lattice.hpp"
#include "pluripot/potentials.hpp"
#include "pluripot/wermer.hpp"

using namespace pluripot;

namespace {

const EpsilonSchedule& sched() {
    static const EpsilonSchedule s = EpsilonSchedule::exponential();
    return s;
}

void BM_phi_recursive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Cx z(0.31, 0.17), w(0.4, -0.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(phi_n(z, w, n, sched(), PhiMode::Recursive));
}
BENCHMARK(BM_phi_recursive)->DenseRange(8, 20, 4);

void BM_phi_direct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Cx z(0.31, 0.17), w(0.4, -0.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(phi_n(z, w, n, sched(), PhiMode::DirectOracle));
}
BENCHMARK(BM_phi_direct)->DenseRange(8, 14, 2);

void BM_sheet_value(benchmark::State& state) {
    const Cx z(0.31, 0.17);
    const SheetLabel sigma{41389, 16};
    for (auto _ : state) benchmark::DoNotOptimize(sheet_value(z, sigma, sched()));
}
BENCHMARK(BM_sheet_value);

void BM_slice_points(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Cx z0(0.5, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(slice_points(z0, n, sched()));
}
BENCHMARK(BM_slice_points)->DenseRange(6, 12, 2);

void BM_lift_circle(benchmark::State& state) {
    const LevelWindow window{1, 8};
    const PlanarCurve loop = circle_loop(pole(2), 0.3, 48);
    for (auto _ : state)
        benchmark::DoNotOptimize(lift_curve(loop, SheetLabel{0, 8}, window, sched()));
}
BENCHMARK(BM_lift_circle);

void BM_fd_hessian(benchmark::State& state) {
    const PotentialParams params;
    const ScalarField f = [&](const Point& p) { return phi_tilde(p.z, p.w, params); };
    const Point zeta{Cx(-0.0099735244652782717, -0.02546049025329146),
                     Cx(0.040255353266103244, -0.045081820912793627)};
    for (auto _ : state) benchmark::DoNotOptimize(fd_complex_hessian(f, zeta, 1e-4));
}
BENCHMARK(BM_fd_hessian);

void BM_mc_volume(benchmark::State& state) {
    const auto in_ball = [](const Point& p) { return norm2(p) <= 1.0; };
    const std::int64_t n = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_volume(in_ball, Box4::cube(1.0), n, 1));
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_mc_volume)->Arg(100'000);

} // namespace

BENCHMARK_MAIN();
