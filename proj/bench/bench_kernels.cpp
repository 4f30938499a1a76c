// Serial vs OpenMP timings for the four parallel kernels: local-vol grid
// columns, calibration tenors, backtest start dates and Monte Carlo paths.
// Arg 0 runs the serial reference, arg 1 the parallel path; both produce
// identical numbers, so the interesting output is the time ratio.

#include <benchmark/benchmark.h>

#include <vector>

#include "fxlv/backtest.hpp"
#include "fxlv/calibration.hpp"
#include "fxlv/hedging.hpp"
#include "fxlv/implied_surface.hpp"
#include "fxlv/market_data.hpp"
#include "fxlv/mesh.hpp"
#include "fxlv/parallel.hpp"
#include "fxlv/synthetic.hpp"

namespace {

using namespace fxlv;

Exec exec_of(const benchmark::State& state) {
    return state.range(0) != 0 ? Exec::parallel : Exec::serial;
}

const std::vector<MarketSnapshot>& history() {
    static const std::vector<MarketSnapshot> h = [] {
        SyntheticConfig cfg;
        cfg.spot = 0.77;
        cfg.days = 30;
        return make_history(cfg);
    }();
    return h;
}

void bm_localvol_grid(benchmark::State& state) {
    const MarketSnapshot& snap = history().front();
    const ImpliedSurface surf(snap);
    const Mesh mesh = build_mesh(snap.spot, 1.0, surf.mean_atm_vol(), 7.0, 400);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_localvol_grid(surf, mesh, {}, exec_of(state)));
}
BENCHMARK(bm_localvol_grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_calibrate(benchmark::State& state) {
    CalibrationConfig cfg;
    cfg.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(calibrate_check(history().front(), cfg));
}
BENCHMARK(bm_calibrate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_backtest(benchmark::State& state) {
    BacktestConfig cfg;
    cfg.tenor_years = 1.0 / 52.0;
    cfg.scheme = Scheme::lv_tc;
    cfg.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(run_backtest(history(), cfg));
}
BENCHMARK(bm_backtest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_simulate(benchmark::State& state) {
    SimHedgeConfig cfg;
    cfg.scheme = SimHedgeConfig::Scheme::bs;
    cfg.paths = 500;
    cfg.rebalances = 100;
    for (auto _ : state) benchmark::DoNotOptimize(simulate_hedge(cfg, exec_of(state)));
}
BENCHMARK(bm_simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
