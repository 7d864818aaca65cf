#include <benchmark/benchmark.h>

#include "hybridgrid/models.hpp"
#include "hybridgrid/scenario.hpp"
#include "hybridgrid/scenario_io.hpp"
#include "hybridgrid/simcore.hpp"

namespace {

using namespace hybridgrid;

void BM_PvOperatingPoint(benchmark::State& state) {
  const PvDiodeModel model = fit_pv_model(PvDatasheet{});
  double g = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pv_operating_point(g, 900.0, model));
    g = g < 1.0 ? g * 1.01 : 0.05;
  }
}
BENCHMARK(BM_PvOperatingPoint);

void BM_FitPvModel(benchmark::State& state) {
  const PvDatasheet ds;
  for (auto _ : state) benchmark::DoNotOptimize(fit_pv_model(ds));
}
BENCHMARK(BM_FitPvModel);

void BM_SimStep(benchmark::State& state) {
  SimConfig cfg;
  cfg.pv = fit_pv_model(PvDatasheet{});
  SimState s = initial_state(cfg, {});
  for (auto _ : state) {
    s = sim_step(s, 9.0, 800.0, 3000.0, cfg).state;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SimStep);

void BM_RunScenario(benchmark::State& state) {
  const Scenario sc = load_scenario(HYBRIDGRID_SCENARIO_DIR "/fig12.scn");
  for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
  state.SetItemsProcessed(state.iterations() * sc.step_count());
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
