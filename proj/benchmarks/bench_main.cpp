#include <benchmark/benchmark.h>

#include "qcomb/biphoton.hpp"
#include "qcomb/estimation.hpp"
#include "qcomb/hom.hpp"
#include "qcomb/units.hpp"

using namespace qcomb;

namespace {

struct Setup {
  CavitySpec cavity{units::ghz(19.2), 0.27, 0.24, 0.0};
  PumpSpec pump;
  PhaseMatchSpec pm;

  Setup() {
    pump.center_frequency = resonant_pump_frequency(cavity, units::thz(391.88));
    pm.degeneracy_frequency = pump.center_frequency;
    pm.bandwidth = units::thz(21.82);
    pm.walkoff = 20e-15;
  }
};

void BM_AssembleMono(benchmark::State& state) {
  const Setup s;
  const auto n = static_cast<std::size_t>(state.range(0));
  const SpectralGrid grid = SpectralGrid::one_d(8.0 * s.pm.bandwidth, n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_jsa_mono(s.pump, s.pm, s.cavity, grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_AssembleMono)->Arg(262145)->Arg(524289)->Unit(benchmark::kMillisecond);

void BM_CoincidenceTrace(benchmark::State& state) {
  const Setup s;
  const Jsa jsa = assemble_jsa_mono(s.pump, s.pm, s.cavity, SpectralGrid::one_d(8.0 * s.pm.bandwidth, 262145));
  const std::vector<double> delays = uniform_delays(-300e-15, 300e-15, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coincidence_trace(jsa, delays));
  }
}
BENCHMARK(BM_CoincidenceTrace)->Arg(101)->Arg(601)->Unit(benchmark::kMillisecond);

void BM_Evaluator(benchmark::State& state) {
  const Setup s;
  const SpectralGrid grid = SpectralGrid::one_d(8.0 * s.pm.bandwidth, 262145);
  const Jsa jsa = assemble_jsa_mono(s.pump, s.pm, s.cavity, grid);
  const CoincidenceEvaluator eval(grid.minus, uniform_delays(-300e-15, 300e-15, 161));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.evaluate(jsa));
  }
}
BENCHMARK(BM_Evaluator)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
