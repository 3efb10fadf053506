#include <benchmark/benchmark.h>

#include <numbers>

#include "spdc/biphoton.hpp"
#include "spdc/fft.hpp"
#include "spdc/fit.hpp"
#include "spdc/pump.hpp"
#include "spdc/rng.hpp"

namespace {

const double kKp = 2.0 * std::numbers::pi * 1.8 / 405e-9;
const double kKs = 2.0 * std::numbers::pi * 1.8 / 810e-9;

void BM_FftPhysical(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  spdc::Grid1D grid(n, 3e-6);
  spdc::FftEngine1D engine(n);
  spdc::RandomStream rs(1);
  std::vector<std::complex<double>> v(n);
  for (auto& c : v) c = {rs.normal(), rs.normal()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(engine.to_frequency(grid, v));
  }
}
BENCHMARK(BM_FftPhysical)->Arg(256)->Arg(1024)->Arg(4096);

void BM_PhaseScreen(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  spdc::Grid1D grid(n, 3e-6);
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        spdc::make_phase_screen(grid, 110e-6, 2.0, 1, index++));
  }
}
BENCHMARK(BM_PhaseScreen)->Arg(1024);

void BM_EnsembleMomentum(benchmark::State& state) {
  spdc::Grid1D grid(static_cast<std::size_t>(state.range(0)), 3e-6);
  const spdc::PhaseMatching pm{5e-3, kKs, kKs, kKp};
  const spdc::PumpSpec spec{
      spdc::PhaseScreenEnsemble{110e-6, spdc::kInfinite, 110e-6, 2.0,
                                static_cast<std::size_t>(state.range(1)), 3},
      kKp};
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdc::joint_momentum_distribution(spec, pm, grid));
  }
}
BENCHMARK(BM_EnsembleMomentum)->Args({512, 32})->Args({1024, 32});

void BM_PositionDistribution(benchmark::State& state) {
  spdc::Grid1D grid(static_cast<std::size_t>(state.range(0)), 3e-6);
  const spdc::PhaseMatching pm{5e-3, kKs, kKs, kKp};
  const spdc::PumpSpec spec{spdc::CoherentGaussian{110e-6, spdc::kInfinite},
                            kKp};
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdc::joint_position_distribution(spec, pm, grid));
  }
}
BENCHMARK(BM_PositionDistribution)->Arg(512)->Arg(1024);

void BM_GaussianFit(benchmark::State& state) {
  spdc::RandomStream rs(5);
  std::vector<spdc::FitPoint> pts;
  for (int j = -12; j <= 12; ++j) {
    const double u = j * 12e-6;
    const double mean = 300.0 * std::exp(-u * u / (2.0 * 40e-6 * 40e-6)) + 1.0;
    pts.push_back(
        spdc::FitPoint{u, static_cast<double>(rs.poisson(mean)), 1.0});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(spdc::fit_gaussian(pts));
  }
}
BENCHMARK(BM_GaussianFit);

}  // namespace

BENCHMARK_MAIN();
