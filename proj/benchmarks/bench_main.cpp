#include <benchmark/benchmark.h>

#include "qpmsynth/dispersion.hpp"
#include "qpmsynth/pmf.hpp"
#include "qpmsynth/poling.hpp"
#include "qpmsynth/schmidt.hpp"
#include "qpmsynth/spectra.hpp"

using namespace qpmsynth;

namespace {

// Linearized KTP-like model, so the benchmark needs no data file.
const DispersionModel& model() {
  static const DispersionModel m = [] {
    LinearizedModel l;
    l.waves[0] = {14.889, 6.3524};
    l.waves[1] = {7.1767, 6.0386};
    l.waves[2] = {7.5763, 6.3153};
    l.valid_min_nm = 400.0;
    l.valid_max_nm = 3000.0;
    l.centers = {775.0, 1550.0, 1550.0};
    return DispersionModel::linearized(l);
  }();
  return m;
}

void BM_PhiOfDk(benchmark::State& state) {
  const auto pattern = domains(gaussian_apodized_design({}));
  double dk = 0.001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi_of_dk(pattern, dk));
    dk += 1e-7;
  }
  state.counters["domains"] = static_cast<double>(pattern.boundaries().size() - 1);
}
BENCHMARK(BM_PhiOfDk);

void BM_PhiGrid(benchmark::State& state) {
  const auto pattern = domains(gaussian_apodized_design({}));
  const auto grid = square_grid(1535.0, 1565.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(phi_grid(pattern, model(), grid));
}
BENCHMARK(BM_PhiGrid)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Schmidt(benchmark::State& state) {
  const auto grid = square_grid(1535.0, 1565.0, static_cast<std::size_t>(state.range(0)));
  const auto pmf = phi_grid(domains(uniform_design(10000.0, 46.1)), model(), grid);
  const auto jsa = build_jsa(pump_envelope({775.0, 1.2}, grid), pmf);
  for (auto _ : state) benchmark::DoNotOptimize(schmidt_decompose(jsa));
}
BENCHMARK(BM_Schmidt)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
