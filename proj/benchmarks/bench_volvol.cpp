// Microbenchmarks for the hot paths: stream normal generation, path
// simulation, the rolling spot-variance pipeline, and the full estimation
// pass. Run with --benchmark_filter=... to narrow.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "volvol/estimators.hpp"
#include "volvol/gof.hpp"
#include "volvol/model.hpp"
#include "volvol/rng.hpp"
#include "volvol/simulate.hpp"
#include "volvol/spot.hpp"

namespace {

const volvol::ModelSpec& model() {
  static const volvol::ModelSpec m =
      volvol::ModelSpec::heston(0.3, 5.0, 0.2, 0.5, -0.2, 0.0, 0.2);
  return m;
}

volvol::SampledPath path_fixture(std::size_t n) {
  return volvol::simulate(model(), n, 2, volvol::rng::Stream(7, 1), 1.0, true);
}

void BM_NormalPairs(benchmark::State& state) {
  volvol::rng::Stream s(1234, 5);
  double acc = 0.0;
  for (auto _ : state) {
    for (int i = 0; i < 1024; ++i) acc += s.normal();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_NormalPairs);

void BM_SimulateHeston(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    volvol::SampledPath p = volvol::simulate(
        model(), n, 10, volvol::rng::Stream(99, rep++), 1.0, true);
    benchmark::DoNotOptimize(p.x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n) * 10);
}
BENCHMARK(BM_SimulateHeston)->Arg(2500)->Arg(10000)->Arg(40000);

void BM_SpotSeries(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const volvol::SampledPath p = path_fixture(n);
  for (auto _ : state) {
    volvol::SpotSeries s = volvol::spot_series(p, volvol::EstimatorConfig{});
    benchmark::DoNotOptimize(s.s2.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SpotSeries)->Arg(10000)->Arg(40000);

void BM_Analyze(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const volvol::SampledPath p = path_fixture(n);
  for (auto _ : state) {
    volvol::VolvolReport r = volvol::analyze(p, volvol::EstimatorConfig{});
    benchmark::DoNotOptimize(r.v_hat);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_Analyze)->Arg(10000)->Arg(40000);

void BM_GofStatistic(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const volvol::SampledPath p = path_fixture(n);
  const volvol::Tau2Fn fn = volvol::Tau2Fn::heston();
  for (auto _ : state) {
    volvol::GofReport r =
        volvol::gof_statistic(p, fn, volvol::EstimatorConfig{});
    benchmark::DoNotOptimize(r.y_n);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_GofStatistic)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
