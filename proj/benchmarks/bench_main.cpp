#include <benchmark/benchmark.h>

#include "varexp/asymptotics.hpp"
#include "varexp/moments.hpp"
#include "varexp/pipeline.hpp"
#include "varexp/rearrange.hpp"

namespace {

using namespace varexp;

ForwardModel sample_model(int pieces) {
  StepProfile p = generate_profile(7, pieces, {1.5, 4.0});
  return ForwardModel(p, StepProfile::constant(p.interval(), 1.0));
}

void BM_ForwardSweep(benchmark::State& state) {
  const ForwardModel model = sample_model(static_cast<int>(state.range(0)));
  const auto grid = make_grid({1e-6, 1e6, 100, true});
  for (auto _ : state) {
    double acc = 0.0;
    for (double m : grid) acc += model.dn_map(m);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_ForwardSweep)->Arg(3)->Arg(64)->Arg(4096);

void BM_RecoverExtremes(benchmark::State& state) {
  const DnOracle oracle = DnOracle::analytic(sample_model(5));
  for (auto _ : state) benchmark::DoNotOptimize(recover_extremes(oracle));
}
BENCHMARK(BM_RecoverExtremes);

void BM_ExtractMoments(benchmark::State& state) {
  const DnOracle oracle = DnOracle::analytic(sample_model(5));
  const double M = recover_extremes(oracle).support_bound();
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_moments(oracle, N, {}, M, false));
}
BENCHMARK(BM_ExtractMoments)->Arg(8)->Arg(16);

void BM_Reconstruct(benchmark::State& state) {
  const DnOracle oracle = DnOracle::analytic(sample_model(3));
  const double M = recover_extremes(oracle).support_bound();
  const auto d = to_distribution_moments(extract_moments(oracle, 12, {}, M, false), M);
  ReconstructionOptions options;
  options.method = state.range(0) == 0 ? ReconstructionMethod::atomic : ReconstructionMethod::legendre;
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_distribution(d, options));
}
BENCHMARK(BM_Reconstruct)->Arg(0)->Arg(1);

void BM_RunFull(benchmark::State& state) {
  ExperimentConfig config;
  StepProfile p = generate_profile(11, 3, {1.5, 4.0});
  config.model = ModelSpec{p, StepProfile::constant(p.interval(), 1.0), std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(run_full(config));
}
BENCHMARK(BM_RunFull)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
