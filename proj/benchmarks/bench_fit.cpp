#include <benchmark/benchmark.h>

#include "binfit/fitting.hpp"
#include "binfit/synthetic.hpp"

namespace {

using namespace binfit;

const BinnedSample& district(int which) {
  static const BinnedSample mcnary = mcnary_2000();
  static const BinnedSample rsf = rancho_santa_fe_2000();
  return which == 0 ? mcnary : rsf;
}

void label(benchmark::State& state) { state.SetLabel(district(static_cast<int>(state.range(0))).id); }

void BM_LoglikEgg(benchmark::State& state) {
  const BinnedSample s = substitute_zero_endpoint(district(static_cast<int>(state.range(0))));
  const FamilyParams p = EggParams{10.5, 1.1, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(binned_loglik(s, p));
  label(state);
}
BENCHMARK(BM_LoglikEgg)->Arg(0)->Arg(1);

void BM_LoglikGb2(benchmark::State& state) {
  const BinnedSample& s = district(static_cast<int>(state.range(0)));
  const FamilyParams p = Gb2Params{3.0, 60000.0, 0.8, 1.4};
  for (auto _ : state) benchmark::DoNotOptimize(binned_loglik(s, p));
  label(state);
}
BENCHMARK(BM_LoglikGb2)->Arg(0)->Arg(1);

void BM_FitEgg(benchmark::State& state) {
  const BinnedSample& s = district(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_egg(s));
  label(state);
}
BENCHMARK(BM_FitEgg)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FitPowerNormal(benchmark::State& state) {
  const BinnedSample& s = district(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_power(s, PowerFamily::kNormal));
  label(state);
}
BENCHMARK(BM_FitPowerNormal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BestOfBreed(benchmark::State& state) {
  const BinnedSample& s = district(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(s, Estimator::kBest));
  label(state);
}
BENCHMARK(BM_BestOfBreed)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FitGb2(benchmark::State& state) {
  const BinnedSample& s = district(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(s, Estimator::kGb2));
  label(state);
}
BENCHMARK(BM_FitGb2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
