#include <benchmark/benchmark.h>

#include "dhlab/experiments.hpp"

using namespace dhlab;

static void BM_MomentsDensity(benchmark::State& state) {
  const auto m = MeasureModel::power_log(1.0, 2.0);
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(moments(m, order, kOperatorTolerance));
}
BENCHMARK(BM_MomentsDensity)->Arg(64)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

// moments are computed inside the loop, as the CLI does
static void BM_DhApply(benchmark::State& state) {
  const auto m = MeasureModel::power_log(1.0, 0.0);
  const auto f = make_f_log(0.9);
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dh_apply(m, f, N));
}
BENCHMARK(BM_DhApply)->Arg(64)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_HankelApplyOnly(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const auto mu = moments(MeasureModel::power_log(1.0, 0.0), 2 * N + 1, kOperatorTolerance);
  const auto f = make_f_log(0.9);
  for (auto _ : state) benchmark::DoNotOptimize(apply_with_moments(mu, f, N, RowWeight::DerivativeWeighted));
}
BENCHMARK(BM_HankelApplyOnly)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

static void BM_IntegralFormBuild(benchmark::State& state) {
  const auto m = MeasureModel::power_log(1.0, 0.0);
  const auto f = make_f_log(0.99);
  for (auto _ : state) benchmark::DoNotOptimize(IntegralForm(m, f, 1e-8));
}
BENCHMARK(BM_IntegralFormBuild)->Unit(benchmark::kMicrosecond);

static void BM_IntegralFormDerivative(benchmark::State& state) {
  const IntegralForm form(MeasureModel::power_log(1.0, 0.0), make_f_log(0.99), 1e-8);
  const cd z(0.6, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(form.derivative(z));
}
BENCHMARK(BM_IntegralFormDerivative);

static void BM_BmoaNorm(benchmark::State& state) {
  const auto f = make_f_log(0.99);
  AGrid ag;
  ag.k_max = 10;
  ag.angles = 2;
  const DiskGrid grid(48, 128);
  for (auto _ : state) benchmark::DoNotOptimize(bmoa_norm(f, ag, grid));
}
BENCHMARK(BM_BmoaNorm)->Unit(benchmark::kMillisecond);

static void BM_BlochNorm(benchmark::State& state) {
  const auto f = make_g_cauchy(0.99, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(bloch_norm(f, 0.5));
}
BENCHMARK(BM_BlochNorm)->Unit(benchmark::kMillisecond);

static void BM_CarlesonClassify(benchmark::State& state) {
  const auto m = MeasureModel::power_log(1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(carleson_classify(m, 2.0, 1.0));
}
BENCHMARK(BM_CarlesonClassify)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
