// Microbenchmarks for the hot paths: special functions, sampling, the
// O(n^2) scan statistics, and the oracle searches.

#include <benchmark/benchmark.h>

#include "sparsescan/distributions.hpp"
#include "sparsescan/numerics.hpp"
#include "sparsescan/oracle.hpp"
#include "sparsescan/rng.hpp"
#include "sparsescan/statistics.hpp"

namespace {

using namespace sparsescan;

void BM_RegIncBeta(benchmark::State& state) {
  double u = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reg_inc_beta(u, 12.0, 489.0));
    u += 1e-7;  // defeat value caching without changing the regime
  }
}
BENCHMARK(BM_RegIncBeta);

void BM_LogRegIncBeta(benchmark::State& state) {
  double u = 1e-9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_reg_inc_beta(u, 5.0, 996.0));
    u += 1e-15;
  }
}
BENCHMARK(BM_LogRegIncBeta);

void BM_MixtureSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MixtureSpec spec(BaseDistribution::cauchy(), n, 0.6, 1.0);
  Rng rng = make_rng(7);
  for (auto _ : state) benchmark::DoNotOptimize(mixture_sample(spec, rng));
  state.SetComplexityN(n);
}
BENCHMARK(BM_MixtureSample)->Arg(1000)->Arg(10000)->Complexity();

Sample fixed_sample(int n) {
  Rng rng = make_rng(11);
  return sample(BaseDistribution::normal(), n, rng);
}

void BM_HcThresholdStat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Sample s = fixed_sample(n);
  const BaseDistribution base = BaseDistribution::normal();
  for (auto _ : state) benchmark::DoNotOptimize(hc_threshold_stat(s, base));
  state.SetComplexityN(n);
}
BENCHMARK(BM_HcThresholdStat)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();

void BM_StoufferScanStat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Sample s = fixed_sample(n);
  const BaseDistribution base = BaseDistribution::normal();
  for (auto _ : state) benchmark::DoNotOptimize(stouffer_scan_stat(s, base));
  state.SetComplexityN(n);
}
BENCHMARK(BM_StoufferScanStat)
    ->Arg(100)
    ->Arg(1000)
    ->Arg(5000)
    ->Complexity(benchmark::oNSquared);

void BM_TippettScanStat(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Sample s = fixed_sample(n);
  const BaseDistribution base = BaseDistribution::normal();
  for (auto _ : state) benchmark::DoNotOptimize(tippett_scan_stat(s, base));
  state.SetComplexityN(n);
}
BENCHMARK(BM_TippettScanStat)
    ->Arg(100)
    ->Arg(1000)
    ->Arg(5000)
    ->Complexity(benchmark::oNSquared);

void BM_OracleThreshold(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MixtureSpec spec(BaseDistribution::cauchy(), n, 0.7, 0.8);
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle_threshold_test(spec, 0.05));
  state.SetComplexityN(n);
}
BENCHMARK(BM_OracleThreshold)->Arg(100)->Arg(1000)->Arg(10000)->Complexity();

void BM_OracleScan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const MixtureSpec spec(BaseDistribution::cauchy(), n, 0.7, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_scan_test(spec, 0.05));
  state.SetComplexityN(n);
}
BENCHMARK(BM_OracleScan)->Arg(100)->Arg(300)->Arg(1000)->Complexity();

}  // namespace

BENCHMARK_MAIN();
