// Serial reference path against the OpenMP parallel map on the fan-out kernels.
// Arg 0 = Execution::serial, 1 = Execution::parallel.

#include <benchmark/benchmark.h>

#include <cmath>

#include "qsc/bottleneck.hpp"
#include "qsc/hypothesis.hpp"
#include "qsc/random.hpp"
#include "qsc/verify.hpp"

using namespace qsc;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) == 0 ? Execution::serial : Execution::parallel; }

CQSource source() {
  Rng rng(5);
  return CQSource({"0", "1"}, {0.45, 0.55}, {random_density(2, rng, 0.05), random_density(2, rng, 0.05)});
}

void BM_EncoderEnumeration(benchmark::State& st) {
  const CQSource s = source();
  for (auto _ : st) benchmark::DoNotOptimize(brute_force_beta_distributed(s, 3, std::log(2.5) / 3, 0.2, mode(st)).beta_min);
}

void BM_DeltaMultistart(benchmark::State& st) {
  Rng rng(6);
  std::vector<DensityMatrix> letters{random_density(3, rng), random_density(3, rng), random_density(3, rng)};
  const DeltaInstance inst({0.2, 0.3, 0.5}, CQChannel(letters), random_density(3, rng, 0.05).op(), 1.5);
  DeltaOptions opt;
  opt.exec = mode(st);
  for (auto _ : st) benchmark::DoNotOptimize(delta(inst, opt).value);
}

void BM_DeltaStarMultistart(benchmark::State& st) {
  Rng rng(7);
  std::vector<DensityMatrix> letters{random_density(2, rng), random_density(2, rng), random_density(2, rng)};
  const std::vector<double> q{0.3, 0.3, 0.4};
  const Operator ry(CQChannel(letters).mixture(q));
  DeltaStarOptions opt;
  opt.exec = mode(st);
  for (auto _ : st) benchmark::DoNotOptimize(delta_star(q, letters, ry, 2.0, 4, opt).value);
}

void BM_KeySuite(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(run_suite("key", 1, 50, mode(st)).worst);
}

}  // namespace

BENCHMARK(BM_EncoderEnumeration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaMultistart)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaStarMultistart)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_KeySuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
