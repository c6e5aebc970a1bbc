#include <benchmark/benchmark.h>

#include <random>

#include "pmds/code.hpp"
#include "pmds/construct.hpp"
#include "pmds/matroid.hpp"
#include "pmds/randpmds.hpp"

namespace {

using namespace pmds;

void BM_Rank(benchmark::State& state) {
  const Field f = Field::create(19);
  std::mt19937_64 rng(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  Mat m(f, 6, n);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = f.element(rng() % 19);
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_Rank)->Arg(20)->Arg(80);

// Full evaluation-set sweep of the 6x20 s = 2 code.
void BM_IsPmdsF19(benchmark::State& state) {
  const auto code = encode(construct_s2(4, Field::create(19)));
  VerifyOptions vo;
  vo.jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(is_pmds(code, vo).ok());
}
BENCHMARK(BM_IsPmdsF19)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CrossingCircuits(benchmark::State& state) {
  const LineArrangement arr(4, 3, Field::create(static_cast<std::uint64_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(all_crossing_circuits(arr).size());
}
BENCHMARK(BM_CrossingCircuits)->Arg(7)->Arg(11)->Unit(benchmark::kMillisecond);

void BM_AlterationTrials(benchmark::State& state) {
  const auto params = trial_params(3, 2, 163, 0.5, TrialMode::alteration);
  const LineArrangement arr(3, 2, Field::create(163));
  const auto circuits = all_crossing_circuits(arr);
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(params, arr, circuits, 50, 1).successes);
}
BENCHMARK(BM_AlterationTrials)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
