#include <benchmark/benchmark.h>

#include "padeval/corpus.hpp"
#include "padeval/metrics.hpp"

namespace {

using namespace padeval;

ScorePartition partition(std::size_t n) {
  ScoreDistSpec s;
  s.n_bona_fide = s.n_attack = n;
  return gen_scores(s);
}

void BM_DetCurve(benchmark::State& state) {
  const auto p = partition(static_cast<std::size_t>(state.range(0)));
  const auto atk = p.selected_attacks(AttackSelector::pooled());
  for (auto _ : state) benchmark::DoNotOptimize(det_curve(p.bona_fide, atk));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_DetCurve)->Arg(1'000)->Arg(10'000)->Arg(100'000);

void BM_Eer(benchmark::State& state) {
  const auto p = partition(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eer(p, AttackSelector::pooled()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_Eer)->Arg(10'000);

void BM_BpcerAtApcer(benchmark::State& state) {
  const auto p = partition(10'000);
  for (auto _ : state) benchmark::DoNotOptimize(bpcer_at_apcer(p, AttackSelector::pooled(), 100));
}
BENCHMARK(BM_BpcerAtApcer);

void BM_EvaluatePartition(benchmark::State& state) {
  const auto p = partition(10'000);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_partition(p, "bench"));
}
BENCHMARK(BM_EvaluatePartition);

}  // namespace

BENCHMARK_MAIN();
