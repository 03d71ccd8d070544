#include <benchmark/benchmark.h>

#include "padeval/corpus.hpp"

namespace {

using namespace padeval;

void BM_RenderSample(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(render_sample_png(SampleClass::attack(PaisKind::kScreen, ""), side, side, seed++));
}
BENCHMARK(BM_RenderSample)->Arg(64)->Arg(384);

void BM_DecodeMarker(benchmark::State& state) {
  const auto png = render_sample_png(SampleClass::bona_fide(), 384, 384, 1);
  for (auto _ : state) benchmark::DoNotOptimize(decode_class_marker(png));
}
BENCHMARK(BM_DecodeMarker);

}  // namespace
