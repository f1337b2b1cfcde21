#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dialkit/edit_distance.hpp"
#include "dialkit/scoring.hpp"

namespace {

void BM_EditCounts(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<int> a(len), b(len);
  for (auto& x : a) x = static_cast<int>(rng() % 20);
  for (auto& x : b) x = static_cast<int>(rng() % 20);
  for (auto _ : state) benchmark::DoNotOptimize(dialkit::scoring::edit_counts_of(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditCounts)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_WerSentence(benchmark::State& state) {
  const char* ref = "السلام عليكم كيف حالك اليوم انا ذاهب الى المدرسة مع اصدقائي";
  const char* hyp = "السلام عليكم كيف حالك انا ذاهب للمدرسة مع اصحابي اليوم";
  for (auto _ : state) benchmark::DoNotOptimize(dialkit::scoring::wer(ref, hyp));
}
BENCHMARK(BM_WerSentence);

}  // namespace
