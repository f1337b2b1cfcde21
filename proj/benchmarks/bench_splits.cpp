#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "dialkit/dialect.hpp"
#include "dialkit/splits.hpp"

namespace {

std::vector<dialkit::corpus::UtteranceRecord> corpus_of(std::size_t n) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dur(2.0, 20.0);
  const char* isos[] = {"ary", "arz", "apc", "afb"};
  std::vector<dialkit::corpus::UtteranceRecord> recs(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = recs[i];
    r.dataset_id = "ds" + std::to_string(i % 7);
    r.utterance_id = r.dataset_id + "/u" + std::to_string(i);
    r.duration = dur(rng);
    r.dialect = dialkit::corpus::make_dialect_code(isos[i % 4]);
    r.speaker_id = "s" + std::to_string(i / 10);
  }
  return recs;
}

void BM_BuildBenchmark(benchmark::State& state) {
  const auto recs = corpus_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dialkit::splits::build_benchmark(recs, {}, 7, 4));
}
BENCHMARK(BM_BuildBenchmark)->Arg(10000)->Arg(50000)->Unit(benchmark::kMillisecond);

}  // namespace
