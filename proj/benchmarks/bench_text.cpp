#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "dialkit/text_norm.hpp"

namespace {

std::vector<std::string> sentences(std::size_t n) {
  static const std::vector<std::string> words{"السَّلامُ", "عَلَيْكُم،", "كيف", "حالك؟", "المدرسة", "إلى",
                                              "أنا", "ذاهبٌ", "ـالـقـاهـرة", "«جدا»", "مدينةٌ", "كبيرة."};
  std::mt19937_64 rng(1);
  std::vector<std::string> out(n);
  for (auto& s : out) {
    for (int w = 0; w < 12; ++w) s += words[rng() % words.size()] + " ";
  }
  return out;
}

void BM_NormalizeArabic(benchmark::State& state) {
  const auto input = sentences(256);
  const auto& n = dialkit::text::default_normalizer();
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& s : input) {
      benchmark::DoNotOptimize(n.normalize(s));
      bytes += s.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_NormalizeArabic);

void BM_NormalizeBuckwalter(benchmark::State& state) {
  const std::vector<std::string> input(256, ">anA *AhibN <ilaY Almadrasap wa Alt~aEal~um jamiyl");
  const auto& n = dialkit::text::default_normalizer();
  std::size_t bytes = 0;
  for (auto _ : state) {
    for (const auto& s : input) {
      benchmark::DoNotOptimize(n.normalize(s));
      bytes += s.size();
    }
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_NormalizeBuckwalter);

}  // namespace
