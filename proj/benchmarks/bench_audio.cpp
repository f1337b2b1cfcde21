#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dialkit/audio.hpp"
#include "dialkit/resampler.hpp"

namespace {

std::vector<double> tone(std::size_t n, double rate) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 0.4 * std::sin(2 * M_PI * 440.0 * static_cast<double>(i) / rate);
  return v;
}

void BM_Resample(benchmark::State& state) {
  const auto in_rate = static_cast<std::uint32_t>(state.range(0));
  const auto input = tone(in_rate, in_rate);  // one second
  const dialkit::audio::Resampler r(in_rate, 16000);
  for (auto _ : state) benchmark::DoNotOptimize(r.process(input));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}
BENCHMARK(BM_Resample)->Arg(8000)->Arg(22050)->Arg(44100)->Arg(48000)->Unit(benchmark::kMillisecond);

void BM_StandardizeStereo441(benchmark::State& state) {
  dialkit::audio::PcmAudio a;
  a.spec = {44100, 2, 16};
  const auto mono = tone(44100 * 5, 44100);
  a.samples.resize(mono.size() * 2);
  for (std::size_t i = 0; i < mono.size(); ++i) a.samples[2 * i] = a.samples[2 * i + 1] = mono[i];
  for (auto _ : state) benchmark::DoNotOptimize(dialkit::audio::standardize_audio(a));
}
BENCHMARK(BM_StandardizeStereo441)->Unit(benchmark::kMillisecond);

}  // namespace
