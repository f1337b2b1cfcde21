// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cli_harness.hpp"
#include "dialkit/audio.hpp"
#include "dialkit/edit_distance.hpp"
#include "dialkit/profiling.hpp"
#include "dialkit/scoring.hpp"
#include "dialkit/splits.hpp"
#include "dialkit/text_norm.hpp"
#include "dialkit/unicode.hpp"
#include "dialkit/wav.hpp"
#include "golden_normalization.hpp"
#include "oracles.hpp"
#include "spectrum.hpp"
#include "synthetic_corpus.hpp"
#include "temp_dir.hpp"

using namespace dialkit;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- text ----

Outcome normalization_idempotent() {
  constexpr double kBudget = 10.0;
  oracle::MixedTextGenerator gen(20240501);
  const auto& punct = text::default_normalizer().punctuation();
  const auto t0 = Clock::now();
  for (int i = 0; i < 10000; ++i) {
    const std::string x = gen.next(60);
    const std::string y = text::normalize(x);
    if (text::normalize(y) != y) return {false, "not idempotent on input #" + std::to_string(i)};
    for (char32_t c : oracle::decode(y)) {
      if (unicode::is_nonspacing_mark(c) || punct.contains(c)) return {false, "residual mark/punct on #" + std::to_string(i)};
    }
  }
  const double t = seconds_since(t0);
  return {t < kBudget, fmt("10000 strings in %.2f s (budget %.0f s)", t, kBudget)};
}

Outcome normalization_golden() {
  std::size_t bad = 0;
  std::string first;
  for (const auto& c : golden::kNormalization) {
    if (text::normalize(c.input) != c.expected) {
      if (!bad) first = std::string(c.input);
      ++bad;
    }
  }
  return {bad == 0, bad ? std::to_string(bad) + " mismatches, first input '" + first + "'"
                        : std::to_string(golden::kNormalization.size()) + " cases"};
}

// ---- scoring ----

void all_strings(std::size_t max_len, std::vector<std::vector<int>>& out) {
  out.push_back({});
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int s = 0; s < 3; ++s) {
        auto v = out[i];
        v.push_back(s);
        out.push_back(std::move(v));
      }
    }
    begin = end;
  }
}

bool consistent(const scoring::EditCounts& c, std::size_t n, std::size_t m) {
  return c.ref_len == n && c.substitutions + c.deletions <= n && n - c.deletions + c.insertions == m;
}

Outcome edit_distance_oracles() {
  constexpr double kBudget = 60.0;
  const auto t0 = Clock::now();
  std::vector<std::vector<int>> strs;
  all_strings(6, strs);
  std::size_t pairs = 0;
  for (const auto& a : strs) {
    for (const auto& b : strs) {
      const auto c = scoring::edit_counts_of(a, b);
      if (c.errors() != oracle::min_edits_recursive(a, b) || !consistent(c, a.size(), b.size())) {
        return {false, "exhaustive mismatch at pair #" + std::to_string(pairs)};
      }
      ++pairs;
    }
  }
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> len(0, 50);
  std::uniform_int_distribution<int> sym(0, 5);
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> a(len(rng)), b(len(rng));
    for (auto& x : a) x = sym(rng);
    for (auto& x : b) x = sym(rng);
    const auto c = scoring::edit_counts_of(a, b);
    if (c.errors() != oracle::wagner_fischer(a, b) || !consistent(c, a.size(), b.size())) {
      return {false, "random mismatch at trial " + std::to_string(t)};
    }
  }
  const double t = seconds_since(t0);
  return {t < kBudget, std::to_string(pairs) + " exhaustive pairs + 1000 random, " + fmt("%.2f s (budget %.0f s)", t, kBudget)};
}

Outcome wer_unbounded() {
  const double w = scoring::wer("كتاب", "قلم باب دار بيت نور");
  return {std::abs(w - 5.0) < 1e-12, fmt("WER = %.6f, expected 5", w)};
}

Outcome histogram_edges() {
  const std::vector<std::pair<double, std::size_t>> cases{{0.10, 0}, {0.1000001, 1}, {1.0, 9}, {1.0000001, 10}};
  std::string got;
  bool ok = true;
  for (const auto& [rate, bin] : cases) {
    const auto b = scoring::wer_bin(rate);
    ok = ok && b == bin;
    got += std::to_string(b) + " ";
  }
  return {ok, "bins " + got + "(expected 0 1 9 10)"};
}

// ---- profiling ----

Outcome pearson_checks() {
  std::vector<double> x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(i) * 0.37 - 4;
    y[i] = 2 * x[i] + 3;
  }
  const double r_affine = profiling::pearson(x, y);
  if (std::abs(r_affine - 1.0) >= 1e-9) return {false, fmt("r(x, 2x+3) = %.17g", r_affine)};
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0, 1);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(1000), b(1000);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = g(rng);
      b[i] = 0.5 * a[i] + g(rng);
    }
    worst = std::max(worst, std::abs(profiling::pearson(a, b) - oracle::pearson_direct(a, b)));
  }
  return {worst <= 1e-12, fmt("|r(x, 2x+3) - 1| = %.3g (tol 1e-9), max |r - direct| = %.3g "
                              "over 100 samples of 1000 (tol 1e-12)",
                              std::abs(r_affine - 1.0), worst)};
}

Outcome aldi_boundaries() {
  using profiling::AldiBin;
  const std::vector<std::pair<double, AldiBin>> cases{{0.0, AldiBin::MSA},
                                                      {0.11, AldiBin::LittleDA},
                                                      {0.44, AldiBin::Mixed},
                                                      {0.77, AldiBin::MostlyDA},
                                                      {1.0, AldiBin::MostlyDA}};
  std::string got;
  bool ok = true;
  for (const auto& [s, bin] : cases) {
    const auto b = profiling::bin_aldi(s);
    ok = ok && b == bin;
    got += std::string(profiling::to_string(b)) + " ";
  }
  return {ok, got};
}

// ---- audio ----

Outcome audio_canonical() {
  audio::PcmAudio in;
  in.spec = {44100, 2, 16};
  const std::size_t frames = 88200;
  in.samples.resize(frames * 2);
  for (std::size_t i = 0; i < frames; ++i) {
    const double v = 0.5 * std::sin(2 * M_PI * 440.0 * static_cast<double>(i) / 44100.0);
    in.samples[2 * i] = v;
    in.samples[2 * i + 1] = v;
  }
  const auto out = audio::standardize_audio(in);
  const auto bytes = audio::encode_wav(out);
  const auto decoded = audio::decode_wav(bytes);
  if (!(decoded.spec == audio::kCanonicalSpec)) return {false, "decoded header is not 16000/1/16"};
  const double expect_samples = static_cast<double>(frames) * 16000.0 / 44100.0;
  const double dev = std::abs(static_cast<double>(out.samples.size()) - expect_samples);
  if (dev > 1.0) return {false, fmt("length %.0f vs %.1f samples", static_cast<double>(out.samples.size()), expect_samples)};
  const auto peak = oracle::fft_peak(out.samples);
  const double hz = static_cast<double>(peak) * 16000.0 / static_cast<double>(out.samples.size());
  if (std::abs(hz - 440.0) > 16000.0 / static_cast<double>(out.samples.size())) return {false, fmt("peak at %.2f Hz", hz)};

  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<int> ch_d(2, 8), len_d(1, 4000);
  std::uniform_real_distribution<double> u(-1, 1);
  int worst = 0;
  for (int t = 0; t < 100; ++t) {
    audio::PcmAudio a;
    a.spec = {16000, static_cast<std::uint16_t>(ch_d(rng)), 16};
    const std::size_t n = static_cast<std::size_t>(len_d(rng));
    a.samples.resize(n * a.spec.channels);
    for (auto& s : a.samples) s = std::round(u(rng) * 32767.0) / 32768.0;
    const auto q = audio::quantize_int16(audio::downmix(a).samples);
    for (std::size_t i = 0; i < n; ++i) {
      long double sum = 0;
      for (std::size_t c = 0; c < a.spec.channels; ++c) sum += a.samples[i * a.spec.channels + c];
      const long double mean = sum / a.spec.channels * 32768.0L;
      worst = std::max(worst, static_cast<int>(std::abs(static_cast<long double>(q[i]) - std::round(mean))));
    }
  }
  return {worst <= 1, fmt("header 16000/1/16, length dev %.2f samples, peak %.2f Hz, downmix max |err| %.0f LSB", dev, hz,
                          worst)};
}

// ---- splits ----

Outcome split_invariants() {
  using splits::Split;
  const auto recs = synth::five_dialect_corpus(99);
  const splits::SplitTargets targets;
  const auto plan = splits::build_benchmark(recs, targets, 99, 4);
  std::map<std::string, const corpus::UtteranceRecord*> ids;
  for (const auto& r : recs) ids[r.utterance_id] = &r;

  std::set<std::string> seen;
  for (const auto& a : plan.assignments) {
    if (!seen.insert(a.utterance_id).second) return {false, "duplicate assignment " + a.utterance_id};
    if (!corpus::is_resolved(ids.at(a.utterance_id)->dialect)) return {false, "ambiguous assigned " + a.utterance_id};
  }
  for (const auto& e : plan.excluded) {
    if (!seen.insert(e.utterance_id).second) return {false, "excluded also assigned " + e.utterance_id};
  }
  if (seen.size() != recs.size()) return {false, "partition does not cover input"};

  std::map<std::string, double> longest;
  std::map<std::string, std::array<double, splits::kSplitCount>> secs;
  for (const auto& a : plan.assignments) {
    const double d = ids.at(a.utterance_id)->duration;
    longest[a.dialect] = std::max(longest[a.dialect], d);
    secs[a.dialect][static_cast<std::size_t>(a.split)] += d;
  }
  auto at = [&](const std::string& d, Split s) { return secs[d][static_cast<std::size_t>(s)]; };
  std::string detail;
  for (const char* d : {"ary", "arz"}) {
    for (Split s : {Split::Test, Split::Dev}) {
      const double got = at(d, s), want = 3600.0;
      detail += fmt("%.0f", got) + "s ";
      if (std::abs(got - want) > longest[d]) {
        return {false, std::string(d) + " " + std::string(corpus::to_string(s)) + fmt(" %.1f s vs 3600 s (one utt %.1f s)", got, longest[d])};
      }
    }
  }
  for (const char* d : {"apc", "afb"}) {
    const double tr = at(d, Split::Train) + at(d, Split::Adapt), dv = at(d, Split::Dev), te = at(d, Split::Test);
    const double third = (tr + dv + te) / 3;
    for (double part : {tr, dv, te}) {
      if (std::abs(part - third) > 0.1 * third) return {false, std::string(d) + fmt(" thirds %.0f/%.0f/%.0f s", tr, dv, te)};
    }
  }
  const auto again = splits::build_benchmark(recs, targets, 99, 1);
  if (splits::format_plan_tsv(plan, nullptr) != splits::format_plan_tsv(again, nullptr) ||
      splits::plan_to_json(plan, nullptr) != splits::plan_to_json(again, nullptr)) {
    return {false, "plan differs between runs"};
  }
  return {true, "partition ok, 0 ambiguous, ary/arz test+dev " + detail + "(tol one utterance), apc/afb thirds within 10%, byte-identical rerun"};
}

// ---- end to end ----

Outcome end_to_end() {
  testutil::TempDir a, b;
  std::string log;
  if (testutil::run_mini_pipeline(a.path(), &log) != 0 || testutil::run_mini_pipeline(b.path(), &log) != 0) {
    return {false, "pipeline failed: " + log};
  }
  if (testutil::snapshot(a.path()) != testutil::snapshot(b.path())) return {false, "workspaces differ"};
  const auto groups =
      scoring::parse_report_tsv(oracle::slurp(a / "scores/system_a/report.tsv"), "report.tsv");
  const std::map<std::string, double> want{{"afb", 4.0 / 6}, {"apc", 3.0 / 7}, {"ars", 1.0},
                                           {"ary", 2.0 / 8}, {"arz", 4.0 / 7}, {"overall", 16.0 / 31}};
  double worst = 0;
  for (const auto& g : groups) {
    if (!want.contains(g.group)) return {false, "unexpected group " + g.group};
    worst = std::max(worst, std::abs(g.wer_micro - want.at(g.group)));
  }
  if (groups.size() != want.size()) return {false, "group count " + std::to_string(groups.size())};
  return {worst <= 1e-12, fmt("identical reruns, max |WER - hand| = %.3g (tol 1e-12)", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"normalization idempotent and clean on 10k strings, < 10 s", normalization_idempotent},
      {"normalization golden table", normalization_golden},
      {"edit alignment vs exhaustive and random oracles, < 60 s", edit_distance_oracles},
      {"WER unbounded above 1", wer_unbounded},
      {"Pearson exact on affine data and vs direct formula", pearson_checks},
      {"dialectness bin boundaries", aldi_boundaries},
      {"canonical audio header, duration, spectrum, downmix", audio_canonical},
      {"benchmark split invariants", split_invariants},
      {"end-to-end determinism and hand-scored WER", end_to_end},
      {"WER histogram bin edges", histogram_edges},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  A%02zu  %s  [%s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed ? 1 : 0;
}
