#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dialkit/dialect.hpp"
#include "dialkit/record.hpp"
#include "dialkit/text_norm.hpp"

namespace synth {

using dialkit::corpus::AmbiguousDialect;
using dialkit::corpus::DialectCode;
using dialkit::corpus::DialectLabel;
using dialkit::corpus::Split;
using dialkit::corpus::UtteranceRecord;

struct ChunkSpec {
  std::string dataset;
  DialectLabel label;
  std::size_t count;
  double min_s, max_s;
  std::size_t utts_per_speaker;  // 0: no speaker ids
};

inline std::vector<UtteranceRecord> make_records(const std::vector<ChunkSpec>& chunks, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<UtteranceRecord> out;
  for (const auto& c : chunks) {
    std::uniform_real_distribution<double> dur(c.min_s, c.max_s);
    for (std::size_t i = 0; i < c.count; ++i) {
      UtteranceRecord r;
      r.dataset_id = c.dataset;
      r.source_id = "u" + std::to_string(i);
      r.utterance_id = c.dataset + "/" + r.source_id;
      r.audio_path = "audio/" + c.dataset + "/" + r.source_id + ".wav";
      // millisecond precision, like ingested records
      r.duration = std::round(dur(rng) * 1000.0) / 1000.0;
      r.raw_transcript = "كلام";
      r.standardized_transcript = "كلام";
      if (c.utts_per_speaker) r.speaker_id = c.dataset + "_spk" + std::to_string(i / c.utts_per_speaker);
      r.dialect = c.label;
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline DialectCode code(std::string iso, std::string country = {}) {
  DialectCode c;
  c.iso = std::move(iso);
  if (!country.empty()) c.country = std::move(country);
  return c;
}

// 500 utterances over five dialect labels. ary (two datasets) and arz reach
// the sampling path; apc and afb fall back to even thirds; the fifth label is
// Ambiguous{acw, ars}.
inline std::vector<UtteranceRecord> five_dialect_corpus(std::uint64_t seed = 99) {
  return make_records(
      {
          {"maghreb_read", code("ary", "MAR"), 80, 120.0, 200.0, 4},
          {"maghreb_tv", code("ary", "MAR"), 70, 150.0, 230.0, 0},
          {"nile_conv", code("arz", "EGY"), 120, 100.0, 160.0, 5},
          {"levant_small", code("apc", "SYR"), 90, 20.0, 60.0, 0},
          {"gulf_small", code("afb", "KWT"), 90, 10.0, 40.0, 3},
          {"saudi_mixed", AmbiguousDialect{{"acw", "ars"}}, 50, 5.0, 15.0, 0},
      },
      seed);
}

}  // namespace synth
