#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialkit/dialect.hpp"

namespace dialkit::text {
class Normalizer;
}

namespace dialkit::corpus {

enum class Split { Train, Adapt, Dev, Test, Unassigned };

std::string_view to_string(Split split);
// "train", "adapt", "dev", "test", "unassigned"; also accepts the common
// release spellings "validation"/"valid" for dev (case-insensitive).
std::optional<Split> parse_split(std::string_view text);

struct RecordingMeta {
  std::optional<std::uint32_t> sample_rate;
  std::optional<std::uint16_t> channels;
  std::optional<std::string> style;  // e.g. read, spontaneous, broadcast

  bool operator==(const RecordingMeta&) const = default;
};

// Externally computed per-utterance characterizations.
struct Scores {
  std::optional<double> aldi;     // [0, 1]
  std::optional<int> msa_da;      // 0 = MSA, 1 = DA
  std::optional<double> pesq;     // [1, 4.5]
  std::optional<double> stoi;     // [0, 1]
  std::optional<double> si_sdr;   // dB, unbounded
  std::optional<double> nmr_mos;  // [1, 5]

  bool operator==(const Scores&) const = default;
};

// Throws OutOfRangeScore naming the field.
void check_score_ranges(const Scores& scores);

struct UtteranceRecord {
  std::string utterance_id;
  std::string dataset_id;
  std::string source_id;  // row id / file stem in the original release
  std::string audio_path;
  double duration = 0;  // seconds
  std::string raw_transcript;
  std::string standardized_transcript;
  std::optional<std::string> speaker_id;
  std::optional<std::string> gender;
  std::optional<std::string> age;
  RecordingMeta recording_meta;
  std::optional<std::string> domain_raw;
  std::optional<std::string> domain_theme;
  DialectLabel dialect = UnknownDialect{};
  Split split = Split::Unassigned;
  Scores scores;

  bool operator==(const UtteranceRecord&) const = default;
};

struct Violation {
  std::string utterance_id;
  std::string field;
  std::string detail;
};

// Checks the per-record invariants: nonempty id, duration > 0, the
// standardized transcript is a normalization fixed point, scores in range.
std::vector<Violation> validate_record(const UtteranceRecord& record,
                                       const text::Normalizer& normalizer);
// Per-record checks plus utterance_id uniqueness.
std::vector<Violation> validate_records(std::span<const UtteranceRecord> records,
                                        const text::Normalizer& normalizer);

}  // namespace dialkit::corpus
