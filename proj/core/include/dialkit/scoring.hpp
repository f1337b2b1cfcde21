#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialkit/edit_distance.hpp"
#include "dialkit/manifest.hpp"
#include "dialkit/record.hpp"

namespace dialkit::text {
class Normalizer;
}

namespace dialkit::scoring {

// Whitespace tokens of already-normalized text.
std::vector<std::string> tokenize(std::string_view normalized);

struct ErrorRate {
  EditCounts counts;
  double rate = 0;
  // Empty reference with a nonempty hypothesis: rate is insertions / 1.
  bool empty_reference = false;
};

// Both sides pass through normalize() first. Rates are not clipped.
ErrorRate word_error(std::string_view ref, std::string_view hyp, const text::Normalizer& normalizer);
// Characters are code points of the normalized text, single spaces included.
ErrorRate char_error(std::string_view ref, std::string_view hyp, const text::Normalizer& normalizer);
double wer(std::string_view ref, std::string_view hyp);
double cer(std::string_view ref, std::string_view hyp);

inline constexpr std::size_t kWerBins = 11;

// Bin 0: rate <= 0.1; bin k (1..9): k/10 < rate <= (k+1)/10; bin 10: rate > 1.
std::size_t wer_bin(double rate);
std::string_view wer_bin_label(std::size_t bin);  // "le_10", "10_20", ..., "90_100", "gt_100"

struct WerHistogram {
  std::array<std::size_t, kWerBins> counts{};
  std::array<double, kWerBins> fractions{};
  std::size_t total = 0;
};

WerHistogram wer_histogram(std::span<const double> rates);

enum class GroupKey {
  Dialect,   // iso
  Country,   // iso_CCC when a country is present
  Locality,  // full rendered code
  Dataset,
};
std::string_view to_string(GroupKey key);
std::optional<GroupKey> parse_group_key(std::string_view text);

struct Hypothesis {
  std::string utterance_id;
  std::string text;
};

// Lines {"utterance_id": ..., "text": ...}; other fields are ignored.
// Throws MalformedRow or DuplicateUtteranceId.
std::vector<Hypothesis> parse_hypotheses(std::string_view jsonl, std::string_view origin);
std::vector<Hypothesis> read_hypotheses(const std::filesystem::path& path);

struct UtteranceScore {
  std::string utterance_id;
  std::string group;
  std::string dataset_id;
  std::string reference;   // normalized
  std::string hypothesis;  // normalized
  ErrorRate words;
  ErrorRate chars;
};

struct GroupScore {
  std::string group;
  std::size_t n_utts = 0;
  EditCounts words;  // pooled
  EditCounts chars;
  double wer_micro = 0, wer_macro = 0;
  double cer_micro = 0, cer_macro = 0;
  WerHistogram histogram;
};

struct ScoreReport {
  GroupKey key = GroupKey::Dialect;
  std::vector<GroupScore> groups;  // sorted by group, then the "overall" row
  std::vector<UtteranceScore> utterances;  // sorted by utterance_id
  std::vector<std::string> unmatched_hypotheses;
  std::vector<std::string> unmatched_references;
  std::vector<std::string> empty_references;
};

struct ScoreOptions {
  GroupKey key = GroupKey::Dialect;
  // Empty-reference utterances are left out of the group figures unless set;
  // when included they count as insertions over one reference unit.
  bool include_empty_references = false;
  unsigned jobs = 1;
  const text::Normalizer* normalizer = nullptr;
};

// References are the records' standardized transcripts.
ScoreReport score_corpus(std::span<const corpus::UtteranceRecord> references,
                         std::span<const Hypothesis> hypotheses, const ScoreOptions& options = {});

// {group, wer_micro, wer_macro, cer_micro, cer_macro, n_utts, <11 bin fractions>}
std::string format_report_tsv(const ScoreReport& report, const corpus::RunMetadata* run);
std::string format_detail_tsv(const ScoreReport& report, const corpus::RunMetadata* run);
// Warnings as JSONL {utterance_id, warning_kind, detail}.
std::string format_score_warnings(const ScoreReport& report);

// Reads the group rows back from format_report_tsv output (pooled counts
// are not part of that table and stay zero).
std::vector<GroupScore> parse_report_tsv(std::string_view text, std::string_view origin);

using SystemGroups = std::pair<std::string, std::vector<GroupScore>>;

// Plot-ready data for the stacked WER-range figure: one row per system and
// group with the 11 bin fractions.
std::string format_histogram_table(std::span<const SystemGroups> systems);
// Group x system matrix of a headline figure (wer_micro, or cer_micro).
std::string format_system_table(std::span<const SystemGroups> systems, bool cer = false);

}  // namespace dialkit::scoring
