#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialkit/record.hpp"

namespace dialkit::profiling {

// Score interchange: one JSON object per line,
// {utterance_id, aldi?, msa_da?, pesq?, stoi?, si_sdr?, nmr_mos?, flags?}.
// Null means absent; "flags" is an optional array of strings.
struct ScoreRow {
  std::string utterance_id;
  corpus::Scores scores;
  std::vector<std::string> flags;
};

// Throws MalformedRow (bad JSON, unknown field, wrong type), OutOfRangeScore
// or DuplicateUtteranceId, each naming origin and line.
std::vector<ScoreRow> parse_score_file(std::string_view text, std::string_view origin);
std::vector<ScoreRow> read_score_file(const std::filesystem::path& path);
std::string format_score_file(std::span<const ScoreRow> rows);

struct JoinReport {
  std::size_t joined = 0;
  std::vector<std::string> unknown_ids;  // rows rejected: no such record
  std::vector<std::string> conflicts;    // a field set by two score rows
};

// Copies present score fields onto the matching records. Rows for unknown
// utterance_ids are rejected and listed; with strict = true they throw
// UnknownUtteranceId instead. A field already set by an earlier row of the same
// join is a conflict (DuplicateUtteranceId when strict).
JoinReport join_scores(std::span<corpus::UtteranceRecord> records, std::span<const ScoreRow> rows,
                       bool strict = false);

}  // namespace dialkit::profiling
