#include "dialkit/record.hpp"

#include <cmath>
#include <set>

#include "dialkit/error.hpp"
#include "dialkit/text_norm.hpp"

namespace dialkit::corpus {

std::string_view to_string(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Adapt: return "adapt";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    case Split::Unassigned: return "unassigned";
  }
  return "unassigned";
}

std::optional<Split> parse_split(std::string_view text) {
  std::string s(text);
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  if (s == "train") return Split::Train;
  if (s == "adapt") return Split::Adapt;
  if (s == "dev" || s == "valid" || s == "validation") return Split::Dev;
  if (s == "test") return Split::Test;
  if (s == "unassigned") return Split::Unassigned;
  return std::nullopt;
}

namespace {

// (field, detail) per out-of-range score
std::vector<std::pair<std::string, std::string>> score_problems(const Scores& s) {
  std::vector<std::pair<std::string, std::string>> out;
  auto range = [&](const std::optional<double>& v, double lo, double hi, const char* name) {
    if (v && !(*v >= lo && *v <= hi)) {
      out.emplace_back(name, std::string(name) + "=" + std::to_string(*v) + " outside [" + std::to_string(lo) +
                                 ", " + std::to_string(hi) + "]");
    }
  };
  range(s.aldi, 0.0, 1.0, "aldi");
  if (s.msa_da && *s.msa_da != 0 && *s.msa_da != 1) {
    out.emplace_back("msa_da", "msa_da=" + std::to_string(*s.msa_da) + " not in {0,1}");
  }
  range(s.pesq, 1.0, 4.5, "pesq");
  range(s.stoi, 0.0, 1.0, "stoi");
  range(s.nmr_mos, 1.0, 5.0, "nmr_mos");
  if (s.si_sdr && !std::isfinite(*s.si_sdr)) out.emplace_back("si_sdr", "si_sdr is not finite");
  return out;
}

}  // namespace

void check_score_ranges(const Scores& s) {
  const auto problems = score_problems(s);
  if (!problems.empty()) throw Error(ErrorCode::OutOfRangeScore, problems.front().second);
}

std::vector<Violation> validate_record(const UtteranceRecord& r, const text::Normalizer& normalizer) {
  std::vector<Violation> out;
  auto add = [&](std::string field, std::string detail) {
    out.push_back({r.utterance_id, std::move(field), std::move(detail)});
  };
  if (r.utterance_id.empty()) add("utterance_id", "empty");
  if (r.dataset_id.empty()) add("dataset_id", "empty");
  if (!(r.duration > 0)) add("duration", "must be > 0");
  if (normalizer.normalize(r.standardized_transcript) != r.standardized_transcript) {
    add("standardized_transcript", "not a normalization fixed point");
  }
  for (auto& [field, detail] : score_problems(r.scores)) add("scores." + field, std::move(detail));
  return out;
}

std::vector<Violation> validate_records(std::span<const UtteranceRecord> records,
                                        const text::Normalizer& normalizer) {
  std::vector<Violation> out;
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    auto v = validate_record(r, normalizer);
    out.insert(out.end(), v.begin(), v.end());
    if (!seen.insert(r.utterance_id).second) {
      out.push_back({r.utterance_id, "utterance_id", "duplicate"});
    }
  }
  return out;
}

}  // namespace dialkit::corpus
