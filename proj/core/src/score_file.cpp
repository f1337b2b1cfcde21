#include "dialkit/score_file.hpp"

#include <array>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "dialkit/error.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::profiling {

using nlohmann::json;

namespace {

std::optional<double> number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw Error(ErrorCode::MalformedRow, where + ": " + key + " is not a number");
  return it->get<double>();
}

}  // namespace

std::vector<ScoreRow> parse_score_file(std::string_view text, std::string_view origin) {
  static const std::set<std::string> known = {"utterance_id", "aldi",   "msa_da",  "pesq",
                                              "stoi",         "si_sdr", "nmr_mos", "flags"};
  std::vector<ScoreRow> rows;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedRow, where + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorCode::MalformedRow, where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (!known.contains(key)) throw Error(ErrorCode::MalformedRow, where + ": unknown field '" + key + "'");
    }
    auto id = obj.find("utterance_id");
    if (id == obj.end() || !id->is_string() || id->get<std::string>().empty()) {
      throw Error(ErrorCode::MalformedRow, where + ": missing utterance_id");
    }
    ScoreRow row;
    row.utterance_id = id->get<std::string>();
    row.scores.aldi = number(obj, "aldi", where);
    if (auto v = number(obj, "msa_da", where)) {
      if (*v != 0.0 && *v != 1.0) {
        throw Error(ErrorCode::OutOfRangeScore, where + ": msa_da=" + io::format_number(*v) + " not in {0,1}");
      }
      row.scores.msa_da = static_cast<int>(*v);
    }
    row.scores.pesq = number(obj, "pesq", where);
    row.scores.stoi = number(obj, "stoi", where);
    row.scores.si_sdr = number(obj, "si_sdr", where);
    row.scores.nmr_mos = number(obj, "nmr_mos", where);
    if (auto f = obj.find("flags"); f != obj.end() && !f->is_null()) {
      if (!f->is_array()) throw Error(ErrorCode::MalformedRow, where + ": flags must be an array");
      for (const auto& flag : *f) {
        if (!flag.is_string()) throw Error(ErrorCode::MalformedRow, where + ": flags must be strings");
        row.flags.push_back(flag.get<std::string>());
      }
    }
    try {
      check_score_ranges(row.scores);
    } catch (const Error& e) {
      throw Error(ErrorCode::OutOfRangeScore, where + ": " + e.detail());
    }
    auto [it, inserted] = first_line.emplace(row.utterance_id, line_no);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateUtteranceId, where + ": utterance_id '" + row.utterance_id +
                                                       "' already scored on line " +
                                                       std::to_string(it->second));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScoreRow> read_score_file(const std::filesystem::path& path) {
  return parse_score_file(io::read_file(path), path.string());
}

std::string format_score_file(std::span<const ScoreRow> rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["utterance_id"] = r.utterance_id;
    if (r.scores.aldi) j["aldi"] = *r.scores.aldi;
    if (r.scores.msa_da) j["msa_da"] = *r.scores.msa_da;
    if (r.scores.pesq) j["pesq"] = *r.scores.pesq;
    if (r.scores.stoi) j["stoi"] = *r.scores.stoi;
    if (r.scores.si_sdr) j["si_sdr"] = *r.scores.si_sdr;
    if (r.scores.nmr_mos) j["nmr_mos"] = *r.scores.nmr_mos;
    if (!r.flags.empty()) j["flags"] = r.flags;
    out += j.dump();
    out += '\n';
  }
  return out;
}

JoinReport join_scores(std::span<corpus::UtteranceRecord> records, std::span<const ScoreRow> rows,
                       bool strict) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) index.emplace(records[i].utterance_id, i);
  std::vector<std::array<bool, 6>> touched(records.size(), std::array<bool, 6>{});

  JoinReport report;
  for (const auto& row : rows) {
    auto it = index.find(row.utterance_id);
    if (it == index.end()) {
      if (strict) throw Error(ErrorCode::UnknownUtteranceId, row.utterance_id);
      report.unknown_ids.push_back(row.utterance_id);
      continue;
    }
    corpus::Scores& dst = records[it->second].scores;
    auto& seen = touched[it->second];
    bool conflict = false;
    auto put = [&](auto& slot, const auto& value, std::size_t k) {
      if (!value) return;
      if (seen[k]) {
        conflict = true;
        return;
      }
      seen[k] = true;
      slot = value;
    };
    put(dst.aldi, row.scores.aldi, 0);
    put(dst.msa_da, row.scores.msa_da, 1);
    put(dst.pesq, row.scores.pesq, 2);
    put(dst.stoi, row.scores.stoi, 3);
    put(dst.si_sdr, row.scores.si_sdr, 4);
    put(dst.nmr_mos, row.scores.nmr_mos, 5);
    if (conflict) {
      if (strict) throw Error(ErrorCode::DuplicateUtteranceId, row.utterance_id + " scored twice");
      report.conflicts.push_back(row.utterance_id);
    }
    ++report.joined;
  }
  return report;
}

}  // namespace dialkit::profiling
