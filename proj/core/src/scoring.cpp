#include "dialkit/scoring.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "dialkit/error.hpp"
#include "dialkit/parallel.hpp"
#include "dialkit/text_norm.hpp"
#include "dialkit/tsv.hpp"
#include "dialkit/unicode.hpp"

namespace dialkit::scoring {

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

namespace {

ErrorRate rate_of(EditCounts c) {
  ErrorRate r;
  r.counts = c;
  if (c.ref_len == 0) {
    r.empty_reference = c.insertions > 0;
    r.rate = static_cast<double>(c.insertions);
  } else {
    r.rate = static_cast<double>(c.errors()) / static_cast<double>(c.ref_len);
  }
  return r;
}

ErrorRate words_of_normalized(std::string_view ref, std::string_view hyp) {
  return rate_of(edit_counts_of(tokenize(ref), tokenize(hyp)));
}

ErrorRate chars_of_normalized(std::string_view ref, std::string_view hyp) {
  return rate_of(edit_counts_of(unicode::decode_utf8(ref), unicode::decode_utf8(hyp)));
}

}  // namespace

ErrorRate word_error(std::string_view ref, std::string_view hyp, const text::Normalizer& n) {
  return words_of_normalized(n.normalize(ref), n.normalize(hyp));
}

ErrorRate char_error(std::string_view ref, std::string_view hyp, const text::Normalizer& n) {
  return chars_of_normalized(n.normalize(ref), n.normalize(hyp));
}

double wer(std::string_view ref, std::string_view hyp) {
  return word_error(ref, hyp, text::default_normalizer()).rate;
}

double cer(std::string_view ref, std::string_view hyp) {
  return char_error(ref, hyp, text::default_normalizer()).rate;
}

std::size_t wer_bin(double rate) {
  for (std::size_t k = 1; k <= 10; ++k) {
    if (rate <= static_cast<double>(k) / 10.0) return k - 1;
  }
  return 10;
}

std::string_view wer_bin_label(std::size_t bin) {
  static constexpr std::array<std::string_view, kWerBins> labels = {
      "le_10", "10_20", "20_30", "30_40", "40_50", "50_60", "60_70", "70_80", "80_90", "90_100", "gt_100"};
  return bin < kWerBins ? labels[bin] : "?";
}

WerHistogram wer_histogram(std::span<const double> rates) {
  WerHistogram h;
  for (double r : rates) {
    if (!(r >= 0)) throw Error(ErrorCode::InvalidArgument, "negative or NaN error rate");
    ++h.counts[wer_bin(r)];
  }
  h.total = rates.size();
  if (h.total) {
    for (std::size_t b = 0; b < kWerBins; ++b) {
      h.fractions[b] = static_cast<double>(h.counts[b]) / static_cast<double>(h.total);
    }
  }
  return h;
}

std::string_view to_string(GroupKey key) {
  switch (key) {
    case GroupKey::Dialect: return "dialect";
    case GroupKey::Country: return "country";
    case GroupKey::Locality: return "locality";
    case GroupKey::Dataset: return "dataset";
  }
  return "?";
}

std::optional<GroupKey> parse_group_key(std::string_view text) {
  if (text == "dialect") return GroupKey::Dialect;
  if (text == "country") return GroupKey::Country;
  if (text == "locality" || text == "dialect+subdivision") return GroupKey::Locality;
  if (text == "dataset") return GroupKey::Dataset;
  return std::nullopt;
}

std::vector<Hypothesis> parse_hypotheses(std::string_view text, std::string_view origin) {
  std::vector<Hypothesis> out;
  std::unordered_map<std::string, std::size_t> first;
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedRow, where + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::MalformedRow, where + ": expected an object");
    auto id = j.find("utterance_id");
    auto tx = j.find("text");
    if (id == j.end() || !id->is_string()) throw Error(ErrorCode::MalformedRow, where + ": missing utterance_id");
    if (tx == j.end() || !(tx->is_string() || tx->is_null())) {
      throw Error(ErrorCode::MalformedRow, where + ": missing text");
    }
    Hypothesis h{id->get<std::string>(), tx->is_null() ? std::string() : tx->get<std::string>()};
    auto [it, inserted] = first.emplace(h.utterance_id, line_no);
    if (!inserted) {
      throw Error(ErrorCode::DuplicateUtteranceId,
                  where + ": '" + h.utterance_id + "' already on line " + std::to_string(it->second));
    }
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<Hypothesis> read_hypotheses(const std::filesystem::path& path) {
  return parse_hypotheses(io::read_file(path), path.string());
}

namespace {

std::string group_of(const corpus::UtteranceRecord& r, GroupKey key) {
  if (key == GroupKey::Dataset) return r.dataset_id;
  const auto* code = std::get_if<corpus::DialectCode>(&r.dialect);
  if (!code) return corpus::render_label(r.dialect);
  switch (key) {
    case GroupKey::Dialect: return code->iso;
    case GroupKey::Country: return code->country ? code->iso + "_" + *code->country : code->iso;
    default: return code->render();
  }
}

GroupScore summarize(std::string name, const std::vector<const UtteranceScore*>& members, bool include_empty) {
  GroupScore g;
  g.group = std::move(name);
  std::vector<double> wer_rates;
  double wer_sum = 0, cer_sum = 0;
  for (const auto* u : members) {
    if (u->words.empty_reference && !include_empty) continue;
    ++g.n_utts;
    EditCounts w = u->words.counts, c = u->chars.counts;
    if (w.ref_len == 0 && w.insertions > 0) w.ref_len = 1;
    if (c.ref_len == 0 && c.insertions > 0) c.ref_len = 1;
    g.words += w;
    g.chars += c;
    wer_sum += u->words.rate;
    cer_sum += u->chars.rate;
    wer_rates.push_back(u->words.rate);
  }
  if (g.words.ref_len) g.wer_micro = static_cast<double>(g.words.errors()) / static_cast<double>(g.words.ref_len);
  if (g.chars.ref_len) g.cer_micro = static_cast<double>(g.chars.errors()) / static_cast<double>(g.chars.ref_len);
  if (g.n_utts) {
    g.wer_macro = wer_sum / static_cast<double>(g.n_utts);
    g.cer_macro = cer_sum / static_cast<double>(g.n_utts);
  }
  g.histogram = wer_histogram(wer_rates);
  return g;
}

}  // namespace

ScoreReport score_corpus(std::span<const corpus::UtteranceRecord> references,
                         std::span<const Hypothesis> hypotheses, const ScoreOptions& options) {
  const text::Normalizer& norm = options.normalizer ? *options.normalizer : text::default_normalizer();
  ScoreReport report;
  report.key = options.key;

  std::unordered_map<std::string_view, const Hypothesis*> hyp_of;
  for (const auto& h : hypotheses) {
    if (!hyp_of.emplace(h.utterance_id, &h).second) {
      throw Error(ErrorCode::DuplicateUtteranceId, "hypothesis " + h.utterance_id);
    }
  }
  std::set<std::string_view> ref_ids;
  std::vector<const corpus::UtteranceRecord*> matched;
  for (const auto& r : references) {
    if (!ref_ids.insert(r.utterance_id).second) {
      throw Error(ErrorCode::DuplicateUtteranceId, "reference " + r.utterance_id);
    }
    if (hyp_of.contains(r.utterance_id)) {
      matched.push_back(&r);
    } else {
      report.unmatched_references.push_back(r.utterance_id);
    }
  }
  for (const auto& h : hypotheses) {
    if (!ref_ids.contains(h.utterance_id)) report.unmatched_hypotheses.push_back(h.utterance_id);
  }
  std::sort(report.unmatched_references.begin(), report.unmatched_references.end());
  std::sort(report.unmatched_hypotheses.begin(), report.unmatched_hypotheses.end());
  std::sort(matched.begin(), matched.end(),
            [](const auto* a, const auto* b) { return a->utterance_id < b->utterance_id; });

  report.utterances.resize(matched.size());
  parallel_for(matched.size(), options.jobs, [&](std::size_t i) {
    const auto& r = *matched[i];
    UtteranceScore& u = report.utterances[i];
    u.utterance_id = r.utterance_id;
    u.group = group_of(r, options.key);
    u.dataset_id = r.dataset_id;
    u.reference = norm.normalize(r.standardized_transcript);
    u.hypothesis = norm.normalize(hyp_of.at(r.utterance_id)->text);
    u.words = words_of_normalized(u.reference, u.hypothesis);
    u.chars = chars_of_normalized(u.reference, u.hypothesis);
  });

  std::map<std::string, std::vector<const UtteranceScore*>> groups;
  std::vector<const UtteranceScore*> all;
  for (const auto& u : report.utterances) {
    if (u.words.empty_reference) report.empty_references.push_back(u.utterance_id);
    // groups holding only skipped empty references are not reported
    if (!u.words.empty_reference || options.include_empty_references) groups[u.group].push_back(&u);
    all.push_back(&u);
  }
  for (const auto& [name, members] : groups) {
    report.groups.push_back(summarize(name, members, options.include_empty_references));
  }
  report.groups.push_back(summarize("overall", all, options.include_empty_references));
  return report;
}

namespace {

std::vector<std::string> bin_columns() {
  std::vector<std::string> cols;
  for (std::size_t b = 0; b < kWerBins; ++b) cols.emplace_back(wer_bin_label(b));
  return cols;
}

}  // namespace

std::string format_report_tsv(const ScoreReport& report, const corpus::RunMetadata* run) {
  io::TsvTable t;
  if (run) t.metadata = run->lines();
  t.header = {"group", "wer_micro", "wer_macro", "cer_micro", "cer_macro", "n_utts"};
  for (auto& c : bin_columns()) t.header.push_back(c);
  for (const auto& g : report.groups) {
    std::vector<std::string> row = {g.group,
                                    io::format_number(g.wer_micro),
                                    io::format_number(g.wer_macro),
                                    io::format_number(g.cer_micro),
                                    io::format_number(g.cer_macro),
                                    std::to_string(g.n_utts)};
    for (double f : g.histogram.fractions) row.push_back(io::format_number(f));
    t.rows.push_back(std::move(row));
  }
  return io::format_tsv(t);
}

std::string format_detail_tsv(const ScoreReport& report, const corpus::RunMetadata* run) {
  io::TsvTable t;
  if (run) t.metadata = run->lines();
  t.header = {"utterance_id", "group", "dataset_id", "ref_words", "sub", "del", "ins", "wer",
              "ref_chars", "char_sub", "char_del", "char_ins", "cer", "empty_reference",
              "reference", "hypothesis"};
  for (const auto& u : report.utterances) {
    const auto& w = u.words.counts;
    const auto& c = u.chars.counts;
    t.rows.push_back({u.utterance_id, u.group, u.dataset_id, std::to_string(w.ref_len),
                      std::to_string(w.substitutions), std::to_string(w.deletions),
                      std::to_string(w.insertions), io::format_number(u.words.rate),
                      std::to_string(c.ref_len), std::to_string(c.substitutions),
                      std::to_string(c.deletions), std::to_string(c.insertions),
                      io::format_number(u.chars.rate), u.words.empty_reference ? "1" : "0",
                      u.reference, u.hypothesis});
  }
  return io::format_tsv(t);
}

std::string format_score_warnings(const ScoreReport& report) {
  std::string out;
  auto emit = [&](const std::string& id, const char* kind, const char* detail) {
    nlohmann::ordered_json j;
    j["utterance_id"] = id;
    j["warning_kind"] = kind;
    j["detail"] = detail;
    out += j.dump();
    out += '\n';
  };
  for (const auto& id : report.unmatched_hypotheses) emit(id, "UnmatchedHypothesis", "no reference with this id");
  for (const auto& id : report.unmatched_references) emit(id, "UnmatchedReference", "no hypothesis with this id");
  for (const auto& id : report.empty_references) emit(id, "EmptyReference", "reference is empty after normalization");
  return out;
}

std::vector<GroupScore> parse_report_tsv(std::string_view text, std::string_view origin) {
  const io::TsvTable t = io::parse_tsv(text, origin);
  const std::size_t cg = t.require_column("group"), cwm = t.require_column("wer_micro"),
                    cwa = t.require_column("wer_macro"), ccm = t.require_column("cer_micro"),
                    cca = t.require_column("cer_macro"), cn = t.require_column("n_utts");
  std::vector<std::size_t> bins;
  for (auto& c : bin_columns()) bins.push_back(t.require_column(c));
  std::vector<GroupScore> out;
  for (const auto& row : t.rows) {
    auto num = [&](std::size_t c) {
      auto v = io::parse_number(row[c]);
      if (!v) throw Error(ErrorCode::MalformedRow, std::string(origin) + ": bad number '" + row[c] + "'");
      return *v;
    };
    GroupScore g;
    g.group = row[cg];
    g.wer_micro = num(cwm);
    g.wer_macro = num(cwa);
    g.cer_micro = num(ccm);
    g.cer_macro = num(cca);
    auto n = io::parse_integer(row[cn]);
    if (!n || *n < 0) throw Error(ErrorCode::MalformedRow, std::string(origin) + ": bad n_utts");
    g.n_utts = static_cast<std::size_t>(*n);
    g.histogram.total = g.n_utts;
    for (std::size_t b = 0; b < kWerBins; ++b) g.histogram.fractions[b] = num(bins[b]);
    out.push_back(std::move(g));
  }
  return out;
}

std::string format_histogram_table(std::span<const SystemGroups> systems) {
  io::TsvTable t;
  t.header = {"system", "group", "n_utts"};
  for (auto& c : bin_columns()) t.header.push_back(c);
  for (const auto& [system, groups] : systems) {
    for (const auto& g : groups) {
      std::vector<std::string> row = {system, g.group, std::to_string(g.n_utts)};
      for (double f : g.histogram.fractions) row.push_back(io::format_fixed(f * 100.0, 2));
      t.rows.push_back(std::move(row));
    }
  }
  return io::format_tsv(t);
}

std::string format_system_table(std::span<const SystemGroups> systems, bool cer) {
  std::vector<std::string> group_order;
  std::set<std::string> seen;
  for (const auto& [system, groups] : systems) {
    for (const auto& g : groups) {
      if (seen.insert(g.group).second) group_order.push_back(g.group);
    }
  }
  // "overall" last, the rest alphabetical.
  std::stable_sort(group_order.begin(), group_order.end(), [](const std::string& a, const std::string& b) {
    if ((a == "overall") != (b == "overall")) return b == "overall";
    return a < b;
  });
  io::TsvTable t;
  t.header = {"group"};
  for (const auto& [system, _] : systems) t.header.push_back(system);
  for (const auto& name : group_order) {
    std::vector<std::string> row = {name};
    for (const auto& [system, groups] : systems) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](const GroupScore& g) { return g.group == name; });
      row.push_back(it == groups.end() ? "-" : io::format_fixed((cer ? it->cer_micro : it->wer_micro) * 100.0, 2));
    }
    t.rows.push_back(std::move(row));
  }
  return io::format_tsv(t);
}

}  // namespace dialkit::scoring
