#include "dialkit/manifest.hpp"

#include <cstdio>
#include <limits>

#include <json.hpp>

#include "dialkit/error.hpp"
#include "dialkit/paths.hpp"
#include "dialkit/rng.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::corpus {

using nlohmann::ordered_json;

std::string digest_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::vector<std::string> RunMetadata::lines() const {
  std::vector<std::string> out;
  out.push_back("tool=dialkit");
  out.push_back("version=" + std::string(version()));
  out.push_back("command=" + command);
  if (seed) out.push_back("seed=" + std::to_string(*seed));
  out.push_back("config_digest=" + config_digest);
  for (const auto& [k, v] : extra) out.push_back(k + "=" + v);
  return out;
}

RunMetadata RunMetadata::from_lines(std::span<const std::string> lines) {
  RunMetadata run;
  for (const auto& line : lines) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    if (key == "tool" || key == "version") continue;
    if (key == "command") {
      run.command = value;
    } else if (key == "seed") {
      auto v = io::parse_integer(value);
      if (!v || *v < 0) throw Error(ErrorCode::MalformedTable, "bad seed in run metadata");
      run.seed = static_cast<std::uint64_t>(*v);
    } else if (key == "config_digest") {
      run.config_digest = value;
    } else {
      run.extra.emplace_back(std::move(key), std::move(value));
    }
  }
  return run;
}

const std::vector<std::string>& manifest_columns() {
  static const std::vector<std::string> cols = {
      "utterance_id",          "dataset_id",     "source_id",
      "audio_path",            "duration",       "raw_transcript",
      "standardized_transcript", "speaker_id",   "gender",
      "age",                   "recording_meta.sample_rate", "recording_meta.channels",
      "recording_meta.style",  "domain_raw",     "domain_theme",
      "dialect",               "split",          "scores.aldi",
      "scores.msa_da",         "scores.pesq",    "scores.stoi",
      "scores.si_sdr",         "scores.nmr_mos",
  };
  return cols;
}

namespace {

std::string opt(const std::optional<std::string>& v) { return v.value_or(""); }
std::string opt_num(const std::optional<double>& v) { return v ? io::format_number(*v) : ""; }
template <class I>
std::string opt_int(const std::optional<I>& v) {
  return v ? std::to_string(*v) : "";
}

std::vector<std::string> to_row(const UtteranceRecord& r) {
  return {r.utterance_id,
          r.dataset_id,
          r.source_id,
          r.audio_path,
          io::format_number(r.duration),
          r.raw_transcript,
          r.standardized_transcript,
          opt(r.speaker_id),
          opt(r.gender),
          opt(r.age),
          opt_int(r.recording_meta.sample_rate),
          opt_int(r.recording_meta.channels),
          opt(r.recording_meta.style),
          opt(r.domain_raw),
          opt(r.domain_theme),
          render_label(r.dialect),
          std::string(to_string(r.split)),
          opt_num(r.scores.aldi),
          opt_int(r.scores.msa_da),
          opt_num(r.scores.pesq),
          opt_num(r.scores.stoi),
          opt_num(r.scores.si_sdr),
          opt_num(r.scores.nmr_mos)};
}

struct RowError {
  std::string what;
};

std::optional<std::string> opt_field(const std::string& v) {
  if (v.empty()) return std::nullopt;
  return v;
}

std::optional<double> num_field(const std::string& v, const char* name) {
  if (v.empty()) return std::nullopt;
  auto d = io::parse_number(v);
  if (!d) throw RowError{std::string(name) + ": not a number: '" + v + "'"};
  return d;
}

template <class I>
std::optional<I> int_field(const std::string& v, const char* name) {
  if (v.empty()) return std::nullopt;
  auto d = io::parse_integer(v);
  if (!d || *d < static_cast<long long>(std::numeric_limits<I>::min()) ||
      *d > static_cast<long long>(std::numeric_limits<I>::max())) {
    throw RowError{std::string(name) + ": not a valid integer: '" + v + "'"};
  }
  return static_cast<I>(*d);
}

UtteranceRecord from_row(const std::vector<std::string>& f, const DialectRegistry& registry) {
  UtteranceRecord r;
  r.utterance_id = f[0];
  r.dataset_id = f[1];
  r.source_id = f[2];
  r.audio_path = f[3];
  auto dur = num_field(f[4], "duration");
  if (!dur) throw RowError{"duration: missing"};
  r.duration = *dur;
  r.raw_transcript = f[5];
  r.standardized_transcript = f[6];
  r.speaker_id = opt_field(f[7]);
  r.gender = opt_field(f[8]);
  r.age = opt_field(f[9]);
  r.recording_meta.sample_rate = int_field<std::uint32_t>(f[10], "recording_meta.sample_rate");
  r.recording_meta.channels = int_field<std::uint16_t>(f[11], "recording_meta.channels");
  r.recording_meta.style = opt_field(f[12]);
  r.domain_raw = opt_field(f[13]);
  r.domain_theme = opt_field(f[14]);
  try {
    r.dialect = parse_label(f[15], registry);
  } catch (const Error& e) {
    throw RowError{"dialect: " + e.detail()};
  }
  auto split = parse_split(f[16]);
  if (!split) throw RowError{"split: unknown value '" + f[16] + "'"};
  r.split = *split;
  r.scores.aldi = num_field(f[17], "scores.aldi");
  r.scores.msa_da = int_field<int>(f[18], "scores.msa_da");
  r.scores.pesq = num_field(f[19], "scores.pesq");
  r.scores.stoi = num_field(f[20], "scores.stoi");
  r.scores.si_sdr = num_field(f[21], "scores.si_sdr");
  r.scores.nmr_mos = num_field(f[22], "scores.nmr_mos");
  return r;
}

ordered_json run_to_json(const RunMetadata& run) {
  ordered_json j;
  j["tool"] = "dialkit";
  j["version"] = std::string(version());
  j["command"] = run.command;
  if (run.seed) j["seed"] = *run.seed;
  j["config_digest"] = run.config_digest;
  for (const auto& [k, v] : run.extra) j[k] = v;
  return j;
}

RunMetadata run_from_json(const ordered_json& j) {
  RunMetadata run;
  for (const auto& [k, v] : j.items()) {
    if (k == "tool" || k == "version") continue;
    if (k == "command") {
      run.command = v.get<std::string>();
    } else if (k == "seed") {
      run.seed = v.get<std::uint64_t>();
    } else if (k == "config_digest") {
      run.config_digest = v.get<std::string>();
    } else {
      run.extra.emplace_back(k, v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return run;
}

ordered_json record_json(const UtteranceRecord& r) {
  ordered_json j;
  j["utterance_id"] = r.utterance_id;
  j["dataset_id"] = r.dataset_id;
  j["source_id"] = r.source_id;
  j["audio_path"] = r.audio_path;
  j["duration"] = r.duration;
  j["raw_transcript"] = r.raw_transcript;
  j["standardized_transcript"] = r.standardized_transcript;
  if (r.speaker_id) j["speaker_id"] = *r.speaker_id;
  if (r.gender) j["gender"] = *r.gender;
  if (r.age) j["age"] = *r.age;
  ordered_json meta = ordered_json::object();
  if (r.recording_meta.sample_rate) meta["sample_rate"] = *r.recording_meta.sample_rate;
  if (r.recording_meta.channels) meta["channels"] = *r.recording_meta.channels;
  if (r.recording_meta.style) meta["style"] = *r.recording_meta.style;
  if (!meta.empty()) j["recording_meta"] = std::move(meta);
  if (r.domain_raw) j["domain_raw"] = *r.domain_raw;
  if (r.domain_theme) j["domain_theme"] = *r.domain_theme;
  j["dialect"] = render_label(r.dialect);
  j["split"] = std::string(to_string(r.split));
  ordered_json scores = ordered_json::object();
  if (r.scores.aldi) scores["aldi"] = *r.scores.aldi;
  if (r.scores.msa_da) scores["msa_da"] = *r.scores.msa_da;
  if (r.scores.pesq) scores["pesq"] = *r.scores.pesq;
  if (r.scores.stoi) scores["stoi"] = *r.scores.stoi;
  if (r.scores.si_sdr) scores["si_sdr"] = *r.scores.si_sdr;
  if (r.scores.nmr_mos) scores["nmr_mos"] = *r.scores.nmr_mos;
  if (!scores.empty()) j["scores"] = std::move(scores);
  return j;
}

template <class T>
std::optional<T> get_opt(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

UtteranceRecord record_from(const ordered_json& j, const DialectRegistry& registry) {
  UtteranceRecord r;
  r.utterance_id = j.at("utterance_id").get<std::string>();
  r.dataset_id = j.at("dataset_id").get<std::string>();
  r.source_id = j.value("source_id", std::string());
  r.audio_path = j.at("audio_path").get<std::string>();
  r.duration = j.at("duration").get<double>();
  r.raw_transcript = j.at("raw_transcript").get<std::string>();
  r.standardized_transcript = j.at("standardized_transcript").get<std::string>();
  r.speaker_id = get_opt<std::string>(j, "speaker_id");
  r.gender = get_opt<std::string>(j, "gender");
  r.age = get_opt<std::string>(j, "age");
  if (auto it = j.find("recording_meta"); it != j.end() && it->is_object()) {
    r.recording_meta.sample_rate = get_opt<std::uint32_t>(*it, "sample_rate");
    r.recording_meta.channels = get_opt<std::uint16_t>(*it, "channels");
    r.recording_meta.style = get_opt<std::string>(*it, "style");
  }
  r.domain_raw = get_opt<std::string>(j, "domain_raw");
  r.domain_theme = get_opt<std::string>(j, "domain_theme");
  r.dialect = parse_label(j.value("dialect", std::string("unknown")), registry);
  const std::string split = j.value("split", std::string("unassigned"));
  auto s = parse_split(split);
  if (!s) throw Error(ErrorCode::MalformedRow, "unknown split '" + split + "'");
  r.split = *s;
  if (auto it = j.find("scores"); it != j.end() && it->is_object()) {
    r.scores.aldi = get_opt<double>(*it, "aldi");
    r.scores.msa_da = get_opt<int>(*it, "msa_da");
    r.scores.pesq = get_opt<double>(*it, "pesq");
    r.scores.stoi = get_opt<double>(*it, "stoi");
    r.scores.si_sdr = get_opt<double>(*it, "si_sdr");
    r.scores.nmr_mos = get_opt<double>(*it, "nmr_mos");
  }
  return r;
}

bool has_suffix(const std::filesystem::path& p, std::string_view ext) {
  return p.extension().string() == ext;
}

}  // namespace

std::string format_manifest_tsv(std::span<const UtteranceRecord> records, const RunMetadata* run) {
  io::TsvTable t;
  if (run) t.metadata = run->lines();
  t.header = manifest_columns();
  t.rows.reserve(records.size());
  for (const auto& r : records) t.rows.push_back(to_row(r));
  return io::format_tsv(t);
}

std::string format_manifest_jsonl(std::span<const UtteranceRecord> records, const RunMetadata* run) {
  std::string out;
  if (run) {
    ordered_json head;
    head["run"] = run_to_json(*run);
    out += head.dump();
    out += '\n';
  }
  for (const auto& r : records) {
    out += record_json(r).dump();
    out += '\n';
  }
  return out;
}

std::string record_to_json(const UtteranceRecord& record) { return record_json(record).dump(); }

UtteranceRecord record_from_json(std::string_view json, const DialectRegistry& registry) {
  try {
    return record_from(ordered_json::parse(json), registry);
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::MalformedRow, e.what());
  }
}

Manifest parse_manifest_tsv(std::string_view text, std::string_view origin,
                            const DialectRegistry& registry) {
  io::TsvTable t = io::parse_tsv(text, origin);
  if (t.header != manifest_columns()) {
    throw Error(ErrorCode::MalformedTable,
                std::string(origin) + ": header does not match the manifest columns");
  }
  Manifest m;
  if (!t.metadata.empty()) m.run = RunMetadata::from_lines(t.metadata);
  m.records.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    try {
      m.records.push_back(from_row(t.rows[i], registry));
    } catch (const RowError& e) {
      throw Error(ErrorCode::MalformedRow,
                  std::string(origin) + ": data row " + std::to_string(i + 1) + ": " + e.what);
    }
  }
  return m;
}

Manifest parse_manifest_jsonl(std::string_view text, std::string_view origin,
                              const DialectRegistry& registry) {
  Manifest m;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    start = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = ordered_json::parse(line);
      if (j.contains("run") && !j.contains("utterance_id")) {
        m.run = run_from_json(j.at("run"));
        continue;
      }
      m.records.push_back(record_from(j, registry));
    } catch (const ordered_json::exception& e) {
      throw Error(ErrorCode::MalformedRow,
                  std::string(origin) + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedRow,
                  std::string(origin) + ":" + std::to_string(line_no) + ": " + e.detail());
    }
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path, const DialectRegistry& registry) {
  const std::string text = io::read_file(path);
  if (has_suffix(path, ".jsonl")) return parse_manifest_jsonl(text, path.string(), registry);
  return parse_manifest_tsv(text, path.string(), registry);
}

void write_manifest(const std::filesystem::path& path, std::span<const UtteranceRecord> records,
                    const RunMetadata* run) {
  io::write_file(path, has_suffix(path, ".jsonl") ? format_manifest_jsonl(records, run)
                                                  : format_manifest_tsv(records, run));
}

}  // namespace dialkit::corpus
