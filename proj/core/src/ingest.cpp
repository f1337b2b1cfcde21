#include "dialkit/ingest.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "dialkit/audio.hpp"
#include "dialkit/error.hpp"
#include "dialkit/manifest.hpp"
#include "dialkit/parallel.hpp"
#include "dialkit/text_norm.hpp"
#include "dialkit/tsv.hpp"
#include "dialkit/wav.hpp"

namespace dialkit::corpus {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::LatinOnly: return "LatinOnly";
    case DropReason::Empty: return "Empty";
    case DropReason::TooShort: return "TooShort";
  }
  return "?";
}

namespace {

// boost's INI reader keeps trailing "; comment" text in values.
std::string clean_value(std::string v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i] == ';' || v[i] == '#') && (v[i - 1] == ' ' || v[i - 1] == '\t')) {
      v.resize(i);
      break;
    }
  }
  const auto first = v.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = v.find_last_not_of(" \t");
  return v.substr(first, last - first + 1);
}

[[noreturn]] void config_error(std::string_view origin, const std::string& what) {
  throw Error(ErrorCode::Config, std::string(origin) + ": " + what);
}

}  // namespace

DatasetConfig DatasetConfig::parse(std::string_view ini, const fs::path& base_dir,
                                   std::string_view origin) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(ini)};
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(origin, e.message() + " (line " + std::to_string(e.line()) + ")");
  }

  DatasetConfig c;
  c.digest = digest_hex(ini);
  bool have_id = false, have_transcripts = false, have_audio = false;

  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      config_error(origin, "key '" + section + "' outside a section");
    }
    for (const auto& [key, node] : body) {
      const std::string value = clean_value(node.data());
      const std::string where = "[" + section + "] " + key;
      if (section == "dataset") {
        if (key == "id") {
          if (value.empty() || value.find_first_of("/\\ \t") != std::string::npos) {
            config_error(origin, where + ": dataset id must be a nonempty token without slashes");
          }
          c.dataset_id = value;
          have_id = true;
        } else if (key == "transcripts") {
          c.transcripts = base_dir / value;
          have_transcripts = true;
        } else if (key == "audio_root") {
          c.audio_root = base_dir / value;
          have_audio = true;
        } else if (key == "transliteration") {
          if (value == "auto") {
            c.transliteration = text::BuckwalterMode::Auto;
          } else if (value == "buckwalter") {
            c.transliteration = text::BuckwalterMode::Always;
          } else if (value == "none") {
            c.transliteration = text::BuckwalterMode::Never;
          } else {
            config_error(origin, where + ": expected auto, buckwalter or none");
          }
        } else if (key == "location_semantics") {
          if (value == "speaker_origin") {
            c.location = LocationSemantics::SpeakerOrigin;
          } else if (value == "recording_site") {
            c.location = LocationSemantics::RecordingSite;
          } else {
            config_error(origin, where + ": expected speaker_origin or recording_site");
          }
        } else if (key == "min_duration") {
          auto v = io::parse_number(value);
          if (!v || *v < 0) config_error(origin, where + ": expected a non-negative number");
          c.min_duration = *v;
        } else if (key == "style") {
          if (!value.empty()) c.default_style = value;
        } else {
          config_error(origin, "unknown key " + where);
        }
      } else if (section == "fields") {
        static const std::map<std::string, std::string FieldMapping::*> slots = {
            {"row_id", &FieldMapping::row_id},   {"audio", &FieldMapping::audio},
            {"transcript", &FieldMapping::transcript},
            {"speaker_id", &FieldMapping::speaker_id},
            {"gender", &FieldMapping::gender},   {"age", &FieldMapping::age},
            {"domain", &FieldMapping::domain},   {"split", &FieldMapping::split},
            {"start", &FieldMapping::start},     {"end", &FieldMapping::end},
            {"channel", &FieldMapping::channel}, {"style", &FieldMapping::style},
            {"country", &FieldMapping::country}, {"city", &FieldMapping::city},
            {"dialect", &FieldMapping::dialect},
        };
        auto it = slots.find(key);
        if (it == slots.end()) config_error(origin, "unknown key " + where);
        c.fields.*(it->second) = value;
      } else if (section == "dialect") {
        if (key == "rule") {
          if (value == "fixed") {
            c.dialect_rule = DialectRule::Fixed;
          } else if (value == "column") {
            c.dialect_rule = DialectRule::Column;
          } else if (value == "geo") {
            c.dialect_rule = DialectRule::Geo;
          } else {
            config_error(origin, where + ": expected fixed, column or geo");
          }
        } else if (key == "code") {
          if (!value.empty()) c.dialect_code = value;
        } else {
          config_error(origin, "unknown key " + where);
        }
      } else {
        config_error(origin, "unknown section [" + section + "]");
      }
    }
  }

  if (!have_id) config_error(origin, "[dataset] id is required");
  if (!have_transcripts) config_error(origin, "[dataset] transcripts is required");
  if (!have_audio) config_error(origin, "[dataset] audio_root is required");
  if (c.fields.row_id.empty() || c.fields.audio.empty() || c.fields.transcript.empty()) {
    config_error(origin, "[fields] row_id, audio and transcript cannot be empty");
  }
  if (c.fields.start.empty() != c.fields.end.empty()) {
    config_error(origin, "[fields] start and end must be given together");
  }
  switch (c.dialect_rule) {
    case DialectRule::Fixed:
      if (!c.dialect_code) config_error(origin, "[dialect] rule = fixed needs code");
      break;
    case DialectRule::Column:
      if (c.fields.dialect.empty()) config_error(origin, "[dialect] rule = column needs [fields] dialect");
      break;
    case DialectRule::Geo:
      if (c.fields.country.empty()) config_error(origin, "[dialect] rule = geo needs [fields] country");
      break;
  }
  if (c.dialect_code) {
    try {
      (void)parse_label(*c.dialect_code);
    } catch (const Error& e) {
      config_error(origin, "[dialect] code: " + e.detail());
    }
  }
  return c;
}

DatasetConfig DatasetConfig::load(const fs::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::Config, e.detail());
  }
  DatasetConfig c = parse(text, path.parent_path(), path.string());
  c.source = path;
  return c;
}

std::string IngestReport::to_json() const {
  nlohmann::ordered_json j;
  j["dataset_id"] = dataset_id;
  j["rows_read"] = rows_read;
  j["kept"] = kept;
  nlohmann::ordered_json d = nlohmann::ordered_json::object();
  for (const auto& [k, v] : dropped) d[k] = v;
  j["dropped"] = std::move(d);
  nlohmann::ordered_json errs = nlohmann::ordered_json::array();
  for (const auto& e : errors) {
    errs.push_back({{"row_id", e.row_id}, {"kind", e.kind}, {"detail", e.detail}});
  }
  j["errors"] = std::move(errs);
  std::map<std::string, std::size_t> by_kind;
  for (const auto& w : warnings) ++by_kind[w.warning_kind];
  nlohmann::ordered_json wk = nlohmann::ordered_json::object();
  for (const auto& [k, v] : by_kind) wk[k] = v;
  j["warnings"] = std::move(wk);
  return j.dump(2) + "\n";
}

std::string IngestReport::warnings_jsonl() const {
  std::string out;
  for (const auto& w : warnings) {
    nlohmann::ordered_json j;
    j["utterance_id"] = w.utterance_id;
    j["warning_kind"] = w.warning_kind;
    j["detail"] = w.detail;
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

struct Row {
  std::size_t index = 0;
  std::string row_id;
  fs::path audio_source;
  std::optional<double> start, end;
  std::optional<std::uint16_t> channel;
  UtteranceRecord record;
  std::vector<IngestWarning> warnings;
  // filled by the audio stage
  std::optional<DropReason> drop;
  std::optional<IngestIssue> issue;
};

std::string field(const io::TsvTable& t, const std::vector<std::string>& row,
                  const std::string& column) {
  if (column.empty()) return {};
  auto c = t.column(column);
  return c ? row[*c] : std::string();
}

std::optional<std::string> nonempty(std::string v) {
  if (v.empty()) return std::nullopt;
  return v;
}

bool safe_row_id(const std::string& id) {
  return !id.empty() && id != "." && id != ".." && id.find_first_of("/\\\t\n\r") == std::string::npos;
}

DialectLabel assign_dialect(const DatasetConfig& c, const io::TsvTable& t,
                            const std::vector<std::string>& cells, const GeoLookupTable& geo,
                            const DialectRegistry& registry, std::vector<IngestWarning>& warnings,
                            const std::string& uid) {
  auto fallback = [&]() -> DialectLabel {
    return c.dialect_code ? parse_label(*c.dialect_code, registry) : DialectLabel{UnknownDialect{}};
  };
  switch (c.dialect_rule) {
    case DialectRule::Fixed:
      return parse_label(*c.dialect_code, registry);
    case DialectRule::Column: {
      const std::string v = field(t, cells, c.fields.dialect);
      if (v.empty()) {
        warnings.push_back({uid, "MissingDialect", "empty dialect column"});
        return fallback();
      }
      return parse_label(v, registry);
    }
    case DialectRule::Geo: {
      if (c.location == LocationSemantics::RecordingSite) {
        warnings.push_back({uid, "LocationNotSpeakerOrigin",
                            "location describes the recording site; dialect not inferred"});
        return fallback();
      }
      const std::string country = field(t, cells, c.fields.country);
      const std::string city = field(t, cells, c.fields.city);
      if (country.empty()) {
        warnings.push_back({uid, "MissingLocation", "empty country"});
        return fallback();
      }
      DialectLabel label;
      try {
        label = infer_dialect(country, city.empty() ? std::nullopt : std::optional<std::string_view>(city),
                              geo);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UnknownLocation) throw;
        warnings.push_back({uid, "UnknownLocation", e.detail()});
        return fallback();
      }
      if (const auto* amb = std::get_if<AmbiguousDialect>(&label)) {
        warnings.push_back({uid, "AmbiguousDialect", render_label(*amb)});
      }
      return label;
    }
  }
  return UnknownDialect{};
}

}  // namespace

IngestResult ingest_dataset(const DatasetConfig& c, const IngestOptions& options) {
  const text::Normalizer& normalizer = options.normalizer ? *options.normalizer : text::default_normalizer();
  const DialectRegistry& registry = options.registry ? *options.registry : DialectRegistry::standard();
  const GeoLookupTable& geo = options.geo ? *options.geo : GeoLookupTable::standard();
  const DomainThemeTable* themes = options.themes;
  if (!themes && !c.fields.domain.empty()) themes = &DomainThemeTable::standard();

  std::error_code ec;
  if (!fs::is_directory(c.audio_root, ec)) {
    throw Error(ErrorCode::Io, "audio root not found: " + c.audio_root.string());
  }
  io::TsvTable table;
  try {
    table = io::read_tsv(c.transcripts);
  } catch (const Error& e) {
    throw Error(e.code() == ErrorCode::Io ? ErrorCode::Io : ErrorCode::MalformedTable, e.detail());
  }
  for (const std::string* col : {&c.fields.row_id, &c.fields.audio, &c.fields.transcript}) {
    if (!table.column(*col)) {
      throw Error(ErrorCode::MalformedTable,
                  c.transcripts.string() + ": missing column '" + *col + "'");
    }
  }
  for (const std::string* col :
       {&c.fields.speaker_id, &c.fields.gender, &c.fields.age, &c.fields.domain, &c.fields.split,
        &c.fields.start, &c.fields.end, &c.fields.channel, &c.fields.style, &c.fields.country,
        &c.fields.city, &c.fields.dialect}) {
    if (!col->empty() && !table.column(*col)) {
      throw Error(ErrorCode::MalformedTable,
                  c.transcripts.string() + ": missing column '" + *col + "'");
    }
  }

  IngestResult result;
  IngestReport& report = result.report;
  report.dataset_id = c.dataset_id;
  report.rows_read = table.rows.size();
  for (auto r : {DropReason::LatinOnly, DropReason::Empty, DropReason::TooShort}) {
    report.dropped[std::string(to_string(r))] = 0;
  }

  // Text stage, sequential and cheap.
  std::vector<Row> rows;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& cells = table.rows[i];
    Row row;
    row.index = i;
    row.row_id = field(table, cells, c.fields.row_id);
    const std::string line = "row " + std::to_string(i + 1);
    auto fail = [&](std::string kind, std::string detail) {
      report.errors.push_back({row.row_id.empty() ? line : row.row_id, std::move(kind), std::move(detail)});
    };
    if (!safe_row_id(row.row_id)) {
      fail("MalformedRow", line + ": unusable row id '" + row.row_id + "'");
      continue;
    }
    if (!seen_ids.insert(row.row_id).second) {
      fail("MalformedRow", line + ": duplicate row id");
      continue;
    }
    const std::string audio_rel = field(table, cells, c.fields.audio);
    if (audio_rel.empty()) {
      fail("MalformedRow", line + ": empty audio field");
      continue;
    }
    if (!c.fields.start.empty() &&
        !(field(table, cells, c.fields.start).empty() && field(table, cells, c.fields.end).empty())) {
      // both cells empty: the whole file is the utterance
      row.start = io::parse_number(field(table, cells, c.fields.start));
      row.end = io::parse_number(field(table, cells, c.fields.end));
      if (!row.start || !row.end || *row.start < 0 || *row.end <= *row.start) {
        fail("MalformedRow", line + ": bad segment bounds");
        continue;
      }
    }
    if (!c.fields.channel.empty()) {
      const std::string ch = field(table, cells, c.fields.channel);
      if (!ch.empty()) {
        auto v = io::parse_integer(ch);
        if (!v || *v < 0 || *v > 65535) {
          fail("MalformedRow", line + ": bad channel index '" + ch + "'");
          continue;
        }
        row.channel = static_cast<std::uint16_t>(*v);
      }
    }
    row.audio_source = c.audio_root / audio_rel;
    if (!fs::is_regular_file(row.audio_source, ec)) {
      fail("MissingAudio", row.audio_source.string());
      continue;
    }

    UtteranceRecord& r = row.record;
    r.dataset_id = c.dataset_id;
    r.source_id = row.row_id;
    r.utterance_id = c.dataset_id + "/" + row.row_id;
    r.raw_transcript = field(table, cells, c.fields.transcript);

    std::size_t unmapped = 0;
    std::string script_view = r.raw_transcript;
    if (c.transliteration == text::BuckwalterMode::Always) {
      script_view = normalizer.buckwalter_to_arabic(r.raw_transcript, &unmapped);
    }
    const auto script = normalizer.classify_script(script_view);
    if (script == text::ScriptClass::LatinOnly) {
      ++report.dropped["LatinOnly"];
      continue;
    }
    if (script == text::ScriptClass::Empty) {
      ++report.dropped["Empty"];
      continue;
    }
    r.standardized_transcript = normalizer.normalize(r.raw_transcript, c.transliteration);
    if (unmapped) {
      row.warnings.push_back({r.utterance_id, "BuckwalterUnmapped",
                              std::to_string(unmapped) + " character(s) outside the table"});
    }

    r.speaker_id = nonempty(field(table, cells, c.fields.speaker_id));
    r.gender = nonempty(field(table, cells, c.fields.gender));
    r.age = nonempty(field(table, cells, c.fields.age));
    r.recording_meta.style = nonempty(field(table, cells, c.fields.style));
    if (!r.recording_meta.style) r.recording_meta.style = c.default_style;

    if (!c.fields.domain.empty()) {
      r.domain_raw = nonempty(field(table, cells, c.fields.domain));
      if (r.domain_raw) {
        auto d = normalize_domain(*r.domain_raw, *themes);
        r.domain_theme = d.theme;
        if (!d.mapped) row.warnings.push_back({r.utterance_id, "UnmappedDomain", *r.domain_raw});
      }
    }

    if (!c.fields.split.empty()) {
      const std::string tag = field(table, cells, c.fields.split);
      if (!tag.empty()) {
        auto s = parse_split(tag);
        if (!s || *s == Split::Adapt || *s == Split::Unassigned) {
          fail("MalformedRow", line + ": unknown split tag '" + tag + "'");
          continue;
        }
        r.split = *s;
      }
    }

    try {
      r.dialect = assign_dialect(c, table, cells, geo, registry, row.warnings, r.utterance_id);
    } catch (const Error& e) {
      fail(std::string(dialkit::to_string(e.code())), line + ": " + e.detail());
      continue;
    }
    rows.push_back(std::move(row));
  }

  // Audio stage: decode each source file once, in parallel across files.
  std::map<fs::path, std::vector<std::size_t>> by_file;
  for (std::size_t i = 0; i < rows.size(); ++i) by_file[rows[i].audio_source].push_back(i);
  std::vector<const std::pair<const fs::path, std::vector<std::size_t>>*> groups;
  for (const auto& g : by_file) groups.push_back(&g);

  parallel_for(groups.size(), options.jobs, [&](std::size_t gi) {
    const auto& [path, members] = *groups[gi];
    audio::PcmAudio source;
    try {
      source = audio::decode_file(path);
    } catch (const Error& e) {
      for (std::size_t m : members) {
        rows[m].issue = IngestIssue{rows[m].row_id, std::string(dialkit::to_string(e.code())), e.detail()};
      }
      return;
    }
    for (std::size_t m : members) {
      Row& row = rows[m];
      UtteranceRecord& r = row.record;
      try {
        audio::PcmAudio piece;
        if (row.channel) {
          audio::ChannelMap map{{*row.channel, r.speaker_id.value_or("")}};
          piece = std::move(audio::split_channels(source, &map).front().second);
        } else {
          piece = source;
        }
        if (row.start) {
          const double rate = piece.spec.sample_rate;
          const auto first = static_cast<std::size_t>(std::llround(*row.start * rate));
          const auto last = static_cast<std::size_t>(std::llround(*row.end * rate));
          if (first >= piece.frames()) {
            throw Error(ErrorCode::MalformedRow, "segment starts past the end of " + path.string());
          }
          piece = audio::slice_frames(piece, first, last - first);
        }
        const audio::Int16Audio canonical = audio::standardize_audio(piece);
        const audio::Duration dur = audio::compute_duration(canonical);
        r.duration = static_cast<double>(dur.milliseconds()) / 1000.0;
        r.recording_meta.sample_rate = source.spec.sample_rate;
        r.recording_meta.channels = source.spec.channels;
        if (dur.seconds() < c.min_duration || dur.milliseconds() == 0) {
          row.drop = DropReason::TooShort;
          continue;
        }
        if (options.workspace.empty()) {
          r.audio_path = path.string();
        } else {
          const fs::path rel = fs::path("audio") / c.dataset_id / (row.row_id + ".wav");
          audio::write_wav(options.workspace / rel, canonical);
          r.audio_path = rel.generic_string();
        }
      } catch (const Error& e) {
        row.issue = IngestIssue{row.row_id, std::string(dialkit::to_string(e.code())), e.detail()};
      }
    }
  });

  for (auto& row : rows) {
    if (row.issue) {
      report.errors.push_back(std::move(*row.issue));
      continue;
    }
    if (row.drop) {
      ++report.dropped[std::string(to_string(*row.drop))];
      continue;
    }
    report.warnings.insert(report.warnings.end(), row.warnings.begin(), row.warnings.end());
    result.records.push_back(std::move(row.record));
  }
  report.kept = result.records.size();
  return result;
}

}  // namespace dialkit::corpus
