#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dialkit/dialect.hpp"
#include "dialkit/domain.hpp"
#include "dialkit/record.hpp"
#include "dialkit/text_norm.hpp"

namespace dialkit::text {
class Normalizer;
}

namespace dialkit::corpus {

enum class DialectRule {
  Fixed,   // one code for the whole dataset
  Column,  // a rendered label per row
  Geo,     // inferred from country/city columns through the geo table
};

enum class LocationSemantics { SpeakerOrigin, RecordingSite };

// Source column names. Empty means "not provided by this release".
struct FieldMapping {
  std::string row_id = "id";
  std::string audio = "audio";
  std::string transcript = "transcript";
  std::string speaker_id;
  std::string gender;
  std::string age;
  std::string domain;
  std::string split;
  std::string start;    // segment start, seconds
  std::string end;      // segment end, seconds
  std::string channel;  // channel index for per-channel conversational audio
  std::string style;
  std::string country;
  std::string city;
  std::string dialect;
};

// One declarative INI file per dataset:
//
//   [dataset]
//   id = mini_a
//   transcripts = rows.tsv        ; relative to the config file
//   audio_root = audio
//   transliteration = none        ; or buckwalter
//   location_semantics = speaker_origin
//   min_duration = 0.1
//   style = read                  ; default when no style column
//
//   [fields]
//   row_id = id
//   ...
//
//   [dialect]
//   rule = geo                    ; fixed | column | geo
//   code = ary_MAR                ; fixed rule, or fallback
struct DatasetConfig {
  std::string dataset_id;
  std::filesystem::path transcripts;
  std::filesystem::path audio_root;
  text::BuckwalterMode transliteration = text::BuckwalterMode::Auto;  // auto | buckwalter | none
  LocationSemantics location = LocationSemantics::SpeakerOrigin;
  double min_duration = 0.1;
  std::optional<std::string> default_style;
  FieldMapping fields;
  DialectRule dialect_rule = DialectRule::Fixed;
  std::optional<std::string> dialect_code;
  std::filesystem::path source;  // the config file itself; empty if built in code
  std::string digest;            // of the config file contents

  // Throws Config with the offending key.
  static DatasetConfig load(const std::filesystem::path& path);
  static DatasetConfig parse(std::string_view ini, const std::filesystem::path& base_dir,
                             std::string_view origin);
};

enum class DropReason { LatinOnly, Empty, TooShort };
std::string_view to_string(DropReason reason);

struct IngestIssue {
  std::string row_id;
  std::string kind;  // MissingAudio, MalformedRow, UndecodableAudio, ...
  std::string detail;
};

// {utterance_id, warning_kind, detail}
struct IngestWarning {
  std::string utterance_id;
  std::string warning_kind;
  std::string detail;
};

struct IngestReport {
  std::string dataset_id;
  std::size_t rows_read = 0;
  std::size_t kept = 0;
  std::map<std::string, std::size_t> dropped;  // by DropReason name
  std::vector<IngestIssue> errors;             // rows excluded because of an error
  std::vector<IngestWarning> warnings;

  bool ok() const { return errors.empty(); }
  std::string to_json() const;           // single document, pretty-printed
  std::string warnings_jsonl() const;
};

struct IngestOptions {
  // Canonical WAVs go to <workspace>/audio/<dataset_id>/<row_id>.wav and
  // records point at that workspace-relative path. Empty: no audio written
  // and audio_path is the source path.
  std::filesystem::path workspace;
  unsigned jobs = 1;
  const text::Normalizer* normalizer = nullptr;  // default_normalizer() when null
  const GeoLookupTable* geo = nullptr;           // standard() when null
  const DomainThemeTable* themes = nullptr;
  const DialectRegistry* registry = nullptr;
};

struct IngestResult {
  std::vector<UtteranceRecord> records;  // in transcript-row order
  IngestReport report;
};

// Throws Config/Io for fatal problems (unreadable transcript table, missing
// audio root). Row-level problems land in report.errors.
IngestResult ingest_dataset(const DatasetConfig& config, const IngestOptions& options = {});

}  // namespace dialkit::corpus
