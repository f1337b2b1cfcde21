#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialkit/record.hpp"

namespace dialkit::corpus {

// Provenance block written into every output artifact. No timestamps, so
// reruns on the same inputs are byte-identical.
struct RunMetadata {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string config_digest;  // 16 hex digits
  std::vector<std::pair<std::string, std::string>> extra;

  // "key=value" lines: tool, version, command, seed, config_digest, extra...
  std::vector<std::string> lines() const;
  static RunMetadata from_lines(std::span<const std::string> lines);
};

// FNV-1a 64 of the bytes, 16 lowercase hex digits.
std::string digest_hex(std::string_view bytes);

// Column names of the canonical manifest, in order. Nested fields are
// flattened as recording_meta.sample_rate, scores.aldi, ...
const std::vector<std::string>& manifest_columns();

std::string format_manifest_tsv(std::span<const UtteranceRecord> records, const RunMetadata* run);
// Line-delimited form: an optional {"run": {...}} first line, then one
// record object per line. Absent optional fields are omitted.
std::string format_manifest_jsonl(std::span<const UtteranceRecord> records, const RunMetadata* run);

struct Manifest {
  std::vector<UtteranceRecord> records;
  std::optional<RunMetadata> run;
};

// Throw MalformedRow (with origin and line) or MalformedTable.
Manifest parse_manifest_tsv(std::string_view text, std::string_view origin,
                            const DialectRegistry& registry = DialectRegistry::standard());
Manifest parse_manifest_jsonl(std::string_view text, std::string_view origin,
                              const DialectRegistry& registry = DialectRegistry::standard());

// Format chosen by extension: ".jsonl" is line-delimited, anything else TSV.
Manifest read_manifest(const std::filesystem::path& path,
                       const DialectRegistry& registry = DialectRegistry::standard());
void write_manifest(const std::filesystem::path& path, std::span<const UtteranceRecord> records,
                    const RunMetadata* run);

// Single-record JSON object (one line, no trailing newline).
std::string record_to_json(const UtteranceRecord& record);
UtteranceRecord record_from_json(std::string_view json,
                                 const DialectRegistry& registry = DialectRegistry::standard());

}  // namespace dialkit::corpus
