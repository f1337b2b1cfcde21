#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dialkit/dialect.hpp"
#include "dialkit/domain.hpp"
#include "dialkit/ingest.hpp"
#include "dialkit/scoring.hpp"
#include "dialkit/splits.hpp"
#include "dialkit/text_norm.hpp"

namespace dialkit::cli {

// Pipeline configuration (INI):
//
//   [pipeline]
//   workspace = work
//   seed = 7
//   jobs = 4
//   datasets = datasets/a.ini, datasets/b.ini
//
//   [tables]            ; all optional, shipped defaults otherwise
//   buckwalter = ...
//   punctuation = ...
//   dialects = ...
//   geo = ...
//   themes = ...
//
//   [splits]
//   adapt_hours = 5
//   dev_hours = 1
//   test_hours = 1
//   min_pool_hours = 3
//
//   [profile]
//   scores = scores/text.jsonl, scores/audio.jsonl
//
//   [score]
//   group_key = dialect
//   include_empty_references = false
//
// Relative paths resolve against the config file's directory.
struct PipelineConfig {
  std::filesystem::path source;
  std::filesystem::path workspace;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<corpus::DatasetConfig> datasets;
  splits::SplitTargets targets;
  std::vector<std::filesystem::path> score_files;
  scoring::GroupKey group_key = scoring::GroupKey::Dialect;
  bool include_empty_references = false;
  std::string digest;  // over this file and every dataset config

  // Loaded tables; every referenced path is resolved at load time.
  std::shared_ptr<const corpus::DialectRegistry> registry;
  std::shared_ptr<const corpus::GeoLookupTable> geo;
  std::shared_ptr<const corpus::DomainThemeTable> themes;
  std::shared_ptr<const text::Normalizer> normalizer;

  // Throws Config or Io.
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace dialkit::cli
