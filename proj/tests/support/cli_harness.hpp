#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dialkit/cli/commands.hpp"
#include "oracles.hpp"

namespace testutil {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = dialkit::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// relative path -> file contents, for whole-tree comparison
inline std::map<std::string, std::string> snapshot(const std::filesystem::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[std::filesystem::relative(e.path(), root).generic_string()] = oracle::slurp(e.path());
  }
  return files;
}

inline const std::filesystem::path& mini_config() {
  static const std::filesystem::path p = std::filesystem::path(DIALKIT_TEST_FIXTURES) / "mini/pipeline.ini";
  return p;
}

inline const std::filesystem::path& mini_hyps() {
  static const std::filesystem::path p = std::filesystem::path(DIALKIT_TEST_FIXTURES) / "mini/hyps/system_a.jsonl";
  return p;
}

// ingest -> profile -> split -> score on the mini corpus; returns the first
// failing exit code or 0.
inline int run_mini_pipeline(const std::filesystem::path& ws, std::string* log = nullptr) {
  const std::string cfg = mini_config().string();
  const std::vector<std::vector<std::string>> steps{
      {"ingest", "--config", cfg, "--out", ws.string()},
      {"profile", "--config", cfg, "--out", ws.string()},
      {"split", "--config", cfg, "--out", ws.string()},
      {"score", "--config", cfg, "--out", ws.string(), "--hyps", mini_hyps().string(), "--split", "all"},
  };
  for (const auto& s : steps) {
    const auto r = run_cli(s);
    if (log) *log += r.out + r.err;
    if (r.code != 0) return r.code;
  }
  return 0;
}

}  // namespace testutil
