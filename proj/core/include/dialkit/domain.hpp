#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace dialkit::corpus {

inline constexpr std::string_view kUnknownTheme = "Unknown";
inline constexpr std::size_t kThemeCount = 11;

// Raw domain strings -> broad reporting themes.
class DomainThemeTable {
 public:
  // data/domains.tsv: 61 raw labels over 11 themes.
  static const DomainThemeTable& standard();

  // Lines: raw label<TAB>theme. The theme inventory is the set of distinct
  // themes and must have exactly `expected_themes` entries (0 = unchecked).
  static DomainThemeTable parse(std::string_view contents, std::string_view origin,
                                std::size_t expected_themes = kThemeCount);
  static DomainThemeTable load(const std::filesystem::path& path,
                               std::size_t expected_themes = kThemeCount);

  // Labels compare case-insensitively with whitespace trimmed and collapsed.
  // A label equal to a theme name maps to that theme.
  std::optional<std::string> lookup(std::string_view raw_label) const;

  const std::set<std::string>& themes() const { return themes_; }
  std::size_t label_count() const { return mapping_.size(); }

  static std::string fold_label(std::string_view raw_label);

 private:
  std::map<std::string, std::string> mapping_;  // folded label -> theme
  std::set<std::string> themes_;
};

struct DomainResult {
  std::string theme;  // kUnknownTheme when unmapped
  bool mapped = false;
};

// Unmapped labels yield kUnknownTheme with mapped == false; the caller keeps
// the raw string and emits an UnmappedDomain warning.
DomainResult normalize_domain(std::string_view raw_label, const DomainThemeTable& table);

}  // namespace dialkit::corpus
