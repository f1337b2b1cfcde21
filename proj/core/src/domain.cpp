#include "dialkit/domain.hpp"

#include "dialkit/error.hpp"
#include "dialkit/paths.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::corpus {

std::string DomainThemeTable::fold_label(std::string_view raw_label) {
  std::string out;
  bool space = false;
  for (char c : raw_label) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      space = !out.empty();
      continue;
    }
    if (space) {
      out.push_back(' ');
      space = false;
    }
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

DomainThemeTable DomainThemeTable::parse(std::string_view contents, std::string_view origin,
                                         std::size_t expected_themes) {
  DomainThemeTable t;
  for (const auto& row : io::parse_config_table(contents)) {
    if (row.size() < 2 || row[1].empty()) {
      throw Error(ErrorCode::MalformedTable, std::string(origin) + ": expected label<TAB>theme");
    }
    const std::string key = fold_label(row[0]);
    if (key.empty()) throw Error(ErrorCode::MalformedTable, std::string(origin) + ": empty label");
    auto [it, inserted] = t.mapping_.emplace(key, row[1]);
    if (!inserted && it->second != row[1]) {
      throw Error(ErrorCode::MalformedTable,
                  std::string(origin) + ": label '" + row[0] + "' mapped to two themes");
    }
    t.themes_.insert(row[1]);
  }
  if (expected_themes != 0 && t.themes_.size() != expected_themes) {
    throw Error(ErrorCode::MalformedTable,
                std::string(origin) + ": expected " + std::to_string(expected_themes) +
                    " themes, found " + std::to_string(t.themes_.size()));
  }
  return t;
}

DomainThemeTable DomainThemeTable::load(const std::filesystem::path& path, std::size_t expected_themes) {
  return parse(io::read_file(path), path.string(), expected_themes);
}

const DomainThemeTable& DomainThemeTable::standard() {
  static const DomainThemeTable table = load(default_data_dir() / "domains.tsv");
  return table;
}

std::optional<std::string> DomainThemeTable::lookup(std::string_view raw_label) const {
  const std::string key = fold_label(raw_label);
  if (auto it = mapping_.find(key); it != mapping_.end()) return it->second;
  for (const auto& theme : themes_) {
    if (fold_label(theme) == key) return theme;
  }
  return std::nullopt;
}

DomainResult normalize_domain(std::string_view raw_label, const DomainThemeTable& table) {
  if (auto theme = table.lookup(raw_label)) return DomainResult{*theme, true};
  return DomainResult{std::string(kUnknownTheme), false};
}

}  // namespace dialkit::corpus
