#include <string>

#include "dialkit/error.hpp"
#include "dialkit/text_norm.hpp"
#include "dialkit/tsv.hpp"
#include "dialkit/unicode.hpp"

namespace dialkit::text {

namespace {

struct Entry {
  char32_t symbol;
  char32_t arabic;
};

// Keep in sync with data/buckwalter.tsv.
constexpr Entry kStandard[] = {
    {U'\'', 0x0621}, {U'|', 0x0622}, {U'>', 0x0623}, {U'&', 0x0624}, {U'<', 0x0625},
    {U'}', 0x0626},  {U'A', 0x0627}, {U'b', 0x0628}, {U'p', 0x0629}, {U't', 0x062A},
    {U'v', 0x062B},  {U'j', 0x062C}, {U'H', 0x062D}, {U'x', 0x062E}, {U'd', 0x062F},
    {U'*', 0x0630},  {U'r', 0x0631}, {U'z', 0x0632}, {U's', 0x0633}, {U'$', 0x0634},
    {U'S', 0x0635},  {U'D', 0x0636}, {U'T', 0x0637}, {U'Z', 0x0638}, {U'E', 0x0639},
    {U'g', 0x063A},  {U'_', 0x0640}, {U'f', 0x0641}, {U'q', 0x0642}, {U'k', 0x0643},
    {U'l', 0x0644},  {U'm', 0x0645}, {U'n', 0x0646}, {U'h', 0x0647}, {U'w', 0x0648},
    {U'Y', 0x0649},  {U'y', 0x064A}, {U'F', 0x064B}, {U'N', 0x064C}, {U'K', 0x064D},
    {U'a', 0x064E},  {U'u', 0x064F}, {U'i', 0x0650}, {U'~', 0x0651}, {U'o', 0x0652},
    {U'`', 0x0670},  {U'{', 0x0671}, {U'P', 0x067E}, {U'J', 0x0686}, {U'V', 0x06A4},
    {U'G', 0x06AF},
};

}  // namespace

void BuckwalterTable::add(char32_t symbol, char32_t arabic, std::string_view origin) {
  if (!forward_.emplace(symbol, arabic).second || !inverse_.emplace(arabic, symbol).second) {
    throw Error(ErrorCode::MalformedTable,
                std::string(origin) + ": duplicate transliteration entry for '" +
                    unicode::encode_utf8(symbol) + "'");
  }
}

const BuckwalterTable& BuckwalterTable::standard() {
  static const BuckwalterTable table = [] {
    BuckwalterTable t;
    for (const auto& e : kStandard) t.add(e.symbol, e.arabic, "builtin");
    return t;
  }();
  return table;
}

BuckwalterTable BuckwalterTable::parse(std::string_view contents, std::string_view origin) {
  BuckwalterTable t;
  for (const auto& row : io::parse_config_table(contents)) {
    if (row.size() < 2) {
      throw Error(ErrorCode::MalformedTable, std::string(origin) + ": expected symbol<TAB>arabic");
    }
    const auto sym = unicode::decode_utf8(row[0]);
    const auto ar = unicode::decode_utf8(row[1]);
    if (sym.size() != 1 || ar.size() != 1) {
      throw Error(ErrorCode::MalformedTable,
                  std::string(origin) + ": entries must be single characters: '" + row[0] + "'");
    }
    t.add(sym[0], ar[0], origin);
  }
  if (t.forward_.empty()) throw Error(ErrorCode::MalformedTable, std::string(origin) + ": empty table");
  return t;
}

BuckwalterTable BuckwalterTable::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

std::optional<char32_t> BuckwalterTable::to_arabic(char32_t symbol) const {
  if (auto it = forward_.find(symbol); it != forward_.end()) return it->second;
  return std::nullopt;
}

std::optional<char32_t> BuckwalterTable::to_symbol(char32_t arabic) const {
  if (auto it = inverse_.find(arabic); it != inverse_.end()) return it->second;
  return std::nullopt;
}

}  // namespace dialkit::text
