#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dialkit::corpus {

// Arabic variety codes (ISO 639-3) accepted in dialect labels.
class DialectRegistry {
 public:
  // The varieties with data in the benchmark tables plus the varieties for
  // which no dataset was found. Identical to data/dialects.tsv.
  static const DialectRegistry& standard();

  // Lines: iso<TAB>name[<TAB>note].
  static DialectRegistry parse(std::string_view contents, std::string_view origin);
  static DialectRegistry load(const std::filesystem::path& path);

  bool contains(std::string_view iso) const { return names_.contains(std::string(iso)); }
  std::string name(std::string_view iso) const;
  std::vector<std::string> codes() const;

 private:
  std::map<std::string, std::string> names_;
};

// ISO 639-3 variety + optional ISO 3166-1 alpha-3 country + optional
// region token, rendered "iso", "iso_CCC" or "iso_CCC-SUB" (e.g. afb_ARE-AZ).
struct DialectCode {
  std::string iso;
  std::optional<std::string> country;
  std::optional<std::string> subdivision;

  std::string render() const;
  // Strict inverse of render(); validates against the registry.
  static DialectCode parse(std::string_view text,
                           const DialectRegistry& registry = DialectRegistry::standard());

  auto operator<=>(const DialectCode&) const = default;
};

// Throws UnknownIsoCode, InvalidCountry, InvalidSubdivision or
// SubdivisionWithoutCountry.
DialectCode make_dialect_code(std::string_view iso, std::optional<std::string_view> country = {},
                              std::optional<std::string_view> subdivision = {},
                              const DialectRegistry& registry = DialectRegistry::standard());

// More than one plausible variety; candidates sorted and unique.
struct AmbiguousDialect {
  std::vector<std::string> candidates;
  auto operator<=>(const AmbiguousDialect&) const = default;
};

struct UnknownDialect {
  auto operator<=>(const UnknownDialect&) const = default;
};

using DialectLabel = std::variant<UnknownDialect, DialectCode, AmbiguousDialect>;

// "unknown", the rendered code, or "ambiguous:acw,ars".
std::string render_label(const DialectLabel& label);
DialectLabel parse_label(std::string_view text,
                         const DialectRegistry& registry = DialectRegistry::standard());

inline bool is_resolved(const DialectLabel& label) {
  return std::holds_alternative<DialectCode>(label);
}

// (country, locality) -> variety candidates, after Ethnologue-style maps.
class GeoLookupTable {
 public:
  struct Entry {
    std::string country_name;
    std::string alpha3;
    std::string locality;     // "*" for the whole country
    std::string subdivision;  // region token used in the rendered code; may be empty
    std::vector<std::string> candidates;
  };

  static const GeoLookupTable& standard();

  // Columns: country<TAB>alpha3<TAB>locality<TAB>subdivision<TAB>iso[,iso...]
  static GeoLookupTable parse(std::string_view contents, std::string_view origin,
                              const DialectRegistry& registry = DialectRegistry::standard());
  static GeoLookupTable load(const std::filesystem::path& path,
                             const DialectRegistry& registry = DialectRegistry::standard());

  // Country by English name or alpha-3 (case-insensitive).
  std::vector<const Entry*> entries_for(std::string_view country) const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// A unique code when the table resolves (country, city) to a single variety,
// otherwise an AmbiguousDialect with the candidate set. An unknown city
// falls back to the country-level row (or the union of the country's rows).
// Throws UnknownLocation when the country is absent from the table.
DialectLabel infer_dialect(std::string_view country, std::optional<std::string_view> city,
                           const GeoLookupTable& table);

}  // namespace dialkit::corpus
