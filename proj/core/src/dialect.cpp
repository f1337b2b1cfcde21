#include "dialkit/dialect.hpp"

#include <algorithm>
#include <set>

#include "dialkit/error.hpp"
#include "dialkit/paths.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::corpus {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool is_iso_shape(std::string_view s) {
  return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool is_country_shape(std::string_view s) {
  return s.size() == 3 && std::all_of(s.begin(), s.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

bool is_subdivision_shape(std::string_view s) {
  return !s.empty() && s.size() <= 3 && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

struct RegistryEntry {
  const char* iso;
  const char* name;
};

// Keep in sync with data/dialects.tsv.
constexpr RegistryEntry kStandardRegistry[] = {
    {"acm", "Mesopotamian Arabic"},
    {"acq", "Ta'izzi-Adeni Arabic"},
    {"acw", "Hijazi Arabic"},
    {"aeb", "Tunisian Arabic"},
    {"afb", "Gulf Arabic"},
    {"apc", "Levantine Arabic"},
    {"apd", "Sudanese Arabic"},
    {"arb", "Modern Standard Arabic"},
    {"arq", "Algerian Arabic"},
    {"ars", "Najdi Arabic"},
    {"ary", "Moroccan Arabic"},
    {"arz", "Egyptian Arabic"},
    {"ayl", "Libyan Arabic"},
    {"ayn", "Sanaani Arabic"},
    {"ayp", "North Mesopotamian Arabic"},
    {"mey", "Hassaniyya"},
    {"aao", "Algerian Saharan Arabic"},
    {"abh", "Tajiki Arabic"},
    {"abv", "Baharna Arabic"},
    {"acx", "Omani Arabic"},
    {"acy", "Cypriot Arabic"},
    {"adf", "Dhofari Arabic"},
    {"aec", "Saidi Arabic"},
    {"auz", "Uzbeki Arabic"},
    {"avl", "Eastern Egyptian Bedawi Arabic"},
    {"ayh", "Hadrami Arabic"},
    {"pga", "Sudanese Creole Arabic"},
    {"shu", "Chadian Arabic"},
    {"ssh", "Shihhi Arabic"},
};

}  // namespace

// --- registry --------------------------------------------------------------

const DialectRegistry& DialectRegistry::standard() {
  static const DialectRegistry registry = [] {
    DialectRegistry r;
    for (const auto& e : kStandardRegistry) r.names_.emplace(e.iso, e.name);
    return r;
  }();
  return registry;
}

DialectRegistry DialectRegistry::parse(std::string_view contents, std::string_view origin) {
  DialectRegistry r;
  for (const auto& row : io::parse_config_table(contents)) {
    const std::string iso(trim(row[0]));
    if (!is_iso_shape(iso)) {
      throw Error(ErrorCode::MalformedTable, std::string(origin) + ": bad ISO 639-3 code '" + iso + "'");
    }
    r.names_[iso] = row.size() > 1 ? std::string(trim(row[1])) : iso;
  }
  return r;
}

DialectRegistry DialectRegistry::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

std::string DialectRegistry::name(std::string_view iso) const {
  auto it = names_.find(std::string(iso));
  return it == names_.end() ? std::string(iso) : it->second;
}

std::vector<std::string> DialectRegistry::codes() const {
  std::vector<std::string> out;
  for (const auto& [iso, _] : names_) out.push_back(iso);
  return out;
}

// --- codes -----------------------------------------------------------------

std::string DialectCode::render() const {
  std::string out = iso;
  if (country) {
    out += '_';
    out += *country;
    if (subdivision) {
      out += '-';
      out += *subdivision;
    }
  }
  return out;
}

DialectCode make_dialect_code(std::string_view iso, std::optional<std::string_view> country,
                              std::optional<std::string_view> subdivision,
                              const DialectRegistry& registry) {
  if (!registry.contains(iso)) {
    throw Error(ErrorCode::UnknownIsoCode, "'" + std::string(iso) + "' is not a registered variety");
  }
  if (subdivision && !country) {
    throw Error(ErrorCode::SubdivisionWithoutCountry,
                "subdivision '" + std::string(*subdivision) + "' given without a country");
  }
  if (country && !is_country_shape(*country)) {
    throw Error(ErrorCode::InvalidCountry,
                "'" + std::string(*country) + "' is not an ISO 3166-1 alpha-3 code");
  }
  if (subdivision && !is_subdivision_shape(*subdivision)) {
    throw Error(ErrorCode::InvalidSubdivision,
                "'" + std::string(*subdivision) + "' is not a region token");
  }
  DialectCode code;
  code.iso = std::string(iso);
  if (country) code.country = std::string(*country);
  if (subdivision) code.subdivision = std::string(*subdivision);
  return code;
}

DialectCode DialectCode::parse(std::string_view text, const DialectRegistry& registry) {
  const auto us = text.find('_');
  const std::string_view iso = text.substr(0, us);
  if (!is_iso_shape(iso)) {
    throw Error(ErrorCode::MalformedDialectCode, "'" + std::string(text) + "'");
  }
  if (us == std::string_view::npos) return make_dialect_code(iso, {}, {}, registry);
  const std::string_view rest = text.substr(us + 1);
  const auto dash = rest.find('-');
  const std::string_view country = rest.substr(0, dash);
  if (dash == std::string_view::npos) return make_dialect_code(iso, country, {}, registry);
  return make_dialect_code(iso, country, rest.substr(dash + 1), registry);
}

std::string render_label(const DialectLabel& label) {
  if (const auto* code = std::get_if<DialectCode>(&label)) return code->render();
  if (const auto* amb = std::get_if<AmbiguousDialect>(&label)) {
    std::string out = "ambiguous:";
    for (std::size_t i = 0; i < amb->candidates.size(); ++i) {
      if (i) out += ',';
      out += amb->candidates[i];
    }
    return out;
  }
  return "unknown";
}

DialectLabel parse_label(std::string_view text, const DialectRegistry& registry) {
  if (text.empty() || text == "unknown") return UnknownDialect{};
  constexpr std::string_view kAmbiguous = "ambiguous:";
  if (text.substr(0, kAmbiguous.size()) == kAmbiguous) {
    std::set<std::string> set;
    std::string_view rest = text.substr(kAmbiguous.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string iso(rest.substr(0, comma));
      if (!registry.contains(iso)) {
        throw Error(ErrorCode::UnknownIsoCode, "'" + iso + "' in '" + std::string(text) + "'");
      }
      set.insert(iso);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (set.size() < 2) {
      throw Error(ErrorCode::MalformedDialectCode,
                  "ambiguous label needs >= 2 candidates: '" + std::string(text) + "'");
    }
    return AmbiguousDialect{{set.begin(), set.end()}};
  }
  return DialectCode::parse(text, registry);
}

// --- geo table -------------------------------------------------------------

GeoLookupTable GeoLookupTable::parse(std::string_view contents, std::string_view origin,
                                     const DialectRegistry& registry) {
  GeoLookupTable t;
  for (const auto& row : io::parse_config_table(contents)) {
    if (row.size() < 5) {
      throw Error(ErrorCode::MalformedTable,
                  std::string(origin) + ": expected country, alpha3, locality, subdivision, isos");
    }
    Entry e;
    e.country_name = std::string(trim(row[0]));
    e.alpha3 = std::string(trim(row[1]));
    e.locality = std::string(trim(row[2]));
    e.subdivision = std::string(trim(row[3]));
    if (!is_country_shape(e.alpha3)) {
      throw Error(ErrorCode::MalformedTable, std::string(origin) + ": bad alpha-3 '" + e.alpha3 + "'");
    }
    if (!e.subdivision.empty() && !is_subdivision_shape(e.subdivision)) {
      throw Error(ErrorCode::MalformedTable,
                  std::string(origin) + ": bad subdivision '" + e.subdivision + "'");
    }
    std::set<std::string> isos;
    std::string_view list = row[4];
    while (!list.empty()) {
      const auto comma = list.find(',');
      const std::string iso(trim(list.substr(0, comma)));
      if (!registry.contains(iso)) {
        throw Error(ErrorCode::MalformedTable, std::string(origin) + ": unknown variety '" + iso + "'");
      }
      isos.insert(iso);
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    if (isos.empty()) {
      throw Error(ErrorCode::MalformedTable, std::string(origin) + ": no candidates for " + e.country_name);
    }
    e.candidates.assign(isos.begin(), isos.end());
    t.entries_.push_back(std::move(e));
  }
  return t;
}

GeoLookupTable GeoLookupTable::load(const std::filesystem::path& path, const DialectRegistry& registry) {
  return parse(io::read_file(path), path.string(), registry);
}

std::vector<const GeoLookupTable::Entry*> GeoLookupTable::entries_for(std::string_view country) const {
  const std::string key = ascii_lower(trim(country));
  std::vector<const Entry*> out;
  for (const auto& e : entries_) {
    if (ascii_lower(e.country_name) == key || ascii_lower(e.alpha3) == key) out.push_back(&e);
  }
  return out;
}

DialectLabel infer_dialect(std::string_view country, std::optional<std::string_view> city,
                           const GeoLookupTable& table) {
  const auto rows = table.entries_for(country);
  if (rows.empty()) {
    throw Error(ErrorCode::UnknownLocation, "country '" + std::string(country) + "' not in geo table");
  }
  const GeoLookupTable::Entry* chosen = nullptr;
  if (city && !trim(*city).empty()) {
    const std::string key = ascii_lower(trim(*city));
    for (const auto* e : rows) {
      if (e->locality != "*" && ascii_lower(e->locality) == key) chosen = e;
    }
  }
  if (!chosen) {
    for (const auto* e : rows) {
      if (e->locality == "*") chosen = e;
    }
  }

  std::vector<std::string> candidates;
  std::string alpha3 = rows.front()->alpha3;
  std::optional<std::string> subdivision;
  if (chosen) {
    candidates = chosen->candidates;
    alpha3 = chosen->alpha3;
    if (chosen->locality != "*" && !chosen->subdivision.empty()) subdivision = chosen->subdivision;
  } else {
    std::set<std::string> all;
    for (const auto* e : rows) all.insert(e->candidates.begin(), e->candidates.end());
    candidates.assign(all.begin(), all.end());
  }

  if (candidates.size() == 1) {
    DialectCode code;
    code.iso = candidates.front();
    code.country = alpha3;
    code.subdivision = subdivision;
    return code;
  }
  return AmbiguousDialect{std::move(candidates)};
}

const GeoLookupTable& GeoLookupTable::standard() {
  static const GeoLookupTable table = load(default_data_dir() / "geo.tsv");
  return table;
}

}  // namespace dialkit::corpus
