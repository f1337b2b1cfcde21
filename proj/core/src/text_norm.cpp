#include "dialkit/text_norm.hpp"

#include <charconv>

#include "dialkit/error.hpp"
#include "dialkit/tsv.hpp"
#include "dialkit/unicode.hpp"

namespace dialkit::text {

namespace {

constexpr char32_t kTatweel = 0x0640;
constexpr char32_t kAlef = 0x0627;
constexpr char32_t kAlefMadda = 0x0622;
constexpr char32_t kAlefHamzaAbove = 0x0623;
constexpr char32_t kAlefHamzaBelow = 0x0625;
constexpr char32_t kTaMarbuta = 0x0629;
constexpr char32_t kHa = 0x0647;
constexpr char32_t kAlefMaqsura = 0x0649;
constexpr char32_t kYa = 0x064A;

// ASCII symbols outside P* that are still punctuation for transcript
// purposes, plus Arabic signs of category So/Cf. Keep in sync with
// data/punctuation.tsv.
constexpr char32_t kStandardExtra[] = {
    U'$', U'+', U'<', U'=', U'>', U'^', U'`', U'|', U'~',
    0x0600, 0x0601, 0x0602, 0x0603, 0x0604, 0x0605,
    0x060E, 0x060F, 0x06DD, 0x06DE, 0x06E9, 0x06FD, 0x06FE,
};

char32_t parse_code_point(std::string_view token, std::string_view origin) {
  if (token.size() < 3 || (token.substr(0, 2) != "U+" && token.substr(0, 2) != "u+")) {
    throw Error(ErrorCode::MalformedTable,
                std::string(origin) + ": expected U+XXXX, got '" + std::string(token) + "'");
  }
  std::uint32_t value = 0;
  const char* first = token.data() + 2;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value, 16);
  if (ec != std::errc() || ptr != last || value > 0x10FFFF) {
    throw Error(ErrorCode::MalformedTable,
                std::string(origin) + ": bad code point '" + std::string(token) + "'");
  }
  return static_cast<char32_t>(value);
}

char32_t unify(char32_t c) {
  switch (c) {
    case kAlefMadda:
    case kAlefHamzaAbove:
    case kAlefHamzaBelow:
      return kAlef;
    case kTaMarbuta:
      return kHa;
    case kAlefMaqsura:
      return kYa;
    default:
      return c;
  }
}

}  // namespace

std::string_view to_string(ScriptClass c) {
  switch (c) {
    case ScriptClass::ArabicOnly: return "ArabicOnly";
    case ScriptClass::LatinOnly: return "LatinOnly";
    case ScriptClass::Mixed: return "Mixed";
    case ScriptClass::Empty: return "Empty";
  }
  return "Empty";
}

// --- PunctuationSet --------------------------------------------------------

const PunctuationSet& PunctuationSet::standard() {
  static const PunctuationSet set = [] {
    PunctuationSet p;
    p.include_category_p_ = true;
    p.extra_.insert(std::begin(kStandardExtra), std::end(kStandardExtra));
    return p;
  }();
  return set;
}

PunctuationSet PunctuationSet::parse(std::string_view contents, std::string_view origin) {
  PunctuationSet p;
  for (const auto& row : io::parse_config_table(contents)) {
    const std::string& key = row[0];
    if (key == "category") {
      if (row.size() < 2 || row[1] != "P") {
        throw Error(ErrorCode::MalformedTable,
                    std::string(origin) + ": only 'category<TAB>P' is supported");
      }
      p.include_category_p_ = true;
    } else if (!key.empty() && key.front() == '-') {
      p.excluded_.insert(parse_code_point(std::string_view(key).substr(1), origin));
    } else {
      p.extra_.insert(parse_code_point(key, origin));
    }
  }
  return p;
}

PunctuationSet PunctuationSet::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

bool PunctuationSet::contains(char32_t c) const {
  if (excluded_.contains(c)) return false;
  if (extra_.contains(c)) return true;
  return include_category_p_ && unicode::is_punctuation_category(c);
}

// --- Normalizer ------------------------------------------------------------

Normalizer::Normalizer()
    : Normalizer(BuckwalterTable::standard(), PunctuationSet::standard()) {}

Normalizer::Normalizer(BuckwalterTable table, PunctuationSet punctuation,
                       NormalizerOptions options)
    : table_(std::move(table)), punctuation_(std::move(punctuation)), options_(options) {}

bool Normalizer::removed_by_pipeline(char32_t c) const {
  return c == kTatweel || unicode::is_nonspacing_mark(c) || punctuation_.contains(c);
}

bool Normalizer::detect(std::u32string_view decomposed) const {
  // Characters the pipeline deletes regardless are ignored unless they are
  // Buckwalter symbols; this keeps normalize() idempotent (a string that was
  // not detected can never become detectable once its punctuation is gone).
  std::size_t considered = 0;
  std::size_t hits = 0;
  for (char32_t c : decomposed) {
    if (unicode::is_whitespace(c)) continue;
    const bool symbol = table_.is_symbol(c);
    if (!symbol && removed_by_pipeline(c)) continue;
    if (unicode::in_arabic_blocks(c)) return false;
    ++considered;
    if (symbol) ++hits;
  }
  if (considered == 0) return false;
  return static_cast<double>(hits) / static_cast<double>(considered) >=
         options_.buckwalter_threshold;
}

bool Normalizer::detect_buckwalter(std::string_view text) const {
  return detect(unicode::nfkd(unicode::decode_utf8(text)));
}

namespace {

std::u32string transliterate(const BuckwalterTable& table, std::u32string_view decomposed,
                             std::size_t* unmapped) {
  std::u32string out;
  out.reserve(decomposed.size());
  std::size_t misses = 0;
  for (char32_t c : decomposed) {
    if (auto ar = table.to_arabic(c)) {
      out.push_back(*ar);
    } else {
      if (!unicode::is_whitespace(c)) ++misses;
      out.push_back(c);
    }
  }
  if (unmapped) *unmapped += misses;
  return out;
}

}  // namespace

std::string Normalizer::buckwalter_to_arabic(std::string_view text, std::size_t* unmapped) const {
  const auto decomposed = unicode::nfkd(unicode::decode_utf8(text));
  return unicode::encode_utf8(transliterate(table_, decomposed, unmapped));
}

std::string Normalizer::arabic_to_buckwalter(std::string_view text) const {
  std::u32string out;
  for (char32_t c : unicode::decode_utf8(text)) out.push_back(table_.to_symbol(c).value_or(c));
  return unicode::encode_utf8(out);
}

std::string Normalizer::normalize(std::string_view text, std::size_t* unmapped) const {
  return normalize(text, options_.buckwalter_mode, unmapped);
}

std::string Normalizer::normalize(std::string_view text, BuckwalterMode mode,
                                  std::size_t* unmapped) const {
  std::u32string work = unicode::nfkd(unicode::decode_utf8(text));

  const bool convert = mode == BuckwalterMode::Always ||
                       (mode == BuckwalterMode::Auto && detect(work));
  if (convert) {
    // Transliterated output may contain precomposed letters (alef with
    // hamza, ...), so decompose again.
    work = unicode::nfkd(transliterate(table_, work, unmapped));
  }

  std::u32string out;
  out.reserve(work.size());
  bool pending_space = false;
  for (char32_t c : work) {
    if (unicode::is_whitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (removed_by_pipeline(c)) continue;
    if (pending_space) {
      out.push_back(U' ');
      pending_space = false;
    }
    out.push_back(unify(c));
  }
  return unicode::encode_utf8(out);
}

std::string Normalizer::unify_characters(std::string_view text) const {
  std::u32string out;
  for (char32_t c : unicode::decode_utf8(text)) {
    if (c == kTatweel) continue;
    out.push_back(unify(c));
  }
  return unicode::encode_utf8(out);
}

ScriptClass Normalizer::classify_script(std::string_view text) const {
  bool arabic = false;
  bool latin = false;
  bool other = false;
  for (char32_t c : unicode::decode_utf8(text)) {
    if (!unicode::is_letter(c)) continue;
    switch (unicode::script_of(c)) {
      case unicode::Script::Arabic: arabic = true; break;
      case unicode::Script::Latin: latin = true; break;
      case unicode::Script::Other: other = true; break;
    }
  }
  const int kinds = int(arabic) + int(latin) + int(other);
  if (kinds == 0) return ScriptClass::Empty;
  if (kinds > 1 || other) return ScriptClass::Mixed;
  return arabic ? ScriptClass::ArabicOnly : ScriptClass::LatinOnly;
}

TranscriptPair Normalizer::make_pair(std::string raw) const {
  std::string standardized = normalize(raw);
  return TranscriptPair{std::move(raw), std::move(standardized)};
}

const Normalizer& default_normalizer() {
  static const Normalizer n;
  return n;
}

bool detect_buckwalter(std::string_view text) {
  return default_normalizer().detect_buckwalter(text);
}

std::string buckwalter_to_arabic(std::string_view text) {
  return default_normalizer().buckwalter_to_arabic(text);
}

std::string normalize(std::string_view text) { return default_normalizer().normalize(text); }

ScriptClass classify_script(std::string_view text) {
  return default_normalizer().classify_script(text);
}

}  // namespace dialkit::text
