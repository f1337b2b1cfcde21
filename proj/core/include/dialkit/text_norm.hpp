#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace dialkit::text {

// One-to-one ASCII <-> Arabic transliteration table.
class BuckwalterTable {
 public:
  // The standard Tim Buckwalter scheme plus the common extension letters
  // (P, J, V, G). Identical to data/buckwalter.tsv.
  static const BuckwalterTable& standard();

  // Lines: <ascii symbol> TAB <arabic character> [TAB comment ...].
  static BuckwalterTable parse(std::string_view contents, std::string_view origin);
  static BuckwalterTable load(const std::filesystem::path& path);

  bool is_symbol(char32_t c) const { return forward_.contains(c); }
  std::optional<char32_t> to_arabic(char32_t symbol) const;
  std::optional<char32_t> to_symbol(char32_t arabic) const;
  std::size_t size() const { return forward_.size(); }

  // Duplicates on either side are rejected at load time, so the table is a
  // bijection and transliteration round-trips on strings drawn from it.
  const std::unordered_map<char32_t, char32_t>& entries() const { return forward_; }

 private:
  void add(char32_t symbol, char32_t arabic, std::string_view origin);

  std::unordered_map<char32_t, char32_t> forward_;
  std::unordered_map<char32_t, char32_t> inverse_;
};

// Characters deleted by normalization: every Unicode P* code point (unless
// the table disables it) plus an explicit list of extra symbols.
class PunctuationSet {
 public:
  static const PunctuationSet& standard();

  // Lines: "category<TAB>P" enables general category P*;
  // "U+XXXX<TAB>glyph<TAB>note" adds one code point; "-U+XXXX" removes one.
  static PunctuationSet parse(std::string_view contents, std::string_view origin);
  static PunctuationSet load(const std::filesystem::path& path);

  bool contains(char32_t c) const;

 private:
  bool include_category_p_ = false;
  std::unordered_set<char32_t> extra_;
  std::unordered_set<char32_t> excluded_;
};

enum class BuckwalterMode {
  Auto,    // transliterate when detect_buckwalter() says so
  Always,  // input is known to be Buckwalter
  Never,
};

enum class ScriptClass { ArabicOnly, LatinOnly, Mixed, Empty };
std::string_view to_string(ScriptClass c);

struct TranscriptPair {
  std::string raw;           // verbatim, diacritics and annotations preserved
  std::string standardized;  // normalize(raw)
};

struct NormalizerOptions {
  double buckwalter_threshold = 0.80;
  BuckwalterMode buckwalter_mode = BuckwalterMode::Auto;
};

// Transcript standardization. All member functions are const and pure, so a
// single instance may be shared across threads.
//
// normalize() applies, in order:
//   1. Buckwalter -> Arabic transliteration (when detected / forced);
//   2. NFKD decomposition;
//   3. removal of every combining mark of category Mn;
//   4. removal of punctuation-set members;
//   5. orthographic unification: alef with hamza above/below and alef with
//      madda -> bare alef, ta marbuta -> ha, alef maqsura -> ya, tatweel
//      deleted;
//   6. whitespace trimmed and collapsed to single U+0020.
class Normalizer {
 public:
  Normalizer();  // standard tables, default options
  Normalizer(BuckwalterTable table, PunctuationSet punctuation, NormalizerOptions options = {});

  // True iff, ignoring whitespace and any non-Buckwalter character that
  // normalization deletes anyway (marks, punctuation, tatweel), the text has
  // no Arabic-block code points and at least `buckwalter_threshold` of the
  // remaining characters are Buckwalter symbols.
  bool detect_buckwalter(std::string_view text) const;

  // Symbols are matched after compatibility decomposition so full-width
  // forms transliterate too. Non-space characters outside the table pass
  // through unchanged and are counted in *unmapped.
  std::string buckwalter_to_arabic(std::string_view text, std::size_t* unmapped = nullptr) const;
  std::string arabic_to_buckwalter(std::string_view text) const;

  std::string normalize(std::string_view text, std::size_t* unmapped = nullptr) const;
  std::string normalize(std::string_view text, BuckwalterMode mode,
                        std::size_t* unmapped = nullptr) const;

  // Step 5 alone, no other processing.
  std::string unify_characters(std::string_view text) const;

  ScriptClass classify_script(std::string_view text) const;

  TranscriptPair make_pair(std::string raw) const;

  const BuckwalterTable& buckwalter() const { return table_; }
  const PunctuationSet& punctuation() const { return punctuation_; }
  const NormalizerOptions& options() const { return options_; }

 private:
  bool detect(std::u32string_view decomposed) const;
  bool removed_by_pipeline(char32_t c) const;

  BuckwalterTable table_;
  PunctuationSet punctuation_;
  NormalizerOptions options_;
};

// Convenience wrappers over a process-wide default Normalizer.
const Normalizer& default_normalizer();
bool detect_buckwalter(std::string_view text);
std::string buckwalter_to_arabic(std::string_view text);
std::string normalize(std::string_view text);
ScriptClass classify_script(std::string_view text);

}  // namespace dialkit::text
