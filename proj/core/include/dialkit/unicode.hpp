#pragma once

#include <string>
#include <string_view>

namespace dialkit::unicode {

// UTF-8 <-> UTF-32. Ill-formed input sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t cp);

// Compatibility decomposition (NFKD), never recomposed.
std::u32string nfkd(std::u32string_view text);

bool is_nonspacing_mark(char32_t cp);     // general category Mn
bool is_punctuation_category(char32_t cp);  // any of Pc Pd Ps Pe Pi Pf Po
bool is_letter(char32_t cp);              // any of Lu Ll Lt Lm Lo
bool is_whitespace(char32_t cp);          // White_Space property

enum class Script { Arabic, Latin, Other };
Script script_of(char32_t cp);

// Arabic, Arabic Supplement, Arabic Extended-A and the two Arabic
// presentation-form blocks.
bool in_arabic_blocks(char32_t cp);

}  // namespace dialkit::unicode
