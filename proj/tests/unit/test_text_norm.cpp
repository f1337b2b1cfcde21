#include <gtest/gtest.h>

#include <string>

#include "dialkit/error.hpp"
#include "dialkit/text_norm.hpp"
#include "dialkit/unicode.hpp"
#include "golden_normalization.hpp"
#include "oracles.hpp"

using namespace dialkit;
using text::ScriptClass;

namespace {

const text::Normalizer& N() { return text::default_normalizer(); }

std::string cp(char32_t c) {
  std::string s;
  oracle::append_utf8(s, c);
  return s;
}

}  // namespace

TEST(DetectBuckwalter, EmptyIsFalse) { EXPECT_FALSE(text::detect_buckwalter("")); }

TEST(DetectBuckwalter, ArabicBlockIsFalse) { EXPECT_FALSE(text::detect_buckwalter("كتب الولد الدرس")); }

TEST(DetectBuckwalter, HandCheckedSymbols) {
  // > a H m a d all in the standard table
  EXPECT_TRUE(text::detect_buckwalter(">aHmad"));
}

TEST(DetectBuckwalter, OneArabicCharacterVetoes) { EXPECT_FALSE(text::detect_buckwalter("ktb ك")); }

TEST(DetectBuckwalter, CoverageThreshold) {
  // 'c' and 'e' are outside the table
  EXPECT_FALSE(text::detect_buckwalter("cece"));
  EXPECT_TRUE(text::detect_buckwalter("ktbce ktbkt"));   // 8/10 = 0.80
  EXPECT_FALSE(text::detect_buckwalter("ktbce ktbk"));   // 7/9 < 0.80
  EXPECT_FALSE(text::detect_buckwalter("   "));
}

TEST(DetectBuckwalter, ThresholdIsConfigurable) {
  text::NormalizerOptions opts;
  opts.buckwalter_threshold = 0.5;
  text::Normalizer n(text::BuckwalterTable::standard(), text::PunctuationSet::standard(), opts);
  EXPECT_TRUE(n.detect_buckwalter("ktce"));
  EXPECT_FALSE(N().detect_buckwalter("ktce"));
}

TEST(BuckwalterToArabic, Empty) { EXPECT_EQ(text::buckwalter_to_arabic(""), ""); }

TEST(BuckwalterToArabic, HamzaOnAlef) { EXPECT_EQ(text::buckwalter_to_arabic(">"), cp(0x0623)); }

TEST(BuckwalterToArabic, BareLetters) {
  EXPECT_EQ(text::buckwalter_to_arabic("ktb"), cp(0x0643) + cp(0x062A) + cp(0x0628));
}

TEST(BuckwalterToArabic, UnmappedPassThroughAndCounted) {
  std::size_t unmapped = 0;
  const std::string out = N().buckwalter_to_arabic("kc 1", &unmapped);
  EXPECT_EQ(out, cp(0x0643) + "c 1");
  EXPECT_EQ(unmapped, 2u);
}

TEST(BuckwalterToArabic, StandardTableSpotChecks) {
  const auto& t = text::BuckwalterTable::standard();
  EXPECT_EQ(t.to_arabic(U'$'), char32_t{0x0634});
  EXPECT_EQ(t.to_arabic(U'*'), char32_t{0x0630});
  EXPECT_EQ(t.to_arabic(U'p'), char32_t{0x0629});
  EXPECT_EQ(t.to_arabic(U'Y'), char32_t{0x0649});
  EXPECT_EQ(t.to_arabic(U'|'), char32_t{0x0622});
  EXPECT_EQ(t.to_arabic(U'<'), char32_t{0x0625});
  EXPECT_EQ(t.to_arabic(U'~'), char32_t{0x0651});
  EXPECT_EQ(t.to_arabic(U'_'), char32_t{0x0640});
  EXPECT_FALSE(t.to_arabic(U'c').has_value());
}

TEST(BuckwalterTable, DuplicateSymbolRejected) {
  EXPECT_THROW(text::BuckwalterTable::parse("k\tك\nk\tق\n", "t"), Error);
  EXPECT_THROW(text::BuckwalterTable::parse("k\tك\nq\tك\n", "t"), Error);
}

TEST(Normalize, Empty) { EXPECT_EQ(text::normalize(""), ""); }

TEST(Normalize, DiacritizedName) { EXPECT_EQ(text::normalize("أَحْمَدُ"), "احمد"); }

TEST(Normalize, PunctuationAndTaMarbuta) { EXPECT_EQ(text::normalize("مدرسة،"), "مدرسه"); }

TEST(Normalize, ArabicPunctuationOnly) { EXPECT_EQ(text::normalize("،؛؟"), ""); }

TEST(Normalize, GoldenTable) {
  for (const auto& c : golden::kNormalization) {
    EXPECT_EQ(text::normalize(c.input), c.expected) << "input: " << c.input;
  }
}

TEST(Normalize, HamzaOnWawAndYaDecomposeUnderNfkd) {
  // NFKD splits U+0624/U+0626 into base + U+0654 and step 3 drops the mark.
  EXPECT_EQ(text::normalize("سؤال"), "سوال");
  EXPECT_EQ(text::normalize("رائع"), "رايع");
}

TEST(Normalize, ModeOverrides) {
  EXPECT_EQ(N().normalize("ktb", text::BuckwalterMode::Never), "ktb");
  EXPECT_EQ(N().normalize("ktb", text::BuckwalterMode::Always), "كتب");
}

TEST(UnifyCharacters, OnlyStepFive) {
  EXPECT_EQ(N().unify_characters("أإآةىـ"), "اااهي");
  EXPECT_EQ(N().unify_characters("كتب،"), "كتب،");
}

TEST(ClassifyScript, Examples) {
  EXPECT_EQ(text::classify_script("hello world"), ScriptClass::LatinOnly);
  EXPECT_EQ(text::classify_script("ذهبت إلى office اليوم"), ScriptClass::Mixed);
  EXPECT_EQ(text::classify_script("123 !!"), ScriptClass::Empty);
  EXPECT_EQ(text::classify_script(""), ScriptClass::Empty);
  EXPECT_EQ(text::classify_script("  كتب  "), ScriptClass::ArabicOnly);
  EXPECT_EQ(text::classify_script("٣٤ ،"), ScriptClass::Empty);
}

TEST(MakePair, KeepsRawVerbatim) {
  const auto p = N().make_pair("قالَ: نعم");
  EXPECT_EQ(p.raw, "قالَ: نعم");
  EXPECT_EQ(p.standardized, "قال نعم");
}

// ---- properties ----

class NormalizeProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(NormalizeProperty, IdempotentMarkFreePunctFreeWhitespaceClean) {
  oracle::MixedTextGenerator gen(GetParam());
  const auto& punct = N().punctuation();
  for (int i = 0; i < 500; ++i) {
    const std::string x = gen.next(60);
    const std::string y = text::normalize(x);
    ASSERT_EQ(text::normalize(y), y) << "input: " << x;
    const std::u32string u = oracle::decode(y);
    for (char32_t c : u) {
      ASSERT_FALSE(unicode::is_nonspacing_mark(c)) << "input: " << x;
      ASSERT_FALSE(punct.contains(c)) << "input: " << x;
      ASSERT_NE(c, U'\t');
      ASSERT_NE(c, U'\n');
    }
    ASSERT_EQ(y.find("  "), std::string::npos);
    if (!y.empty()) {
      ASSERT_NE(y.front(), ' ');
      ASSERT_NE(y.back(), ' ');
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, NormalizeProperty, ::testing::Values(1u, 2u, 3u, 4u, 5u));

TEST(NormalizeProperty2, UnificationAloneOnCleanInput) {
  // No punctuation, no diacritics, single interior spaces: step 5 alone is the
  // whole pipeline.
  const std::u32string letters = U"ءآأؤإئابةتثجحخدذرزسشصضطظعغفقكلمنهوىي";
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int words = 1 + static_cast<int>(rng() % 5);
    for (int w = 0; w < words; ++w) {
      if (w) s += ' ';
      const int len = 1 + static_cast<int>(rng() % 6);
      for (int k = 0; k < len; ++k) oracle::append_utf8(s, letters[rng() % letters.size()]);
    }
    // hamza on waw / ya decomposes under NFKD and is not part of step 5
    if (s.find("ؤ") != std::string::npos || s.find("ئ") != std::string::npos) continue;
    ASSERT_EQ(N().unify_characters(s), text::normalize(s)) << s;
  }
}

TEST(NormalizeProperty2, BuckwalterRoundTripOnBijectivePortion) {
  const auto& table = text::BuckwalterTable::standard();
  std::u32string arabic;
  for (const auto& [sym, ar] : table.entries()) arabic += ar;
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    std::u32string s;
    const std::size_t len = rng() % 20;
    for (std::size_t k = 0; k < len; ++k) s += arabic[rng() % arabic.size()];
    const std::string utf8 = unicode::encode_utf8(s);
    ASSERT_EQ(N().buckwalter_to_arabic(N().arabic_to_buckwalter(utf8)), utf8);
  }
}

// symbols are matched on the compatibility decomposition; each decomposed
// code point maps to at most one output code point
TEST(NormalizeProperty2, TransliterationNeverLengthensDecomposedText) {
  oracle::MixedTextGenerator gen(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string x = gen.next();
    ASSERT_LE(oracle::decode(N().buckwalter_to_arabic(x)).size(), unicode::nfkd(oracle::decode(x)).size()) << x;
  }
}

TEST(NormalizeProperty2, ClassificationIgnoresSurroundingWhitespace) {
  oracle::MixedTextGenerator gen(12);
  for (int i = 0; i < 1000; ++i) {
    const std::string x = gen.next();
    ASSERT_EQ(text::classify_script(x), text::classify_script("  \t" + x + " \n"));
  }
}

TEST(PunctuationSet, TableEditing) {
  const auto p = text::PunctuationSet::parse("category\tP\n-U+002E\t.\tkeep full stop\nU+0040\t@\n", "t");
  EXPECT_TRUE(p.contains(U','));
  EXPECT_FALSE(p.contains(U'.'));
  EXPECT_TRUE(p.contains(U'@'));
  EXPECT_FALSE(p.contains(U'a'));
}
