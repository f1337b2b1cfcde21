#include <gtest/gtest.h>

#include <random>

#include "dialkit/edit_distance.hpp"
#include "dialkit/error.hpp"
#include "dialkit/scoring.hpp"
#include "dialkit/text_norm.hpp"
#include "oracles.hpp"
#include "synthetic_corpus.hpp"

using namespace dialkit;
using namespace dialkit::scoring;

namespace {

using Seq = std::vector<int>;

void expect_consistent(const EditCounts& c, const Seq& ref, const Seq& hyp) {
  ASSERT_EQ(c.ref_len, ref.size());
  ASSERT_LE(c.substitutions + c.deletions, ref.size());
  // the counts describe an alignment turning ref into hyp
  ASSERT_EQ(ref.size() - c.deletions + c.insertions, hyp.size());
}

const text::Normalizer& N() { return text::default_normalizer(); }

}  // namespace

TEST(EditCounts, Identical) {
  const Seq a{1, 2, 3};
  EXPECT_EQ(edit_counts_of(a, a), (EditCounts{0, 0, 0, 3}));
}

TEST(EditCounts, PureDeletion) {
  const Seq ref{1, 2, 3}, hyp{};
  const auto c = edit_counts_of(ref, hyp);
  EXPECT_EQ(c.substitutions, 0u);
  EXPECT_EQ(c.deletions, 3u);
  EXPECT_EQ(c.insertions, 0u);
}

TEST(EditCounts, PureInsertionAndMixed) {
  EXPECT_EQ(edit_counts_of(Seq{}, Seq{1, 2}), (EditCounts{0, 0, 2, 0}));
  // kitten -> sitting: 2 substitutions + 1 insertion
  const std::string a = "kitten", b = "sitting";
  const auto c = edit_counts_of(a, b);
  EXPECT_EQ(c.substitutions, 2u);
  EXPECT_EQ(c.insertions, 1u);
  EXPECT_EQ(c.deletions, 0u);
}

TEST(EditCounts, RandomShortPairsMatchRecursiveOracle) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20000; ++t) {
    Seq a(rng() % 9), b(rng() % 9);
    for (auto& x : a) x = static_cast<int>(rng() % 3);
    for (auto& x : b) x = static_cast<int>(rng() % 3);
    const auto c = edit_counts_of(a, b);
    ASSERT_EQ(c.errors(), oracle::min_edits_recursive(a, b));
    expect_consistent(c, a, b);
  }
}

TEST(EditCounts, TriangleInequality) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5000; ++t) {
    Seq a(rng() % 10), b(rng() % 10), c(rng() % 10);
    for (auto* s : {&a, &b, &c}) {
      for (auto& x : *s) x = static_cast<int>(rng() % 4);
    }
    ASSERT_LE(edit_counts_of(a, c).errors(), edit_counts_of(a, b).errors() + edit_counts_of(b, c).errors());
  }
}

TEST(Wer, Examples) {
  EXPECT_DOUBLE_EQ(wer("كتب الولد الدرس", "كَتَبَ الوَلَدُ الدَّرْسَ"), 0.0);
  EXPECT_DOUBLE_EQ(wer("كتاب", "قلم باب دار بيت نور"), 5.0);
  EXPECT_DOUBLE_EQ(wer("كتب قلم", "كتب باب"), 0.5);
  const auto r = word_error("كتاب", "قلم باب دار بيت نور", N());
  EXPECT_EQ(r.counts, (EditCounts{1, 0, 4, 1}));
}

TEST(Wer, EmptyReference) {
  const auto r = word_error("", "كلمة اخرى", N());
  EXPECT_TRUE(r.empty_reference);
  EXPECT_DOUBLE_EQ(r.rate, 2.0);
  const auto both = word_error("،", "", N());
  EXPECT_FALSE(both.empty_reference);
  EXPECT_DOUBLE_EQ(both.rate, 0.0);
}

TEST(Wer, NormalizationSymmetry) {
  oracle::MixedTextGenerator gen(3);
  const std::vector<std::string> decor{"َ", "ُ", "ّ", "،", "؟", "!", "ـ"};
  std::mt19937_64 rng(4);
  for (int t = 0; t < 500; ++t) {
    std::string x = text::normalize(gen.next());
    if (x.empty()) continue;
    // decorate with diacritics and punctuation after each Arabic letter
    std::string y;
    for (char32_t c : oracle::decode(x)) {
      oracle::append_utf8(y, c);
      if (c >= 0x0621 && c <= 0x064A && rng() % 2) y += decor[rng() % decor.size()];
    }
    ASSERT_DOUBLE_EQ(wer(x, y), 0.0) << x << " | " << y;
    ASSERT_DOUBLE_EQ(wer(y, x), 0.0) << x << " | " << y;
  }
}

TEST(Wer, UnboundedNotClipped) {
  EXPECT_GT(wer("باب", "باب دار بيت نور"), 2.0);
  EXPECT_DOUBLE_EQ(wer("قلم حبر", "باب دار بيت نور شمس قمر نجم"), 3.5);
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(cer("كتاب", "كتاب"), 0.0);
  EXPECT_DOUBLE_EQ(cer("اب", "اج"), 0.5);
  EXPECT_DOUBLE_EQ(cer("مرحبا", ""), 1.0);
  // spaces count as characters: one deletion over 5
  EXPECT_DOUBLE_EQ(cer("اب جد", "ابجد"), 0.2);
}

TEST(Histogram, Bins) {
  EXPECT_EQ(wer_bin(0.0), 0u);
  EXPECT_EQ(wer_bin(0.10), 0u);
  EXPECT_EQ(wer_bin(0.1000001), 1u);
  EXPECT_EQ(wer_bin(0.2), 1u);
  EXPECT_EQ(wer_bin(0.3), 2u);
  EXPECT_EQ(wer_bin(0.7), 6u);
  EXPECT_EQ(wer_bin(1.0), 9u);
  EXPECT_EQ(wer_bin(1.0000001), 10u);
  EXPECT_EQ(wer_bin(5.0), 10u);
  EXPECT_EQ(wer_bin_label(0), "le_10");
  EXPECT_EQ(wer_bin_label(1), "10_20");
  EXPECT_EQ(wer_bin_label(9), "90_100");
  EXPECT_EQ(wer_bin_label(10), "gt_100");
}

TEST(Histogram, Fractions) {
  const std::vector<double> zeros(7, 0.0);
  const auto h0 = wer_histogram(zeros);
  EXPECT_DOUBLE_EQ(h0.fractions[0], 1.0);
  const std::vector<double> r{0.05, 0.15, 2.5};
  const auto h = wer_histogram(r);
  EXPECT_DOUBLE_EQ(h.fractions[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(h.fractions[1], 1.0 / 3);
  EXPECT_DOUBLE_EQ(h.fractions[10], 1.0 / 3);
  EXPECT_EQ(h.total, 3u);
}

TEST(Histogram, FractionsSumToOne) {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(2.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> r(1 + rng() % 300);
    for (auto& x : r) x = e(rng);
    const auto h = wer_histogram(r);
    double s = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < kWerBins; ++k) {
      s += h.fractions[k];
      n += h.counts[k];
    }
    ASSERT_NEAR(s, 1.0, 1e-12);
    ASSERT_EQ(n, r.size());
  }
}

// ---- corpus scoring ----

namespace {

corpus::UtteranceRecord ref(const std::string& id, const std::string& text, corpus::DialectLabel d) {
  corpus::UtteranceRecord r;
  r.utterance_id = id;
  r.dataset_id = id.substr(0, id.find('/'));
  r.standardized_transcript = text;
  r.dialect = std::move(d);
  return r;
}

}  // namespace

TEST(ScoreCorpus, MicroIsPooledArithmetic) {
  // rates from the examples: 0 (0/3), 5 (5/1), 0.5 (1/2)
  const std::vector<corpus::UtteranceRecord> refs{
      ref("d/1", "كتب الولد الدرس", synth::code("ary")),
      ref("d/2", "كتاب", synth::code("ary")),
      ref("d/3", "كتب قلم", synth::code("ary")),
  };
  const std::vector<Hypothesis> hyps{
      {"d/1", "كَتَبَ الوَلَدُ الدَّرْسَ"}, {"d/2", "قلم باب دار بيت نور"}, {"d/3", "كتب باب"}};
  const auto rep = score_corpus(refs, hyps);
  ASSERT_EQ(rep.groups.size(), 2u);
  const auto& g = rep.groups[0];
  EXPECT_EQ(g.group, "ary");
  EXPECT_DOUBLE_EQ(g.wer_micro, 6.0 / 6.0);
  EXPECT_DOUBLE_EQ(g.wer_macro, (0.0 + 5.0 + 0.5) / 3.0);
  EXPECT_EQ(rep.groups[1].group, "overall");
  EXPECT_DOUBLE_EQ(g.histogram.fractions[0], 1.0 / 3);
  EXPECT_DOUBLE_EQ(g.histogram.fractions[4], 1.0 / 3);
  EXPECT_DOUBLE_EQ(g.histogram.fractions[10], 1.0 / 3);
}

TEST(ScoreCorpus, AllCorrect) {
  const std::vector<corpus::UtteranceRecord> refs{ref("d/1", "كتب", synth::code("ary")),
                                                  ref("e/1", "قال", synth::code("arz", "EGY"))};
  const std::vector<Hypothesis> hyps{{"d/1", "كتب"}, {"e/1", "قال"}};
  const auto rep = score_corpus(refs, hyps);
  for (const auto& g : rep.groups) {
    EXPECT_DOUBLE_EQ(g.wer_micro, 0.0);
    EXPECT_DOUBLE_EQ(g.histogram.fractions[0], 1.0);
  }
}

TEST(ScoreCorpus, GroupKeysAndUnmatched) {
  const std::vector<corpus::UtteranceRecord> refs{
      ref("d/1", "كتب", corpus::make_dialect_code("afb", "ARE", "AZ")),
      ref("d/2", "قال", corpus::make_dialect_code("afb", "KWT")),
      ref("d/3", "", synth::code("afb")),
  };
  const std::vector<Hypothesis> hyps{{"d/1", "كتب"}, {"d/2", "قال"}, {"d/3", "زيادة"}, {"d/9", "نور"}};
  ScoreOptions o;
  o.key = GroupKey::Country;
  const auto rep = score_corpus(refs, hyps, o);
  EXPECT_EQ(rep.unmatched_hypotheses, std::vector<std::string>{"d/9"});
  EXPECT_EQ(rep.empty_references, std::vector<std::string>{"d/3"});
  std::vector<std::string> groups;
  for (const auto& g : rep.groups) groups.push_back(g.group);
  EXPECT_EQ(groups, (std::vector<std::string>{"afb_ARE", "afb_KWT", "overall"}));
  o.key = GroupKey::Locality;
  o.include_empty_references = true;
  const auto loc = score_corpus(refs, hyps, o);
  groups.clear();
  for (const auto& g : loc.groups) groups.push_back(g.group);
  EXPECT_EQ(groups, (std::vector<std::string>{"afb", "afb_ARE-AZ", "afb_KWT", "overall"}));
  EXPECT_DOUBLE_EQ(loc.groups[0].wer_micro, 1.0);  // one insertion over one unit
}

TEST(ScoreCorpus, ParallelEqualsSerial) {
  std::vector<corpus::UtteranceRecord> refs;
  std::vector<Hypothesis> hyps;
  oracle::MixedTextGenerator gen(6);
  for (int i = 0; i < 300; ++i) {
    const std::string id = "d/" + std::to_string(i);
    refs.push_back(ref(id, text::normalize(gen.next()), synth::code(i % 2 ? "ary" : "arz")));
    hyps.push_back({id, gen.next()});
  }
  ScoreOptions serial, parallel;
  parallel.jobs = 8;
  EXPECT_EQ(format_report_tsv(score_corpus(refs, hyps, serial), nullptr),
            format_report_tsv(score_corpus(refs, hyps, parallel), nullptr));
}

TEST(ScoreCorpus, ReportRoundTrip) {
  const std::vector<corpus::UtteranceRecord> refs{ref("d/1", "باب دار بيت", synth::code("ary")),
                                                  ref("d/2", "باب دار", synth::code("arz"))};
  const std::vector<Hypothesis> hyps{{"d/1", "باب نور بيت"}, {"d/2", "باب"}};
  const auto rep = score_corpus(refs, hyps);
  const auto back = parse_report_tsv(format_report_tsv(rep, nullptr), "t");
  ASSERT_EQ(back.size(), rep.groups.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].group, rep.groups[i].group);
    EXPECT_EQ(back[i].wer_micro, rep.groups[i].wer_micro);
    EXPECT_EQ(back[i].cer_macro, rep.groups[i].cer_macro);
    EXPECT_EQ(back[i].histogram.fractions, rep.groups[i].histogram.fractions);
  }
  const std::vector<SystemGroups> systems{{"sysA", back}, {"sysB", back}};
  const auto table = format_system_table(systems);
  EXPECT_NE(table.find("group\tsysA\tsysB"), std::string::npos);
  EXPECT_NE(format_histogram_table(systems).find("sysB\toverall"), std::string::npos);
}

TEST(Hypotheses, Parse) {
  const auto h = parse_hypotheses("{\"utterance_id\":\"a/1\",\"text\":\"x\",\"score\":3}\n\n", "t");
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].text, "x");
  EXPECT_THROW(parse_hypotheses("{\"utterance_id\":\"a\",\"text\":\"\"}\n{\"utterance_id\":\"a\",\"text\":\"\"}\n", "t"),
               Error);
  EXPECT_THROW(parse_hypotheses("{\"utterance_id\":\"a\"}\n", "t"), Error);
}

TEST(GroupKeys, Parse) {
  EXPECT_EQ(parse_group_key("dialect"), GroupKey::Dialect);
  EXPECT_EQ(parse_group_key("dialect+subdivision"), GroupKey::Locality);
  EXPECT_FALSE(parse_group_key("speaker").has_value());
}
