#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <set>

#include "cli_harness.hpp"
#include "dialkit/manifest.hpp"
#include "dialkit/scoring.hpp"
#include "dialkit/tsv.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using namespace dialkit;
using testutil::run_cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kMini = fs::path(DIALKIT_TEST_FIXTURES) / "mini";

json load_json(const fs::path& p) { return json::parse(oracle::slurp(p)); }

std::vector<std::string> common(const std::string& cmd, const fs::path& ws) {
  return {cmd, "--config", testutil::mini_config().string(), "--out", ws.string()};
}

std::vector<std::string> with(std::vector<std::string> a, std::initializer_list<std::string> more) {
  a.insert(a.end(), more);
  return a;
}

// One ingested + split workspace shared by the read-only tests below.
class MiniWorkspace : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ws_ = new testutil::TempDir;
    ASSERT_EQ(run_cli(common("ingest", ws_->path())).code, 0);
    ASSERT_EQ(run_cli(common("profile", ws_->path())).code, 0);
    ASSERT_EQ(run_cli(common("split", ws_->path())).code, 0);
  }
  static void TearDownTestSuite() {
    delete ws_;
    ws_ = nullptr;
  }
  static const fs::path& ws() { return ws_->path(); }

  static std::vector<corpus::UtteranceRecord> all_records() {
    std::vector<corpus::UtteranceRecord> out;
    for (const char* ds : {"gulf_tagged", "levant_bw", "rabat"}) {
      auto m = corpus::read_manifest(ws() / "manifests" / (std::string(ds) + ".tsv"));
      out.insert(out.end(), m.records.begin(), m.records.end());
    }
    return out;
  }

  static testutil::TempDir* ws_;
};

testutil::TempDir* MiniWorkspace::ws_ = nullptr;

}  // namespace

// ---- ingest ----

TEST_F(MiniWorkspace, IngestRecordCount) {
  EXPECT_EQ(all_records().size(), 20u);
  const auto rabat = load_json(ws() / "reports/ingest/rabat.json");
  EXPECT_EQ(rabat["rows_read"], 10);
  EXPECT_EQ(rabat["kept"], 7);
  EXPECT_EQ(rabat["dropped"]["LatinOnly"], 1);
  EXPECT_EQ(rabat["dropped"]["Empty"], 1);
  EXPECT_EQ(rabat["dropped"]["TooShort"], 1);
  EXPECT_EQ(rabat["run"]["seed"], "7");
}

TEST_F(MiniWorkspace, RunMetadataInEveryArtifact) {
  for (const auto& e : fs::recursive_directory_iterator(ws())) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    const std::string text = oracle::slurp(e.path());
    if (ext == ".tsv") {
      EXPECT_EQ(text.rfind("# tool=dialkit\n", 0), 0u) << e.path();
      EXPECT_NE(text.find("# seed=7\n"), std::string::npos) << e.path();
    } else if (ext == ".json") {
      EXPECT_EQ(load_json(e.path())["run"]["seed"], "7") << e.path();
    } else if (e.path().filename() == "rabat.jsonl") {
      EXPECT_EQ(json::parse(text.substr(0, text.find('\n')))["run"]["config_digest"].get<std::string>().size(), 16u);
    }
  }
}

TEST(CliIngest, MissingAudioRootNamesPath) {
  testutil::TempDir dir;
  fs::create_directories(dir / "d");
  fs::copy_file(kMini / "datasets/rabat.tsv", dir / "d/rabat.tsv");
  testutil::write_text(dir / "d/rabat.ini",
                       "[dataset]\nid = rabat\ntranscripts = rabat.tsv\naudio_root = no_such_audio_dir\n"
                       "[fields]\naudio = file\ntranscript = text\n[dialect]\nrule = fixed\ncode = ary\n");
  testutil::write_text(dir / "p.ini", "[pipeline]\nworkspace = ws\ndatasets = d/rabat.ini\n");
  const auto r = run_cli({"ingest", "--config", (dir / "p.ini").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("no_such_audio_dir"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("\"error\":\"Io\""), std::string::npos) << r.err;
}

TEST(CliIngest, RerunIsByteIdentical) {
  testutil::TempDir a, b;
  ASSERT_EQ(run_cli(common("ingest", a.path())).code, 0);
  ASSERT_EQ(run_cli(with(common("ingest", b.path()), {"--jobs", "4"})).code, 0);
  const auto first = testutil::snapshot(a.path());
  EXPECT_EQ(first, testutil::snapshot(b.path()));
  ASSERT_EQ(run_cli(common("ingest", a.path())).code, 0);
  EXPECT_EQ(first, testutil::snapshot(a.path()));
}

TEST(CliIngest, WorkspaceFromEnvironment) {
  testutil::TempDir env_ws;
  ::setenv("DIALKIT_WORKSPACE", env_ws.path().c_str(), 1);
  const auto r = run_cli({"sample", "--config", testutil::mini_config().string(), "--n", "1"});
  ::unsetenv("DIALKIT_WORKSPACE");
  // nothing ingested there yet: the command fails against the env workspace
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find(env_ws.path().filename().string()), std::string::npos) << r.err;
}

TEST(CliUsage, UnknownSubcommandAndMissingConfig) {
  EXPECT_NE(run_cli({"frobnicate"}).code, 0);
  EXPECT_NE(run_cli({"ingest"}).code, 0);
  EXPECT_EQ(run_cli({"ingest", "--config", "/nonexistent/p.ini"}).code, cli::kExitFatal);
}

// ---- profile ----

TEST_F(MiniWorkspace, ProfileHandComputedMeans) {
  const auto lev = load_json(ws() / "profile/datasets/levant_bw.json");
  // aldi 0.9 0.8 0.1 0.5 0.2 0.6 0.4
  EXPECT_NEAR(lev["dialectness"]["mean"].get<double>(), 0.5, 1e-12);
  EXPECT_EQ(lev["dialectness"]["bins"]["MSA"]["count"], 1);
  EXPECT_EQ(lev["dialectness"]["bins"]["LittleDA"]["count"], 2);
  EXPECT_EQ(lev["dialectness"]["bins"]["Mixed"]["count"], 2);
  EXPECT_EQ(lev["dialectness"]["bins"]["MostlyDA"]["count"], 2);
  EXPECT_NEAR(lev["dialectness"]["q1"].get<double>(), 0.3, 1e-12);
  EXPECT_NEAR(lev["dialectness"]["q3"].get<double>(), 0.7, 1e-12);
  EXPECT_NEAR(lev["msa_da"]["msa_fraction"].get<double>(), 2.0 / 7.0, 1e-12);
  // pesq 1.5 2.5 3.5 1.5 2.5 3.5 2.5
  EXPECT_NEAR(lev["quality"]["pesq"]["mean"].get<double>(), 2.5, 1e-12);
  EXPECT_NEAR(lev["quality"]["pesq"]["std"].get<double>(), std::sqrt(4.0 / 7.0), 1e-12);
  const std::vector<double> x{0.9, 0.8, 0.1, 0.5, 0.2, 0.6, 0.4}, y{1, 1, 0, 1, 0, 1, 1};
  EXPECT_NEAR(lev["aldi_msa_da_pearson"].get<double>(), oracle::pearson_direct(x, y), 1e-12);

  const auto gulf = load_json(ws() / "profile/datasets/gulf_tagged.json");
  EXPECT_NEAR(gulf["quality"]["pesq"]["mean"].get<double>(), 3.0, 1e-12);
  EXPECT_NEAR(gulf["quality"]["pesq"]["std"].get<double>(), std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_NEAR(gulf["quality"]["si_sdr"]["mean"].get<double>(), 12.0, 1e-12);
  EXPECT_NEAR(gulf["dialectness"]["mean"].get<double>(), 0.52, 1e-12);

  const auto rabat = load_json(ws() / "profile/datasets/rabat.json");
  EXPECT_EQ(rabat["aldi_missing"], 1);
  EXPECT_NEAR(rabat["dialectness"]["mean"].get<double>(), 2.55 / 6.0, 1e-12);
  EXPECT_EQ(rabat["quality"]["pesq"]["count"], 6);
  EXPECT_EQ(rabat["quality"]["pesq"]["excluded"], 1);

  // per-dialect document pools across datasets: afb = gulf g01 g02 g03 g06 + rabat r07
  const auto afb = load_json(ws() / "profile/dialects/afb.json");
  EXPECT_EQ(afb["utterances"], 5);
}

TEST(CliProfile, EmptyScoreFileGivesAbsentMetricsAndWarnings) {
  testutil::TempDir ws;
  ASSERT_EQ(run_cli(common("ingest", ws.path())).code, 0);
  testutil::write_text(ws / "empty.jsonl", "");
  const auto r = run_cli(with(common("profile", ws.path()), {"--scores", (ws / "empty.jsonl").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = load_json(ws / "profile/datasets/gulf_tagged.json");
  EXPECT_TRUE(doc["dialectness"].is_null());
  EXPECT_TRUE(doc["msa_da"].is_null());
  for (const char* m : {"pesq", "stoi", "si_sdr", "nmr_mos"}) {
    EXPECT_EQ(doc["quality"][m]["count"], 0) << m;
    EXPECT_TRUE(doc["quality"][m]["mean"].is_null()) << m;
    EXPECT_EQ(doc["quality"][m]["excluded"], 6) << m;
  }
  EXPECT_FALSE(oracle::slurp(ws / "profile/warnings.jsonl").empty());
}

TEST(CliProfile, DuplicateScoreIdRejected) {
  testutil::TempDir ws;
  ASSERT_EQ(run_cli(common("ingest", ws.path())).code, 0);
  testutil::write_text(ws / "dup.jsonl",
                       "{\"utterance_id\":\"rabat/r01\",\"aldi\":0.1}\n{\"utterance_id\":\"rabat/r01\",\"aldi\":0.2}\n");
  const auto r = run_cli(with(common("profile", ws.path()), {"--scores", (ws / "dup.jsonl").string()}));
  EXPECT_EQ(r.code, cli::kExitValidation);
  EXPECT_NE(r.err.find("DuplicateUtteranceId"), std::string::npos) << r.err;
}

// ---- split ----

TEST_F(MiniWorkspace, SplitPartitionAndExclusions) {
  const auto plan = io::read_tsv(ws() / "splits/plan.tsv");
  const auto excluded = io::read_tsv(ws() / "splits/excluded.tsv");
  std::set<std::string> seen;
  for (const auto& row : plan.rows) ASSERT_TRUE(seen.insert(row[0]).second) << row[0];
  for (const auto& row : excluded.rows) ASSERT_TRUE(seen.insert(row[0]).second) << row[0];
  std::set<std::string> all;
  for (const auto& r : all_records()) all.insert(r.utterance_id);
  EXPECT_EQ(seen, all);
  EXPECT_EQ(excluded.rows.size(), 2u);  // rabat/r05 and gulf_tagged/g05
  // canonical tags preserved for gulf_tagged
  std::map<std::string, std::string> split_of;
  for (const auto& row : plan.rows) split_of[row[0]] = row[2];
  EXPECT_EQ(split_of["gulf_tagged/g02"], "test");
  EXPECT_EQ(split_of["gulf_tagged/g03"], "dev");
}

TEST_F(MiniWorkspace, SplitUnderfilledFlags) {
  // every dialect pool in the fixture is far below the 1 h targets
  const auto plan = load_json(ws() / "splits/plan.json");
  std::set<std::string> underfilled;
  for (const auto& f : plan["flags"]) {
    if (f["kind"] == "Underfilled") underfilled.insert(f["dialect"].get<std::string>());
  }
  EXPECT_EQ(underfilled, (std::set<std::string>{"acw", "afb", "apc", "ars", "ary", "arz"}));
}

TEST_F(MiniWorkspace, SplitSameSeedIdenticalFiles) {
  testutil::TempDir again;
  fs::copy(ws() / "manifests", again / "manifests", fs::copy_options::recursive);
  ASSERT_EQ(run_cli(common("split", again.path())).code, 0);
  EXPECT_EQ(testutil::snapshot(ws() / "splits"), testutil::snapshot(again / "splits"));
  ASSERT_EQ(run_cli(with(common("split", again.path()), {"--seed", "8"})).code, 0);
  EXPECT_NE(oracle::slurp(ws() / "splits/plan.tsv"), oracle::slurp(again / "splits/plan.tsv"));
}

// ---- score ----

TEST_F(MiniWorkspace, ScorePerfectHypotheses) {
  testutil::TempDir tmp;
  std::string hyps;
  for (const auto& r : all_records()) {
    hyps += json{{"utterance_id", r.utterance_id}, {"text", r.raw_transcript}}.dump() + "\n";
  }
  testutil::write_text(tmp / "perfect.jsonl", hyps);
  testutil::TempDir w;
  fs::copy(ws(), w.path(), fs::copy_options::recursive);
  const auto r = run_cli(with(common("score", w.path()), {"--hyps", (tmp / "perfect.jsonl").string(), "--split", "all"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto groups = scoring::parse_report_tsv(oracle::slurp(w / "scores/perfect/report.tsv"), "t");
  ASSERT_FALSE(groups.empty());
  for (const auto& g : groups) {
    EXPECT_EQ(g.wer_micro, 0.0) << g.group;
    EXPECT_EQ(g.cer_micro, 0.0) << g.group;
    EXPECT_EQ(g.histogram.fractions[0], 1.0) << g.group;
  }
}

TEST_F(MiniWorkspace, ScoreMismatchedIdsWarn) {
  testutil::TempDir tmp;
  testutil::write_text(tmp / "shuffled.jsonl",
                       "{\"utterance_id\":\"rabat/r1\",\"text\":\"كيف\"}\n"
                       "{\"utterance_id\":\"levant_bw/B01\",\"text\":\"كيفك\"}\n");
  testutil::TempDir w;
  fs::copy(ws(), w.path(), fs::copy_options::recursive);
  const auto r = run_cli(with(common("score", w.path()), {"--hyps", (tmp / "shuffled.jsonl").string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t unmatched_hyp = 0;
  std::istringstream in(oracle::slurp(w / "scores/shuffled/warnings.jsonl"));
  for (std::string line; std::getline(in, line);) {
    unmatched_hyp += json::parse(line)["warning_kind"] == "UnmatchedHypothesis";
  }
  EXPECT_EQ(unmatched_hyp, 2u);
}

TEST_F(MiniWorkspace, ScoreHandScoredFixture) {
  testutil::TempDir w;
  fs::copy(ws(), w.path(), fs::copy_options::recursive);
  const auto r = run_cli(
      with(common("score", w.path()), {"--hyps", testutil::mini_hyps().string(), "--split", "all"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto groups = scoring::parse_report_tsv(oracle::slurp(w / "scores/system_a/report.tsv"), "t");
  // errors / reference words, counted by hand per dialect
  const std::map<std::string, double> expected{
      {"afb", 4.0 / 6.0}, {"apc", 3.0 / 7.0}, {"ars", 3.0 / 3.0},
      {"ary", 2.0 / 8.0}, {"arz", 4.0 / 7.0}, {"overall", 16.0 / 31.0},
  };
  ASSERT_EQ(groups.size(), expected.size());
  for (const auto& g : groups) {
    ASSERT_TRUE(expected.contains(g.group)) << g.group;
    EXPECT_NEAR(g.wer_micro, expected.at(g.group), 1e-12) << g.group;
    EXPECT_EQ(g.n_utts, g.group == "overall" ? 10u : g.group == "apc" ? 3u : g.group == "ars" ? 1u : 2u);
  }
  // rates 0 .5 .25 1 1 .667 0 1 .5 .667: macro over the 10 utterances
  const double macro = (0 + 0.5 + 0.25 + 1 + 1 + 2.0 / 3 + 0 + 1 + 0.5 + 2.0 / 3) / 10;
  EXPECT_NEAR(groups.back().wer_macro, macro, 1e-12);
}

TEST_F(MiniWorkspace, ReportAndSample) {
  testutil::TempDir w;
  fs::copy(ws(), w.path(), fs::copy_options::recursive);
  ASSERT_EQ(run_cli(with(common("score", w.path()), {"--hyps", testutil::mini_hyps().string(), "--split", "all"})).code, 0);
  const auto rep = run_cli(common("report", w.path()));
  ASSERT_EQ(rep.code, 0) << rep.err;
  const auto table = io::read_tsv(w / "report/wer_table.tsv");
  ASSERT_EQ(table.header, (std::vector<std::string>{"group", "system_a"}));
  EXPECT_EQ(table.rows.back(), (std::vector<std::string>{"overall", "51.61"}));
  const auto s = run_cli(with(common("sample", w.path()), {"--n", "6"}));
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(corpus::read_manifest(w / "sanity/sample.tsv").records.size(), 6u);
}
