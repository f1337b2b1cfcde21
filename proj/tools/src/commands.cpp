#include "dialkit/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialkit/cli/pipeline_config.hpp"
#include "dialkit/error.hpp"
#include "dialkit/ingest.hpp"
#include "dialkit/manifest.hpp"
#include "dialkit/profiling.hpp"
#include "dialkit/sampling.hpp"
#include "dialkit/score_file.hpp"
#include "dialkit/scoring.hpp"
#include "dialkit/splits.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string out;
};

struct Context {
  PipelineConfig cfg;
  fs::path ws;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  corpus::RunMetadata run;
};

Context make_context(const CommonFlags& flags, std::string command) {
  Context ctx;
  ctx.cfg = PipelineConfig::load(flags.config);
  ctx.ws = ctx.cfg.workspace;
  if (const char* env = std::getenv("DIALKIT_WORKSPACE"); env && *env) ctx.ws = env;
  if (!flags.out.empty()) ctx.ws = flags.out;
  ctx.seed = flags.seed.value_or(ctx.cfg.seed);
  ctx.jobs = flags.jobs.value_or(ctx.cfg.jobs);
  ctx.run.command = std::move(command);
  ctx.run.seed = ctx.seed;
  ctx.run.config_digest = ctx.cfg.digest;
  return ctx;
}

ordered_json run_json(const corpus::RunMetadata& run) {
  ordered_json j;
  for (const auto& line : run.lines()) {
    const auto eq = line.find('=');
    j[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return j;
}

// Puts a "run" block first in a JSON document.
std::string with_run(const std::string& json_text, const corpus::RunMetadata& run) {
  ordered_json doc = ordered_json::parse(json_text);
  ordered_json out;
  out["run"] = run_json(run);
  for (auto& [k, v] : doc.items()) out[k] = v;
  return out.dump(2) + "\n";
}

std::string with_run_lines(const std::string& tsv, const corpus::RunMetadata& run) {
  std::string out;
  for (const auto& line : run.lines()) out += "# " + line + "\n";
  return out + tsv;
}

std::string safe_name(std::string s) {
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                    c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

fs::path manifest_path(const Context& ctx, const std::string& dataset_id) {
  return ctx.ws / "manifests" / (dataset_id + ".tsv");
}

std::vector<corpus::UtteranceRecord> load_all_manifests(const Context& ctx) {
  std::vector<corpus::UtteranceRecord> all;
  for (const auto& d : ctx.cfg.datasets) {
    auto m = corpus::read_manifest(manifest_path(ctx, d.dataset_id), *ctx.cfg.registry);
    std::move(m.records.begin(), m.records.end(), std::back_inserter(all));
  }
  return all;
}

// ---------------------------------------------------------------- ingest

int cmd_ingest(const Context& ctx, std::ostream& out, std::ostream& err) {
  bool validation_failed = false;
  for (const auto& d : ctx.cfg.datasets) {
    std::error_code ec;
    fs::remove_all(ctx.ws / "audio" / d.dataset_id, ec);
    corpus::IngestOptions opts;
    opts.workspace = ctx.ws;
    opts.jobs = ctx.jobs;
    opts.normalizer = ctx.cfg.normalizer.get();
    opts.geo = ctx.cfg.geo.get();
    opts.themes = ctx.cfg.themes.get();
    opts.registry = ctx.cfg.registry.get();
    corpus::IngestResult result = corpus::ingest_dataset(d, opts);

    const auto violations = corpus::validate_records(result.records, *ctx.cfg.normalizer);
    for (const auto& v : violations) {
      result.report.errors.push_back({v.utterance_id, "SchemaViolation", v.field + ": " + v.detail});
    }
    corpus::write_manifest(manifest_path(ctx, d.dataset_id), result.records, &ctx.run);
    corpus::write_manifest(ctx.ws / "manifests" / (d.dataset_id + ".jsonl"), result.records, &ctx.run);
    io::write_file(ctx.ws / "reports" / "ingest" / (d.dataset_id + ".json"),
                   with_run(result.report.to_json(), ctx.run));
    io::write_file(ctx.ws / "reports" / "ingest" / (d.dataset_id + ".warnings.jsonl"),
                   result.report.warnings_jsonl());

    const auto& r = result.report;
    out << d.dataset_id << ": rows " << r.rows_read << ", kept " << r.kept;
    for (const auto& [reason, n] : r.dropped) out << ", " << reason << " " << n;
    out << ", errors " << r.errors.size() << ", warnings " << r.warnings.size() << "\n";
    for (const auto& e : r.errors) {
      ordered_json j{{"dataset_id", d.dataset_id}, {"row_id", e.row_id}, {"error", e.kind}, {"detail", e.detail}};
      err << j.dump() << "\n";
    }
    if (!r.ok()) validation_failed = true;
  }
  return validation_failed ? kExitValidation : kExitOk;
}

// ---------------------------------------------------------------- profile

int cmd_profile(const Context& ctx, const std::vector<std::string>& score_overrides, std::ostream& out) {
  auto records = load_all_manifests(ctx);
  std::vector<fs::path> score_files = ctx.cfg.score_files;
  if (!score_overrides.empty()) score_files.assign(score_overrides.begin(), score_overrides.end());

  std::string warnings;
  auto warn = [&](const std::string& id, const std::string& kind, const std::string& detail) {
    warnings += ordered_json{{"utterance_id", id}, {"warning_kind", kind}, {"detail", detail}}.dump() + "\n";
  };
  std::vector<profiling::ScoreRow> rows;
  for (const auto& f : score_files) {
    auto part = profiling::read_score_file(f);
    std::move(part.begin(), part.end(), std::back_inserter(rows));
  }
  const auto join = profiling::join_scores(records, rows, false);
  for (const auto& id : join.unknown_ids) warn(id, "UnknownUtteranceId", "score row rejected");
  if (!join.conflicts.empty()) {
    throw Error(ErrorCode::DuplicateUtteranceId, join.conflicts.front() + " scored twice for the same field");
  }

  std::map<std::string, std::vector<const corpus::UtteranceRecord*>> by_dataset, by_dialect;
  for (const auto& r : records) {
    by_dataset[r.dataset_id].push_back(&r);
    const auto* code = std::get_if<corpus::DialectCode>(&r.dialect);
    by_dialect[code ? code->iso : corpus::render_label(r.dialect)].push_back(&r);
  }
  auto emit = [&](const char* kind, const auto& groups) {
    std::vector<profiling::Profile> profiles;
    for (const auto& [name, members] : groups) {
      profiles.push_back(profiling::build_profile(name, members));
      io::write_file(ctx.ws / "profile" / kind / (safe_name(name) + ".json"),
                     with_run(profiling::profile_to_json(profiles.back()), ctx.run));
      for (const auto& w : profiles.back().warnings) warn("", "ProfileWarning", std::string(kind) + "/" + name + ": " + w);
    }
    io::write_file(ctx.ws / "profile" / (std::string(kind) + ".tsv"),
                   with_run_lines(profiling::format_profile_table(profiles), ctx.run));
    out << "profiled " << profiles.size() << " " << kind << "\n";
  };
  emit("datasets", by_dataset);
  emit("dialects", by_dialect);
  io::write_file(ctx.ws / "profile" / "warnings.jsonl", warnings);
  out << "joined " << join.joined << " score rows, rejected " << join.unknown_ids.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- split

int cmd_split(const Context& ctx, std::ostream& out) {
  auto records = load_all_manifests(ctx);
  const auto plan = splits::build_benchmark(records, ctx.cfg.targets, ctx.seed, ctx.jobs);
  const fs::path dir = ctx.ws / "splits";
  io::write_file(dir / "plan.tsv", splits::format_plan_tsv(plan, &ctx.run));
  io::write_file(dir / "provenance.tsv", splits::format_provenance_tsv(plan, &ctx.run));
  io::write_file(dir / "provenance.txt", splits::format_provenance_summary(plan));
  io::write_file(dir / "plan.json", splits::plan_to_json(plan, &ctx.run));
  {
    io::TsvTable t;
    t.metadata = ctx.run.lines();
    t.header = {"utterance_id", "dataset_id", "dialect", "reason"};
    for (const auto& e : plan.excluded) t.rows.push_back({e.utterance_id, e.dataset_id, e.label, e.reason});
    io::write_file(dir / "excluded.tsv", io::format_tsv(t));
  }
  splits::apply_plan(records, plan);
  std::set<std::string> assigned;
  for (const auto& a : plan.assignments) assigned.insert(a.utterance_id);
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.utterance_id < b.utterance_id; });
  for (auto s : {corpus::Split::Train, corpus::Split::Adapt, corpus::Split::Dev, corpus::Split::Test}) {
    std::vector<corpus::UtteranceRecord> part;
    for (const auto& r : records) {
      if (r.split == s && assigned.contains(r.utterance_id)) part.push_back(r);
    }
    corpus::write_manifest(dir / "manifests" / (std::string(corpus::to_string(s)) + ".tsv"), part, &ctx.run);
  }
  out << "assigned " << plan.assignments.size() << ", excluded " << plan.excluded.size() << "\n";
  for (const auto& d : plan.no_data_for_dialect) out << "NoDataForDialect " << d << "\n";
  for (const auto& f : plan.flags) out << f.kind << " " << f.dialect << ": " << f.detail << "\n";
  out << splits::format_provenance_summary(plan);
  return kExitOk;
}

// ---------------------------------------------------------------- score

struct ScoreFlags {
  std::string hyps;
  std::string system;
  std::string split = "test";
  std::string group_key;
};

int cmd_score(Context& ctx, const ScoreFlags& flags, std::ostream& out) {
  auto records = load_all_manifests(ctx);
  const io::TsvTable plan = io::read_tsv(ctx.ws / "splits" / "plan.tsv");
  const std::size_t cid = plan.require_column("utterance_id"), csplit = plan.require_column("split");
  std::map<std::string, std::string> split_of;
  for (const auto& row : plan.rows) split_of[row[cid]] = row[csplit];
  if (flags.split != "all" && !corpus::parse_split(flags.split)) {
    throw Error(ErrorCode::InvalidArgument, "--split: expected train, adapt, dev, test or all");
  }
  std::vector<corpus::UtteranceRecord> refs;
  for (auto& r : records) {
    auto it = split_of.find(r.utterance_id);
    if (it == split_of.end()) continue;
    if (flags.split != "all" && it->second != flags.split) continue;
    refs.push_back(std::move(r));
  }
  scoring::ScoreOptions opts;
  opts.key = ctx.cfg.group_key;
  if (!flags.group_key.empty()) {
    auto k = scoring::parse_group_key(flags.group_key);
    if (!k) throw Error(ErrorCode::InvalidArgument, "--group-key: expected dialect, country, locality or dataset");
    opts.key = *k;
  }
  opts.include_empty_references = ctx.cfg.include_empty_references;
  opts.jobs = ctx.jobs;
  opts.normalizer = ctx.cfg.normalizer.get();
  const auto hyps = scoring::read_hypotheses(flags.hyps);
  const auto report = scoring::score_corpus(refs, hyps, opts);

  const std::string system = flags.system.empty() ? fs::path(flags.hyps).stem().string() : flags.system;
  ctx.run.extra = {{"system", system}, {"split", flags.split}, {"group_key", std::string(scoring::to_string(opts.key))}};
  const fs::path dir = ctx.ws / "scores" / safe_name(system);
  io::write_file(dir / "report.tsv", scoring::format_report_tsv(report, &ctx.run));
  io::write_file(dir / "detail.tsv", scoring::format_detail_tsv(report, &ctx.run));
  io::write_file(dir / "warnings.jsonl", scoring::format_score_warnings(report));
  for (const auto& g : report.groups) {
    out << system << "\t" << g.group << "\tWER " << io::format_fixed(g.wer_micro * 100, 2) << "\tCER "
        << io::format_fixed(g.cer_micro * 100, 2) << "\tn=" << g.n_utts << "\n";
  }
  if (!report.unmatched_hypotheses.empty()) out << "UnmatchedHypothesis: " << report.unmatched_hypotheses.size() << "\n";
  if (!report.unmatched_references.empty()) out << "UnmatchedReference: " << report.unmatched_references.size() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- report

int cmd_report(const Context& ctx, const std::vector<std::string>& systems_flag, std::ostream& out) {
  std::vector<std::pair<std::string, fs::path>> sources;
  for (const auto& s : systems_flag) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--system expects name=report.tsv");
    sources.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (sources.empty()) {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(ctx.ws / "scores", ec)) {
      if (fs::is_regular_file(entry.path() / "report.tsv")) {
        sources.emplace_back(entry.path().filename().string(), entry.path() / "report.tsv");
      }
    }
    std::sort(sources.begin(), sources.end());
  }
  if (sources.empty()) throw Error(ErrorCode::Io, "no score reports under " + (ctx.ws / "scores").string());
  std::vector<scoring::SystemGroups> systems;
  for (const auto& [name, path] : sources) {
    systems.emplace_back(name, scoring::parse_report_tsv(io::read_file(path), path.string()));
  }
  const fs::path dir = ctx.ws / "report";
  io::write_file(dir / "wer_bins.tsv", with_run_lines(scoring::format_histogram_table(systems), ctx.run));
  io::write_file(dir / "wer_table.tsv", with_run_lines(scoring::format_system_table(systems, false), ctx.run));
  io::write_file(dir / "cer_table.tsv", with_run_lines(scoring::format_system_table(systems, true), ctx.run));
  out << "report over " << systems.size() << " system(s) written to " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const Context& ctx, std::size_t n, const std::string& strata, std::ostream& out) {
  auto records = load_all_manifests(ctx);
  std::vector<corpus::StratumKey> keys;
  for (const auto& k : std::vector<std::string>{"dataset", "dialect"}) {
    if (strata.find(k) != std::string::npos) {
      keys.push_back(k == "dataset" ? corpus::StratumKey::Dataset : corpus::StratumKey::Dialect);
    }
  }
  if (keys.empty()) throw Error(ErrorCode::InvalidArgument, "--strata: expected dataset, dialect or both");
  const auto sample = corpus::sanity_sample(records, n, keys, ctx.seed);
  std::vector<corpus::UtteranceRecord> picked;
  for (std::size_t i : sample.indices) picked.push_back(records[i]);
  corpus::write_manifest(ctx.ws / "sanity" / "sample.tsv", picked, &ctx.run);
  io::TsvTable t;
  t.metadata = ctx.run.lines();
  t.header = {"stratum", "size", "allocated"};
  for (const auto& s : sample.strata) t.rows.push_back({s.key, std::to_string(s.size), std::to_string(s.allocated)});
  io::write_file(ctx.ws / "sanity" / "strata.tsv", io::format_tsv(t));
  out << "sampled " << picked.size() << " of " << records.size() << " across " << sample.strata.size() << " strata\n";
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::Config:
    case ErrorCode::MalformedTable:
    case ErrorCode::InvalidArgument:
      return kExitFatal;
    default:
      return kExitValidation;
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dialkit: dialectal Arabic speech corpus standardization, profiling, splits and scoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(DIALKIT_CLI_VERSION));

  CommonFlags common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Pipeline configuration file")->required();
    sub->add_option("--seed", common.seed, "Override the configured seed");
    sub->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--out", common.out, "Workspace directory (overrides config and DIALKIT_WORKSPACE)");
  };

  auto* ingest = app.add_subcommand("ingest", "Standardize datasets into canonical manifests and audio");
  add_common(ingest);
  auto* profile = app.add_subcommand("profile", "Aggregate per-utterance scores per dataset and dialect");
  add_common(profile);
  std::vector<std::string> score_files;
  profile->add_option("--scores", score_files, "Score interchange files (replace the configured list)");
  auto* split = app.add_subcommand("split", "Build the benchmark split plan");
  add_common(split);
  auto* score = app.add_subcommand("score", "Score a hypothesis file against the plan's references");
  add_common(score);
  ScoreFlags score_flags;
  score->add_option("--hyps", score_flags.hyps, "Hypotheses, one {utterance_id, text} object per line")->required();
  score->add_option("--system", score_flags.system, "System name (default: hypothesis file stem)");
  score->add_option("--split", score_flags.split, "train, adapt, dev, test or all")->capture_default_str();
  score->add_option("--group-key", score_flags.group_key, "dialect, country, locality or dataset");
  auto* report = app.add_subcommand("report", "Tabulate score reports across systems");
  add_common(report);
  std::vector<std::string> systems;
  report->add_option("--system", systems, "name=path/to/report.tsv (default: every workspace report)");
  auto* sample = app.add_subcommand("sample", "Draw a stratified sanity-check sample");
  add_common(sample);
  std::size_t sample_n = 0;
  std::string strata = "dataset,dialect";
  sample->add_option("--n", sample_n, "Sample size")->required();
  sample->add_option("--strata", strata, "dataset, dialect or dataset,dialect")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitFatal;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    Context ctx = make_context(common, name);
    if (name == "ingest") return cmd_ingest(ctx, out, err);
    if (name == "profile") return cmd_profile(ctx, score_files, out);
    if (name == "split") return cmd_split(ctx, out);
    if (name == "score") return cmd_score(ctx, score_flags, out);
    if (name == "report") return cmd_report(ctx, systems, out);
    if (name == "sample") return cmd_sample(ctx, sample_n, strata, out);
  } catch (const Error& e) {
    err << ordered_json{{"command", name}, {"error", std::string(to_string(e.code()))}, {"detail", e.detail()}}.dump()
        << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << ordered_json{{"command", name}, {"error", "Internal"}, {"detail", e.what()}}.dump() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace dialkit::cli
