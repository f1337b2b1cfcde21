#include "dialkit/splits.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <json.hpp>

#include "dialkit/error.hpp"
#include "dialkit/parallel.hpp"
#include "dialkit/rng.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::splits {

using nlohmann::ordered_json;

void SplitTargets::validate() const {
  if (!(adapt_hours > 0 && dev_hours > 0 && test_hours > 0 && min_pool_hours > 0)) {
    throw Error(ErrorCode::InvalidArgument, "split targets must all be positive");
  }
}

std::string_view to_string(DatasetMode mode) {
  switch (mode) {
    case DatasetMode::Canonical: return "canonical";
    case DatasetMode::Sampled: return "sampled";
    case DatasetMode::EvenThirds: return "even_thirds";
  }
  return "?";
}

std::string_view to_string(Grouping grouping) {
  return grouping == Grouping::Speaker ? "speaker" : "utterance";
}

namespace {

std::size_t slot(Split s) { return static_cast<std::size_t>(s); }

std::vector<std::size_t> id_order(std::span<const UtteranceRecord> records) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].utterance_id < records[b].utterance_id;
  });
  return order;
}

// A speaker (or a single utterance) moved as one piece.
struct Unit {
  std::string key;
  std::vector<std::size_t> members;
  double seconds = 0;
  double longest = 0;
};

struct Fill {
  std::vector<std::size_t> units;
  double seconds = 0;
  bool wide_overshoot = false;
};

// First-fit over `order`: a unit is taken while the total is short of the
// target, provided the overshoot it causes is no longer than its own longest
// utterance. If the target is still unmet, the unit with the smallest
// overshoot is added.
Fill fill_units(const std::vector<Unit>& units, const std::vector<std::size_t>& order,
                const std::vector<bool>& taken, double target) {
  Fill f;
  std::vector<std::size_t> skipped;
  for (std::size_t u : order) {
    if (taken[u]) continue;
    if (f.seconds >= target) break;
    const double after = f.seconds + units[u].seconds;
    if (after <= target || after - target <= units[u].longest) {
      f.units.push_back(u);
      f.seconds = after;
    } else {
      skipped.push_back(u);
    }
  }
  if (f.seconds < target && !skipped.empty()) {
    std::size_t best = skipped.front();
    for (std::size_t u : skipped) {
      if (units[u].seconds < units[best].seconds) best = u;
    }
    f.units.push_back(best);
    f.seconds += units[best].seconds;
    f.wide_overshoot = true;
  }
  return f;
}

std::string hours_str(double seconds) { return io::format_fixed(seconds / 3600.0, 2); }

}  // namespace

DurationSample sample_to_duration(std::span<const UtteranceRecord> records, double target_seconds,
                                  std::uint64_t seed) {
  if (!(target_seconds > 0)) throw Error(ErrorCode::InvalidArgument, "target must be > 0");
  auto order = id_order(records);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  DurationSample s;
  for (std::size_t i : order) {
    if (s.seconds >= target_seconds) break;
    s.indices.push_back(i);
    s.seconds += records[i].duration;
  }
  s.underfilled = s.seconds < target_seconds;
  return s;
}

SplitFragment assign_dataset_splits(std::span<const UtteranceRecord> records, const SplitTargets& targets,
                                    std::uint64_t seed, std::string_view stream) {
  targets.validate();
  SplitFragment f;
  f.splits.assign(records.size(), Split::Train);
  if (records.empty()) return f;

  const bool canonical = std::any_of(records.begin(), records.end(), [](const UtteranceRecord& r) {
    return r.split == Split::Dev || r.split == Split::Test;
  });
  if (canonical) {
    f.mode = DatasetMode::Canonical;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const Split s = records[i].split;
      f.splits[i] = (s == Split::Dev || s == Split::Test) ? s : Split::Train;
    }
    return f;
  }

  const bool by_speaker = std::all_of(records.begin(), records.end(),
                                      [](const UtteranceRecord& r) { return r.speaker_id.has_value(); });
  f.grouping = by_speaker ? Grouping::Speaker : Grouping::Utterance;

  std::vector<Unit> units;
  {
    std::map<std::string, std::size_t> unit_of;
    for (std::size_t i : id_order(records)) {
      const std::string key = by_speaker ? *records[i].speaker_id : records[i].utterance_id;
      auto [it, inserted] = unit_of.emplace(key, units.size());
      if (inserted) units.push_back(Unit{key, {}, 0, 0});
      Unit& u = units[it->second];
      u.members.push_back(i);
      u.seconds += records[i].duration;
      u.longest = std::max(u.longest, records[i].duration);
    }
    std::sort(units.begin(), units.end(), [](const Unit& a, const Unit& b) { return a.key < b.key; });
  }
  double total = 0;
  for (const auto& u : units) total += u.seconds;

  std::vector<std::size_t> order(units.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = Rng::derive(seed, "dataset/" + std::string(stream.empty() ? records.front().dataset_id : stream));
  rng.shuffle(std::span<std::size_t>(order));

  auto assign = [&](std::size_t u, Split s) {
    for (std::size_t i : units[u].members) f.splits[i] = s;
  };

  if (total >= targets.min_pool_hours * 3600.0) {
    f.mode = DatasetMode::Sampled;
    std::vector<bool> taken(units.size(), false);
    for (auto [split, hours] : {std::pair{Split::Test, targets.test_hours}, std::pair{Split::Dev, targets.dev_hours}}) {
      Fill fill = fill_units(units, order, taken, hours * 3600.0);
      for (std::size_t u : fill.units) {
        taken[u] = true;
        assign(u, split);
      }
      if (fill.wide_overshoot) {
        f.notes.push_back(std::string(corpus::to_string(split)) + ": overshoot exceeds one utterance (" +
                          hours_str(fill.seconds) + " h)");
      }
    }
    return f;
  }

  // Longest-processing-time partition into three parts.
  f.mode = DatasetMode::EvenThirds;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return units[a].seconds > units[b].seconds; });
  std::array<double, 3> load{};
  constexpr std::array<Split, 3> parts{Split::Train, Split::Dev, Split::Test};
  for (std::size_t u : order) {
    const std::size_t p = static_cast<std::size_t>(std::min_element(load.begin(), load.end()) - load.begin());
    load[p] += units[u].seconds;
    assign(u, parts[p]);
  }
  return f;
}

double SplitPlan::hours(std::string_view dialect, Split split) const {
  double h = 0;
  for (const auto& row : provenance) {
    if (row.dialect == dialect) h += row.hours[slot(split)];
  }
  return h;
}

namespace {

struct DialectResult {
  std::vector<std::pair<std::size_t, Split>> assigned;  // record index -> split
  std::vector<FragmentInfo> fragments;
  std::vector<PlanFlag> flags;
};

DialectResult plan_dialect(std::span<const UtteranceRecord> records, const std::string& dialect,
                           const std::map<std::string, std::vector<std::size_t>>& by_dataset,
                           const SplitTargets& targets, std::uint64_t seed) {
  DialectResult out;
  std::map<std::size_t, Split> split_of;
  std::map<std::string, DatasetMode> mode_of;

  for (const auto& [dataset, indices] : by_dataset) {
    std::vector<UtteranceRecord> chunk;
    chunk.reserve(indices.size());
    for (std::size_t i : indices) chunk.push_back(records[i]);
    SplitFragment frag = assign_dataset_splits(chunk, targets, seed, dialect + "/" + dataset);
    for (std::size_t k = 0; k < indices.size(); ++k) split_of[indices[k]] = frag.splits[k];
    mode_of[dataset] = frag.mode;
    out.fragments.push_back({dialect, dataset, frag.mode, frag.grouping});
    for (auto& note : frag.notes) out.flags.push_back({dialect, "WideOvershoot", dataset + " " + note});
  }

  // Pools the records currently tagged `from` toward target hours; returns
  // the accepted indices and leaves the rest tagged `from`.
  auto pool = [&](Split from, double hours, std::string_view name) {
    std::vector<std::tuple<double, std::string, std::size_t>> queue;
    for (const auto& [dataset, indices] : by_dataset) {
      std::vector<std::size_t> members;
      for (std::size_t i : indices) {
        if (split_of[i] == from) members.push_back(i);
      }
      std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
        return records[a].utterance_id < records[b].utterance_id;
      });
      Rng rng = Rng::derive(seed, "pool/" + dialect + "/" + std::string(name) + "/" + dataset);
      rng.shuffle(std::span<std::size_t>(members));
      const double n = static_cast<double>(members.size());
      for (std::size_t k = 0; k < members.size(); ++k) {
        queue.emplace_back((static_cast<double>(k) + 0.5) / n, dataset, members[k]);
      }
    }
    std::sort(queue.begin(), queue.end());
    const double target = hours * 3600.0;
    double acc = 0;
    std::vector<std::size_t> chosen;
    for (const auto& [key, dataset, i] : queue) {
      if (acc >= target) break;
      chosen.push_back(i);
      acc += records[i].duration;
    }
    if (acc < target) {
      out.flags.push_back({dialect, "Underfilled",
                           std::string(name) + " " + hours_str(acc) + " h of " + io::format_fixed(hours, 2) + " h"});
    }
    return chosen;
  };

  auto selected = [](const std::vector<std::size_t>& v) { return std::set<std::size_t>(v.begin(), v.end()); };

  const auto test = selected(pool(Split::Test, targets.test_hours, "test"));
  for (auto& [i, s] : split_of) {
    if (s == Split::Test && !test.contains(i)) s = Split::Unassigned;
  }
  const auto dev = selected(pool(Split::Dev, targets.dev_hours, "dev"));
  for (auto& [i, s] : split_of) {
    if (s == Split::Dev && !dev.contains(i)) {
      s = mode_of[records[i].dataset_id] == DatasetMode::Canonical ? Split::Unassigned : Split::Train;
    }
  }
  for (std::size_t i : pool(Split::Train, targets.adapt_hours, "adapt")) split_of[i] = Split::Adapt;

  out.assigned.assign(split_of.begin(), split_of.end());
  return out;
}

}  // namespace

SplitPlan build_benchmark(std::span<const UtteranceRecord> records, const SplitTargets& targets,
                          std::uint64_t seed, unsigned jobs) {
  targets.validate();
  SplitPlan plan;
  plan.seed = seed;
  plan.targets = targets;

  {
    std::set<std::string_view> ids;
    for (const auto& r : records) {
      if (!ids.insert(r.utterance_id).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate utterance_id " + r.utterance_id);
      }
    }
  }

  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> groups;
  std::set<std::string> ambiguous_candidates;
  for (std::size_t i : id_order(records)) {
    const auto& r = records[i];
    if (const auto* code = std::get_if<corpus::DialectCode>(&r.dialect)) {
      groups[code->iso][r.dataset_id].push_back(i);
      continue;
    }
    const bool ambiguous = std::holds_alternative<corpus::AmbiguousDialect>(r.dialect);
    if (ambiguous) {
      for (const auto& c : std::get<corpus::AmbiguousDialect>(r.dialect).candidates) ambiguous_candidates.insert(c);
    }
    plan.excluded.push_back({r.utterance_id, r.dataset_id, corpus::render_label(r.dialect),
                             ambiguous ? "Ambiguous" : "Unknown"});
  }
  for (const auto& c : ambiguous_candidates) {
    if (!groups.contains(c)) plan.no_data_for_dialect.push_back(c);
  }

  std::vector<const std::string*> dialects;
  for (const auto& [d, _] : groups) dialects.push_back(&d);
  std::vector<DialectResult> results(dialects.size());
  parallel_for(dialects.size(), jobs, [&](std::size_t k) {
    results[k] = plan_dialect(records, *dialects[k], groups.at(*dialects[k]), targets, seed);
  });

  for (std::size_t k = 0; k < dialects.size(); ++k) {
    const std::string& dialect = *dialects[k];
    std::map<std::string, ProvenanceRow> prov;
    for (const auto& [i, split] : results[k].assigned) {
      const auto& r = records[i];
      plan.assignments.push_back({r.utterance_id, dialect, r.dataset_id, split});
      auto& row = prov[r.dataset_id];
      row.dialect = dialect;
      row.dataset_id = r.dataset_id;
      row.hours[slot(split)] += r.duration;
    }
    for (auto& [_, row] : prov) {
      for (auto& h : row.hours) h /= 3600.0;
      plan.provenance.push_back(row);
    }
    plan.fragments.insert(plan.fragments.end(), results[k].fragments.begin(), results[k].fragments.end());
    plan.flags.insert(plan.flags.end(), results[k].flags.begin(), results[k].flags.end());
  }
  std::sort(plan.assignments.begin(), plan.assignments.end(),
            [](const Assignment& a, const Assignment& b) { return a.utterance_id < b.utterance_id; });
  return plan;
}

std::string format_plan_tsv(const SplitPlan& plan, const corpus::RunMetadata* run) {
  io::TsvTable t;
  if (run) t.metadata = run->lines();
  t.header = {"utterance_id", "dialect", "split", "dataset_id"};
  for (const auto& a : plan.assignments) {
    t.rows.push_back({a.utterance_id, a.dialect, std::string(corpus::to_string(a.split)), a.dataset_id});
  }
  return io::format_tsv(t);
}

std::string format_provenance_tsv(const SplitPlan& plan, const corpus::RunMetadata* run) {
  io::TsvTable t;
  if (run) t.metadata = run->lines();
  t.header = {"dialect", "dataset_id", "train_hours", "adapt_hours", "dev_hours", "test_hours", "unassigned_hours"};
  for (const auto& row : plan.provenance) {
    std::vector<std::string> cells = {row.dialect, row.dataset_id};
    for (double h : row.hours) cells.push_back(io::format_fixed(h, 4));
    t.rows.push_back(std::move(cells));
  }
  return io::format_tsv(t);
}

std::string format_provenance_summary(const SplitPlan& plan) {
  std::string out;
  std::set<std::string> dialects;
  for (const auto& row : plan.provenance) dialects.insert(row.dialect);
  for (const auto& d : dialects) {
    for (Split s : {Split::Adapt, Split::Dev, Split::Test, Split::Train}) {
      std::string parts;
      double total = 0;
      for (const auto& row : plan.provenance) {
        if (row.dialect != d || row.hours[slot(s)] <= 0) continue;
        if (!parts.empty()) parts += ' ';
        parts += row.dataset_id + " " + io::format_fixed(row.hours[slot(s)], 1) + ",";
        total += row.hours[slot(s)];
      }
      out += d + "\t" + std::string(corpus::to_string(s)) + "\t" + io::format_fixed(total, 2) + " h\t(" + parts + ")\n";
    }
  }
  return out;
}

std::string plan_to_json(const SplitPlan& plan, const corpus::RunMetadata* run) {
  ordered_json j;
  if (run) {
    ordered_json r;
    for (const auto& line : run->lines()) {
      const auto eq = line.find('=');
      r[line.substr(0, eq)] = line.substr(eq + 1);
    }
    j["run"] = std::move(r);
  }
  j["seed"] = plan.seed;
  j["targets"] = {{"adapt_hours", plan.targets.adapt_hours},
                  {"dev_hours", plan.targets.dev_hours},
                  {"test_hours", plan.targets.test_hours},
                  {"min_pool_hours", plan.targets.min_pool_hours}};
  ordered_json frags = ordered_json::array();
  for (const auto& f : plan.fragments) {
    frags.push_back({{"dialect", f.dialect},
                     {"dataset_id", f.dataset_id},
                     {"mode", std::string(to_string(f.mode))},
                     {"grouping", std::string(to_string(f.grouping))}});
  }
  j["fragments"] = std::move(frags);
  ordered_json flags = ordered_json::array();
  for (const auto& f : plan.flags) flags.push_back({{"dialect", f.dialect}, {"kind", f.kind}, {"detail", f.detail}});
  j["flags"] = std::move(flags);
  std::map<std::string, std::size_t> excluded;
  for (const auto& e : plan.excluded) ++excluded[e.reason];
  j["excluded"] = excluded;
  j["no_data_for_dialect"] = plan.no_data_for_dialect;
  std::map<std::string, std::size_t> counts;
  for (const auto& a : plan.assignments) ++counts[std::string(corpus::to_string(a.split))];
  j["assigned"] = counts;
  return j.dump(2) + "\n";
}

void apply_plan(std::span<UtteranceRecord> records, const SplitPlan& plan) {
  std::map<std::string_view, Split> split_of;
  for (const auto& a : plan.assignments) split_of.emplace(a.utterance_id, a.split);
  for (auto& r : records) {
    auto it = split_of.find(r.utterance_id);
    r.split = it == split_of.end() ? Split::Unassigned : it->second;
  }
}

}  // namespace dialkit::splits
