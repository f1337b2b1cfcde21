#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dialkit/manifest.hpp"
#include "dialkit/record.hpp"

namespace dialkit::splits {

using corpus::Split;
using corpus::UtteranceRecord;

inline constexpr std::size_t kSplitCount = 5;  // train adapt dev test unassigned

struct SplitTargets {
  double adapt_hours = 5.0;
  double dev_hours = 1.0;
  double test_hours = 1.0;
  double min_pool_hours = 3.0;  // at or above: sampling path; below: even thirds

  void validate() const;  // InvalidArgument unless all positive
};

struct DurationSample {
  std::vector<std::size_t> indices;  // accepted, in acceptance order
  double seconds = 0;
  bool underfilled = false;
};

// Greedy accumulation over a seeded shuffle (of the records ordered by
// utterance_id) until the total reaches target_seconds; the overshoot is at
// most the last accepted duration. If the input cannot reach the target,
// everything is returned with underfilled set.
DurationSample sample_to_duration(std::span<const UtteranceRecord> records, double target_seconds,
                                  std::uint64_t seed);

enum class DatasetMode { Canonical, Sampled, EvenThirds };
enum class Grouping { Speaker, Utterance };
std::string_view to_string(DatasetMode mode);
std::string_view to_string(Grouping grouping);

struct SplitFragment {
  DatasetMode mode = DatasetMode::Canonical;
  Grouping grouping = Grouping::Utterance;
  std::vector<Split> splits;  // parallel to the input records
  std::vector<std::string> notes;
};

// Split one dataset's records.
//  - any record tagged dev or test: tags kept, untagged records -> train;
//  - else total >= min_pool_hours: test then dev sampled to their targets,
//    the rest train;
//  - else three duration-balanced parts: train, dev, test.
// When every record has a speaker_id, the last two paths move whole speakers
// (speaker-disjoint splits); otherwise single utterances.
// `stream` names the random stream (defaults to the dataset id).
SplitFragment assign_dataset_splits(std::span<const UtteranceRecord> records, const SplitTargets& targets,
                                    std::uint64_t seed, std::string_view stream = {});

struct Assignment {
  std::string utterance_id;
  std::string dialect;  // ISO 639-3 grouping key
  std::string dataset_id;
  Split split = Split::Unassigned;
};

struct ProvenanceRow {
  std::string dialect;
  std::string dataset_id;
  std::array<double, kSplitCount> hours{};  // indexed by Split
};

struct FragmentInfo {
  std::string dialect;
  std::string dataset_id;
  DatasetMode mode = DatasetMode::Canonical;
  Grouping grouping = Grouping::Utterance;
};

struct PlanFlag {
  std::string dialect;
  std::string kind;  // Underfilled
  std::string detail;
};

struct Exclusion {
  std::string utterance_id;
  std::string dataset_id;
  std::string label;   // rendered dialect label
  std::string reason;  // Ambiguous, Unknown
};

struct SplitPlan {
  std::uint64_t seed = 0;
  SplitTargets targets;
  std::vector<Assignment> assignments;    // every resolved record, by utterance_id
  std::vector<Exclusion> excluded;        // unresolved dialect labels, by utterance_id
  std::vector<ProvenanceRow> provenance;  // by dialect, dataset
  std::vector<FragmentInfo> fragments;    // by dialect, dataset
  std::vector<PlanFlag> flags;
  std::vector<std::string> no_data_for_dialect;  // sorted

  double hours(std::string_view dialect, Split split) const;
};

// Benchmark construction: unresolved labels are excluded (ambiguous
// candidates without resolved data are listed as NoDataForDialect); each
// (dialect, dataset) chunk goes through assign_dataset_splits; per dialect,
// test and dev are pooled across datasets toward their targets with a
// proportional interleave, and adapt is drawn from train material. Test
// surplus and canonical dev surplus become unassigned; other dev surplus
// returns to train.
SplitPlan build_benchmark(std::span<const UtteranceRecord> records, const SplitTargets& targets,
                          std::uint64_t seed, unsigned jobs = 1);

// {utterance_id, dialect, split, dataset_id}, sorted by utterance_id.
std::string format_plan_tsv(const SplitPlan& plan, const corpus::RunMetadata* run);
// {dialect, dataset_id, hours per split}.
std::string format_provenance_tsv(const SplitPlan& plan, const corpus::RunMetadata* run);
// One line per dialect and split, e.g. "ary  test  1.00 h  (MGB5 0.9, MASC 0.1,)".
std::string format_provenance_summary(const SplitPlan& plan);
// Seed, targets, fragment modes, flags, exclusions summary.
std::string plan_to_json(const SplitPlan& plan, const corpus::RunMetadata* run);

// Copies plan splits onto records (excluded records become unassigned).
void apply_plan(std::span<UtteranceRecord> records, const SplitPlan& plan);

}  // namespace dialkit::splits
