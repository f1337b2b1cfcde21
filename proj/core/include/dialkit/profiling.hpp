#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialkit/record.hpp"

namespace dialkit::profiling {

enum class AldiBin { MSA, LittleDA, Mixed, MostlyDA };
inline constexpr std::size_t kAldiBinCount = 4;
// Left-closed intervals [0,.11) [.11,.44) [.44,.77) [.77,1]; 1.0 is MostlyDA.
inline constexpr std::array<double, 3> kAldiBoundaries{0.11, 0.44, 0.77};

std::string_view to_string(AldiBin bin);
// Throws OutOfRangeScore outside [0, 1] (and for NaN).
AldiBin bin_aldi(double score);

// Sample quantile by linear interpolation between order statistics
// (h = (n-1)p). `sorted` must be ascending and nonempty.
double quantile_sorted(std::span<const double> sorted, double p);

// Streaming count/mean/M2 with the pairwise merge of Chan et al.
struct Moments {
  std::size_t n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x);
  void merge(const Moments& other);
  double population_variance() const { return n ? m2 / static_cast<double>(n) : 0.0; }
  double population_std() const;
};

struct DialectnessSummary {
  std::size_t count = 0;
  double total_hours = 0;
  std::array<std::size_t, kAldiBinCount> bin_counts{};
  std::array<double, kAldiBinCount> bin_fractions{};
  std::array<double, kAldiBinCount> bin_hours{};
  double mean = 0;
  double q1 = 0, median = 0, q3 = 0;
  // Share of utterances with score strictly above each boundary.
  std::array<double, 3> fraction_above{};
};

// Additive state behind DialectnessSummary; merge() makes chunked parallel
// reduction equal to a single pass (exact for counts and quartiles, to
// rounding for sums and moments).
class DialectnessAccumulator {
 public:
  void add(double aldi, double seconds);  // throws OutOfRangeScore
  void merge(const DialectnessAccumulator& other);
  std::size_t count() const { return moments_.n; }
  DialectnessSummary summary() const;  // EmptyCorpus when count() == 0

 private:
  std::array<std::size_t, kAldiBinCount> counts_{};
  std::array<double, kAldiBinCount> seconds_{};
  std::array<std::size_t, 3> above_{};
  Moments moments_;
  std::vector<double> values_;
};

// Every record must carry an aldi score; otherwise MissingScores listing the
// offending utterance_ids.
DialectnessSummary summarize_dialectness(std::span<const corpus::UtteranceRecord> records);

enum class QualityMetric { Pesq, Stoi, SiSdr, NmrMos };
inline constexpr std::size_t kQualityMetricCount = 4;
std::string_view to_string(QualityMetric metric);

struct MetricStats {
  std::size_t count = 0;
  double mean = 0;
  double std = 0;  // population
};

struct QualitySummary {
  std::array<std::optional<MetricStats>, kQualityMetricCount> metrics;  // absent: no values
  std::array<std::size_t, kQualityMetricCount> excluded{};              // records missing the metric
  std::vector<std::string> warnings;

  const std::optional<MetricStats>& operator[](QualityMetric m) const {
    return metrics[static_cast<std::size_t>(m)];
  }
};

QualitySummary summarize_quality(std::span<const corpus::UtteranceRecord> records);

// Product-moment correlation, two-pass. Throws LengthMismatch when sizes
// differ, InvalidArgument below two pairs, ZeroVariance for a constant side.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct MsaDaShare {
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;
  double msa_fraction = 0;
  double da_fraction = 0;
};

// Fractions over records carrying msa_da; MissingScores when none do.
MsaDaShare msa_da_share(std::span<const corpus::UtteranceRecord> records);

// Per-group profile document (one dataset or one dialect).
struct Profile {
  std::string group;
  std::size_t utterances = 0;
  double hours = 0;
  std::optional<DialectnessSummary> dialectness;  // over records with aldi
  std::size_t aldi_missing = 0;
  std::optional<MsaDaShare> msa_da;
  QualitySummary quality;
  std::optional<double> aldi_msa_da_pearson;  // over records carrying both
  std::vector<std::string> warnings;
};

Profile build_profile(std::string group, std::span<const corpus::UtteranceRecord* const> records);

std::string profile_to_json(const Profile& profile);

// Cross-group table, one row per profile: group, utterances, hours,
// aldi_mean, msa_share, da_share, then "mean (std)" cells per quality metric.
std::string format_profile_table(std::span<const Profile> profiles);

}  // namespace dialkit::profiling
