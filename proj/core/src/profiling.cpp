#include "dialkit/profiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "dialkit/error.hpp"
#include "dialkit/tsv.hpp"

namespace dialkit::profiling {

using nlohmann::ordered_json;

std::string_view to_string(AldiBin bin) {
  switch (bin) {
    case AldiBin::MSA: return "MSA";
    case AldiBin::LittleDA: return "LittleDA";
    case AldiBin::Mixed: return "Mixed";
    case AldiBin::MostlyDA: return "MostlyDA";
  }
  return "?";
}

AldiBin bin_aldi(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::OutOfRangeScore, "aldi=" + io::format_number(score) + " outside [0, 1]");
  }
  if (score < kAldiBoundaries[0]) return AldiBin::MSA;
  if (score < kAldiBoundaries[1]) return AldiBin::LittleDA;
  if (score < kAldiBoundaries[2]) return AldiBin::Mixed;
  return AldiBin::MostlyDA;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void Moments::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void Moments::merge(const Moments& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
  const double total = na + nb;
  const double d = o.mean - mean;
  mean += d * nb / total;
  m2 += o.m2 + d * d * na * nb / total;
  n += o.n;
}

double Moments::population_std() const { return std::sqrt(std::max(0.0, population_variance())); }

void DialectnessAccumulator::add(double aldi, double seconds) {
  const auto bin = static_cast<std::size_t>(bin_aldi(aldi));
  ++counts_[bin];
  seconds_[bin] += seconds;
  for (std::size_t b = 0; b < kAldiBoundaries.size(); ++b) {
    if (aldi > kAldiBoundaries[b]) ++above_[b];
  }
  moments_.add(aldi);
  values_.push_back(aldi);
}

void DialectnessAccumulator::merge(const DialectnessAccumulator& o) {
  for (std::size_t b = 0; b < kAldiBinCount; ++b) {
    counts_[b] += o.counts_[b];
    seconds_[b] += o.seconds_[b];
  }
  for (std::size_t b = 0; b < above_.size(); ++b) above_[b] += o.above_[b];
  moments_.merge(o.moments_);
  values_.insert(values_.end(), o.values_.begin(), o.values_.end());
}

DialectnessSummary DialectnessAccumulator::summary() const {
  if (moments_.n == 0) throw Error(ErrorCode::EmptyCorpus, "no ALDi scores to summarize");
  DialectnessSummary s;
  s.count = moments_.n;
  const double n = static_cast<double>(s.count);
  double seconds = 0;
  for (std::size_t b = 0; b < kAldiBinCount; ++b) {
    s.bin_counts[b] = counts_[b];
    s.bin_fractions[b] = static_cast<double>(counts_[b]) / n;
    s.bin_hours[b] = seconds_[b] / 3600.0;
    seconds += seconds_[b];
  }
  s.total_hours = seconds / 3600.0;
  for (std::size_t b = 0; b < above_.size(); ++b) s.fraction_above[b] = static_cast<double>(above_[b]) / n;
  s.mean = moments_.mean;
  std::vector<double> sorted = values_;
  std::sort(sorted.begin(), sorted.end());
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

DialectnessSummary summarize_dialectness(std::span<const corpus::UtteranceRecord> records) {
  std::vector<std::string> missing;
  DialectnessAccumulator acc;
  for (const auto& r : records) {
    if (!r.scores.aldi) {
      missing.push_back(r.utterance_id);
      continue;
    }
    acc.add(*r.scores.aldi, r.duration);
  }
  if (!missing.empty()) {
    std::string ids;
    for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
    throw Error(ErrorCode::MissingScores, "aldi missing for: " + ids);
  }
  return acc.summary();
}

std::string_view to_string(QualityMetric metric) {
  switch (metric) {
    case QualityMetric::Pesq: return "pesq";
    case QualityMetric::Stoi: return "stoi";
    case QualityMetric::SiSdr: return "si_sdr";
    case QualityMetric::NmrMos: return "nmr_mos";
  }
  return "?";
}

namespace {

const std::optional<double>& metric_of(const corpus::Scores& s, std::size_t m) {
  switch (static_cast<QualityMetric>(m)) {
    case QualityMetric::Pesq: return s.pesq;
    case QualityMetric::Stoi: return s.stoi;
    case QualityMetric::SiSdr: return s.si_sdr;
    case QualityMetric::NmrMos: return s.nmr_mos;
  }
  return s.pesq;
}

}  // namespace

QualitySummary summarize_quality(std::span<const corpus::UtteranceRecord> records) {
  QualitySummary q;
  for (std::size_t m = 0; m < kQualityMetricCount; ++m) {
    Moments mom;
    for (const auto& r : records) {
      if (const auto& v = metric_of(r.scores, m)) {
        mom.add(*v);
      } else {
        ++q.excluded[m];
      }
    }
    if (mom.n == 0) {
      q.warnings.push_back("no " + std::string(to_string(static_cast<QualityMetric>(m))) + " values");
      continue;
    }
    q.metrics[m] = MetricStats{mom.n, mom.mean, mom.population_std()};
  }
  return q;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(xs.size()) + " vs " + std::to_string(ys.size()) + " values");
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidArgument, "pearson needs at least two pairs");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "constant input sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MsaDaShare msa_da_share(std::span<const corpus::UtteranceRecord> records) {
  MsaDaShare s;
  std::size_t msa = 0;
  for (const auto& r : records) {
    if (!r.scores.msa_da) {
      ++s.unlabeled;
      continue;
    }
    ++s.labeled;
    if (*r.scores.msa_da == 0) ++msa;
  }
  if (s.labeled == 0) throw Error(ErrorCode::MissingScores, "no msa_da labels");
  s.msa_fraction = static_cast<double>(msa) / static_cast<double>(s.labeled);
  s.da_fraction = static_cast<double>(s.labeled - msa) / static_cast<double>(s.labeled);
  return s;
}

Profile build_profile(std::string group, std::span<const corpus::UtteranceRecord* const> records) {
  Profile p;
  p.group = std::move(group);
  p.utterances = records.size();
  std::vector<corpus::UtteranceRecord> copy;
  copy.reserve(records.size());
  double seconds = 0;
  DialectnessAccumulator acc;
  std::vector<double> xs, ys;
  for (const auto* r : records) {
    seconds += r->duration;
    copy.push_back(*r);
    if (r->scores.aldi) {
      acc.add(*r->scores.aldi, r->duration);
      if (r->scores.msa_da) {
        xs.push_back(*r->scores.aldi);
        ys.push_back(*r->scores.msa_da);
      }
    } else {
      ++p.aldi_missing;
    }
  }
  p.hours = seconds / 3600.0;
  if (acc.count()) {
    p.dialectness = acc.summary();
  } else {
    p.warnings.push_back("no aldi scores");
  }
  if (p.aldi_missing && acc.count()) {
    p.warnings.push_back(std::to_string(p.aldi_missing) + " record(s) without aldi");
  }
  try {
    p.msa_da = msa_da_share(copy);
  } catch (const Error&) {
    p.warnings.push_back("no msa_da labels");
  }
  p.quality = summarize_quality(copy);
  for (const auto& w : p.quality.warnings) p.warnings.push_back(w);
  if (xs.size() >= 2) {
    try {
      p.aldi_msa_da_pearson = pearson(xs, ys);
    } catch (const Error&) {
      p.warnings.push_back("aldi/msa_da correlation undefined (constant input)");
    }
  }
  return p;
}

namespace {

ordered_json num(double v) { return v; }

ordered_json dialectness_json(const DialectnessSummary& s) {
  ordered_json j;
  j["count"] = s.count;
  j["hours"] = num(s.total_hours);
  ordered_json bins = ordered_json::object();
  for (std::size_t b = 0; b < kAldiBinCount; ++b) {
    bins[std::string(to_string(static_cast<AldiBin>(b)))] = {
        {"count", s.bin_counts[b]}, {"fraction", s.bin_fractions[b]}, {"hours", s.bin_hours[b]}};
  }
  j["bins"] = std::move(bins);
  j["mean"] = s.mean;
  j["q1"] = s.q1;
  j["median"] = s.median;
  j["q3"] = s.q3;
  ordered_json above = ordered_json::object();
  for (std::size_t b = 0; b < kAldiBoundaries.size(); ++b) {
    above[io::format_number(kAldiBoundaries[b])] = s.fraction_above[b];
  }
  j["fraction_above"] = std::move(above);
  return j;
}

std::string mean_std_cell(const std::optional<MetricStats>& m) {
  if (!m) return "-";
  return io::format_fixed(m->mean, 2) + " (" + io::format_fixed(m->std, 2) + ")";
}

}  // namespace

std::string profile_to_json(const Profile& p) {
  ordered_json j;
  j["group"] = p.group;
  j["utterances"] = p.utterances;
  j["hours"] = p.hours;
  j["dialectness"] = p.dialectness ? dialectness_json(*p.dialectness) : ordered_json(nullptr);
  j["aldi_missing"] = p.aldi_missing;
  if (p.msa_da) {
    j["msa_da"] = {{"labeled", p.msa_da->labeled},
                   {"unlabeled", p.msa_da->unlabeled},
                   {"msa_fraction", p.msa_da->msa_fraction},
                   {"da_fraction", p.msa_da->da_fraction}};
  } else {
    j["msa_da"] = nullptr;
  }
  ordered_json quality = ordered_json::object();
  for (std::size_t m = 0; m < kQualityMetricCount; ++m) {
    const auto& stats = p.quality.metrics[m];
    ordered_json e;
    if (stats) {
      e = {{"count", stats->count}, {"mean", stats->mean}, {"std", stats->std}};
    } else {
      e = {{"count", 0}, {"mean", nullptr}, {"std", nullptr}};
    }
    e["excluded"] = p.quality.excluded[m];
    quality[std::string(to_string(static_cast<QualityMetric>(m)))] = std::move(e);
  }
  j["quality"] = std::move(quality);
  j["aldi_msa_da_pearson"] = p.aldi_msa_da_pearson ? ordered_json(*p.aldi_msa_da_pearson) : ordered_json(nullptr);
  j["warnings"] = p.warnings;
  return j.dump(2) + "\n";
}

std::string format_profile_table(std::span<const Profile> profiles) {
  io::TsvTable t;
  t.header = {"group", "utterances", "hours", "aldi_mean", "msa_share", "da_share",
              "pesq", "stoi", "si_sdr", "nmr_mos"};
  for (const auto& p : profiles) {
    std::vector<std::string> row = {p.group, std::to_string(p.utterances), io::format_fixed(p.hours, 3),
                                    p.dialectness ? io::format_fixed(p.dialectness->mean, 3) : "-",
                                    p.msa_da ? io::format_fixed(p.msa_da->msa_fraction, 3) : "-",
                                    p.msa_da ? io::format_fixed(p.msa_da->da_fraction, 3) : "-"};
    for (std::size_t m = 0; m < kQualityMetricCount; ++m) row.push_back(mean_std_cell(p.quality.metrics[m]));
    t.rows.push_back(std::move(row));
  }
  return io::format_tsv(t);
}

}  // namespace dialkit::profiling
