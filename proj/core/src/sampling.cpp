#include "dialkit/sampling.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "dialkit/error.hpp"
#include "dialkit/rng.hpp"

namespace dialkit::corpus {

std::vector<std::size_t> allocate_largest_remainder(std::span<const std::size_t> sizes, std::size_t n) {
  const std::size_t k = sizes.size();
  const std::uint64_t total = std::accumulate(sizes.begin(), sizes.end(), std::uint64_t{0});
  std::vector<std::size_t> alloc(k, 0);
  if (total == 0 || n == 0) return alloc;
  if (n > total) throw Error(ErrorCode::InvalidArgument, "sample size exceeds population");
  if (total >= (std::uint64_t{1} << 31)) throw Error(ErrorCode::InvalidArgument, "population too large");

  // quota_i = n * size_i / total, kept as exact integer numerators.
  std::vector<std::uint64_t> rem(k);
  std::size_t given = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n) * sizes[i];
    alloc[i] = static_cast<std::size_t>(num / total);
    rem[i] = num % total;
    given += alloc[i];
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
  for (std::size_t j = 0; given < n; ++j, ++given) ++alloc[order[j]];

  const std::size_t nonempty = static_cast<std::size_t>(
      std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
  if (n < nonempty) return alloc;
  for (std::size_t i = 0; i < k; ++i) {
    if (sizes[i] == 0 || alloc[i] > 0) continue;
    // Donor: largest excess alloc*total - n*size over strata holding >= 2.
    std::optional<std::size_t> donor;
    std::int64_t best = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (alloc[j] < 2) continue;
      const std::int64_t excess = static_cast<std::int64_t>(alloc[j] * total) -
                                  static_cast<std::int64_t>(static_cast<std::uint64_t>(n) * sizes[j]);
      if (!donor || excess > best) {
        donor = j;
        best = excess;
      }
    }
    if (!donor) break;  // unreachable when n >= nonempty
    --alloc[*donor];
    alloc[i] = 1;
  }
  return alloc;
}

SanitySample sanity_sample(std::span<const UtteranceRecord> records, std::size_t n,
                           std::span<const StratumKey> keys, std::uint64_t seed) {
  if (records.empty()) throw Error(ErrorCode::EmptyCorpus, "no records to sample from");
  if (n > records.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample size " + std::to_string(n) + " exceeds " +
                                                std::to_string(records.size()) + " records");
  }
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::string key;
    for (StratumKey k : keys) {
      if (!key.empty()) key += '|';
      key += k == StratumKey::Dataset ? records[i].dataset_id : render_label(records[i].dialect);
    }
    groups[key].push_back(i);
  }

  SanitySample out;
  std::vector<std::size_t> sizes;
  for (const auto& [key, members] : groups) {
    out.strata.push_back({key, members.size(), 0});
    sizes.push_back(members.size());
  }
  const auto alloc = allocate_largest_remainder(sizes, n);
  std::size_t s = 0;
  for (auto& [key, members] : groups) {
    out.strata[s].allocated = alloc[s];
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return records[a].utterance_id < records[b].utterance_id;
    });
    Rng rng = Rng::derive(seed, "sanity/" + key);
    rng.shuffle(std::span<std::size_t>(members));
    out.indices.insert(out.indices.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(alloc[s]));
    ++s;
  }
  return out;
}

}  // namespace dialkit::corpus
