#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dialkit/record.hpp"

namespace dialkit::corpus {

enum class StratumKey { Dataset, Dialect };

// Largest-remainder apportionment of n over strata of the given sizes,
// proportional to size. Remainder ties go to the earlier stratum. When
// n >= number of nonempty strata, every nonempty stratum gets at least one,
// taken from the most over-allocated strata.
std::vector<std::size_t> allocate_largest_remainder(std::span<const std::size_t> sizes, std::size_t n);

struct Stratum {
  std::string key;  // dataset_id and/or rendered dialect, joined by '|'
  std::size_t size = 0;
  std::size_t allocated = 0;
};

struct SanitySample {
  std::vector<std::size_t> indices;  // into the input, grouped by stratum
  std::vector<Stratum> strata;       // sorted by key
};

// Stratified review sample. Strata are ordered by key; members are ordered
// by utterance_id and shuffled with a per-stratum stream derived from seed,
// so the result depends only on the record set, n, keys and seed.
// Throws EmptyCorpus, or InvalidArgument when n exceeds the record count.
SanitySample sanity_sample(std::span<const UtteranceRecord> records, std::size_t n,
                           std::span<const StratumKey> keys, std::uint64_t seed);

}  // namespace dialkit::corpus
