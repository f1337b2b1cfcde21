#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dialkit::scoring {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const { return substitutions + deletions + insertions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_len += o.ref_len;
    return *this;
  }
  bool operator==(const EditCounts&) const = default;
};

// Unit-cost Levenshtein alignment of hyp against ref. The backtrace, run from
// the end, prefers the diagonal (match or substitution), then insertion, then
// deletion, so the S/D/I split is deterministic; the total is not affected.
template <class T>
EditCounts edit_counts(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  EditCounts out;
  out.ref_len = n;
  if (n == 0) {
    out.insertions = m;
    return out;
  }
  if (m == 0) {
    out.deletions = n;
    return out;
  }
  const std::size_t w = m + 1;
  std::vector<std::uint32_t> d((n + 1) * w);
  for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    std::uint32_t* row = &d[i * w];
    const std::uint32_t* up = &d[(i - 1) * w];
    row[0] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag = up[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      const std::uint32_t best = std::min(up[j], row[j - 1]) + 1u;
      row[j] = std::min(diag, best);
    }
  }
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = d[i * w + j];
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (here == d[(i - 1) * w + (j - 1)] + (same ? 0u : 1u)) {
        if (!same) ++out.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && here == d[i * w + (j - 1)] + 1u) {
      ++out.insertions;
      --j;
      continue;
    }
    ++out.deletions;
    --i;
  }
  return out;
}

template <class Seq>
EditCounts edit_counts_of(const Seq& ref, const Seq& hyp) {
  using T = typename Seq::value_type;
  return edit_counts<T>(std::span<const T>(ref.data(), ref.size()), std::span<const T>(hyp.data(), hyp.size()));
}

}  // namespace dialkit::scoring
