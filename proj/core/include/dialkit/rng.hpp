#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace dialkit {

std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic generator used for every random choice in the toolkit.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Bounded draws and shuffles are implemented here rather than via
// <random> distributions (whose algorithms are implementation-defined), so a
// given seed yields the same splits and samples on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for a named sub-task, e.g. derive(seed, "test/ary").
  static Rng derive(std::uint64_t seed, std::string_view stream);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double unit();

  // Fisher-Yates.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dialkit
