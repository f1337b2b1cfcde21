#include "dialkit/rng.hpp"

#include "dialkit/error.hpp"

namespace dialkit {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t seed, std::string_view stream) {
  return Rng(splitmix64(seed) ^ fnv1a64(stream));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "Rng::below(0)");
  // Reject the low 2^64 mod bound values so the modulo is unbiased.
  const std::uint64_t threshold = (0 - bound) % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x < threshold);
  return x % bound;
}

double Rng::unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace dialkit
