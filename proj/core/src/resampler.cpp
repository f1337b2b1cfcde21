#include "dialkit/resampler.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "dialkit/error.hpp"

namespace dialkit::audio {

namespace {

// Above this many phases the kernel is evaluated per output sample instead of
// being tabulated (only for unusual rate pairs with a tiny common divisor).
constexpr std::uint64_t kMaxTabulatedPhases = 4096;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

Resampler::Resampler(std::uint32_t in_rate, std::uint32_t out_rate, ResamplerOptions options)
    : in_rate_(in_rate), out_rate_(out_rate), options_(options) {
  if (in_rate == 0 || out_rate == 0) throw Error(ErrorCode::InvalidArgument, "zero sample rate");
  if (options.zero_crossings < 1 || options.rolloff <= 0.0 || options.rolloff > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "invalid resampler options");
  }
  const std::uint64_t g = std::gcd(in_rate, out_rate);
  up_ = out_rate / g;
  down_ = in_rate / g;

  cutoff_ = options.rolloff * 0.5 * std::min(in_rate, out_rate) / static_cast<double>(in_rate);
  half_width_ = options.zero_crossings / (2.0 * cutoff_);
  reach_ = static_cast<std::int64_t>(std::ceil(half_width_)) + 1;
  taps_ = static_cast<std::size_t>(2 * reach_);

  if (up_ <= kMaxTabulatedPhases) {
    table_.reserve(up_ * taps_);
    for (std::uint64_t p = 0; p < up_; ++p) {
      const auto k = kernel_for_phase(p);
      table_.insert(table_.end(), k.begin(), k.end());
    }
  }
}

std::vector<double> Resampler::kernel_for_phase(std::uint64_t phase) const {
  // Taps cover input samples centre-reach_+1 .. centre+reach_ where the output
  // instant lies `frac` samples after `centre`.
  const double frac = static_cast<double>(phase) / static_cast<double>(up_);
  const double i0_beta = std::cyl_bessel_i(0.0, options_.kaiser_beta);
  std::vector<double> k(taps_);
  double sum = 0.0;
  for (std::size_t t = 0; t < taps_; ++t) {
    const double d = static_cast<double>(static_cast<std::int64_t>(t) - reach_ + 1) - frac;
    const double u = d / half_width_;
    double w = 0.0;
    if (std::abs(u) < 1.0) {
      w = std::cyl_bessel_i(0.0, options_.kaiser_beta * std::sqrt(1.0 - u * u)) / i0_beta;
    }
    k[t] = w * 2.0 * cutoff_ * sinc(2.0 * cutoff_ * d);
    sum += k[t];
  }
  for (auto& v : k) v /= sum;
  return k;
}

std::size_t Resampler::output_length(std::size_t n_in, std::uint32_t in_rate, std::uint32_t out_rate) {
  // round(n_in * out / in) without overflowing: r * out < 2^64.
  const std::uint64_t q = n_in / in_rate, r = n_in % in_rate;
  return static_cast<std::size_t>(q * out_rate + (r * out_rate + in_rate / 2) / in_rate);
}

std::vector<double> Resampler::process(std::span<const double> input) const {
  if (in_rate_ == out_rate_) return {input.begin(), input.end()};
  const std::size_t n_out = output_length(input.size(), in_rate_, out_rate_);
  const auto n_in = static_cast<std::int64_t>(input.size());
  std::vector<double> out(n_out);
  std::vector<double> scratch;
  for (std::size_t n = 0; n < n_out; ++n) {
    const std::uint64_t pos = n * down_;
    const auto centre = static_cast<std::int64_t>(pos / up_);
    const std::uint64_t phase = pos % up_;
    const double* k;
    if (!table_.empty()) {
      k = table_.data() + phase * taps_;
    } else {
      scratch = kernel_for_phase(phase);
      k = scratch.data();
    }
    const std::int64_t first = centre - reach_ + 1;
    double acc = 0.0;
    const std::int64_t lo = std::max<std::int64_t>(0, first);
    const std::int64_t hi = std::min<std::int64_t>(n_in, first + static_cast<std::int64_t>(taps_));
    for (std::int64_t i = lo; i < hi; ++i) acc += input[static_cast<std::size_t>(i)] * k[i - first];
    out[n] = acc;
  }
  return out;
}

}  // namespace dialkit::audio
