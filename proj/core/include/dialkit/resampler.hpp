#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace dialkit::audio {

struct ResamplerOptions {
  int zero_crossings = 64;     // sinc lobes on each side of the kernel centre
  double rolloff = 0.95;       // cutoff as a fraction of the lower Nyquist rate
  double kaiser_beta = 8.0;    // ~80 dB stopband
};

// Band-limited windowed-sinc sample-rate converter (Kaiser window).
//
// For a rate ratio reducing to L/M the kernel is tabulated once per output
// phase (L phases); each phase is normalized to unity DC gain. Signal
// outside the input is treated as zero. Output length is
// round(n_in * out_rate / in_rate).
class Resampler {
 public:
  Resampler(std::uint32_t in_rate, std::uint32_t out_rate, ResamplerOptions options = {});

  std::vector<double> process(std::span<const double> input) const;

  static std::size_t output_length(std::size_t n_in, std::uint32_t in_rate, std::uint32_t out_rate);

  std::size_t taps_per_phase() const { return taps_; }

 private:
  std::vector<double> kernel_for_phase(std::uint64_t phase) const;

  std::uint32_t in_rate_;
  std::uint32_t out_rate_;
  std::uint64_t up_;    // L
  std::uint64_t down_;  // M
  ResamplerOptions options_;
  double cutoff_;       // cycles per input sample
  double half_width_;   // kernel half-width in input samples
  std::int64_t reach_;  // taps either side of the centre sample
  std::size_t taps_;
  std::vector<double> table_;  // up_ * taps_ when tabulated, else empty
};

}  // namespace dialkit::audio
