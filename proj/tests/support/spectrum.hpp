#pragma once

#include <fftw3.h>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

// Index of the largest |X[k]| over k in [1, n/2].
inline std::size_t fft_peak(const std::vector<std::int16_t>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x.begin(), x.end());
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
  fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out, FFTW_ESTIMATE);
  fftw_execute(plan);
  std::size_t best = 1;
  double best_mag = -1;
  for (int k = 1; k <= n / 2; ++k) {
    const double m = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    if (m > best_mag) {
      best_mag = m;
      best = static_cast<std::size_t>(k);
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(out);
  return best;
}

}  // namespace oracle
