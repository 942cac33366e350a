#pragma once

// Iterative radix-2 FFT, power-of-two sizes only. The circulant embedding
// always works at power-of-two length, so nothing more general is needed,
// and the result is deterministic across platforms.

#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "hurstscale/errors.hpp"

namespace hurstscale::detail {

// In-place transform; sign = -1 forward, +1 inverse (unscaled: no 1/N).
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw NumericError("fft: length must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

}  // namespace hurstscale::detail
