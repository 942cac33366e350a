#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace hurstscale {

// Seeded standard-normal source. Box-Muller on top of mt19937_64 so the
// stream is bit-identical across platforms (std::normal_distribution is
// implementation-defined). Each normal consumes exactly two 64-bit draws.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  // uniform on the open interval (0,1); never 0, so log() below is safe
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  double operator()() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hurstscale
