#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hurstscale {

struct FbmSpec {
  double H = 0.5;
  std::size_t N = 0;  // path length, B(0) = 0 included
  std::uint64_t seed = 0;
  double dt = 1.0;
};

// Autocovariance of unit-variance fractional Gaussian noise:
// gamma(k) = ((k+1)^{2H} - 2 k^{2H} + |k-1|^{2H}) / 2. H in (0,1).
double fgn_covariance(double k, double H);

// Exact stationary-Gaussian sampler via circulant embedding. The embedding
// spectrum is computed once per (H, n) and reused across seeds, so ensembles
// are cheap. Draw order is pinned: z_0, z_{M/2}, then (re, im) pairs for
// k = 1..M/2-1.
class FbmGenerator {
 public:
  FbmGenerator(double H, std::size_t n_increments);

  // n_increments fGn samples with the exact finite-dimensional law
  std::vector<double> increments(std::uint64_t seed) const;

  // length n_increments + 1, starts at 0: cumulative sum of increments
  std::vector<double> path(std::uint64_t seed) const;

  std::size_t embedding_size() const { return m_; }

 private:
  double hurst_;
  std::size_t n_;
  std::size_t m_;  // embedding length, power of two
  std::vector<double> sqrt_lambda_;
};

// One path of length spec.N (spec.N >= 2).
std::vector<double> generate_fbm(const FbmSpec& spec);

enum class EnvelopeKind { constant, periodic, log_shift, xlogx, quadratic, wiener };

// Multiplicative volatility envelope g(x), strictly positive on [0, n).
//   constant:  scale
//   periodic:  scale * (1 + amplitude cos(2 pi x / period)), |amplitude| < 1
//   log_shift: scale * log(x + b),        requires x + b > 1
//   xlogx:     scale * (x + b) log(x + b), requires x + b > 1
//   quadratic: scale * (x + b)^2,          requires x + b != 0
//   wiener:    b + |W(x)| with W a seeded Brownian path, b > 0
struct VolatilityEnvelope {
  EnvelopeKind kind = EnvelopeKind::constant;
  double amplitude = 0.5;
  double period = 1024.0;
  double b = 2.0;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> wiener_path;  // filled by make_envelope for kind=wiener
};

VolatilityEnvelope make_envelope(EnvelopeKind kind, double amplitude,
                                 double period, double b, double scale,
                                 std::uint64_t seed = 0, std::size_t n = 0);

EnvelopeKind envelope_kind_from_string(const std::string& name);

// g(x) for integer-ish x >= 0; DomainError if the value is not positive.
double envelope_value(const VolatilityEnvelope& env, double x);

struct PricePath {
  std::vector<double> prices;    // P_t = P_0 exp(Y_t) > 0
  std::vector<double> log_path;  // Y_t, Y_0 = 0
};

// Y_t = mu t + sum_{s<t} g(s) (B_{s+1} - B_s): left-endpoint Stieltjes sum.
// The log path alone has no range limit; prices do (see geometric_fbm_path).
std::vector<double> modulated_log_path(const FbmSpec& spec,
                                       const VolatilityEnvelope& env, double mu);

// P_t = P_0 exp(Y_t). Throws NumericError if exp() leaves double range.
PricePath geometric_fbm_path(const FbmSpec& spec, const VolatilityEnvelope& env,
                             double mu, double p0 = 1.0);

}  // namespace hurstscale
