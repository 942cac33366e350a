#include "hurstscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"
#include "hurstscale/errors.hpp"
#include "hurstscale/random.hpp"

namespace hurstscale {

double fgn_covariance(double k, double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("fgn_covariance: H must lie in (0,1)");
  const double ak = std::abs(k);
  return 0.5 * (std::pow(ak + 1.0, 2.0 * H) - 2.0 * std::pow(ak, 2.0 * H) +
                std::pow(std::abs(ak - 1.0), 2.0 * H));
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

// Eigenvalues of the circulant embedding: FFT of the wrapped covariance row.
// Returns empty if any eigenvalue is materially negative.
std::vector<double> embedding_spectrum(double H, std::size_t m) {
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto lag = static_cast<double>(std::min(j, m - j));
    row[j] = fgn_covariance(lag, H);
  }
  detail::fft_pow2(row, -1);
  std::vector<double> lambda(m);
  double maxval = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    lambda[j] = row[j].real();
    maxval = std::max(maxval, lambda[j]);
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (lambda[j] < -1e-9 * maxval) return {};
    if (lambda[j] < 0.0) lambda[j] = 0.0;  // roundoff only
  }
  return lambda;
}

}  // namespace

FbmGenerator::FbmGenerator(double H, std::size_t n_increments)
    : hurst_(H), n_(n_increments) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("FbmGenerator: H must lie in (0,1)");
  if (n_ == 0) throw InputError("FbmGenerator: need at least one increment");
  m_ = next_pow2(std::max<std::size_t>(2 * (n_ > 1 ? n_ - 1 : 1), 2));
  std::vector<double> lambda = embedding_spectrum(H, m_);
  if (lambda.empty()) {
    m_ *= 2;  // one doubling is a safety net; never triggered for H in (0,1)
    lambda = embedding_spectrum(H, m_);
    if (lambda.empty())
      throw NumericError("FbmGenerator: embedding not nonnegative definite");
  }
  sqrt_lambda_.resize(m_);
  for (std::size_t j = 0; j < m_; ++j) sqrt_lambda_[j] = std::sqrt(lambda[j]);
}

std::vector<double> FbmGenerator::increments(std::uint64_t seed) const {
  NormalSampler normal(seed);
  const std::size_t m = m_;
  std::vector<std::complex<double>> spec(m);
  // pinned draw order: z_0, z_{m/2}, then (re, im) per k
  spec[0] = sqrt_lambda_[0] * normal();
  spec[m / 2] = sqrt_lambda_[m / 2] * normal();
  for (std::size_t k = 1; k < m / 2; ++k) {
    const double zr = normal();
    const double zi = normal();
    const double amp = sqrt_lambda_[k] / std::numbers::sqrt2;
    spec[k] = std::complex<double>(amp * zr, amp * zi);
    spec[m - k] = std::conj(spec[k]);
  }
  detail::fft_pow2(spec, +1);  // Hermitian input, real output
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = spec[i].real() * scale;
  return out;
}

std::vector<double> FbmGenerator::path(std::uint64_t seed) const {
  const std::vector<double> inc = increments(seed);
  std::vector<double> out(n_ + 1);
  out[0] = 0.0;
  for (std::size_t i = 0; i < n_; ++i) out[i + 1] = out[i] + inc[i];
  return out;
}

std::vector<double> generate_fbm(const FbmSpec& spec) {
  if (spec.N < 2) throw InputError("generate_fbm: path needs at least 2 samples");
  return FbmGenerator(spec.H, spec.N - 1).path(spec.seed);
}

VolatilityEnvelope make_envelope(EnvelopeKind kind, double amplitude,
                                 double period, double b, double scale,
                                 std::uint64_t seed, std::size_t n) {
  VolatilityEnvelope env;
  env.kind = kind;
  env.amplitude = amplitude;
  env.period = period;
  env.b = b;
  env.scale = scale;
  env.seed = seed;
  switch (kind) {
    case EnvelopeKind::constant:
      if (!(scale > 0.0)) throw DomainError("envelope: scale must be > 0");
      break;
    case EnvelopeKind::periodic:
      if (!(scale > 0.0)) throw DomainError("envelope: scale must be > 0");
      if (!(std::abs(amplitude) < 1.0))
        throw DomainError("envelope: |amplitude| must be < 1 to stay positive");
      if (!(period > 0.0)) throw DomainError("envelope: period must be > 0");
      break;
    case EnvelopeKind::log_shift:
    case EnvelopeKind::xlogx:
      if (!(scale > 0.0)) throw DomainError("envelope: scale must be > 0");
      if (!(b > 1.0)) throw DomainError("envelope: log kinds need b > 1");
      break;
    case EnvelopeKind::quadratic:
      if (!(scale > 0.0)) throw DomainError("envelope: scale must be > 0");
      if (!(b > 0.0)) throw DomainError("envelope: quadratic kind needs b > 0");
      break;
    case EnvelopeKind::wiener: {
      if (!(b > 0.0)) throw DomainError("envelope: wiener kind needs level b > 0");
      if (n == 0)
        throw ConfigError("envelope: wiener kind needs the path length up front");
      NormalSampler normal(seed);
      env.wiener_path.resize(n);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        env.wiener_path[i] = b + std::abs(acc);
        acc += normal();
      }
      break;
    }
  }
  return env;
}

EnvelopeKind envelope_kind_from_string(const std::string& name) {
  if (name == "constant") return EnvelopeKind::constant;
  if (name == "periodic") return EnvelopeKind::periodic;
  if (name == "log_shift") return EnvelopeKind::log_shift;
  if (name == "xlogx") return EnvelopeKind::xlogx;
  if (name == "quadratic") return EnvelopeKind::quadratic;
  if (name == "wiener") return EnvelopeKind::wiener;
  throw ConfigError("unknown envelope kind: " + name);
}

double envelope_value(const VolatilityEnvelope& env, double x) {
  if (x < 0.0) throw DomainError("envelope_value: x must be >= 0");
  double v = 0.0;
  switch (env.kind) {
    case EnvelopeKind::constant:
      v = env.scale;
      break;
    case EnvelopeKind::periodic:
      v = env.scale *
          (1.0 + env.amplitude * std::cos(2.0 * std::numbers::pi * x / env.period));
      break;
    case EnvelopeKind::log_shift:
      v = env.scale * std::log(x + env.b);
      break;
    case EnvelopeKind::xlogx:
      v = env.scale * (x + env.b) * std::log(x + env.b);
      break;
    case EnvelopeKind::quadratic:
      v = env.scale * (x + env.b) * (x + env.b);
      break;
    case EnvelopeKind::wiener: {
      const auto i = static_cast<std::size_t>(x);
      if (i >= env.wiener_path.size())
        throw InputError("envelope_value: x beyond the sampled wiener path");
      v = env.wiener_path[i];
      break;
    }
  }
  if (!(v > 0.0)) throw DomainError("envelope_value: nonpositive envelope");
  return v;
}

std::vector<double> modulated_log_path(const FbmSpec& spec,
                                       const VolatilityEnvelope& env, double mu) {
  const std::vector<double> b = generate_fbm(spec);
  std::vector<double> y(b.size());
  y[0] = 0.0;
  for (std::size_t t = 1; t < b.size(); ++t) {
    const double g = envelope_value(env, static_cast<double>(t - 1));
    y[t] = y[t - 1] + mu + g * (b[t] - b[t - 1]);
  }
  return y;
}

PricePath geometric_fbm_path(const FbmSpec& spec, const VolatilityEnvelope& env,
                             double mu, double p0) {
  if (!(p0 > 0.0)) throw DomainError("geometric_fbm_path: P0 must be > 0");
  PricePath out;
  out.log_path = modulated_log_path(spec, env, mu);
  out.prices.resize(out.log_path.size());
  out.prices[0] = p0;
  for (std::size_t t = 1; t < out.prices.size(); ++t) {
    out.prices[t] = p0 * std::exp(out.log_path[t]);
    // exp() under/overflow would emit a price file the ingest side must
    // reject anyway; fail here where the cause (envelope scale) is visible
    if (!(out.prices[t] > 0.0) || !std::isfinite(out.prices[t]))
      throw NumericError(
          "geometric_fbm_path: price left the representable range at step " +
          std::to_string(t) + "; reduce the envelope scale or drift");
  }
  return out;
}

}  // namespace hurstscale
