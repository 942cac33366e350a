#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "hurstscale/spectrum.hpp"
#include "hurstscale/wavelet.hpp"

namespace hurstscale {

struct GlsFit {
  double c = 0.0;  // intercept
  double h = 0.0;  // slope
  Eigen::Matrix2d cov;  // parameter covariance, (X' D^-1 X)^-1 / ln(2)^2
};

// Generalized least squares of M_j = c + h j against the scale indices.
// Throws InputError with fewer than two distinct scales.
GlsFit gls_fit(const std::vector<double>& M, const CovarianceModel& D,
               const std::vector<int>& scales);

// H = (h - 1) / 2. No clamping; callers consult hurst_in_range.
double hurst_from_slope(double h);
bool hurst_in_range(double H);  // (0, 1]

struct EstimateConfig {
  int p = 2;             // wavelet order
  int j_min = 4;         // finest scales carry sampling/initialization bias
  int j_max = 0;         // 0 = auto: largest j with N_j >= min_coeffs
  std::size_t min_coeffs = 8;
  Boundary boundary = Boundary::periodic;
  CovMode cov_mode = CovMode::diagonal;
  double c_d = 2.0;      // full-mode diagonal inflation
  bool bridge = true;    // subtract the endpoint chord before the transform
};

struct HurstEstimate {
  double c = 0.0;
  double h = 0.0;
  double H = 0.0;
  double var_h = 0.0;  // reported slope variance
  double var_H = 0.0;  // var_h / 4
  ScaleRange scales_used;
  std::size_t n_points = 0;  // samples actually used (trimmed to dyadic)
  bool in_range = true;      // H within (0, 1]
};

// Largest j such that N / 2^j >= min_coeffs.
int max_scale(std::size_t n, std::size_t min_coeffs = 8);

// Full single-segment pipeline: optional endpoint bridge, initialization,
// pyramid, scale spectrum, GLS. The bridge removes the wrap discontinuity
// the periodic transform would otherwise see on a drifting path; it is a
// linear operation that leaves every scale's slope contribution intact and
// makes additive-trend invariance exact.
HurstEstimate estimate_segment(const std::vector<double>& series,
                               const EstimateConfig& config = {});

// Convenience: spectrum of a whole series under the same preprocessing,
// covering scales 1..max_scale(n, min_coeffs_for_range) so it can be
// exported; estimation itself uses the configured range.
ScaleSpectrum segment_spectrum(const std::vector<double>& series,
                               const EstimateConfig& config = {});

}  // namespace hurstscale
