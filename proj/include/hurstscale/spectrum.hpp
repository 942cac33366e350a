#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "hurstscale/wavelet.hpp"

namespace hurstscale {

struct ScaleRange {
  int j_min = 0;
  int j_max = 0;  // inclusive
};

// Per-scale second moments of the detail coefficients.
struct ScaleSpectrum {
  std::vector<int> scales;          // j_min..j_max
  std::vector<double> S;            // S_j = (1/N_j) sum_k d_j(k)^2
  std::vector<double> logS;         // log2(S_j)
  std::vector<std::size_t> counts;  // N_j
  ScaleRange range;
};

// Fails (DegenerateError) rather than emitting -inf when some S_j is zero;
// ConfigError when a scale in range has fewer than min_coeffs coefficients.
ScaleSpectrum scale_spectrum(const DetailPyramid& pyramid, ScaleRange range,
                             std::size_t min_coeffs = 8);

// K(H) = (1 - 2^{-2H}) / ((2H+1)(2H+2)), H in (0, 1].
double K(double H);

// log2(sigma^2 K(H)) + j (2H+1): the model line the estimator fits.
double expected_log_spectrum(double H, double sigma, int j);

enum class CovMode { diagonal, full };

// Weighting model for the log-spectrum residuals. diagonal: D_jj = 1/N_j.
// full: D_ji = 1/sqrt(N_j N_i) off the diagonal and c_d/N_j on it; c_d must
// exceed 1 or the matrix is the rank-one outer product and is rejected.
struct CovarianceModel {
  CovMode mode = CovMode::diagonal;
  Eigen::MatrixXd D;
  double c_d = 2.0;
};

CovarianceModel covariance_model(const std::vector<std::size_t>& counts,
                                 CovMode mode, double c_d = 2.0);

}  // namespace hurstscale
