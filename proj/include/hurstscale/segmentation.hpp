#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace hurstscale {

// Consecutive non-overlapping windows of length L (power of two). The
// trailing remainder is dropped; its size is reported through `dropped`.
std::vector<std::vector<double>> segment_series(const std::vector<double>& series,
                                                std::size_t L,
                                                std::size_t* dropped = nullptr);

// V(j) = (1/(2(J-j))) sum_k (h[k+j] - h[k])^2 for j = 1..max_lag.
std::vector<double> empirical_variogram(const std::vector<double>& h_hat,
                                        std::size_t max_lag);

// Exponentially correlated slope process observed with white estimation
// noise: E V(j) = sigma_h2 (1 - exp(-L j / l_h)) + sigma_zeta2.
struct SlopeProcessModel {
  double sigma_h2 = 0.0;
  double sigma_zeta2 = 0.0;
  double l_h = 0.0;     // correlation length in samples
  double mean = 0.0;    // E h, estimated as the sample mean
  double L = 0.0;       // segment length the slopes came from
};

double variogram_model(double lag, double L, const SlopeProcessModel& m);

struct FitDiagnostics {
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  int start_index = 0;  // which of the two documented starts won
};

// Weighted least squares of the variogram model, weights proportional to
// the pair count (J - j). Parameters are optimized in log space inside a
// clamped box (the exponential model is otherwise unbounded on flat or
// ramp-like variograms). Two deterministic starts are tried: the
// signal-first decomposition of the sample variance, and a noise-dominant
// start; lower weighted SSE wins and near-exact ties resolve to the
// noise-dominant solution, because a flat variogram cannot distinguish the
// two and only the noise reading yields a useful filter. Deterministic:
// identical inputs give bit-identical parameters.
SlopeProcessModel fit_variogram(const std::vector<double>& V, std::size_t J_seg,
                                double L, double sample_var,
                                FitDiagnostics* diag = nullptr);

// Convenience: variogram + fit + mean from the slope series itself.
SlopeProcessModel fit_slope_model(const std::vector<double>& h_hat, double L,
                                  std::size_t max_lag = 0,
                                  std::vector<double>* variogram_out = nullptr,
                                  FitDiagnostics* diag = nullptr);

// Row i of Gamma minimizes E[(gamma_i' K - h_i)^2] subject to exact
// preservation of constant vectors: gamma_i = C^-1 (c_i + u_i 1) with
// C = C_h + sigma_zeta2 I and u_i = (1 - 1' C^-1 c_i) / (1' C^-1 1).
// The constraint makes Gamma independent of the (unknown) mean level.
struct FilterMatrix {
  Eigen::MatrixXd Gamma;
  Eigen::VectorXd u;
};

FilterMatrix build_filter(const SlopeProcessModel& model, std::size_t J_seg);

std::vector<double> apply_filter(const FilterMatrix& filter,
                                 const std::vector<double>& h_hat);

}  // namespace hurstscale
