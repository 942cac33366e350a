#include "hurstscale/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hurstscale/errors.hpp"
#include "nelder_mead.hpp"

namespace hurstscale {

std::vector<std::vector<double>> segment_series(const std::vector<double>& series,
                                                std::size_t L,
                                                std::size_t* dropped) {
  if (L == 0 || (L & (L - 1)) != 0)
    throw ConfigError("segment_series: segment length must be a power of two");
  if (L > series.size())
    throw ConfigError("segment_series: segment length exceeds series length");
  const std::size_t count = series.size() / L;
  if (dropped) *dropped = series.size() - count * L;
  std::vector<std::vector<double>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.emplace_back(series.begin() + static_cast<std::ptrdiff_t>(i * L),
                     series.begin() + static_cast<std::ptrdiff_t>((i + 1) * L));
  return out;
}

std::vector<double> empirical_variogram(const std::vector<double>& h_hat,
                                        std::size_t max_lag) {
  const std::size_t J = h_hat.size();
  if (max_lag >= J) throw InputError("empirical_variogram: max_lag must be < length");
  if (max_lag == 0) throw InputError("empirical_variogram: max_lag must be >= 1");
  std::vector<double> V(max_lag);
  for (std::size_t j = 1; j <= max_lag; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k + j < J; ++k) {
      const double d = h_hat[k + j] - h_hat[k];
      acc += d * d;
    }
    V[j - 1] = acc / (2.0 * static_cast<double>(J - j));
  }
  return V;
}

double variogram_model(double lag, double L, const SlopeProcessModel& m) {
  return m.sigma_h2 * (1.0 - std::exp(-L * lag / m.l_h)) + m.sigma_zeta2;
}

SlopeProcessModel fit_variogram(const std::vector<double>& V, std::size_t J_seg,
                                double L, double sample_var,
                                FitDiagnostics* diag) {
  if (V.size() < 4) throw InputError("fit_variogram: need at least 4 lags");
  if (!(L > 0.0)) throw ConfigError("fit_variogram: segment length must be > 0");
  const double vmean =
      std::accumulate(V.begin(), V.end(), 0.0) / static_cast<double>(V.size());
  if (!(vmean > 0.0))
    throw DegenerateError("fit_variogram: variogram identically zero");

  std::vector<double> w(V.size());
  double wsum = 0.0;
  for (std::size_t j = 1; j <= V.size(); ++j) {
    w[j - 1] = static_cast<double>(J_seg - j);  // pair count
    wsum += w[j - 1];
  }
  for (double& x : w) x /= wsum;

  // log-space box; the exponential model is unbounded on flat or ramp-like
  // variograms without it
  Eigen::Vector3d lo(std::log(1e-8 * vmean), std::log(1e-8 * vmean),
                     std::log(L / 16.0));
  Eigen::Vector3d hi(std::log(1e3 * vmean), std::log(1e3 * vmean),
                     std::log(1e3 * static_cast<double>(J_seg) * L));

  auto objective = [&](const Eigen::VectorXd& th) {
    Eigen::Vector3d thc = th.cwiseMax(lo).cwiseMin(hi);
    const double pen = (th - thc).squaredNorm();
    const double sh = std::exp(thc(0));
    const double sz = std::exp(thc(1));
    const double lh = std::exp(thc(2));
    double sse = 0.0;
    for (std::size_t j = 1; j <= V.size(); ++j) {
      const double model =
          sh * (1.0 - std::exp(-L * static_cast<double>(j) / lh)) + sz;
      const double r = model - V[j - 1];
      sse += w[j - 1] * r * r;
    }
    return sse + pen * vmean * vmean;
  };

  if (!(sample_var > 0.0)) sample_var = vmean;
  const double sz0 = std::min(V[0], 0.5 * sample_var);
  const double sh0 = std::max(sample_var - sz0, 1e-4 * vmean);
  // start 0: split the sample variance; start 1: everything is noise. A flat
  // variogram fits both identically, so ties go to start 1 (only the noise
  // reading produces a useful filter there).
  std::vector<Eigen::Vector3d> starts;
  starts.emplace_back(std::log(sh0), std::log(std::max(sz0, 1e-8 * vmean)),
                      std::log(4.0 * L));
  starts.emplace_back(std::log(1e-6 * vmean), std::log(std::max(vmean, 1e-8 * vmean)),
                      std::log(4.0 * L));

  detail::NmResult best;
  int best_start = -1;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    detail::NmResult r = detail::nelder_mead(objective, starts[s], 0.5);
    const bool better =
        best_start < 0 || r.f < best.f * (1.0 - 1e-9) ||
        (std::abs(r.f - best.f) <= 1e-9 * std::max(best.f, 1e-300) && s == 1);
    if (better) {
      best = r;
      best_start = static_cast<int>(s);
    }
  }
  if (!best.converged && best.iterations >= 4000)
    throw FitError("fit_variogram: no convergence after " +
                   std::to_string(best.iterations) + " iterations");

  Eigen::Vector3d th = best.x.cwiseMax(lo).cwiseMin(hi);
  SlopeProcessModel out;
  out.sigma_h2 = std::exp(th(0));
  out.sigma_zeta2 = std::exp(th(1));
  out.l_h = std::exp(th(2));
  out.L = L;
  if (diag) {
    diag->sse = best.f;
    diag->iterations = best.iterations;
    diag->converged = best.converged;
    diag->start_index = best_start;
  }
  return out;
}

SlopeProcessModel fit_slope_model(const std::vector<double>& h_hat, double L,
                                  std::size_t max_lag,
                                  std::vector<double>* variogram_out,
                                  FitDiagnostics* diag) {
  const std::size_t J = h_hat.size();
  if (J < 5) throw InputError("fit_slope_model: need at least 5 segments");
  if (max_lag == 0) max_lag = J / 2;
  max_lag = std::min(max_lag, J - 1);
  const std::vector<double> V = empirical_variogram(h_hat, max_lag);
  const double mean =
      std::accumulate(h_hat.begin(), h_hat.end(), 0.0) / static_cast<double>(J);
  double var = 0.0;
  for (double x : h_hat) var += (x - mean) * (x - mean);
  var /= static_cast<double>(J - 1);
  SlopeProcessModel model = fit_variogram(V, J, L, var, diag);
  model.mean = mean;
  if (variogram_out) *variogram_out = V;
  return model;
}

FilterMatrix build_filter(const SlopeProcessModel& model, std::size_t J_seg) {
  if (J_seg == 0) throw InputError("build_filter: empty slope series");
  if (!(model.sigma_h2 >= 0.0) || !(model.sigma_zeta2 >= 0.0) || !(model.l_h > 0.0) ||
      !(model.L > 0.0))
    throw ConfigError("build_filter: invalid model parameters");
  const auto J = static_cast<Eigen::Index>(J_seg);
  Eigen::MatrixXd Ch(J, J);
  for (Eigen::Index i = 0; i < J; ++i)
    for (Eigen::Index j = 0; j < J; ++j)
      Ch(i, j) = model.sigma_h2 *
                 std::exp(-model.L * std::abs(static_cast<double>(i - j)) / model.l_h);
  Eigen::MatrixXd C = Ch;
  C.diagonal().array() += model.sigma_zeta2;

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(J);
  const double trace_scale = C.trace() / static_cast<double>(J);
  double jitter = 0.0;
  Eigen::MatrixXd CinvCh, Cinv1mat;
  Eigen::VectorXd Cinv1;
  for (int attempt = 0;; ++attempt) {
    Eigen::MatrixXd Cj = C;
    Cj.diagonal().array() += jitter;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Cj);
    if (ldlt.info() == Eigen::Success) {
      Cinv1 = ldlt.solve(ones);
      CinvCh = ldlt.solve(Ch);
      const double resid = (Cj * Cinv1 - ones).cwiseAbs().maxCoeff();
      if (resid < 1e-6) break;
    }
    if (attempt >= 3)
      throw NumericError("build_filter: covariance not factorizable");
    jitter = (jitter == 0.0 ? 1e-12 : jitter * 1e3) * std::max(trace_scale, 1e-300);
  }

  const double denom = ones.dot(Cinv1);
  if (!(denom > 0.0)) throw NumericError("build_filter: degenerate constraint");
  FilterMatrix out;
  out.u = Eigen::VectorXd(J);
  out.Gamma = Eigen::MatrixXd(J, J);
  for (Eigen::Index i = 0; i < J; ++i) {
    // row i: C^-1 (c_i + u_i 1), u_i chosen so the row sums to exactly the
    // weight pattern that maps constants to themselves
    const double ui = (1.0 - ones.dot(CinvCh.col(i))) / denom;
    out.u(i) = ui;
    out.Gamma.row(i) = (CinvCh.col(i) + ui * Cinv1).transpose();
  }
  return out;
}

std::vector<double> apply_filter(const FilterMatrix& filter,
                                 const std::vector<double>& h_hat) {
  const auto J = static_cast<Eigen::Index>(h_hat.size());
  if (filter.Gamma.rows() != J)
    throw InputError("apply_filter: dimension mismatch");
  Eigen::VectorXd x(J);
  for (Eigen::Index i = 0; i < J; ++i) x(i) = h_hat[static_cast<std::size_t>(i)];
  const Eigen::VectorXd y = filter.Gamma * x;
  std::vector<double> out(h_hat.size());
  for (Eigen::Index i = 0; i < J; ++i) out[static_cast<std::size_t>(i)] = y(i);
  return out;
}

}  // namespace hurstscale
