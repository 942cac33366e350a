#include "hurstscale/estimator.hpp"

#include <cmath>
#include <numbers>

#include "hurstscale/errors.hpp"

namespace hurstscale {

GlsFit gls_fit(const std::vector<double>& M, const CovarianceModel& D,
               const std::vector<int>& scales) {
  const auto m = static_cast<Eigen::Index>(M.size());
  if (m != static_cast<Eigen::Index>(scales.size()) || m != D.D.rows())
    throw InputError("gls_fit: dimension mismatch");
  if (m < 2) throw InputError("gls_fit: need at least two scales");
  bool distinct = false;
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (scales[i] != scales[0]) distinct = true;
  if (!distinct) throw InputError("gls_fit: scales not distinct");

  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = static_cast<double>(scales[static_cast<std::size_t>(i)]);
    y(i) = M[static_cast<std::size_t>(i)];
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(D.D);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("gls_fit: weighting matrix not factorizable");
  const Eigen::MatrixXd DiX = ldlt.solve(X);
  const Eigen::Matrix2d A = X.transpose() * DiX;
  const Eigen::Vector2d b = DiX.transpose() * y;
  const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  if (!(std::abs(det) > 1e-300)) throw InputError("gls_fit: singular normal matrix");
  Eigen::Matrix2d Ainv;
  Ainv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  Ainv /= det;
  const Eigen::Vector2d beta = Ainv * b;
  GlsFit out;
  out.c = beta(0);
  out.h = beta(1);
  const double ln2sq = std::numbers::ln2 * std::numbers::ln2;
  out.cov = Ainv / ln2sq;
  return out;
}

double hurst_from_slope(double h) { return (h - 1.0) / 2.0; }

bool hurst_in_range(double H) { return H > 0.0 && H <= 1.0; }

int max_scale(std::size_t n, std::size_t min_coeffs) {
  if (min_coeffs == 0) min_coeffs = 1;
  int j = 0;
  std::size_t nj = n;
  while (nj / 2 >= min_coeffs) {
    nj /= 2;
    ++j;
  }
  return j;
}

namespace {

// subtract the chord through the first and last sample so the periodic
// transform never sees the wrap jump of a drifting path
std::vector<double> bridge(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  if (n < 2) return x;
  const double step = (x[n - 1] - x[0]) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] - x[0] - step * static_cast<double>(i);
  return out;
}

struct Prepared {
  std::vector<double> data;
  FilterPair filters;
  int j_max = 0;
};

Prepared prepare(const std::vector<double>& series, const EstimateConfig& cfg) {
  Prepared prep;
  prep.filters = daubechies_filters(cfg.p);
  int j_max = cfg.j_max > 0 ? cfg.j_max : max_scale(series.size(), cfg.min_coeffs);
  if (j_max < 1)
    throw ConfigError("estimate: series too short for any usable scale");
  if (series.size() < (std::size_t(1) << (static_cast<unsigned>(j_max) + 3)))
    throw ConfigError("estimate: series shorter than 2^(j_max+3)");
  prep.j_max = j_max;
  // periodic pyramid needs a length divisible by 2^j_max; trim the tail
  const std::size_t mask = (std::size_t(1) << j_max) - 1;
  const std::size_t usable = series.size() & ~mask;
  std::vector<double> data(series.begin(),
                           series.begin() + static_cast<std::ptrdiff_t>(usable));
  if (cfg.bridge) {
    std::vector<double> flat = bridge(data);
    // if removing the chord leaves only rounding residue, the input was an
    // affine function of time: nothing for the detail scales to measure
    double ss_in = 0.0, ss_flat = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      ss_in += data[i] * data[i];
      ss_flat += flat[i] * flat[i];
    }
    if (ss_flat <= 1e-24 * ss_in)
      throw DegenerateError("estimate: input is affine in time (zero details)");
    prep.data = std::move(flat);
  } else {
    prep.data = std::move(data);
  }
  return prep;
}

}  // namespace

HurstEstimate estimate_segment(const std::vector<double>& series,
                               const EstimateConfig& cfg) {
  Prepared prep = prepare(series, cfg);
  if (cfg.j_min < 1 || cfg.j_min >= prep.j_max)
    throw ConfigError("estimate: j_min leaves fewer than two scales");
  const DetailPyramid pyr =
      full_decomposition(prep.data, prep.filters, prep.j_max, cfg.boundary);
  const ScaleSpectrum spec =
      scale_spectrum(pyr, ScaleRange{cfg.j_min, prep.j_max}, cfg.min_coeffs);
  const CovarianceModel D = covariance_model(spec.counts, cfg.cov_mode, cfg.c_d);
  const GlsFit fit = gls_fit(spec.logS, D, spec.scales);
  HurstEstimate out;
  out.c = fit.c;
  out.h = fit.h;
  out.H = hurst_from_slope(fit.h);
  out.var_h = fit.cov(1, 1);
  out.var_H = out.var_h / 4.0;
  out.scales_used = spec.range;
  out.n_points = prep.data.size();
  out.in_range = hurst_in_range(out.H);
  return out;
}

ScaleSpectrum segment_spectrum(const std::vector<double>& series,
                               const EstimateConfig& cfg) {
  Prepared prep = prepare(series, cfg);
  const DetailPyramid pyr =
      full_decomposition(prep.data, prep.filters, prep.j_max, cfg.boundary);
  return scale_spectrum(pyr, ScaleRange{1, prep.j_max}, cfg.min_coeffs);
}

}  // namespace hurstscale
