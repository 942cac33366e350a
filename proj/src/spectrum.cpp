#include "hurstscale/spectrum.hpp"

#include <cmath>

#include "hurstscale/errors.hpp"

namespace hurstscale {

ScaleSpectrum scale_spectrum(const DetailPyramid& pyramid, ScaleRange range,
                             std::size_t min_coeffs) {
  if (range.j_min < 1 || range.j_max > pyramid.levels() || range.j_min > range.j_max)
    throw ConfigError("scale_spectrum: scale range outside decomposition");
  ScaleSpectrum out;
  out.range = range;

  // Reference level for "numerically zero": detail energy on a constant or
  // linear input is pure rounding residue, many orders below the pyramid's
  // overall mean square, and must fail loudly instead of entering a log fit.
  double energy = 0.0;
  std::size_t total = 0;
  for (const std::vector<double>& d : pyramid.details) {
    for (double v : d) energy += v * v;
    total += d.size();
  }
  for (double v : pyramid.approx_final) energy += v * v;
  total += pyramid.approx_final.size();
  const double floor =
      total > 0 ? 1e-24 * energy / static_cast<double>(total) : 0.0;

  for (int j = range.j_min; j <= range.j_max; ++j) {
    const std::vector<double>& d = pyramid.details[static_cast<std::size_t>(j - 1)];
    if (d.size() < min_coeffs)
      throw ConfigError("scale_spectrum: scale " + std::to_string(j) +
                        " has fewer than " + std::to_string(min_coeffs) +
                        " coefficients");
    double acc = 0.0;
    for (double v : d) acc += v * v;
    const double s = acc / static_cast<double>(d.size());
    if (s <= floor)
      throw DegenerateError("scale_spectrum: zero variance at scale " +
                            std::to_string(j) + " (constant input?)");
    out.scales.push_back(j);
    out.S.push_back(s);
    out.logS.push_back(std::log2(s));
    out.counts.push_back(d.size());
  }
  return out;
}

double K(double H) {
  if (!(H > 0.0 && H <= 1.0)) throw DomainError("K: H must lie in (0, 1]");
  return (1.0 - std::pow(2.0, -2.0 * H)) / ((2.0 * H + 1.0) * (2.0 * H + 2.0));
}

double expected_log_spectrum(double H, double sigma, int j) {
  if (!(sigma > 0.0)) throw DomainError("expected_log_spectrum: sigma must be > 0");
  return std::log2(sigma * sigma * K(H)) + static_cast<double>(j) * (2.0 * H + 1.0);
}

CovarianceModel covariance_model(const std::vector<std::size_t>& counts,
                                 CovMode mode, double c_d) {
  const auto m = static_cast<Eigen::Index>(counts.size());
  if (m == 0) throw InputError("covariance_model: no scales");
  for (std::size_t c : counts)
    if (c == 0) throw InputError("covariance_model: zero coefficient count");
  CovarianceModel out;
  out.mode = mode;
  out.c_d = c_d;
  out.D = Eigen::MatrixXd::Zero(m, m);
  if (mode == CovMode::diagonal) {
    for (Eigen::Index i = 0; i < m; ++i)
      out.D(i, i) = 1.0 / static_cast<double>(counts[static_cast<std::size_t>(i)]);
    return out;
  }
  if (!(c_d > 1.0))
    throw ConfigError("covariance_model: full mode needs c_d > 1 "
                      "(c_d = 1 is the rank-one outer product)");
  for (Eigen::Index i = 0; i < m; ++i) {
    const double ni = static_cast<double>(counts[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double nj = static_cast<double>(counts[static_cast<std::size_t>(j)]);
      out.D(i, j) = (i == j) ? c_d / ni : 1.0 / std::sqrt(ni * nj);
    }
  }
  // construction-time positive definiteness check
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.D);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("covariance_model: full matrix not positive definite");
  return out;
}

}  // namespace hurstscale
