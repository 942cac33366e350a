#include "hurstscale/wavelet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "hurstscale/errors.hpp"

namespace hurstscale {

namespace {

using cd = std::complex<double>;

// Roots of a*y^3 + b*y^2 + c*y + d (Cardano, deterministic branch choices).
std::array<cd, 3> cubic_roots(double a, double b, double c, double d) {
  const double p = (3.0 * a * c - b * b) / (3.0 * a * a);
  const double q =
      (2.0 * b * b * b - 9.0 * a * b * c + 27.0 * a * a * d) / (27.0 * a * a * a);
  const double shift = -b / (3.0 * a);
  const cd disc = cd(q * q / 4.0 + p * p * p / 27.0, 0.0);
  const cd s = std::sqrt(disc);
  cd u = -q / 2.0 + s;
  // principal cube root; fall back to the other sign if u underflows
  if (std::abs(u) < 1e-300) u = -q / 2.0 - s;
  const cd r = std::pow(u, 1.0 / 3.0);
  const cd omega(-0.5, std::sqrt(3.0) / 2.0);
  std::array<cd, 3> roots;
  cd w = r;
  for (int i = 0; i < 3; ++i) {
    // t + p/(3t) parameterization avoids cancellation in the second factor
    roots[i] = w - p / (3.0 * w) + shift;
    w *= omega;
  }
  return roots;
}

std::vector<double> convolve(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<double> upsample(const std::vector<double>& a, std::size_t factor) {
  std::vector<double> out((a.size() - 1) * factor + 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i * factor] = a[i];
  return out;
}

// Minimum-phase spectral factor of the Daubechies half-band polynomial:
// collect the unit-circle-interior z-roots of P(y(z)) with
// y = (2 - z - 1/z)/4, multiply by ((1+z)/2)^p, normalize.
std::vector<double> factorized_daubechies(int p) {
  // P(y) = sum_{k<p} binom(p-1+k, k) y^k; roots in y first
  std::vector<cd> yroots;
  if (p == 3) {
    // 6y^2 + 3y + 1 = 0
    const cd s = std::sqrt(cd(9.0 - 24.0, 0.0));
    yroots = {(-3.0 + s) / 12.0, (-3.0 - s) / 12.0};
  } else {  // p == 4: 20y^3 + 10y^2 + 4y + 1 = 0
    auto r = cubic_roots(20.0, 10.0, 4.0, 1.0);
    yroots = {r[0], r[1], r[2]};
  }
  // each y gives z^2 - (2-4y) z + 1 = 0; product of the pair is 1, so
  // exactly one root lies inside the unit circle
  std::vector<cd> zroots;
  for (const cd& y : yroots) {
    const cd b = 2.0 - 4.0 * y;
    const cd s = std::sqrt(b * b - 4.0);
    const cd z1 = (b + s) / 2.0;
    const cd z2 = (b - s) / 2.0;
    zroots.push_back(std::abs(z1) < 1.0 ? z1 : z2);
    if (std::abs(z1) >= 1.0 && std::abs(z2) >= 1.0)
      throw NumericError("spectral factorization: no interior root");
  }
  // Q(z) = prod (z - z_r); conjugate pairs make the coefficients real
  std::vector<cd> q{cd(1.0, 0.0)};
  for (const cd& z : zroots) {
    std::vector<cd> nq(q.size() + 1, cd(0.0, 0.0));
    for (std::size_t i = 0; i < q.size(); ++i) {
      nq[i + 1] += q[i];
      nq[i] -= z * q[i];
    }
    q = nq;
  }
  std::vector<double> h(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) h[i] = q[i].real();
  for (int k = 0; k < p; ++k) {
    std::vector<double> nh(h.size() + 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
      nh[i] += 0.5 * h[i];
      nh[i + 1] += 0.5 * h[i];
    }
    h = nh;
  }
  const double sum = std::accumulate(h.begin(), h.end(), 0.0);
  for (double& c : h) c *= std::sqrt(2.0) / sum;
  // standard extremal-phase orientation
  if (std::abs(h.front()) < std::abs(h.back())) std::reverse(h.begin(), h.end());
  return h;
}

}  // namespace

FilterPair daubechies_filters(int p) {
  std::vector<double> h;
  switch (p) {
    case 1: {
      const double r = 1.0 / std::sqrt(2.0);
      h = {r, r};
      break;
    }
    case 2: {
      const double s3 = std::sqrt(3.0);
      const double d = 4.0 * std::sqrt(2.0);
      h = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
      break;
    }
    case 3:
    case 4:
      h = factorized_daubechies(p);
      break;
    default:
      throw ConfigError("unsupported wavelet order p=" + std::to_string(p) +
                        " (supported: 1..4)");
  }
  FilterPair out;
  out.p = p;
  out.support_length = static_cast<int>(h.size());
  out.h = h;
  out.g.resize(h.size());
  // g(n) = (-1)^{1-n} h(1-n), shifted causal over the same support
  const int L = out.support_length;
  for (int n = 0; n < L; ++n)
    out.g[n] = ((n % 2 == 0) ? -1.0 : 1.0) * h[static_cast<std::size_t>(L - 1 - n)];
  return out;
}

ScalingSamples scaling_samples(const FilterPair& filters) {
  const int L = filters.support_length;
  ScalingSamples out;
  out.support_begin = 0;
  out.support_end = L - 1;
  if (filters.p == 1) {
    out.values = {1.0, 0.0};  // indicator of [0,1)
    return out;
  }
  // interior integers 1..L-2; phi vanishes at the support endpoints
  const int s = L - 2;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(s, s);
  for (int n = 1; n <= s; ++n)
    for (int m = 1; m <= s; ++m) {
      const int idx = 2 * n - m;
      if (idx >= 0 && idx < L)
        T(n - 1, m - 1) = std::sqrt(2.0) * filters.h[static_cast<std::size_t>(idx)];
    }
  // eigenvalue-1 eigenvector with sum 1: least squares on [T - I; 1']
  Eigen::MatrixXd A(s + 1, s);
  A.topRows(s) = T - Eigen::MatrixXd::Identity(s, s);
  A.bottomRows(1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s + 1);
  b(s) = 1.0;
  Eigen::VectorXd v = A.colPivHouseholderQr().solve(b);
  const double resid = ((T - Eigen::MatrixXd::Identity(s, s)) * v).cwiseAbs().maxCoeff();
  if (!(resid < 1e-8))
    throw NumericError("two-scale eigenproblem: eigenvalue-1 space not 1D");
  out.values.assign(static_cast<std::size_t>(L), 0.0);
  for (int i = 0; i < s; ++i) out.values[static_cast<std::size_t>(i + 1)] = v(i);
  return out;
}

std::vector<double> initialize_approximation(const std::vector<double>& f,
                                             const ScalingSamples& phi) {
  const std::size_t n = f.size();
  const std::size_t support = phi.values.size();
  if (n == 0) throw InputError("initialize_approximation: empty series");
  if (n < support)
    throw InputError("initialize_approximation: series shorter than filter support");
  std::vector<double> a0(n, 0.0);
  for (std::size_t s = 0; s < support; ++s) {
    const double w = phi.values[s];
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) a0[k] += w * f[(k + s) % n];
  }
  return a0;
}

DecomposeResult decompose_step(const std::vector<double>& a,
                               const FilterPair& filters, Boundary boundary) {
  const std::size_t n = a.size();
  const std::size_t L = filters.h.size();
  DecomposeResult out;
  if (boundary == Boundary::periodic) {
    if (n < 2 || n % 2 != 0)
      throw InputError("decompose_step: periodic boundary needs even length >= 2");
    const std::size_t half = n / 2;
    out.approx.assign(half, 0.0);
    out.detail.assign(half, 0.0);
    for (std::size_t p = 0; p < half; ++p) {
      double sa = 0.0, sd = 0.0;
      for (std::size_t t = 0; t < L; ++t) {
        const double x = a[(2 * p + t) % n];
        sa += filters.h[t] * x;
        sd += filters.g[t] * x;
      }
      out.approx[p] = sa;
      out.detail[p] = sd;
    }
  } else {
    if (n < L) throw InputError("decompose_step: input shorter than filter");
    const std::size_t count = (n - L) / 2 + 1;
    out.approx.assign(count, 0.0);
    out.detail.assign(count, 0.0);
    for (std::size_t p = 0; p < count; ++p) {
      double sa = 0.0, sd = 0.0;
      for (std::size_t t = 0; t < L; ++t) {
        const double x = a[2 * p + t];
        sa += filters.h[t] * x;
        sd += filters.g[t] * x;
      }
      out.approx[p] = sa;
      out.detail[p] = sd;
    }
  }
  return out;
}

std::vector<double> reconstruct_step(const std::vector<double>& approx,
                                     const std::vector<double>& detail,
                                     const FilterPair& filters,
                                     Boundary boundary) {
  if (approx.size() != detail.size())
    throw InputError("reconstruct_step: approx/detail length mismatch");
  if (boundary != Boundary::periodic)
    throw ConfigError("reconstruct_step: only the periodic boundary is invertible");
  const std::size_t half = approx.size();
  const std::size_t n = 2 * half;
  const std::size_t L = filters.h.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t p = 0; p < half; ++p)
    for (std::size_t t = 0; t < L; ++t)
      out[(2 * p + t) % n] += filters.h[t] * approx[p] + filters.g[t] * detail[p];
  return out;
}

DetailPyramid pyramid_from_a0(const std::vector<double>& a0,
                              const FilterPair& filters, int levels,
                              Boundary boundary) {
  if (levels < 1) throw ConfigError("pyramid: need at least one level");
  if (boundary == Boundary::periodic) {
    // dyadic counts N_j = N / 2^j must be exact
    const std::size_t n = a0.size();
    if (n == 0 || (n % (std::size_t(1) << levels)) != 0)
      throw ConfigError("pyramid: length not divisible by 2^levels");
  }
  DetailPyramid pyr;
  pyr.boundary = boundary;
  std::vector<double> cur = a0;
  for (int j = 1; j <= levels; ++j) {
    if (boundary == Boundary::valid && cur.size() < filters.h.size())
      throw ConfigError("pyramid: too many levels for valid boundary");
    DecomposeResult step = decompose_step(cur, filters, boundary);
    pyr.counts.push_back(step.detail.size());
    pyr.details.push_back(std::move(step.detail));
    cur = std::move(step.approx);
  }
  pyr.approx_final = std::move(cur);
  return pyr;
}

DetailPyramid full_decomposition(const std::vector<double>& series,
                                 const FilterPair& filters, int levels,
                                 Boundary boundary) {
  const ScalingSamples phi = scaling_samples(filters);
  return pyramid_from_a0(initialize_approximation(series, phi), filters, levels,
                         boundary);
}

std::vector<double> equivalent_detail_filter(const FilterPair& filters, int j) {
  if (j < 1) throw InputError("equivalent_detail_filter: scale must be >= 1");
  if (j == 1) return filters.g;
  std::vector<double> acc = filters.h;
  for (int lev = 1; lev <= j - 2; ++lev)
    acc = convolve(upsample(filters.h, std::size_t(1) << lev), acc);
  return convolve(upsample(filters.g, std::size_t(1) << (j - 1)), acc);
}

double direct_detail_oracle(const std::vector<double>& series,
                            const FilterPair& filters, int j, std::size_t k) {
  const ScalingSamples phi = scaling_samples(filters);
  const std::vector<double> a0 = initialize_approximation(series, phi);
  const std::size_t n = a0.size();
  if (j < 1 || (n % (std::size_t(1) << j)) != 0)
    throw InputError("direct_detail_oracle: scale out of range for this length");
  const std::size_t count = n >> j;
  if (k >= count) throw InputError("direct_detail_oracle: shift out of range");
  const std::vector<double> w = equivalent_detail_filter(filters, j);
  const std::size_t base = k << j;
  double acc = 0.0;
  for (std::size_t m = 0; m < w.size(); ++m)
    acc += w[m] * a0[(base + m) % n];
  return acc;
}

}  // namespace hurstscale
