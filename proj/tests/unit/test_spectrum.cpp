#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "hurstscale/errors.hpp"
#include "hurstscale/estimator.hpp"
#include "hurstscale/spectrum.hpp"
#include "hurstscale/synth.hpp"
#include "hurstscale/wavelet.hpp"

namespace hs = hurstscale;

namespace {

// Cov(B_s, B_t) for unit-variance fBm; the quadratic-form oracle below uses
// it to evaluate second moments of detail coefficients without sampling.
double fbm_cov(double s, double t, double H) {
  return 0.5 * (std::pow(s, 2.0 * H) + std::pow(t, 2.0 * H) -
                std::pow(std::abs(s - t), 2.0 * H));
}

// E[d_j(0) d_j(k)] for the discrete cascade applied to fBm path samples
double detail_cross_moment(const std::vector<double>& w, int j, std::size_t lag,
                           double H) {
  const std::size_t off = lag << static_cast<unsigned>(j);
  double acc = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a)
    for (std::size_t b = 0; b < w.size(); ++b)
      acc += w[a] * w[b] *
             fbm_cov(static_cast<double>(a), static_cast<double>(off + b), H);
  return acc;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  REQUIRE(x.size() == y.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("scale spectrum is the per-scale mean of squared details") {
  hs::DetailPyramid pyr;
  pyr.details = {{1.0, -1.0, 1.0, -1.0}, {3.0, -1.0}};
  pyr.approx_final = {0.0, 0.0};
  pyr.counts = {4, 2};
  const hs::ScaleSpectrum s = hs::scale_spectrum(pyr, {1, 2}, 1);
  REQUIRE(s.S.size() == 2);
  CHECK(s.S[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.S[1] == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(s.logS[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.logS[1] == doctest::Approx(std::log2(5.0)).epsilon(1e-15));
  CHECK(s.scales == std::vector<int>{1, 2});
  CHECK(s.counts == std::vector<std::size_t>{4, 2});

  // restricting the range restricts the output
  const hs::ScaleSpectrum top = hs::scale_spectrum(pyr, {2, 2}, 1);
  CHECK(top.S == std::vector<double>{5.0});
}

TEST_CASE("zero-variance scales and bad ranges are rejected") {
  hs::DetailPyramid pyr;
  pyr.details = {{0.0, 0.0, 0.0, 0.0}, {1.0, 2.0}};
  pyr.approx_final = {0.0, 0.0};
  pyr.counts = {4, 2};
  CHECK_THROWS_AS(hs::scale_spectrum(pyr, {1, 2}, 1), hs::DegenerateError);
  CHECK_THROWS_AS(hs::scale_spectrum(pyr, {1, 3}, 1), hs::ConfigError);
  CHECK_THROWS_AS(hs::scale_spectrum(pyr, {0, 2}, 1), hs::ConfigError);
  CHECK_THROWS_AS(hs::scale_spectrum(pyr, {1, 2}, 8), hs::ConfigError);

  // a constant signal has zero detail energy everywhere
  const hs::FilterPair f = hs::daubechies_filters(2);
  const hs::DetailPyramid flat =
      hs::full_decomposition(std::vector<double>(256, 3.0), f, 4,
                             hs::Boundary::periodic);
  CHECK_THROWS_AS(hs::scale_spectrum(flat, {1, 4}, 8), hs::DegenerateError);
}

TEST_CASE("K matches high-precision evaluations of the closed form") {
  CHECK(hs::K(0.5) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(hs::K(1.0) == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(std::abs(hs::K(0.3) - 0.08178991457056559383) < 1e-15);
  CHECK(std::abs(hs::K(0.6) - 0.08021657931135481966) < 1e-15);
  CHECK(std::abs(hs::K(0.7) - 0.07611162480053927444) < 1e-15);
  CHECK(std::abs(hs::K(0.8) - 0.07159433999004021743) < 1e-15);
  CHECK_THROWS_AS(hs::K(0.0), hs::DomainError);
  CHECK_THROWS_AS(hs::K(-0.2), hs::DomainError);
  CHECK_THROWS_AS(hs::K(1.0001), hs::DomainError);
}

TEST_CASE("expected log spectrum is affine in scale with slope 2H+1") {
  CHECK(hs::expected_log_spectrum(0.5, 1.0, 0) ==
        doctest::Approx(std::log2(1.0 / 12.0)).epsilon(1e-15));
  for (double H : {0.3, 0.5, 0.6, 0.8, 1.0}) {
    for (int j = 0; j < 12; ++j) {
      const double d = hs::expected_log_spectrum(H, 1.7, j + 1) -
                       hs::expected_log_spectrum(H, 1.7, j);
      CHECK(std::abs(d - (2.0 * H + 1.0)) < 1e-12);
    }
  }
  // sigma enters only the intercept, as log2(sigma^2)
  CHECK(hs::expected_log_spectrum(0.6, 2.0, 5) -
            hs::expected_log_spectrum(0.6, 1.0, 5) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(hs::expected_log_spectrum(0.0, 1.0, 1), hs::DomainError);
  CHECK_THROWS_AS(hs::expected_log_spectrum(0.5, 0.0, 1), hs::DomainError);
}

TEST_CASE("discrete detail variance approaches sigma^2 K(H) 2^{(2H+1)j}") {
  // exact second moments from the fBm covariance, no sampling involved;
  // the discrete cascade converges to the continuous-wavelet constant as j
  // grows, so the tolerance tightens with j
  const hs::FilterPair haar = hs::daubechies_filters(1);
  const double tol[] = {0.03, 0.01, 0.005};
  for (double H : {0.6, 0.7, 0.8}) {
    for (int j = 3; j <= 5; ++j) {
      const std::vector<double> w = hs::equivalent_detail_filter(haar, j);
      const double exact = detail_cross_moment(w, j, 0, H);
      const double theory =
          hs::K(H) * std::pow(2.0, (2.0 * H + 1.0) * static_cast<double>(j));
      CAPTURE(H);
      CAPTURE(j);
      CHECK(std::abs(exact / theory - 1.0) < tol[j - 3]);
    }
  }
}

TEST_CASE("ensemble mean spectrum has slope 2H+1 over the fitted scales") {
  const double H = 0.7;
  const std::size_t n = 1 << 13;
  const int runs = 100;
  hs::FbmGenerator gen(H, n - 1);
  hs::EstimateConfig cfg;  // p=2, brige, periodic
  std::vector<double> mean_logS;
  std::vector<double> scales;
  for (int r = 0; r < runs; ++r) {
    const hs::ScaleSpectrum s = hs::segment_spectrum(gen.path(2000 + r), cfg);
    if (mean_logS.empty()) {
      mean_logS.assign(s.logS.size(), 0.0);
      for (int j : s.scales) scales.push_back(j);
    }
    for (std::size_t i = 0; i < s.logS.size(); ++i) mean_logS[i] += s.logS[i];
  }
  for (double& v : mean_logS) v /= runs;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] >= 4 && scales[i] <= 8) {
      x.push_back(scales[i]);
      y.push_back(mean_logS[i]);
    }
  }
  REQUIRE(x.size() == 5);
  CHECK(std::abs(ols_slope(x, y) - (2.0 * H + 1.0)) < 0.1);
}

TEST_CASE("single-path regression slope near 2H+1") {
  const hs::HurstEstimate e =
      hs::estimate_segment(hs::generate_fbm({0.6, 1 << 15, 42, 1.0}));
  CHECK(e.h > 2.1);
  CHECK(e.h < 2.3);
}

TEST_CASE("log-spectrum variance across realizations scales like 1/N_j") {
  const std::size_t n = 1 << 12;
  const int runs = 500;
  hs::FbmGenerator gen(0.6, n - 1);
  hs::EstimateConfig cfg;
  std::vector<double> l6(runs), l7(runs);
  for (int r = 0; r < runs; ++r) {
    const hs::ScaleSpectrum s = hs::segment_spectrum(gen.path(5000 + r), cfg);
    l6[r] = s.logS[5];
    l7[r] = s.logS[6];
  }
  auto var = [&](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
  };
  const double ratio = var(l7) / var(l6);
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.5);
}

TEST_CASE("covariance model: diagonal entries are 1/N_j") {
  const std::vector<std::size_t> counts = {512, 256, 128, 64, 32};
  const hs::CovarianceModel m = hs::covariance_model(counts, hs::CovMode::diagonal);
  REQUIRE(m.D.rows() == 5);
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 5; ++k) {
      const double expect =
          (i == k) ? 1.0 / static_cast<double>(counts[static_cast<std::size_t>(i)])
                   : 0.0;
      CHECK(m.D(i, k) == expect);
    }
  }
}

TEST_CASE("covariance model: full mode is positive definite only for c_d > 1") {
  std::vector<std::size_t> counts;
  for (int j = 1; j <= 8; ++j) counts.push_back((1u << 12) >> j);
  const hs::CovarianceModel m = hs::covariance_model(counts, hs::CovMode::full, 2.0);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k) {
      const double nj = static_cast<double>(counts[static_cast<std::size_t>(i)]);
      const double ni = static_cast<double>(counts[static_cast<std::size_t>(k)]);
      const double expect = (i == k) ? 2.0 / nj : 1.0 / std::sqrt(nj * ni);
      CHECK(m.D(i, k) == doctest::Approx(expect).epsilon(1e-14));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.D);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // c_d = 1 makes the matrix the rank-one outer product
  CHECK_THROWS_AS(hs::covariance_model(counts, hs::CovMode::full, 1.0),
                  hs::ConfigError);
  CHECK_THROWS_AS(hs::covariance_model({}, hs::CovMode::diagonal), hs::InputError);
  CHECK_THROWS_AS(hs::covariance_model({8, 0}, hs::CovMode::diagonal),
                  hs::InputError);
}

TEST_CASE("detail autocorrelation decays like k^{2H-2p}") {
  // exact correlations from the covariance quadratic form at scale 2, p=2
  const hs::FilterPair f = hs::daubechies_filters(2);
  const int j = 2;
  const std::vector<double> w = hs::equivalent_detail_filter(f, j);
  for (double H : {0.6, 0.8}) {
    const double v = detail_cross_moment(w, j, 0, H);
    std::vector<double> logk, logrho;
    for (std::size_t k = 4; k <= 32; k *= 2) {
      const double rho = std::abs(detail_cross_moment(w, j, k, H)) / v;
      REQUIRE(rho > 0.0);
      logk.push_back(std::log2(static_cast<double>(k)));
      logrho.push_back(std::log2(rho));
    }
    const double slope = ols_slope(logk, logrho);
    CAPTURE(H);
    CHECK(std::abs(slope - (2.0 * H - 4.0)) < 0.25);
    if (H <= 0.6) CHECK(slope < -2.5);
  }

  // at H = 1/2 the increments are independent, so details whose supports do
  // not overlap are exactly uncorrelated: decay faster than any power
  const double v_bm = detail_cross_moment(w, j, 0, 0.5);
  for (std::size_t k = 4; k <= 32; k *= 2)
    CHECK(std::abs(detail_cross_moment(w, j, k, 0.5)) / v_bm < 1e-12);
}

}  // TEST_SUITE
