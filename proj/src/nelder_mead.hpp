#pragma once

// Plain deterministic Nelder-Mead with the standard coefficients
// (reflect 1, expand 2, contract 1/2, shrink 1/2). Enough for the
// 3-parameter variogram fit; no derivatives, bit-reproducible.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace hurstscale::detail {

struct NmResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline NmResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& x0, double step,
                            double xatol = 1e-10, int maxiter = 4000) {
  const int n = static_cast<int>(x0.size());
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> fs;
  xs.reserve(static_cast<std::size_t>(n) + 1);
  xs.push_back(x0);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd v = x0;
    v(i) += step;
    xs.push_back(v);
  }
  for (const auto& v : xs) fs.push_back(fn(v));

  std::vector<int> order(xs.size());
  NmResult out;
  int iter = 0;
  for (; iter < maxiter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[static_cast<std::size_t>(a)] <
                                                fs[static_cast<std::size_t>(b)]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[order.size() - 2];

    // Termination on simplex collapse in x only. A relative test on f is
    // meaningless once the objective reaches its rounding-noise floor (an
    // exactly representable target has f ~ 1e-36 there), while a collapsed
    // simplex cannot generate new trial points anyway.
    double xspread = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      xspread = std::max(
          xspread, (xs[i] - xs[static_cast<std::size_t>(best)]).cwiseAbs().maxCoeff());
    if (xspread < xatol) {
      out.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int idx : order)
      if (idx != worst) centroid += xs[static_cast<std::size_t>(idx)];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd& xw = xs[static_cast<std::size_t>(worst)];
    const Eigen::VectorXd xr = centroid + (centroid - xw);
    const double fr = fn(xr);
    if (fr < fs[static_cast<std::size_t>(best)]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xw);
      const double fe = fn(xe);
      if (fe < fr) {
        xs[static_cast<std::size_t>(worst)] = xe;
        fs[static_cast<std::size_t>(worst)] = fe;
      } else {
        xs[static_cast<std::size_t>(worst)] = xr;
        fs[static_cast<std::size_t>(worst)] = fr;
      }
    } else if (fr < fs[static_cast<std::size_t>(second)]) {
      xs[static_cast<std::size_t>(worst)] = xr;
      fs[static_cast<std::size_t>(worst)] = fr;
    } else {
      const bool outside = fr < fs[static_cast<std::size_t>(worst)];
      const Eigen::VectorXd xc =
          outside ? centroid + 0.5 * (xr - centroid) : centroid + 0.5 * (xw - centroid);
      const double fc = fn(xc);
      if (fc < (outside ? fr : fs[static_cast<std::size_t>(worst)])) {
        xs[static_cast<std::size_t>(worst)] = xc;
        fs[static_cast<std::size_t>(worst)] = fc;
      } else {  // shrink toward the best vertex
        for (std::size_t i = 0; i < xs.size(); ++i) {
          if (static_cast<int>(i) == best) continue;
          xs[i] = xs[static_cast<std::size_t>(best)] +
                  0.5 * (xs[i] - xs[static_cast<std::size_t>(best)]);
          fs[i] = fn(xs[i]);
        }
      }
    }
  }
  std::size_t besti = 0;
  for (std::size_t i = 1; i < fs.size(); ++i)
    if (fs[i] < fs[besti]) besti = i;
  out.x = xs[besti];
  out.f = fs[besti];
  out.iterations = iter;
  return out;
}

}  // namespace hurstscale::detail
