#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hurstscale/csv_io.hpp"
#include "hurstscale/errors.hpp"
#include "hurstscale/estimator.hpp"
#include "hurstscale/segmentation.hpp"
#include "hurstscale/spectrum.hpp"
#include "hurstscale/synth.hpp"
#include "hurstscale/version.hpp"
#include "hurstscale/wavelet.hpp"

namespace py = pybind11;
namespace hs = hurstscale;

namespace {

hs::Boundary to_boundary(const std::string& s) {
  if (s == "periodic") return hs::Boundary::periodic;
  if (s == "valid") return hs::Boundary::valid;
  throw hs::ConfigError("boundary must be 'periodic' or 'valid'");
}

hs::CovMode to_cov_mode(const std::string& s) {
  if (s == "diagonal") return hs::CovMode::diagonal;
  if (s == "full") return hs::CovMode::full;
  throw hs::ConfigError("cov_mode must be 'diagonal' or 'full'");
}

hs::EstimateConfig make_config(int p, int j_min, int j_max, std::size_t min_coeffs,
                               const std::string& boundary,
                               const std::string& cov_mode, double c_d,
                               bool bridge) {
  hs::EstimateConfig cfg;
  cfg.p = p;
  cfg.j_min = j_min;
  cfg.j_max = j_max;
  cfg.min_coeffs = min_coeffs;
  cfg.boundary = to_boundary(boundary);
  cfg.cov_mode = to_cov_mode(cov_mode);
  cfg.c_d = c_d;
  cfg.bridge = bridge;
  return cfg;
}

hs::VolatilityEnvelope make_env(const std::string& kind, double amplitude,
                                double period, double shift, double scale,
                                std::uint64_t env_seed, std::size_t n) {
  return hs::make_envelope(hs::envelope_kind_from_string(kind), amplitude, period,
                           shift, scale, env_seed, n);
}

py::dict model_dict(const hs::SlopeProcessModel& m, const hs::FitDiagnostics& d,
                    const std::vector<double>& variogram) {
  py::dict out;
  out["sigma_h2"] = m.sigma_h2;
  out["sigma_zeta2"] = m.sigma_zeta2;
  out["l_h"] = m.l_h;
  out["mean"] = m.mean;
  out["segment_length"] = m.L;
  out["variogram"] = variogram;
  out["sse"] = d.sse;
  out["iterations"] = d.iterations;
  out["converged"] = d.converged;
  out["start_index"] = d.start_index;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wavelet log-scale Hurst estimation: exact fBm synthesis, dyadic "
            "segment tracking, and minimum-variance slope filtering.";
  m.attr("__version__") = std::string(hs::kVersion);

  // Falls through to the later-registered translator below for everything
  // except DegenerateError, which gets its own type so callers can react to
  // "this data defeats the method" separately from bad arguments.
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const hs::InputError& e) {  // covers Domain and Degenerate too
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const hs::ConfigError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const hs::DataError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const hs::Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });
  py::register_exception<hs::DegenerateError>(m, "DegenerateInputError",
                                              PyExc_ValueError);

  // ---- wavelet layer ----
  m.def(
      "daubechies_filters",
      [](int p) {
        const hs::FilterPair f = hs::daubechies_filters(p);
        py::dict d;
        d["h"] = f.h;
        d["g"] = f.g;
        d["p"] = f.p;
        d["support_length"] = f.support_length;
        return d;
      },
      py::arg("p"), "Orthonormal Daubechies analysis pair with p vanishing moments");

  m.def(
      "scaling_samples",
      [](int p) { return hs::scaling_samples(hs::daubechies_filters(p)).values; },
      py::arg("p"), "Scaling function sampled at the integers of its support");

  m.def(
      "full_decomposition",
      [](const std::vector<double>& series, int levels, int p,
         const std::string& boundary) {
        const hs::DetailPyramid pyr = hs::full_decomposition(
            series, hs::daubechies_filters(p), levels, to_boundary(boundary));
        py::dict d;
        d["details"] = pyr.details;
        d["approx"] = pyr.approx_final;
        d["counts"] = pyr.counts;
        return d;
      },
      py::arg("series"), py::arg("levels"), py::arg("p") = 2,
      py::arg("boundary") = "periodic",
      "Detail pyramid of an initialized series: details[j-1] holds level j");

  // ---- spectrum / estimator ----
  m.def("K", &hs::K, py::arg("hurst"),
        "Scale-spectrum intercept factor (1 - 2^{-2H}) / ((2H+1)(2H+2))");
  m.def("expected_log_spectrum", &hs::expected_log_spectrum, py::arg("hurst"),
        py::arg("sigma"), py::arg("j"),
        "Model line log2 E S_j = log2(sigma^2 K(H)) + j (2H+1)");
  m.def("hurst_from_slope", &hs::hurst_from_slope, py::arg("h"),
        "H = (h - 1) / 2");
  m.def("max_scale", &hs::max_scale, py::arg("n"), py::arg("min_coeffs") = 8,
        "Largest scale j with n / 2^j >= min_coeffs");

  m.def(
      "estimate_segment",
      [](const std::vector<double>& series, int p, int j_min, int j_max,
         std::size_t min_coeffs, const std::string& boundary,
         const std::string& cov_mode, double c_d, bool bridge) {
        const hs::HurstEstimate e = hs::estimate_segment(
            series,
            make_config(p, j_min, j_max, min_coeffs, boundary, cov_mode, c_d,
                        bridge));
        py::dict d;
        d["hurst"] = e.H;
        d["slope"] = e.h;
        d["intercept"] = e.c;
        d["var_slope"] = e.var_h;
        d["var_hurst"] = e.var_H;
        d["j_min"] = e.scales_used.j_min;
        d["j_max"] = e.scales_used.j_max;
        d["n_points"] = e.n_points;
        d["in_range"] = e.in_range;
        return d;
      },
      py::arg("series"), py::arg("p") = 2, py::arg("j_min") = 4,
      py::arg("j_max") = 0, py::arg("min_coeffs") = 8,
      py::arg("boundary") = "periodic", py::arg("cov_mode") = "diagonal",
      py::arg("c_d") = 2.0, py::arg("bridge") = true,
      "Hurst estimate of one series from the slope of its log scale spectrum");

  m.def(
      "segment_spectrum",
      [](const std::vector<double>& series, int p, int j_min, int j_max,
         std::size_t min_coeffs, const std::string& boundary,
         const std::string& cov_mode, double c_d, bool bridge) {
        const hs::ScaleSpectrum sp = hs::segment_spectrum(
            series,
            make_config(p, j_min, j_max, min_coeffs, boundary, cov_mode, c_d,
                        bridge));
        py::dict d;
        d["scales"] = sp.scales;
        d["counts"] = sp.counts;
        d["S"] = sp.S;
        d["log2_S"] = sp.logS;
        return d;
      },
      py::arg("series"), py::arg("p") = 2, py::arg("j_min") = 4,
      py::arg("j_max") = 0, py::arg("min_coeffs") = 8,
      py::arg("boundary") = "periodic", py::arg("cov_mode") = "diagonal",
      py::arg("c_d") = 2.0, py::arg("bridge") = true,
      "Per-scale second moments S_j over the exportable scale range");

  m.def(
      "segment_series",
      [](const std::vector<double>& series, std::size_t segment_length) {
        std::size_t dropped = 0;
        py::dict d;
        d["segments"] = hs::segment_series(series, segment_length, &dropped);
        d["dropped"] = dropped;
        return d;
      },
      py::arg("series"), py::arg("segment_length"),
      "Consecutive dyadic windows; the trailing remainder is dropped");

  // ---- synthesis ----
  m.def(
      "generate_fbm",
      [](double hurst, std::size_t n, std::uint64_t seed) {
        return hs::generate_fbm(hs::FbmSpec{hurst, n, seed, 1.0});
      },
      py::arg("hurst"), py::arg("n"), py::arg("seed") = 0,
      "Exact fractional Brownian path of n samples starting at 0");

  m.def("fgn_covariance", &hs::fgn_covariance, py::arg("lag"), py::arg("hurst"),
        "Autocovariance of unit-variance fractional Gaussian noise");

  m.def(
      "modulated_log_path",
      [](double hurst, std::size_t n, std::uint64_t seed, double mu,
         const std::string& envelope, double amplitude, double period,
         double shift, double scale, std::uint64_t env_seed) {
        return hs::modulated_log_path(
            hs::FbmSpec{hurst, n, seed, 1.0},
            make_env(envelope, amplitude, period, shift, scale, env_seed, n), mu);
      },
      py::arg("hurst"), py::arg("n"), py::arg("seed") = 0, py::arg("mu") = 0.0,
      py::arg("envelope") = "constant", py::arg("amplitude") = 0.5,
      py::arg("period") = 1024.0, py::arg("shift") = 2.0, py::arg("scale") = 1.0,
      py::arg("env_seed") = 0,
      "Log-price path with envelope-weighted fBm increments plus drift");

  m.def(
      "geometric_fbm_path",
      [](double hurst, std::size_t n, std::uint64_t seed, double mu, double p0,
         const std::string& envelope, double amplitude, double period,
         double shift, double scale, std::uint64_t env_seed) {
        const hs::PricePath pp = hs::geometric_fbm_path(
            hs::FbmSpec{hurst, n, seed, 1.0},
            make_env(envelope, amplitude, period, shift, scale, env_seed, n), mu,
            p0);
        py::dict d;
        d["prices"] = pp.prices;
        d["log_path"] = pp.log_path;
        return d;
      },
      py::arg("hurst"), py::arg("n"), py::arg("seed") = 0, py::arg("mu") = 0.0,
      py::arg("p0") = 1.0, py::arg("envelope") = "constant",
      py::arg("amplitude") = 0.5, py::arg("period") = 1024.0,
      py::arg("shift") = 2.0, py::arg("scale") = 1.0, py::arg("env_seed") = 0,
      "Strictly positive price path P_t = P_0 exp(Y_t)");

  // ---- segmentation / filtering ----
  m.def("empirical_variogram", &hs::empirical_variogram, py::arg("h"),
        py::arg("max_lag"), "V(j) for j = 1..max_lag");

  m.def(
      "fit_slope_model",
      [](const std::vector<double>& h, double segment_length, std::size_t max_lag) {
        std::vector<double> V;
        hs::FitDiagnostics diag;
        const hs::SlopeProcessModel model =
            hs::fit_slope_model(h, segment_length, max_lag, &V, &diag);
        return model_dict(model, diag, V);
      },
      py::arg("h"), py::arg("segment_length"), py::arg("max_lag") = 0,
      "Exponential-plus-noise variogram fit of a slope series");

  m.def(
      "apply_slope_filter",
      [](const std::vector<double>& h, double sigma_h2, double sigma_zeta2,
         double l_h, double segment_length) {
        hs::SlopeProcessModel model;
        model.sigma_h2 = sigma_h2;
        model.sigma_zeta2 = sigma_zeta2;
        model.l_h = l_h;
        model.L = segment_length;
        return hs::apply_filter(hs::build_filter(model, h.size()), h);
      },
      py::arg("h"), py::arg("sigma_h2"), py::arg("sigma_zeta2"), py::arg("l_h"),
      py::arg("segment_length"),
      "Minimum-variance mean-preserving filter of a slope series");

  // ---- file ingest ----
  m.def(
      "ingest_csv",
      [](const std::string& path, const std::string& column,
         const std::string& gap_policy) {
        hs::GapPolicy policy;
        if (gap_policy == "error")
          policy = hs::GapPolicy::error;
        else if (gap_policy == "forward-fill")
          policy = hs::GapPolicy::forward_fill;
        else
          throw hs::ConfigError("gap_policy must be 'error' or 'forward-fill'");
        const hs::IngestResult r = hs::ingest_csv(path, column, policy);
        py::dict d;
        d["values"] = r.log_prices.values;
        d["dt"] = r.log_prices.dt;
        d["t0"] = r.log_prices.t0;
        d["rows_read"] = r.rows_read;
        d["fills"] = r.fills;
        return d;
      },
      py::arg("path"), py::arg("column") = "price",
      py::arg("gap_policy") = "error",
      "Read a (timestamp, price) CSV into the log-price series Y");
}
