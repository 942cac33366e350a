// hurstscale: wavelet-based Hurst estimation over dyadic segments, with
// slope-noise filtering and exact fBm synthesis for validation.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "hurstscale/csv_io.hpp"
#include "hurstscale/errors.hpp"
#include "hurstscale/estimator.hpp"
#include "hurstscale/pipeline.hpp"
#include "hurstscale/synth.hpp"
#include "hurstscale/version.hpp"

using nlohmann::ordered_json;
namespace hs = hurstscale;

namespace {

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const hs::DegenerateError*>(&e)) return "degenerate_input";
  if (dynamic_cast<const hs::DomainError*>(&e)) return "domain";
  if (dynamic_cast<const hs::InputError*>(&e)) return "input";
  if (dynamic_cast<const hs::DataError*>(&e)) return "data";
  if (dynamic_cast<const hs::ConfigError*>(&e)) return "config";
  if (dynamic_cast<const hs::NumericError*>(&e)) return "numeric";
  if (dynamic_cast<const hs::FitError*>(&e)) return "fit";
  if (dynamic_cast<const hs::Error*>(&e)) return "error";
  return "internal";
}

// ---------------------------------------------------------------------------
// option bundles

struct SourceOptions {
  std::string input;
  std::string synth;  // "fbm" | "gfbm"
  double hurst = 0.6;
  std::size_t length = 0;
  std::uint64_t seed = 1;
  double mu = 0.0;
  std::string envelope = "constant";
  double amplitude = 0.5;
  double period = 1024.0;
  double shift_b = 2.0;
  double env_scale = 1.0;
  double p0 = 1.0;
  std::string column = "price";
  std::string gap_policy = "error";
};

void add_source_options(CLI::App* cmd, SourceOptions& s) {
  auto* in = cmd->add_option("--input", s.input, "CSV of (timestamp,price) rows");
  auto* sy = cmd->add_option("--synth", s.synth, "synthesize input: fbm | gfbm")
                 ->check(CLI::IsMember({"fbm", "gfbm"}));
  in->excludes(sy);
  sy->excludes(in);
  cmd->add_option("--hurst", s.hurst, "Hurst parameter for --synth");
  cmd->add_option("--length", s.length, "number of samples for --synth");
  cmd->add_option("--seed", s.seed, "RNG seed for --synth");
  cmd->add_option("--mu", s.mu, "per-step drift of the synthetic log price");
  cmd->add_option("--envelope", s.envelope,
                  "volatility envelope for gfbm: constant | periodic | "
                  "log_shift | xlogx | quadratic | wiener");
  cmd->add_option("--amplitude", s.amplitude, "periodic envelope amplitude");
  cmd->add_option("--period", s.period, "periodic envelope period (samples)");
  cmd->add_option("--shift", s.shift_b, "envelope shift/base parameter b");
  cmd->add_option("--envelope-scale", s.env_scale, "envelope scale factor");
  cmd->add_option("--p0", s.p0, "initial price for gfbm");
  cmd->add_option("--column", s.column, "price column name in the input CSV");
  cmd->add_option("--gap-policy", s.gap_policy, "timestamp gaps: error | forward-fill")
      ->check(CLI::IsMember({"error", "forward-fill"}));
}

ordered_json source_config(const SourceOptions& s) {
  ordered_json j;
  if (!s.input.empty()) {
    j["input"] = s.input;
    j["column"] = s.column;
    j["gap_policy"] = s.gap_policy;
  } else {
    j["synth"] = s.synth;
    j["hurst"] = s.hurst;
    j["length"] = s.length;
    j["seed"] = s.seed;
    if (s.synth == "gfbm") {
      j["mu"] = s.mu;
      j["envelope"] = s.envelope;
      j["amplitude"] = s.amplitude;
      j["period"] = s.period;
      j["shift"] = s.shift_b;
      j["envelope_scale"] = s.env_scale;
      j["p0"] = s.p0;
    }
  }
  return j;
}

struct LoadedSeries {
  std::vector<double> values;  // log-price path
  double dt = 1.0;
  double t0 = 0.0;
  std::size_t rows_read = 0;
  std::size_t fills = 0;
};

hs::VolatilityEnvelope envelope_from(const SourceOptions& s) {
  return hs::make_envelope(hs::envelope_kind_from_string(s.envelope), s.amplitude,
                           s.period, s.shift_b, s.env_scale, s.seed + 0x9e3779b9,
                           s.length);
}

LoadedSeries load_series(const SourceOptions& s) {
  LoadedSeries out;
  if (!s.input.empty()) {
    const hs::GapPolicy policy = (s.gap_policy == "forward-fill")
                                     ? hs::GapPolicy::forward_fill
                                     : hs::GapPolicy::error;
    hs::IngestResult r = hs::ingest_csv(s.input, s.column, policy);
    out.values = std::move(r.log_prices.values);
    out.dt = r.log_prices.dt;
    out.t0 = r.log_prices.t0;
    out.rows_read = r.rows_read;
    out.fills = r.fills;
    return out;
  }
  if (s.synth.empty())
    throw hs::ConfigError("either --input or --synth is required");
  if (s.length < 2) throw hs::ConfigError("--synth requires --length >= 2");
  const hs::FbmSpec spec{s.hurst, s.length, s.seed, 1.0};
  if (s.synth == "fbm") {
    out.values = hs::generate_fbm(spec);
  } else {
    out.values = hs::modulated_log_path(spec, envelope_from(s), s.mu);
  }
  out.rows_read = out.values.size();
  return out;
}

struct EstimateOptions {
  int p = 2;
  int j_min = 4;
  int j_max = 0;
  std::size_t min_coeffs = 8;
  std::string boundary = "periodic";
  std::string cov_mode = "diagonal";
  double c_d = 2.0;
  bool no_bridge = false;
};

void add_estimate_options(CLI::App* cmd, EstimateOptions& e) {
  cmd->add_option("-p,--wavelet-order", e.p, "Daubechies vanishing moments (1..4)");
  cmd->add_option("--jmin", e.j_min, "finest scale used in the fit");
  cmd->add_option("--jmax", e.j_max, "coarsest scale (0 = auto)");
  cmd->add_option("--min-coeffs", e.min_coeffs, "minimum detail count per scale");
  cmd->add_option("--boundary", e.boundary, "transform boundary: periodic | valid")
      ->check(CLI::IsMember({"periodic", "valid"}));
  cmd->add_option("--cov-mode", e.cov_mode, "fit weighting: diagonal | full")
      ->check(CLI::IsMember({"diagonal", "full"}));
  cmd->add_option("--cd", e.c_d, "full-mode diagonal inflation (> 1)");
  cmd->add_flag("--no-bridge", e.no_bridge, "skip endpoint-chord detrending");
}

hs::EstimateConfig to_config(const EstimateOptions& e) {
  hs::EstimateConfig cfg;
  cfg.p = e.p;
  cfg.j_min = e.j_min;
  cfg.j_max = e.j_max;
  cfg.min_coeffs = e.min_coeffs;
  cfg.boundary = (e.boundary == "valid") ? hs::Boundary::valid : hs::Boundary::periodic;
  cfg.cov_mode = (e.cov_mode == "full") ? hs::CovMode::full : hs::CovMode::diagonal;
  cfg.c_d = e.c_d;
  cfg.bridge = !e.no_bridge;
  return cfg;
}

ordered_json estimate_config_json(const EstimateOptions& e) {
  ordered_json j;
  j["wavelet_order"] = e.p;
  j["j_min"] = e.j_min;
  j["j_max"] = e.j_max;
  j["min_coeffs"] = e.min_coeffs;
  j["boundary"] = e.boundary;
  j["cov_mode"] = e.cov_mode;
  j["c_d"] = e.c_d;
  j["bridge"] = !e.no_bridge;
  return j;
}

// ---------------------------------------------------------------------------
// manifest plumbing

struct RunContext {
  std::string command;
  std::string output_dir = ".";
  ordered_json config;
  ordered_json results;
};

int run_guarded(RunContext& ctx, const std::function<void(RunContext&)>& body) {
  std::error_code ec;
  std::filesystem::create_directories(ctx.output_dir, ec);
  ordered_json m;
  m["schema_version"] = hs::kManifestSchemaVersion;
  m["tool_version"] = hs::kVersion;
  m["created_at"] = iso_now();
  m["command"] = ctx.command;
  m["config"] = ctx.config;
  int code = 0;
  try {
    body(ctx);
    m["results"] = ctx.results;
  } catch (const std::exception& e) {
    m["error"] = {{"type", error_kind(e)}, {"message", e.what()}};
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  std::ofstream f(ctx.output_dir + "/manifest.json");
  if (f) {
    f << m.dump(2) << "\n";
  } else {
    std::cerr << "error: cannot write manifest to " << ctx.output_dir << "\n";
    code = code == 0 ? 2 : code;
  }
  return code;
}

ordered_json model_json(const hs::SlopeProcessModel& m) {
  return ordered_json{{"sigma_h2", m.sigma_h2},
                      {"sigma_zeta2", m.sigma_zeta2},
                      {"l_h", m.l_h},
                      {"mean_slope", m.mean},
                      {"segment_length", m.L}};
}

ordered_json fit_json(const hs::FitDiagnostics& f) {
  return ordered_json{{"sse", f.sse},
                      {"iterations", f.iterations},
                      {"converged", f.converged},
                      {"start_index", f.start_index}};
}

void write_variogram_json(const std::string& path, const hs::PipelineResult& r,
                          std::size_t segment_length) {
  ordered_json j;
  j["schema_version"] = hs::kManifestSchemaVersion;
  j["segment_length"] = segment_length;
  std::vector<std::size_t> lags(r.variogram.size());
  for (std::size_t i = 0; i < lags.size(); ++i) lags[i] = i + 1;
  j["lags"] = lags;
  j["variogram"] = r.variogram;
  if (r.model) {
    j["model"] = model_json(*r.model);
    j["fit"] = fit_json(r.fit);
  } else {
    j["model"] = nullptr;
  }
  std::ofstream f(path);
  if (!f) throw hs::DataError("cannot open '" + path + "' for writing");
  f << j.dump(2) << "\n";
}

std::vector<hs::HurstRow> hurst_rows(const hs::PipelineResult& r) {
  std::vector<hs::HurstRow> rows;
  rows.reserve(r.segments.size());
  for (const hs::SegmentRecord& s : r.segments)
    rows.push_back({s.index, s.start, s.estimate.H, s.hurst_filtered});
  return rows;
}

void mean_std(const std::vector<double>& v, double& mean, double& stdev) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  stdev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
}

ordered_json segments_summary(const hs::PipelineResult& r) {
  std::vector<double> raw, filt;
  for (const hs::SegmentRecord& s : r.segments) {
    raw.push_back(s.estimate.H);
    filt.push_back(s.hurst_filtered);
  }
  double mr, sr, mf, sf;
  mean_std(raw, mr, sr);
  mean_std(filt, mf, sf);
  ordered_json j;
  j["segments"] = r.segments.size();
  j["dropped_samples"] = r.dropped_samples;
  j["mean_H_raw"] = mr;
  j["std_H_raw"] = sr;
  j["mean_H_filtered"] = mf;
  j["std_H_filtered"] = sf;
  j["filtered"] = r.filtered;
  if (r.model) {
    j["model"] = model_json(*r.model);
    j["fit"] = fit_json(r.fit);
  }
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelet log-scale Hurst estimation toolkit"};
  app.set_version_flag("--version", std::string(hs::kVersion));
  app.set_config("--config", "", "read options from an INI/TOML file");
  app.require_subcommand(1);

  // ---- synth ---------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "generate fBm or a geometric price path");
  SourceOptions synth_src;
  std::string synth_kind;
  std::string synth_output;
  std::string synth_dir = ".";
  synth->add_option("kind", synth_kind, "fbm | gfbm")
      ->required()
      ->check(CLI::IsMember({"fbm", "gfbm"}));
  synth->add_option("--hurst", synth_src.hurst, "Hurst parameter");
  synth->add_option("--length", synth_src.length, "number of samples")->required();
  synth->add_option("--seed", synth_src.seed, "RNG seed");
  synth->add_option("--mu", synth_src.mu, "per-step drift (gfbm)");
  synth->add_option("--envelope", synth_src.envelope,
                    "constant | periodic | log_shift | xlogx | quadratic | wiener");
  synth->add_option("--amplitude", synth_src.amplitude, "periodic amplitude");
  synth->add_option("--period", synth_src.period, "periodic period (samples)");
  synth->add_option("--shift", synth_src.shift_b, "envelope shift/base b");
  synth->add_option("--envelope-scale", synth_src.env_scale, "envelope scale");
  synth->add_option("--p0", synth_src.p0, "initial price (gfbm)");
  synth->add_option("--output", synth_output, "output file name");
  synth->add_option("--output-dir", synth_dir, "directory for outputs");

  // ---- estimate ------------------------------------------------------
  auto* est = app.add_subcommand(
      "estimate", "per-segment Hurst estimates with slope-noise filtering");
  SourceOptions est_src;
  EstimateOptions est_opt;
  std::size_t est_seg_len = 0;
  bool est_no_filter = false;
  std::size_t est_max_lag = 0;
  int est_threads = 0;
  std::string est_dir = ".";
  add_source_options(est, est_src);
  add_estimate_options(est, est_opt);
  est->add_option("--segment-length", est_seg_len, "dyadic window length")
      ->required();
  est->add_flag("--no-filter", est_no_filter, "skip slope-noise filtering");
  est->add_option("--max-lag", est_max_lag, "variogram lags (0 = segments/2)");
  est->add_option("--threads", est_threads, "worker threads (0 = hardware)");
  est->add_option("--output-dir", est_dir, "directory for outputs");

  // ---- spectrum ------------------------------------------------------
  auto* spect = app.add_subcommand("spectrum",
                                   "log-scale spectrum of the whole series");
  SourceOptions sp_src;
  EstimateOptions sp_opt;
  std::string sp_dir = ".";
  add_source_options(spect, sp_src);
  add_estimate_options(spect, sp_opt);
  spect->add_option("--output-dir", sp_dir, "directory for outputs");

  // ---- filter --------------------------------------------------------
  auto* filt = app.add_subcommand(
      "filter", "re-filter an existing per-segment Hurst table");
  std::string filt_input;
  std::size_t filt_seg_len = 0;
  std::size_t filt_max_lag = 0;
  std::string filt_dir = ".";
  filt->add_option("--input", filt_input, "hurst.csv produced by estimate")
      ->required();
  filt->add_option("--segment-length", filt_seg_len,
                   "window length (0 = infer from starts)");
  filt->add_option("--max-lag", filt_max_lag, "variogram lags (0 = segments/2)");
  filt->add_option("--output-dir", filt_dir, "directory for outputs");

  // ---- compare -------------------------------------------------------
  auto* comp = app.add_subcommand(
      "compare", "filtered H at several segment lengths, aligned on one axis");
  SourceOptions cmp_src;
  EstimateOptions cmp_opt;
  std::vector<std::size_t> cmp_lengths;
  std::size_t cmp_max_lag = 0;
  int cmp_threads = 0;
  std::string cmp_dir = ".";
  add_source_options(comp, cmp_src);
  add_estimate_options(comp, cmp_opt);
  comp->add_option("--segment-lengths", cmp_lengths, "comma-separated window lengths")
      ->required()
      ->delimiter(',');
  comp->add_option("--max-lag", cmp_max_lag, "variogram lags (0 = segments/2)");
  comp->add_option("--threads", cmp_threads, "worker threads (0 = hardware)");
  comp->add_option("--output-dir", cmp_dir, "directory for outputs");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    synth_src.synth = synth_kind;
    RunContext ctx;
    ctx.command = "synth";
    ctx.output_dir = synth_dir;
    ctx.config = source_config(synth_src);
    ctx.config["output"] =
        synth_output.empty() ? (synth_kind == "gfbm" ? "prices.csv" : "series.csv")
                             : synth_output;
    return run_guarded(ctx, [&](RunContext& c) {
      const std::string name = c.config["output"].get<std::string>();
      const std::string path = c.output_dir + "/" + name;
      if (synth_src.length < 2) throw hs::ConfigError("--length must be >= 2");
      const hs::FbmSpec spec{synth_src.hurst, synth_src.length, synth_src.seed, 1.0};
      if (synth_kind == "fbm") {
        const std::vector<double> b = hs::generate_fbm(spec);
        hs::write_series_csv(path, b);
        c.results["samples"] = b.size();
      } else {
        const hs::PricePath p =
            hs::geometric_fbm_path(spec, envelope_from(synth_src), synth_src.mu,
                                   synth_src.p0);
        hs::write_price_csv(path, p.prices, 0.0, 1.0);
        c.results["samples"] = p.prices.size();
      }
      c.results["output"] = name;
    });
  }

  if (est->parsed()) {
    RunContext ctx;
    ctx.command = "estimate";
    ctx.output_dir = est_dir;
    ctx.config = source_config(est_src);
    ctx.config.update(estimate_config_json(est_opt));
    ctx.config["segment_length"] = est_seg_len;
    ctx.config["filter"] = !est_no_filter;
    ctx.config["max_lag"] = est_max_lag;
    return run_guarded(ctx, [&](RunContext& c) {
      const LoadedSeries data = load_series(est_src);
      hs::PipelineOptions opt;
      opt.estimate = to_config(est_opt);
      opt.segment_length = est_seg_len;
      opt.filter = !est_no_filter;
      opt.max_lag = est_max_lag;
      opt.threads = est_threads;
      const hs::PipelineResult r = hs::run_segments(data.values, opt);
      hs::write_hurst_csv(c.output_dir + "/hurst.csv", hurst_rows(r));
      write_variogram_json(c.output_dir + "/variogram.json", r, est_seg_len);
      c.results = segments_summary(r);
      c.results["rows_read"] = data.rows_read;
      if (data.fills > 0) c.results["fills"] = data.fills;
      std::cout << "segments: " << r.segments.size()
                << "  mean H (raw): " << c.results["mean_H_raw"].get<double>()
                << "  mean H (filtered): "
                << c.results["mean_H_filtered"].get<double>() << "\n";
    });
  }

  if (spect->parsed()) {
    RunContext ctx;
    ctx.command = "spectrum";
    ctx.output_dir = sp_dir;
    ctx.config = source_config(sp_src);
    ctx.config.update(estimate_config_json(sp_opt));
    return run_guarded(ctx, [&](RunContext& c) {
      const LoadedSeries data = load_series(sp_src);
      const hs::EstimateConfig cfg = to_config(sp_opt);
      const hs::ScaleSpectrum sp = hs::segment_spectrum(data.values, cfg);
      std::vector<hs::SpectrumRow> rows;
      for (std::size_t i = 0; i < sp.scales.size(); ++i)
        rows.push_back({sp.scales[i], sp.counts[i], sp.S[i], sp.logS[i]});
      hs::write_spectrum_csv(c.output_dir + "/spectrum.csv", rows);
      const hs::HurstEstimate e = hs::estimate_segment(data.values, cfg);
      c.results["scales"] = rows.size();
      c.results["fit"] = ordered_json{{"j_min", e.scales_used.j_min},
                                      {"j_max", e.scales_used.j_max},
                                      {"intercept", e.c},
                                      {"slope", e.h},
                                      {"hurst", e.H},
                                      {"var_hurst", e.var_H},
                                      {"in_range", e.in_range}};
      c.results["rows_read"] = data.rows_read;
      std::cout << "scales: " << rows.size() << "  H: " << e.H << "\n";
    });
  }

  if (filt->parsed()) {
    RunContext ctx;
    ctx.command = "filter";
    ctx.output_dir = filt_dir;
    ctx.config = ordered_json{{"input", filt_input},
                              {"segment_length", filt_seg_len},
                              {"max_lag", filt_max_lag}};
    return run_guarded(ctx, [&](RunContext& c) {
      std::vector<hs::HurstRow> rows = hs::read_hurst_csv(filt_input);
      if (rows.size() < 5)
        throw hs::InputError("need at least 5 segments to fit the slope model");
      std::size_t L = filt_seg_len;
      if (L == 0) L = rows[1].start - rows[0].start;
      if (L == 0) throw hs::InputError("cannot infer segment length from starts");
      std::vector<double> h(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        h[i] = 2.0 * rows[i].hurst_raw + 1.0;
      hs::PipelineResult r;  // reuse the report plumbing
      hs::FitDiagnostics diag;
      const hs::SlopeProcessModel model = hs::fit_slope_model(
          h, static_cast<double>(L), filt_max_lag, &r.variogram, &diag);
      const hs::FilterMatrix gamma = hs::build_filter(model, rows.size());
      const std::vector<double> h_filt = hs::apply_filter(gamma, h);
      for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].hurst_filtered = hs::hurst_from_slope(h_filt[i]);
      r.model = model;
      r.fit = diag;
      r.filtered = true;
      hs::write_hurst_csv(c.output_dir + "/hurst.csv", rows);
      write_variogram_json(c.output_dir + "/variogram.json", r, L);
      c.results["segments"] = rows.size();
      c.results["model"] = model_json(model);
      c.results["fit"] = fit_json(diag);
    });
  }

  if (comp->parsed()) {
    RunContext ctx;
    ctx.command = "compare";
    ctx.output_dir = cmp_dir;
    ctx.config = source_config(cmp_src);
    ctx.config.update(estimate_config_json(cmp_opt));
    ctx.config["segment_lengths"] = cmp_lengths;
    ctx.config["max_lag"] = cmp_max_lag;
    return run_guarded(ctx, [&](RunContext& c) {
      const LoadedSeries data = load_series(cmp_src);
      hs::PipelineOptions base;
      base.estimate = to_config(cmp_opt);
      base.filter = true;
      base.max_lag = cmp_max_lag;
      base.threads = cmp_threads;
      const hs::ComparisonResult r =
          hs::multi_resolution_comparison(data.values, cmp_lengths, base);
      const hs::CompareTable table = hs::align_comparison(r);
      hs::write_compare_csv(c.output_dir + "/compare.csv", table);
      ordered_json per;
      for (std::size_t i = 0; i < r.lengths.size(); ++i) {
        ordered_json e = segments_summary(r.per_length[i]);
        e["segment_length"] = r.lengths[i];
        per.push_back(e);
      }
      c.results["lengths"] = r.lengths;
      c.results["rows"] = table.starts.size();
      c.results["per_length"] = per;
      c.results["rows_read"] = data.rows_read;
      std::cout << "lengths: " << r.lengths.size() << "  rows: "
                << table.starts.size() << "\n";
    });
  }

  return 0;
}
