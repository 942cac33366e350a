#include "hurstscale/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "hurstscale/errors.hpp"

namespace hurstscale {

PipelineResult run_segments(const std::vector<double>& series,
                            const PipelineOptions& options) {
  PipelineResult out;
  std::size_t dropped = 0;
  const std::vector<std::vector<double>> segs =
      segment_series(series, options.segment_length, &dropped);
  out.dropped_samples = dropped;
  const std::size_t j_count = segs.size();
  out.segments.resize(j_count);

  unsigned n_threads = options.threads > 0
                           ? static_cast<unsigned>(options.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(j_count));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= j_count) return;
      try {
        SegmentRecord rec;
        rec.index = i;
        rec.start = i * options.segment_length;
        rec.length = options.segment_length;
        rec.estimate = estimate_segment(segs[i], options.estimate);
        rec.hurst_filtered = rec.estimate.H;
        rec.h_filtered = rec.estimate.h;
        out.segments[i] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(j_count);
        return;
      }
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  if (!options.filter) {
    out.warnings.emplace_back("filtering disabled; filtered values equal raw");
    return out;
  }
  if (j_count < 5) {
    out.warnings.emplace_back(
        "too few segments to fit the slope-noise model; filtered values equal raw");
    return out;
  }

  std::vector<double> h_hat(j_count);
  for (std::size_t i = 0; i < j_count; ++i) h_hat[i] = out.segments[i].estimate.h;

  SlopeProcessModel model;
  try {
    model = fit_slope_model(h_hat, static_cast<double>(options.segment_length),
                            options.max_lag, &out.variogram, &out.fit);
  } catch (const Error& e) {
    out.warnings.emplace_back(std::string("slope-model fit failed (") + e.what() +
                              "); filtered values equal raw");
    return out;
  }
  const FilterMatrix filter = build_filter(model, j_count);
  const std::vector<double> h_filt = apply_filter(filter, h_hat);
  for (std::size_t i = 0; i < j_count; ++i) {
    out.segments[i].h_filtered = h_filt[i];
    out.segments[i].hurst_filtered = hurst_from_slope(h_filt[i]);
  }
  out.filtered = true;
  out.model = model;
  return out;
}

ComparisonResult multi_resolution_comparison(
    const std::vector<double>& series, const std::vector<std::size_t>& lengths,
    const PipelineOptions& base) {
  if (lengths.empty()) throw ConfigError("need at least one segment length");
  ComparisonResult out;
  out.lengths = lengths;
  std::sort(out.lengths.begin(), out.lengths.end());
  out.lengths.erase(std::unique(out.lengths.begin(), out.lengths.end()),
                    out.lengths.end());
  for (std::size_t L : out.lengths) {
    PipelineOptions opt = base;
    opt.segment_length = L;
    out.per_length.push_back(run_segments(series, opt));
  }
  return out;
}

CompareTable align_comparison(const ComparisonResult& result) {
  if (result.per_length.empty()) throw ConfigError("empty comparison");
  CompareTable table;
  table.lengths = result.lengths;
  const std::size_t finest = result.lengths.front();
  const std::size_t rows = result.per_length.front().segments.size();
  table.starts.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) table.starts[r] = r * finest;
  for (std::size_t c = 0; c < result.lengths.size(); ++c) {
    const PipelineResult& pr = result.per_length[c];
    std::vector<double> col(rows, std::nan(""));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t seg = table.starts[r] / result.lengths[c];
      if (seg < pr.segments.size()) col[r] = pr.segments[seg].hurst_filtered;
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

}  // namespace hurstscale
