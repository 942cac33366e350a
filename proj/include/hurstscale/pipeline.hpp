#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hurstscale/csv_io.hpp"
#include "hurstscale/estimator.hpp"
#include "hurstscale/segmentation.hpp"
#include "hurstscale/synth.hpp"
#include "hurstscale/time_series.hpp"

namespace hurstscale {

struct SegmentRecord {
  std::size_t index = 0;
  std::size_t start = 0;   // sample offset into the series
  std::size_t length = 0;
  HurstEstimate estimate;
  double hurst_filtered = 0.0;
  double h_filtered = 0.0;
};

struct PipelineResult {
  std::vector<SegmentRecord> segments;
  std::size_t dropped_samples = 0;
  bool filtered = false;
  std::optional<SlopeProcessModel> model;
  std::vector<double> variogram;
  FitDiagnostics fit;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  EstimateConfig estimate;
  std::size_t segment_length = 0;
  bool filter = true;
  std::size_t max_lag = 0;  // 0 = J_seg / 2
  int threads = 0;          // 0 = hardware concurrency
};

// Segment, estimate each segment (in parallel, output ordered by index),
// then fit the slope-noise model and filter unless disabled or impossible
// (fewer than 5 segments gives no usable variogram; a warning is recorded
// and the raw values pass through).
PipelineResult run_segments(const std::vector<double>& series,
                            const PipelineOptions& options);

struct ComparisonResult {
  std::vector<std::size_t> lengths;
  std::vector<PipelineResult> per_length;
};

ComparisonResult multi_resolution_comparison(const std::vector<double>& series,
                                             const std::vector<std::size_t>& lengths,
                                             const PipelineOptions& base);

// Aligned view: filtered H per length, sampled at the finest segmentation's
// boundaries (each segment's value repeated over its span).
CompareTable align_comparison(const ComparisonResult& result);

}  // namespace hurstscale
