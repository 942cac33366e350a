#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hurstscale/time_series.hpp"

namespace hurstscale {

enum class GapPolicy { error, forward_fill };

struct IngestResult {
  TimeSeries log_prices;  // Y_t = log(P_t / P_0)
  std::size_t rows_read = 0;
  std::size_t fills = 0;  // samples inserted by forward_fill
};

// Reads (timestamp, price) rows. Timestamps are ISO-8601
// (YYYY-MM-DD[T ]HH:MM:SS, optional trailing Z) or raw epoch numbers, must
// be strictly increasing, and must sit on a uniform grid once gaps are
// resolved per policy. Prices must be positive. Column selects the price
// column by header name.
IngestResult ingest_csv(const std::string& path, const std::string& column,
                        GapPolicy policy);

// (index, value) rows, header included.
void write_series_csv(const std::string& path,
                      const std::vector<double>& values);

// (timestamp, price) rows suitable for ingest_csv.
void write_price_csv(const std::string& path, const std::vector<double>& prices,
                     double t0, double dt);

struct SpectrumRow {
  int j = 0;
  std::size_t n_j = 0;
  double s_j = 0.0;
  double log2_s_j = 0.0;
};

void write_spectrum_csv(const std::string& path,
                        const std::vector<SpectrumRow>& rows);
std::vector<SpectrumRow> read_spectrum_csv(const std::string& path);

struct HurstRow {
  std::size_t segment = 0;
  std::size_t start = 0;
  double hurst_raw = 0.0;
  double hurst_filtered = 0.0;
};

void write_hurst_csv(const std::string& path, const std::vector<HurstRow>& rows);
std::vector<HurstRow> read_hurst_csv(const std::string& path);

// compare output: one row per finest-segmentation boundary, one column of
// filtered H per segment length.
struct CompareTable {
  std::vector<std::size_t> lengths;          // column headers (L values)
  std::vector<std::size_t> starts;           // row keys (sample index)
  std::vector<std::vector<double>> columns;  // columns[i][row]
};

void write_compare_csv(const std::string& path, const CompareTable& table);
CompareTable read_compare_csv(const std::string& path);

}  // namespace hurstscale
