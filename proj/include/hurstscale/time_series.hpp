#pragma once

#include <cstdint>
#include <vector>

namespace hurstscale {

// Uniformly sampled scalar series. `dt` is the sample interval, `t0` the
// timestamp of the first sample (epoch seconds for ingested data, 0 for
// synthetic paths).
struct TimeSeries {
  std::vector<double> values;
  double dt = 1.0;
  double t0 = 0.0;

  std::size_t size() const { return values.size(); }
};

}  // namespace hurstscale
