#include "hurstscale/csv_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hurstscale/errors.hpp"

namespace hurstscale {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (std::string& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

// days since 1970-01-01 for a civil date (proleptic Gregorian)
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

// epoch seconds from "YYYY-MM-DD[T ]HH:MM:SS[Z]" or a raw number
double parse_timestamp(const std::string& s, std::size_t row) {
  int y, mo, d, h, mi;
  double sec;
  char sep;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%lf", &y, &mo, &d, &sep, &h, &mi,
                  &sec) == 7 &&
      (sep == 'T' || sep == ' ')) {
    return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 + h * 3600.0 +
           mi * 60.0 + sec;
  }
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0' && *end != 'Z'))
    throw DataError("unparseable timestamp '" + s + "'", row);
  return v;
}

double parse_number(const std::string& s, std::size_t row, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || (end && *end != '\0'))
    throw DataError(std::string("unparseable ") + what + " '" + s + "'", row);
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open '" + path + "'");
  return f;
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const std::string& column,
                        GapPolicy policy) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw DataError("empty file '" + path + "'", 1);
  const std::vector<std::string> header = split_csv_line(line);
  std::size_t t_col = 0;
  std::size_t p_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string low = header[i];
    std::transform(low.begin(), low.end(), low.begin(), ::tolower);
    if (low == "timestamp" || low == "time" || low == "date") t_col = i;
    if (header[i] == column || low == column) p_col = i;
  }
  if (p_col == header.size()) {
    if (header.size() == 2)
      p_col = (t_col == 0) ? 1 : 0;
    else
      throw DataError("price column '" + column + "' not found in header", 1);
  }

  std::vector<double> ts, prices;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() <= std::max(t_col, p_col))
      throw DataError("short row", row);
    const double t = parse_timestamp(cells[t_col], row);
    const double p = parse_number(cells[p_col], row, "price");
    if (!(p > 0.0)) throw DataError("nonpositive price", row);
    if (!ts.empty() && !(t > ts.back()))
      throw DataError("timestamps not strictly increasing", row);
    ts.push_back(t);
    prices.push_back(p);
  }
  if (prices.size() < 2) throw DataError("need at least two data rows", row);

  // sample interval: smallest observed spacing (gaps only widen spacings)
  double dt = ts[1] - ts[0];
  for (std::size_t i = 2; i < ts.size(); ++i) dt = std::min(dt, ts[i] - ts[i - 1]);

  IngestResult out;
  out.rows_read = prices.size();
  std::vector<double> filled;
  filled.push_back(prices[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    const double ratio = (ts[i] - ts[i - 1]) / dt;
    const auto steps = static_cast<long long>(std::llround(ratio));
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6 * ratio)
      throw DataError("timestamps not on a uniform grid", i + 2);
    if (steps > 1) {
      if (policy == GapPolicy::error)
        throw DataError("gap of " + std::to_string(steps - 1) +
                            " missing samples (use forward-fill to bridge)",
                        i + 2);
      for (long long k = 1; k < steps; ++k) {
        filled.push_back(prices[i - 1]);
        ++out.fills;
      }
    }
    filled.push_back(prices[i]);
  }

  out.log_prices.dt = dt;
  out.log_prices.t0 = ts[0];
  out.log_prices.values.resize(filled.size());
  const double p0 = filled[0];
  for (std::size_t i = 0; i < filled.size(); ++i)
    out.log_prices.values[i] = std::log(filled[i] / p0);
  return out;
}

void write_series_csv(const std::string& path, const std::vector<double>& values) {
  std::ofstream f = open_out(path);
  f << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    f << i << ',' << fmt(values[i]) << '\n';
}

void write_price_csv(const std::string& path, const std::vector<double>& prices,
                     double t0, double dt) {
  std::ofstream f = open_out(path);
  f << "timestamp,price\n";
  for (std::size_t i = 0; i < prices.size(); ++i)
    f << fmt(t0 + dt * static_cast<double>(i)) << ',' << fmt(prices[i]) << '\n';
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<SpectrumRow>& rows) {
  std::ofstream f = open_out(path);
  f << "j,N_j,S_j,log2_S_j\n";
  for (const SpectrumRow& r : rows)
    f << r.j << ',' << r.n_j << ',' << fmt(r.s_j) << ',' << fmt(r.log2_s_j) << '\n';
}

std::vector<SpectrumRow> read_spectrum_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || split_csv_line(line).size() != 4)
    throw DataError("bad spectrum header in '" + path + "'", 1);
  std::vector<SpectrumRow> out;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw DataError("bad spectrum row", row);
    SpectrumRow r;
    r.j = static_cast<int>(parse_number(cells[0], row, "scale"));
    r.n_j = static_cast<std::size_t>(parse_number(cells[1], row, "count"));
    r.s_j = parse_number(cells[2], row, "S_j");
    r.log2_s_j = parse_number(cells[3], row, "log2_S_j");
    out.push_back(r);
  }
  return out;
}

void write_hurst_csv(const std::string& path, const std::vector<HurstRow>& rows) {
  std::ofstream f = open_out(path);
  f << "segment,start,H_raw,H_filtered\n";
  for (const HurstRow& r : rows)
    f << r.segment << ',' << r.start << ',' << fmt(r.hurst_raw) << ','
      << fmt(r.hurst_filtered) << '\n';
}

std::vector<HurstRow> read_hurst_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || split_csv_line(line).size() != 4)
    throw DataError("bad hurst header in '" + path + "'", 1);
  std::vector<HurstRow> out;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw DataError("bad hurst row", row);
    HurstRow r;
    r.segment = static_cast<std::size_t>(parse_number(cells[0], row, "segment"));
    r.start = static_cast<std::size_t>(parse_number(cells[1], row, "start"));
    r.hurst_raw = parse_number(cells[2], row, "H_raw");
    r.hurst_filtered = parse_number(cells[3], row, "H_filtered");
    out.push_back(r);
  }
  return out;
}

void write_compare_csv(const std::string& path, const CompareTable& table) {
  std::ofstream f = open_out(path);
  f << "start";
  for (std::size_t L : table.lengths) f << ",L" << L;
  f << '\n';
  for (std::size_t r = 0; r < table.starts.size(); ++r) {
    f << table.starts[r];
    for (const auto& col : table.columns) f << ',' << fmt(col[r]);
    f << '\n';
  }
}

CompareTable read_compare_csv(const std::string& path) {
  std::ifstream f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw DataError("empty compare file", 1);
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "start")
    throw DataError("bad compare header", 1);
  CompareTable out;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty() || header[i][0] != 'L')
      throw DataError("bad compare column '" + header[i] + "'", 1);
    out.lengths.push_back(
        static_cast<std::size_t>(std::strtoull(header[i].c_str() + 1, nullptr, 10)));
  }
  out.columns.resize(out.lengths.size());
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) throw DataError("bad compare row", row);
    out.starts.push_back(
        static_cast<std::size_t>(parse_number(cells[0], row, "start")));
    for (std::size_t i = 0; i < out.columns.size(); ++i)
      out.columns[i].push_back(parse_number(cells[i + 1], row, "H"));
  }
  return out;
}

}  // namespace hurstscale
