#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "hurstscale/csv_io.hpp"
#include "hurstscale/errors.hpp"
#include "hurstscale/estimator.hpp"

namespace hs = hurstscale;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir() {
  static int counter = 0;
  const fs::path p = fs::temp_directory_path() /
                     ("hurstscale_t" + std::to_string(::getpid()) + "_" +
                      std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

void put_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p);
  f << body;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// file contents with any line mentioning created_at removed; run manifests
// are reproducible up to that timestamp
std::string without_created_at(const std::string& s) {
  std::stringstream in(s), out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("created_at") == std::string::npos) out << line << '\n';
  return out.str();
}

const char* cli_bin() { return std::getenv("HURSTSCALE_BIN"); }

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + cli_bin() + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string price_grid(const std::vector<double>& prices, double t0 = 0.0,
                       double dt = 60.0) {
  std::stringstream ss;
  ss << "timestamp,price\n";
  ss.precision(17);
  for (std::size_t i = 0; i < prices.size(); ++i)
    ss << (t0 + dt * static_cast<double>(i)) << ',' << prices[i] << '\n';
  return ss.str();
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("ingest maps prices to log returns against the first sample") {
  const fs::path dir = fresh_dir();
  put_file(dir / "p.csv",
           "timestamp,price\n"
           "2024-01-01T00:00:00Z,100\n"
           "2024-01-01T00:01:00Z,101\n");
  const hs::IngestResult r =
      hs::ingest_csv((dir / "p.csv").string(), "price", hs::GapPolicy::error);
  REQUIRE(r.log_prices.size() == 2);
  CHECK(r.rows_read == 2);
  CHECK(r.log_prices.values[0] == 0.0);
  CHECK(r.log_prices.values[1] == doctest::Approx(std::log(1.01)).epsilon(1e-15));
  CHECK(r.log_prices.dt == doctest::Approx(60.0).epsilon(1e-12));

  // a constant price series is exactly zero in log space
  put_file(dir / "c.csv", price_grid(std::vector<double>(16, 42.0)));
  const hs::IngestResult c =
      hs::ingest_csv((dir / "c.csv").string(), "price", hs::GapPolicy::error);
  for (double v : c.log_prices.values) CHECK(v == 0.0);
}

TEST_CASE("timestamp formats are interchangeable") {
  const fs::path dir = fresh_dir();
  // 2024-01-01T00:00:00Z is epoch 1704067200
  put_file(dir / "iso.csv",
           "timestamp,price\n"
           "2024-01-01T00:00:00Z,100\n"
           "2024-01-01T00:01:00Z,102\n"
           "2024-01-01T00:02:00Z,101\n");
  put_file(dir / "spaced.csv",
           "timestamp,price\n"
           "2024-01-01 00:00:00,100\n"
           "2024-01-01 00:01:00,102\n"
           "2024-01-01 00:02:00,101\n");
  put_file(dir / "epoch.csv",
           "timestamp,price\n"
           "1704067200,100\n"
           "1704067260,102\n"
           "1704067320,101\n");
  const auto a = hs::ingest_csv((dir / "iso.csv").string(), "price",
                                hs::GapPolicy::error);
  const auto b = hs::ingest_csv((dir / "spaced.csv").string(), "price",
                                hs::GapPolicy::error);
  const auto c = hs::ingest_csv((dir / "epoch.csv").string(), "price",
                                hs::GapPolicy::error);
  CHECK(a.log_prices.values == b.log_prices.values);
  CHECK(a.log_prices.values == c.log_prices.values);
  CHECK(a.log_prices.t0 == doctest::Approx(1704067200.0).epsilon(1e-12));
  CHECK(a.log_prices.t0 == c.log_prices.t0);
}

TEST_CASE("gaps: forward fill bridges, error policy refuses") {
  const fs::path dir = fresh_dir();
  put_file(dir / "gap.csv",
           "timestamp,price\n"
           "0,100\n"
           "60,101\n"
           "240,103\n");  // two samples missing before 240
  CHECK_THROWS_WITH_AS(
      hs::ingest_csv((dir / "gap.csv").string(), "price", hs::GapPolicy::error),
      doctest::Contains("forward-fill"), hs::DataError);

  const hs::IngestResult r = hs::ingest_csv((dir / "gap.csv").string(), "price",
                                            hs::GapPolicy::forward_fill);
  REQUIRE(r.log_prices.size() == 5);
  CHECK(r.fills == 2);
  // filled samples repeat the previous price
  CHECK(r.log_prices.values[2] == r.log_prices.values[1]);
  CHECK(r.log_prices.values[3] == r.log_prices.values[1]);
  CHECK(r.log_prices.values[4] == doctest::Approx(std::log(1.03)).epsilon(1e-15));
}

TEST_CASE("ingest rejects malformed input with the offending row") {
  const fs::path dir = fresh_dir();
  auto expect_data_error = [&](const std::string& name, const std::string& body) {
    put_file(dir / name, body);
    CHECK_THROWS_AS(
        hs::ingest_csv((dir / name).string(), "price", hs::GapPolicy::error),
        hs::DataError);
  };
  expect_data_error("neg.csv", "timestamp,price\n0,100\n60,-1\n");
  expect_data_error("zero.csv", "timestamp,price\n0,100\n60,0\n");
  expect_data_error("mono.csv", "timestamp,price\n60,100\n0,101\n");
  expect_data_error("text.csv", "timestamp,price\n0,100\nbanana,101\n");
  expect_data_error("grid.csv", "timestamp,price\n0,100\n60,101\n150,102\n");
  expect_data_error("short.csv", "timestamp,price\n0,100\n");
  expect_data_error("col.csv", "a,b,c\n0,1,2\n60,1,2\n");
  CHECK_THROWS_AS(
      hs::ingest_csv((dir / "missing_file.csv").string(), "price",
                     hs::GapPolicy::error),
      hs::DataError);

  // column selection by name works on wider tables
  put_file(dir / "wide.csv", "date,close,volume\n0,100,5\n60,101,6\n");
  const auto r = hs::ingest_csv((dir / "wide.csv").string(), "close",
                                hs::GapPolicy::error);
  CHECK(r.log_prices.values[1] == doctest::Approx(std::log(1.01)).epsilon(1e-15));
}

TEST_CASE("result tables survive a write-read round trip bit for bit") {
  const fs::path dir = fresh_dir();

  const std::vector<hs::SpectrumRow> sp = {{1, 4096, 1.0 / 3.0, -1.5849625007211562},
                                           {2, 2048, std::sqrt(2.0), 0.5}};
  hs::write_spectrum_csv((dir / "spectrum.csv").string(), sp);
  const auto sp2 = hs::read_spectrum_csv((dir / "spectrum.csv").string());
  REQUIRE(sp2.size() == sp.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(sp2[i].j == sp[i].j);
    CHECK(sp2[i].n_j == sp[i].n_j);
    CHECK(sp2[i].s_j == sp[i].s_j);
    CHECK(sp2[i].log2_s_j == sp[i].log2_s_j);
  }

  const std::vector<hs::HurstRow> hr = {{0, 0, 0.6123456789012345, 0.59},
                                        {1, 32768, 1.0 / 7.0, 2.0 / 3.0}};
  hs::write_hurst_csv((dir / "hurst.csv").string(), hr);
  const auto hr2 = hs::read_hurst_csv((dir / "hurst.csv").string());
  REQUIRE(hr2.size() == hr.size());
  for (std::size_t i = 0; i < hr.size(); ++i) {
    CHECK(hr2[i].segment == hr[i].segment);
    CHECK(hr2[i].start == hr[i].start);
    CHECK(hr2[i].hurst_raw == hr[i].hurst_raw);
    CHECK(hr2[i].hurst_filtered == hr[i].hurst_filtered);
  }

  hs::CompareTable t;
  t.lengths = {4096, 16384};
  t.starts = {0, 4096, 8192};
  t.columns = {{0.61, 0.62, 0.63},
               {0.6, std::nan(""), std::nan("")}};
  hs::write_compare_csv((dir / "compare.csv").string(), t);
  const auto t2 = hs::read_compare_csv((dir / "compare.csv").string());
  CHECK(t2.lengths == t.lengths);
  CHECK(t2.starts == t.starts);
  REQUIRE(t2.columns.size() == 2);
  CHECK(t2.columns[0] == t.columns[0]);
  CHECK(t2.columns[1][0] == 0.6);
  CHECK(std::isnan(t2.columns[1][1]));
  CHECK(std::isnan(t2.columns[1][2]));

  // the header of compare.csv names the segment lengths
  const std::string head = slurp(dir / "compare.csv").substr(0, 22);
  CHECK(head.rfind("start,L4096,L16384", 0) == 0);
}

TEST_CASE("cli: synth is reproducible modulo the run timestamp") {
  if (!cli_bin()) {
    MESSAGE("HURSTSCALE_BIN not set; skipping CLI cases");
    return;
  }
  const fs::path dir = fresh_dir();
  const std::string args = "synth fbm --hurst 0.7 --length 4097 --seed 9 "
                           "--output-dir \"" + dir.string() + "\"";
  REQUIRE(run_cli(args, dir / "log1.txt") == 0);
  const std::string series1 = slurp(dir / "series.csv");
  const std::string man1 = slurp(dir / "manifest.json");
  REQUIRE(run_cli(args, dir / "log2.txt") == 0);
  CHECK(slurp(dir / "series.csv") == series1);
  CHECK(without_created_at(slurp(dir / "manifest.json")) ==
        without_created_at(man1));

  const json m = json::parse(man1);
  CHECK(m["command"] == "synth");
  CHECK(m["results"]["samples"] == 4097);
  CHECK(m["config"]["hurst"] == 0.7);
}

TEST_CASE("cli: estimate on a synthetic path hits the expected band") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  const int code = run_cli(
      "estimate --synth fbm --hurst 0.6 --length 524288 --seed 1 "
      "--segment-length 32768 --output-dir \"" + dir.string() + "\"",
      dir / "log.txt");
  REQUIRE(code == 0);

  const auto rows = hs::read_hurst_csv((dir / "hurst.csv").string());
  REQUIRE(rows.size() == 16);
  double mean_raw = 0.0, mean_filt = 0.0;
  for (const auto& r : rows) {
    mean_raw += r.hurst_raw;
    mean_filt += r.hurst_filtered;
  }
  mean_raw /= 16.0;
  mean_filt /= 16.0;
  CHECK(mean_raw > 0.57);
  CHECK(mean_raw < 0.63);
  // the filter preserves the mean
  CHECK(mean_filt == doctest::Approx(mean_raw).epsilon(1e-9));

  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["results"]["segments"] == 16);
  CHECK(m["results"]["mean_H_raw"].get<double>() ==
        doctest::Approx(mean_raw).epsilon(1e-12));

  const json v = json::parse(slurp(dir / "variogram.json"));
  CHECK(v["segment_length"] == 32768);
  CHECK(v["lags"].size() == v["variogram"].size());
  CHECK(v["lags"].size() >= 4);
}

TEST_CASE("cli: --no-filter passes raw values through") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  REQUIRE(run_cli("estimate --synth fbm --hurst 0.6 --length 131072 --seed 4 "
                  "--segment-length 16384 --no-filter --output-dir \"" +
                      dir.string() + "\"",
                  dir / "log.txt") == 0);
  const auto rows = hs::read_hurst_csv((dir / "hurst.csv").string());
  REQUIRE(rows.size() == 8);
  for (const auto& r : rows) CHECK(r.hurst_filtered == r.hurst_raw);
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["results"]["filtered"] == false);
  CHECK(m["results"]["warnings"].size() >= 1);
}

TEST_CASE("cli: degenerate input yields exit 1 and a typed manifest error") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  put_file(dir / "flat.csv", price_grid(std::vector<double>(1024, 50.0)));
  const int code = run_cli("estimate --input \"" + (dir / "flat.csv").string() +
                               "\" --segment-length 1024 --output-dir \"" +
                               dir.string() + "\"",
                           dir / "log.txt");
  CHECK(code == 1);
  const json m = json::parse(slurp(dir / "manifest.json"));
  REQUIRE(m.contains("error"));
  CHECK(m["error"]["type"] == "degenerate_input");
  CHECK(m["error"]["message"].get<std::string>().size() > 0);
  CHECK(!m.contains("results"));
}

TEST_CASE("cli: spectrum emits one row per scale") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  REQUIRE(run_cli("spectrum --synth fbm --hurst 0.7 --length 8192 --seed 3 "
                  "--output-dir \"" + dir.string() + "\"",
                  dir / "log.txt") == 0);
  const auto rows = hs::read_spectrum_csv((dir / "spectrum.csv").string());
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(rows.size() == m["results"]["scales"].get<std::size_t>());
  const double H = m["results"]["fit"]["hurst"].get<double>();
  CHECK(H > 0.5);
  CHECK(H < 0.9);
  // counts halve from scale to scale
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].n_j * 2 == rows[i - 1].n_j);
}

TEST_CASE("cli: filter re-processes a written hurst table") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  REQUIRE(run_cli("estimate --synth fbm --hurst 0.6 --length 524288 --seed 11 "
                  "--segment-length 16384 --output-dir \"" + dir.string() + "\"",
                  dir / "log.txt") == 0);
  const auto before = hs::read_hurst_csv((dir / "hurst.csv").string());
  REQUIRE(before.size() == 32);

  const fs::path out = fresh_dir();
  REQUIRE(run_cli("filter --input \"" + (dir / "hurst.csv").string() +
                      "\" --output-dir \"" + out.string() + "\"",
                  out / "log.txt") == 0);
  const auto after = hs::read_hurst_csv((out / "hurst.csv").string());
  REQUIRE(after.size() == before.size());
  double mr = 0.0, mf = 0.0;
  for (std::size_t i = 0; i < after.size(); ++i) {
    CHECK(after[i].hurst_raw == before[i].hurst_raw);
    mr += after[i].hurst_raw;
    mf += after[i].hurst_filtered;
  }
  CHECK(mf / 32.0 == doctest::Approx(mr / 32.0).epsilon(1e-9));
  const json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["results"]["segments"] == 32);
  CHECK(m["results"]["model"].contains("sigma_zeta2"));
}

TEST_CASE("cli: compare aligns coarse windows on the finest grid") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  REQUIRE(run_cli("compare --synth fbm --hurst 0.6 --length 184320 --seed 6 "
                  "--segment-lengths 4096,16384 --output-dir \"" +
                      dir.string() + "\"",
                  dir / "log.txt") == 0);
  const auto t = hs::read_compare_csv((dir / "compare.csv").string());
  REQUIRE(t.lengths == std::vector<std::size_t>{4096, 16384});
  // 184320 holds 45 fine windows but only 11 coarse ones (180224 samples);
  // the one fine row past the coarse tail reads as nan
  REQUIRE(t.starts.size() == 45);
  CHECK(t.starts[1] - t.starts[0] == 4096);
  int coarse_nan = 0;
  for (double v : t.columns[1])
    if (std::isnan(v)) ++coarse_nan;
  CHECK(coarse_nan == 1);
  for (double v : t.columns[0]) CHECK(!std::isnan(v));

  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m["results"]["rows"] == 45);
  CHECK(m["results"]["per_length"].size() == 2);
}

TEST_CASE("cli: usage errors do not produce success codes") {
  if (!cli_bin()) return;
  const fs::path dir = fresh_dir();
  CHECK(run_cli("", dir / "l1.txt") != 0);
  CHECK(run_cli("estimate --synth fbm --hurst 0.6 --length 1024", dir / "l2.txt") !=
        0);  // missing --segment-length
  CHECK(run_cli("synth fbm --length 100 --hurst 2.0 --output-dir \"" +
                    dir.string() + "\"",
                dir / "l3.txt") == 1);  // domain error, manifest written
  CHECK(run_cli("--version", dir / "l4.txt") == 0);
}

}  // TEST_SUITE
