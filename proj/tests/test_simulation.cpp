// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wavediv/error.hpp"
#include "wavediv/simulation.hpp"

using wavediv::config_from_json;
using wavediv::config_to_json;
using wavediv::Errc;
using wavediv::Error;
using wavediv::Experiment;
using wavediv::ExperimentConfig;
using wavediv::ExperimentResult;
using wavediv::json;
using wavediv::ResultRow;

namespace {

json base_config() {
  return json{{"experiment", "rate_sweep"},
              {"density_f", "bump"},
              {"density_g", "uniform"},
              {"divergence", {{"kind", "l2"}}},
              {"n_values", {64, 128}},
              {"replicates", 50},
              {"base_seed", 20260814},
              {"wavelet", "haar"},
              {"output_path", "unused"}};
}

void expect_config_error(json j, const std::string& needle) {
  try {
    config_from_json(j);
    FAIL("expected a throw for ", needle);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::filesystem::path fresh_dir(const char* tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("wavediv_test_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("experiment configs parse strictly and round-trip") {
  const ExperimentConfig cfg = config_from_json(base_config());
  CHECK(cfg.experiment == Experiment::rate_sweep);
  CHECK(cfg.density_f == "bump");
  CHECK(cfg.n_values == std::vector<long>{64, 128});
  CHECK(cfg.replicates == 50);
  CHECK(cfg.wavelet == wavediv::Family::haar);
  CHECK(cfg.grid_size == (1 << 12) + 1);
  CHECK(cfg.sided == wavediv::Side::f_side);

  // defaults: wavelet falls back to daubechies2
  json no_wavelet = base_config();
  no_wavelet.erase("wavelet");
  CHECK(config_from_json(no_wavelet).wavelet ==
        wavediv::Family::daubechies2);

  const ExperimentConfig again = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(again) == config_to_json(cfg));
}

TEST_CASE("config errors name the offending field") {
  {
    json j = base_config();
    j.erase("replicates");
    expect_config_error(j, "replicates");
  }
  {
    json j = base_config();
    j["replicates"] = 10;
    expect_config_error(j, "replicates");
  }
  {
    json j = base_config();
    j["extra_knob"] = 3;
    expect_config_error(j, "extra_knob");
  }
  {
    json j = base_config();
    j["n_values"] = {128, 64};
    expect_config_error(j, "n_values");
  }
  {
    json j = base_config();
    j["n_values"] = {0, 64};
    expect_config_error(j, "n_values");
  }
  {
    json j = base_config();
    j["divergence"] = {{"kind", "l2"}, {"alpha", "seven"}};
    expect_config_error(j, "divergence.alpha");
  }
  {
    json j = base_config();
    j["divergence"] = {{"kind", "l2"}, {"beta", 1.0}};
    expect_config_error(j, "divergence.beta");
  }
  {
    json j = base_config();
    j["sided"] = "both";
    expect_config_error(j, "sided");
  }
  {
    json j = base_config();
    j["experiment"] = "bootstrap";
    expect_config_error(j, "experiment");
  }
  {
    json j = base_config();
    j["base_seed"] = -4;
    expect_config_error(j, "base_seed");
  }
  {
    // alpha family without a usable alpha surfaces as InvalidAlpha
    json j = base_config();
    j["divergence"] = {{"kind", "tsallis"}, {"alpha", 1.0}};
    CHECK_THROWS_AS(config_from_json(j), Error);
  }
}

TEST_CASE("a small rate sweep produces ordered rows and honest aggregates") {
  ExperimentConfig cfg = config_from_json(base_config());
  const ExperimentResult result = wavediv::run_rate_sweep(cfg);

  REQUIRE(result.rows.size() == 100);
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const ResultRow& row = result.rows[i];
    CHECK(row.n == (i < 50 ? 64 : 128));
    CHECK(row.replicate == static_cast<int>(i % 50));
    CHECK(row.arm == "main");
    CHECK(std::isfinite(row.estimate));
    CHECK(row.sigma_hat >= 0.0);
    CHECK(row.a_n > 0.0);
  }

  const json& agg = result.aggregates;
  CHECK(agg.at("rng") == "splitmix64");
  CHECK(agg.at("oracle").get<double>() ==
        doctest::Approx(16.0 / 125.0).epsilon(1e-9));
  REQUIRE(agg.at("per_n").size() == 2);

  // aggregates must be recomputable from the rows
  for (int which = 0; which < 2; ++which) {
    const long n = which == 0 ? 64 : 128;
    std::vector<double> a_col, err_col;
    for (const ResultRow& row : result.rows)
      if (row.n == n) {
        a_col.push_back(row.a_n);
        err_col.push_back(std::abs(row.estimate - 16.0 / 125.0));
      }
    const json& entry = agg.at("per_n").at(which);
    CHECK(entry.at("n").get<long>() == n);
    CHECK(entry.at("median_a_n").get<double>() == median_of(a_col));
    CHECK(entry.at("median_abs_error").get<double>() ==
          doctest::Approx(median_of(err_col)).epsilon(1e-15));
  }
  CHECK(agg.at("ratio_bound").get<double>() ==
        doctest::Approx(1.25 * agg.at("A1").get<double>()).epsilon(1e-15));
  CHECK(agg.contains("slope_log_median_a_n"));
  CHECK(agg.at("warnings").is_array());
}

TEST_CASE("experiment outputs are byte-stable across runs and thread counts") {
  const auto dir = fresh_dir("determinism");
  ExperimentConfig cfg = config_from_json(base_config());
  cfg.output_path = (dir / "run").string();

  const ExperimentResult first = wavediv::run_rate_sweep(cfg);
  const auto [csv1, json1] = wavediv::write_result(first, cfg);
  const std::string csv_bytes = slurp(csv1);
  const std::string json_bytes = slurp(json1);
  CHECK(csv_bytes.substr(0, 38) == "n,replicate,arm,estimate,sigma_hat,a_n");

  const ExperimentResult second = wavediv::run_rate_sweep(cfg);
  CHECK(wavediv::rows_to_csv(second) == csv_bytes);

  setenv("WAVEDIV_THREADS", "3", 1);
  const ExperimentResult threaded = wavediv::run_rate_sweep(cfg);
  unsetenv("WAVEDIV_THREADS");
  CHECK(wavediv::rows_to_csv(threaded) == csv_bytes);
  const auto [csv3, json3] = wavediv::write_result(threaded, cfg);
  CHECK(slurp(csv3) == csv_bytes);
  CHECK(slurp(json3) == json_bytes);

  std::filesystem::remove_all(dir);
}

TEST_CASE("normality runs report z moments and reject f = g configs") {
  json j = base_config();
  j["experiment"] = "normality";
  j["density_f"] = "lin";
  j["divergence"] = {{"kind", "kl"}};
  j["n_values"] = {128};
  const ExperimentConfig cfg = config_from_json(j);
  const ExperimentResult result = wavediv::run_normality(cfg);
  REQUIRE(result.rows.size() == 50);
  const json& entry = result.aggregates.at("per_n").at(0);
  CHECK(std::isfinite(entry.at("mean_z").get<double>()));
  CHECK(entry.at("var_z").get<double>() > 0.0);
  CHECK(entry.at("ks_p").get<double>() >= 0.0);
  CHECK(entry.at("ks_p").get<double>() <= 1.0);
  const double coverage = entry.at("coverage").get<double>();
  CHECK(coverage >= 0.0);
  CHECK(coverage <= 1.0);

  json same = j;
  same["density_f"] = "uniform";
  try {
    wavediv::run_normality(config_from_json(same));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
}

TEST_CASE("coverage runs share the normality machinery") {
  json j = base_config();
  j["experiment"] = "coverage";
  j["density_f"] = "lin";
  j["divergence"] = {{"kind", "l2"}};
  j["n_values"] = {128};
  const ExperimentResult result =
      wavediv::run_coverage(config_from_json(j));
  const json& entry = result.aggregates.at("per_n").at(0);
  CHECK(entry.at("coverage").get<double>() > 0.5);
  CHECK(result.aggregates.at("coverage_z").get<double>() ==
        doctest::Approx(1.959963984540054).epsilon(1e-9));
}

TEST_CASE("gof runs split arms, warn about the null, and separate size from power") {
  json j = base_config();
  j["experiment"] = "gof_size_power";
  j["n_values"] = {256};
  const ExperimentResult result = wavediv::run_gof(config_from_json(j));

  REQUIRE(result.rows.size() == 100);
  long h0_rows = 0, h1_rows = 0;
  for (const ResultRow& row : result.rows) {
    if (row.arm == "h0") ++h0_rows;
    if (row.arm == "h1") ++h1_rows;
  }
  CHECK(h0_rows == 50);
  CHECK(h1_rows == 50);
  // the two arms draw distinct samples
  CHECK(result.rows[0].estimate != result.rows[50].estimate);

  const json& entry = result.aggregates.at("per_n").at(0);
  const double size = entry.at("size").get<double>();
  const double power = entry.at("power").get<double>();
  CHECK(size <= 0.3);
  CHECK(power >= 0.5);
  CHECK(power > size);
  CHECK(entry.at("power_exceeds_size").get<bool>());
  CHECK_FALSE(result.aggregates.at("warnings").empty());
}

TEST_CASE("run_experiment dispatches on the config and guards mismatches") {
  json j = base_config();
  j["n_values"] = {64};
  const ExperimentResult direct = wavediv::run_rate_sweep(config_from_json(j));
  const ExperimentResult routed = wavediv::run_experiment(config_from_json(j));
  CHECK(wavediv::rows_to_csv(direct) == wavediv::rows_to_csv(routed));

  try {
    wavediv::run_normality(config_from_json(j));  // a rate_sweep config
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_config);
  }
}
