// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_SIMULATION_HPP
#define WAVEDIV_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavediv/divergence.hpp"
#include "wavediv/inference.hpp"
#include "wavediv/synthetic.hpp"

namespace wavediv {

using json = nlohmann::ordered_json;

enum class Experiment { rate_sweep, normality, coverage, gof_size_power };

const char* experiment_name(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::rate_sweep;
  std::string density_f;
  std::string density_g;
  DivergenceSpec spec;
  std::vector<long> n_values;   // strictly increasing
  int replicates = 50;          // >= 50
  std::uint64_t base_seed = 0;
  Family wavelet = Family::daubechies2;
  int grid_size = (1 << 12) + 1;
  std::string output_path;      // stem: writes <stem>.rows.csv, <stem>.aggregates.json
  Side sided = Side::f_side;    // normality/coverage: f_side (g known) or two_sided
};

// Strict parse: unknown or ill-typed fields raise InvalidConfig naming the
// field.
ExperimentConfig config_from_json(const json& j);
json config_to_json(const ExperimentConfig& config);

struct ResultRow {
  long n = 0;
  int replicate = 0;
  std::string arm = "main";  // gof: "h0" / "h1"
  double estimate = 0.0;
  double sigma_hat = 0.0;
  double a_n = 0.0;  // sup-norm error vs truth (max of both sides if two)
  double z = 0.0;    // standardized statistic
};

struct ExperimentResult {
  std::vector<ResultRow> rows;  // ordered by (arm, n, replicate)
  json aggregates;
};

ExperimentResult run_rate_sweep(const ExperimentConfig& config);
ExperimentResult run_normality(const ExperimentConfig& config);
ExperimentResult run_coverage(const ExperimentConfig& config);
ExperimentResult run_gof(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string rows_to_csv(const ExperimentResult& result);

// Atomic write-temp-then-rename of <stem>.rows.csv and <stem>.aggregates.json;
// returns the two paths.
std::pair<std::string, std::string> write_result(const ExperimentResult& result,
                                                 const ExperimentConfig& config);

// WAVEDIV_THREADS env var, default = available cores.
int worker_count();

}  // namespace wavediv

#endif  // WAVEDIV_SIMULATION_HPP
