// SPDX-License-Identifier: Apache-2.0
#include "wavediv/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "wavediv/density.hpp"
#include "wavediv/error.hpp"
#include "wavediv/quadrature.hpp"
#include "wavediv/rng.hpp"

namespace wavediv {

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2) return values[m];
  return 0.5 * (values[m - 1] + values[m]);
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return num / den;
}

void parallel_for(long count, const std::function<void(long)>& body) {
  const int workers = std::min<long>(worker_count(), count);
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

constexpr Interval kDomain{0.0, 1.0};

struct ReplicateContext {
  const ExperimentConfig* config = nullptr;
  ScalingFunction scaling;
  const SyntheticDensity* f = nullptr;
  const SyntheticDensity* g = nullptr;
  double oracle = 0.0;       // truth for the (f, g) pair
  double null_value = 0.0;   // gof null (0, or 1 for the Hellinger integral)
};

// Density closure handed to h_functions: clipped for log/power kinds, raw
// for L2.
std::function<double(double)> h_density(const WaveletDensityEstimate& est,
                                        DivergenceKind kind) {
  if (kind == DivergenceKind::l2) return [est](double x) { return est(x); };
  const double floor = est.clip_floor;
  return [est, floor](double x) { return std::max(est(x), floor); };
}

// One-sided replicate against the known density g; truth_null switches the z
// centering between the oracle truth (normality/coverage) and the gof null.
ResultRow one_sided_row(const ReplicateContext& ctx,
                        const SyntheticDensity& draw_from, long n,
                        std::uint64_t seed, double center) {
  const ExperimentConfig& cfg = *ctx.config;
  const std::vector<double> xs = sample(draw_from, n, seed);
  const WaveletDensityEstimate est = fit_density(xs, ctx.scaling, kDomain);
  const double j_hat =
      estimate_one_sided_f(cfg.spec, est, ctx.g->pdf, kDomain, cfg.grid_size);
  const double a_n =
      sup_norm_error(est, draw_from.pdf, cfg.grid_size).a_n;

  const auto [h1, h2] =
      h_functions(cfg.spec, h_density(est, cfg.spec.kind), ctx.g->pdf);
  const VarianceEstimate var =
      plug_in_variance(xs, est.kernel, h1, kDomain, 513, Side::f_side);

  std::optional<double> renyi_base;
  if (cfg.spec.kind == DivergenceKind::renyi)
    renyi_base = std::exp((cfg.spec.alpha - 1.0) * j_hat);
  const EstimateReport rep = report(cfg.spec, j_hat, {var}, n,
                                    est.kernel.level, 0.95, center, renyi_base);

  ResultRow row;
  row.n = n;
  row.estimate = j_hat;
  row.sigma_hat = rep.sigma_hat;
  row.a_n = a_n;
  row.z = *rep.z_stat;
  return row;
}

ResultRow two_sided_row(const ReplicateContext& ctx, long n,
                        std::uint64_t seed, double center) {
  const ExperimentConfig& cfg = *ctx.config;
  // one stream per replicate: first n uniforms for f, next n for g
  SplitMix64 rng(seed);
  std::vector<double> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (long i = 0; i < n; ++i) xs.push_back(ctx.f->inv_cdf(rng.uniform()));
  for (long i = 0; i < n; ++i) ys.push_back(ctx.g->inv_cdf(rng.uniform()));

  const WaveletDensityEstimate f_est = fit_density(xs, ctx.scaling, kDomain);
  const WaveletDensityEstimate g_est = fit_density(ys, ctx.scaling, kDomain);
  const double j_hat =
      estimate_two_sided(cfg.spec, f_est, g_est, kDomain, cfg.grid_size);
  const double a_f = sup_norm_error(f_est, ctx.f->pdf, cfg.grid_size).a_n;
  const double a_g = sup_norm_error(g_est, ctx.g->pdf, cfg.grid_size).a_n;

  const auto [h1, h2] = h_functions(cfg.spec, h_density(f_est, cfg.spec.kind),
                                    h_density(g_est, cfg.spec.kind));
  const VarianceEstimate var1 =
      plug_in_variance(xs, f_est.kernel, h1, kDomain, 513, Side::f_side);
  const VarianceEstimate var2 =
      plug_in_variance(ys, g_est.kernel, h2, kDomain, 513, Side::g_side);

  std::optional<double> renyi_base;
  if (cfg.spec.kind == DivergenceKind::renyi)
    renyi_base = std::exp((cfg.spec.alpha - 1.0) * j_hat);
  const EstimateReport rep =
      report(cfg.spec, j_hat, {var1, var2}, n, f_est.kernel.level, 0.95,
             center, renyi_base);

  ResultRow row;
  row.n = n;
  row.estimate = j_hat;
  row.sigma_hat = rep.sigma_hat;
  row.a_n = std::max(a_f, a_g);
  row.z = *rep.z_stat;
  return row;
}

ReplicateContext make_context(const ExperimentConfig& config) {
  ReplicateContext ctx;
  ctx.config = &config;
  ctx.scaling = build_scaling_function(config.wavelet);
  ctx.f = &density_by_id(config.density_f);
  ctx.g = &density_by_id(config.density_g);
  ctx.oracle = oracle_divergence(config.spec, *ctx.f, *ctx.g);
  ctx.null_value =
      config.spec.kind == DivergenceKind::hellinger_integral ? 1.0 : 0.0;
  return ctx;
}

// Rows for one arm, ordered by (n, replicate); seeds come from the global
// (arm_offset + row index) replicate number so arms never share a stream.
std::vector<ResultRow> run_rows(const ReplicateContext& ctx,
                                const SyntheticDensity& draw_from,
                                bool two_sided, double center, long arm_offset,
                                const char* arm) {
  const ExperimentConfig& cfg = *ctx.config;
  const long total =
      static_cast<long>(cfg.n_values.size()) * cfg.replicates;
  std::vector<ResultRow> rows(total);
  parallel_for(total, [&](long i) {
    const long n = cfg.n_values[i / cfg.replicates];
    const int r = static_cast<int>(i % cfg.replicates);
    const std::uint64_t seed = replicate_seed(cfg.base_seed, arm_offset + i);
    ResultRow row = two_sided ? two_sided_row(ctx, n, seed, center)
                              : one_sided_row(ctx, draw_from, n, seed, center);
    row.replicate = r;
    row.arm = arm;
    rows[i] = row;
  });
  return rows;
}

json base_aggregates(const ExperimentConfig& config) {
  json j;
  j["experiment"] = experiment_name(config.experiment);
  j["rng"] = kRngName;
  j["config"] = config_to_json(config);
  return j;
}

std::vector<double> column(const std::vector<ResultRow>& rows, long n,
                           const std::string& arm,
                           double ResultRow::* field) {
  std::vector<double> out;
  for (const ResultRow& row : rows)
    if (row.n == n && row.arm == arm) out.push_back(row.*field);
  return out;
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::rate_sweep:
      return "rate_sweep";
    case Experiment::normality:
      return "normality";
    case Experiment::coverage:
      return "coverage";
    case Experiment::gof_size_power:
      return "gof_size_power";
  }
  return "unknown";
}

int worker_count() {
  if (const char* env = std::getenv("WAVEDIV_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

ExperimentResult run_rate_sweep(const ExperimentConfig& config) {
  if (config.experiment != Experiment::rate_sweep)
    fail(Errc::invalid_config, "config is not a rate_sweep experiment");
  const ReplicateContext ctx = make_context(config);
  ExperimentResult result;
  result.rows = run_rows(ctx, *ctx.f, false, ctx.oracle, 0, "main");

  json agg = base_aggregates(config);
  agg["oracle"] = ctx.oracle;
  const auto [h1, h2] = h_functions(config.spec, ctx.f->pdf, ctx.g->pdf);
  const double a1 = simpson([&](double x) { return std::abs(h1(x)); }, 0.0,
                            1.0, (1 << 16) + 1);
  const double a2 = simpson([&](double x) { return std::abs(h2(x)); }, 0.0,
                            1.0, (1 << 16) + 1);
  agg["A1"] = a1;
  agg["A2"] = a2;

  json per_n = json::array();
  std::vector<double> log_n, log_a;
  std::vector<double> medians_a, medians_rem;
  for (const long n : config.n_values) {
    const std::vector<double> a_col =
        column(result.rows, n, "main", &ResultRow::a_n);
    std::vector<double> abs_err, ratio, rem;
    for (const ResultRow& row : result.rows)
      if (row.n == n) {
        abs_err.push_back(std::abs(row.estimate - ctx.oracle));
        ratio.push_back(std::abs(row.estimate - ctx.oracle) /
                        std::max(row.a_n, 1e-300));
        rem.push_back(std::sqrt(static_cast<double>(n)) * row.a_n * row.a_n);
      }
    json entry;
    entry["n"] = n;
    entry["median_a_n"] = median(a_col);
    entry["median_abs_error"] = median(abs_err);
    entry["median_ratio"] = median(ratio);
    entry["median_sqrt_n_a_n_sq"] = median(rem);
    per_n.push_back(entry);
    log_n.push_back(std::log2(static_cast<double>(n)));
    log_a.push_back(std::log2(median(a_col)));
    medians_a.push_back(median(a_col));
    medians_rem.push_back(median(rem));
  }
  agg["per_n"] = per_n;
  agg["slope_log_median_a_n"] = least_squares_slope(log_n, log_a);
  bool decreasing = true;
  for (std::size_t i = 1; i < medians_a.size(); ++i)
    decreasing = decreasing && medians_a[i] < medians_a[i - 1];
  agg["a_n_strictly_decreasing"] = decreasing;
  bool rem_decreasing = true;
  for (std::size_t i = 1; i < medians_rem.size(); ++i)
    rem_decreasing = rem_decreasing && medians_rem[i] < medians_rem[i - 1];
  agg["remainder_decreasing"] = rem_decreasing;
  agg["ratio_bound"] = 1.25 * a1;
  agg["ratio_at_max_n"] = per_n.back()["median_ratio"];
  agg["warnings"] = json::array();
  result.aggregates = std::move(agg);
  return result;
}

namespace {

// Shared by normality and coverage: z rows against the oracle truth plus
// KS/moment/coverage aggregates.
ExperimentResult run_z_experiment(const ExperimentConfig& config,
                                  bool require_nondegenerate) {
  const ReplicateContext ctx = make_context(config);
  const bool two = config.sided == Side::two_sided;
  ExperimentResult result;
  result.rows = run_rows(ctx, *ctx.f, two, ctx.oracle, 0, "main");

  json agg = base_aggregates(config);
  agg["oracle"] = ctx.oracle;
  const double z_q = normal_quantile(0.975);
  agg["coverage_z"] = z_q;

  json per_n = json::array();
  for (const long n : config.n_values) {
    const std::vector<double> zs =
        column(result.rows, n, "main", &ResultRow::z);
    const std::vector<double> sigmas =
        column(result.rows, n, "main", &ResultRow::sigma_hat);
    const double count = static_cast<double>(zs.size());
    double mean = 0.0;
    for (const double z : zs) mean += z;
    mean /= count;
    double var = 0.0;
    for (const double z : zs) var += (z - mean) * (z - mean);
    var /= (count - 1.0);
    const double ks = ks_statistic_normal(zs);
    long covered = 0;
    for (const double z : zs)
      if (std::abs(z) <= z_q) ++covered;

    if (require_nondegenerate && median(sigmas) < kSigmaFloor)
      fail(Errc::degenerate_variance,
           "median plug-in sigma below the floor; the standardized statistic "
           "is not normally calibrated");

    json entry;
    entry["n"] = n;
    entry["mean_z"] = mean;
    entry["var_z"] = var;
    entry["ks_stat"] = ks;
    entry["ks_p"] = kolmogorov_p(ks, static_cast<long>(zs.size()));
    entry["coverage"] = static_cast<double>(covered) / count;
    entry["median_sigma_hat"] = median(sigmas);
    per_n.push_back(entry);
  }
  agg["per_n"] = per_n;
  agg["warnings"] = json::array();
  result.aggregates = std::move(agg);
  return result;
}

}  // namespace

ExperimentResult run_normality(const ExperimentConfig& config) {
  if (config.experiment != Experiment::normality)
    fail(Errc::invalid_config, "config is not a normality experiment");
  if (config.density_f == config.density_g)
    fail(Errc::invalid_config,
         "normality requires density_f != density_g (degenerate variance)");
  return run_z_experiment(config, true);
}

ExperimentResult run_coverage(const ExperimentConfig& config) {
  if (config.experiment != Experiment::coverage)
    fail(Errc::invalid_config, "config is not a coverage experiment");
  return run_z_experiment(config, false);
}

ExperimentResult run_gof(const ExperimentConfig& config) {
  if (config.experiment != Experiment::gof_size_power)
    fail(Errc::invalid_config, "config is not a gof_size_power experiment");
  const ReplicateContext ctx = make_context(config);
  const long arm_rows =
      static_cast<long>(config.n_values.size()) * config.replicates;

  // H0 arm draws from density_g itself (f = g by construction); H1 draws
  // from density_f. Both are tested against the known density_g.
  std::vector<ResultRow> h0 =
      run_rows(ctx, *ctx.g, false, ctx.null_value, 0, "h0");
  std::vector<ResultRow> h1 =
      run_rows(ctx, *ctx.f, false, ctx.null_value, arm_rows, "h1");

  ExperimentResult result;
  result.rows = std::move(h0);
  result.rows.insert(result.rows.end(), h1.begin(), h1.end());

  json agg = base_aggregates(config);
  agg["oracle_h1"] = ctx.oracle;
  agg["null_value"] = ctx.null_value;
  const double z_crit = normal_quantile(0.95);  // one-sided 0.05 level
  agg["z_critical"] = z_crit;
  agg["nominal_level"] = 0.05;

  json per_n = json::array();
  for (const long n : config.n_values) {
    const std::vector<double> z0 = column(result.rows, n, "h0", &ResultRow::z);
    const std::vector<double> z1 = column(result.rows, n, "h1", &ResultRow::z);
    long r0 = 0, r1 = 0;
    for (const double z : z0)
      if (z > z_crit) ++r0;
    for (const double z : z1)
      if (z > z_crit) ++r1;
    json entry;
    entry["n"] = n;
    entry["size"] = static_cast<double>(r0) / static_cast<double>(z0.size());
    entry["power"] = static_cast<double>(r1) / static_cast<double>(z1.size());
    entry["power_exceeds_size"] = entry["power"] > entry["size"];
    per_n.push_back(entry);
  }
  agg["per_n"] = per_n;
  agg["warnings"] = json::array(
      {"h0 arm: f = g makes h1 constant and the first-order variance "
       "degenerate; the nominal normal calibration does not apply, so the "
       "empirical size is reported, not asserted"});
  result.aggregates = std::move(agg);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case Experiment::rate_sweep:
      return run_rate_sweep(config);
    case Experiment::normality:
      return run_normality(config);
    case Experiment::coverage:
      return run_coverage(config);
    case Experiment::gof_size_power:
      return run_gof(config);
  }
  fail(Errc::invalid_config, "unknown experiment");
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(Errc::invalid_config, "config must be an object");
  static const char* known[] = {"experiment", "density_f", "density_g",
                                "divergence", "n_values",  "replicates",
                                "base_seed",  "wavelet",   "grid_size",
                                "output_path", "sided"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok)
      fail(Errc::invalid_config, "unknown config field '" + item.key() + "'");
  }
  const auto require = [&](const char* key) -> const json& {
    if (!j.contains(key))
      fail(Errc::invalid_config,
           "missing config field '" + std::string(key) + "'");
    return j.at(key);
  };

  ExperimentConfig cfg;
  {
    const json& v = require("experiment");
    if (!v.is_string())
      fail(Errc::invalid_config, "field 'experiment' must be a string");
    const std::string name = v.get<std::string>();
    if (name == "rate_sweep")
      cfg.experiment = Experiment::rate_sweep;
    else if (name == "normality")
      cfg.experiment = Experiment::normality;
    else if (name == "coverage")
      cfg.experiment = Experiment::coverage;
    else if (name == "gof_size_power")
      cfg.experiment = Experiment::gof_size_power;
    else
      fail(Errc::invalid_config, "field 'experiment': unknown value '" + name +
                                     "'");
  }
  {
    const json& v = require("density_f");
    if (!v.is_string())
      fail(Errc::invalid_config, "field 'density_f' must be a string");
    cfg.density_f = v.get<std::string>();
  }
  {
    const json& v = require("density_g");
    if (!v.is_string())
      fail(Errc::invalid_config, "field 'density_g' must be a string");
    cfg.density_g = v.get<std::string>();
  }
  {
    const json& v = require("divergence");
    if (!v.is_object())
      fail(Errc::invalid_config, "field 'divergence' must be an object");
    if (!v.contains("kind") || !v.at("kind").is_string())
      fail(Errc::invalid_config,
           "field 'divergence.kind' must be a string");
    cfg.spec.kind = kind_from_string(v.at("kind").get<std::string>());
    if (v.contains("alpha")) {
      if (!v.at("alpha").is_number())
        fail(Errc::invalid_config, "field 'divergence.alpha' must be a number");
      cfg.spec.alpha = v.at("alpha").get<double>();
    }
    for (const auto& item : v.items())
      if (item.key() != "kind" && item.key() != "alpha")
        fail(Errc::invalid_config,
             "unknown config field 'divergence." + item.key() + "'");
    validate(cfg.spec);
  }
  {
    const json& v = require("n_values");
    if (!v.is_array() || v.empty())
      fail(Errc::invalid_config, "field 'n_values' must be a nonempty array");
    long prev = 0;
    for (const auto& e : v) {
      if (!e.is_number_integer() || e.get<long>() < 1)
        fail(Errc::invalid_config,
             "field 'n_values' must hold positive integers");
      const long n = e.get<long>();
      if (n <= prev)
        fail(Errc::invalid_config, "field 'n_values' must be strictly increasing");
      prev = n;
      cfg.n_values.push_back(n);
    }
  }
  {
    const json& v = require("replicates");
    if (!v.is_number_integer())
      fail(Errc::invalid_config, "field 'replicates' must be an integer");
    cfg.replicates = v.get<int>();
    if (cfg.replicates < 50)
      fail(Errc::invalid_config, "field 'replicates' must be >= 50");
  }
  {
    const json& v = require("base_seed");
    if (v.is_number_unsigned())
      cfg.base_seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<long long>() >= 0)
      cfg.base_seed = static_cast<std::uint64_t>(v.get<long long>());
    else
      fail(Errc::invalid_config,
           "field 'base_seed' must be a nonnegative integer");
  }
  if (j.contains("wavelet")) {
    const json& v = j.at("wavelet");
    if (!v.is_string())
      fail(Errc::invalid_config, "field 'wavelet' must be a string");
    cfg.wavelet = family_from_string(v.get<std::string>());
  }
  if (j.contains("grid_size")) {
    const json& v = j.at("grid_size");
    if (!v.is_number_integer() || v.get<int>() < 2)
      fail(Errc::invalid_config, "field 'grid_size' must be an integer >= 2");
    cfg.grid_size = v.get<int>();
  }
  {
    const json& v = require("output_path");
    if (!v.is_string() || v.get<std::string>().empty())
      fail(Errc::invalid_config, "field 'output_path' must be a nonempty string");
    cfg.output_path = v.get<std::string>();
  }
  if (j.contains("sided")) {
    const json& v = j.at("sided");
    if (!v.is_string())
      fail(Errc::invalid_config, "field 'sided' must be a string");
    const std::string s = v.get<std::string>();
    if (s == "one")
      cfg.sided = Side::f_side;
    else if (s == "two")
      cfg.sided = Side::two_sided;
    else
      fail(Errc::invalid_config, "field 'sided' must be 'one' or 'two'");
  }
  return cfg;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["experiment"] = experiment_name(config.experiment);
  j["density_f"] = config.density_f;
  j["density_g"] = config.density_g;
  json spec;
  spec["kind"] = kind_name(config.spec.kind);
  if (uses_alpha(config.spec.kind)) spec["alpha"] = config.spec.alpha;
  j["divergence"] = spec;
  j["n_values"] = config.n_values;
  j["replicates"] = config.replicates;
  j["base_seed"] = config.base_seed;
  j["wavelet"] = family_name(config.wavelet);
  j["grid_size"] = config.grid_size;
  j["output_path"] = config.output_path;
  j["sided"] = config.sided == Side::two_sided ? "two" : "one";
  return j;
}

std::string rows_to_csv(const ExperimentResult& result) {
  std::string out = "n,replicate,arm,estimate,sigma_hat,a_n,z\n";
  char buf[256];
  for (const ResultRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%d,%s,%.17g,%.17g,%.17g,%.17g\n",
                  row.n, row.replicate, row.arm.c_str(), row.estimate,
                  row.sigma_hat, row.a_n, row.z);
    out += buf;
  }
  return out;
}

namespace {

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_failure, "cannot open '" + tmp.string() + "'");
    out << contents;
    if (!out) fail(Errc::io_failure, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec)
    fail(Errc::io_failure,
         "cannot rename '" + tmp.string() + "' to '" + target.string() + "'");
}

}  // namespace

std::pair<std::string, std::string> write_result(
    const ExperimentResult& result, const ExperimentConfig& config) {
  const std::string csv_path = config.output_path + ".rows.csv";
  const std::string json_path = config.output_path + ".aggregates.json";
  atomic_write(csv_path, rows_to_csv(result));
  atomic_write(json_path, result.aggregates.dump(2) + "\n");
  return {csv_path, json_path};
}

}  // namespace wavediv
