// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_INFERENCE_HPP
#define WAVEDIV_INFERENCE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "wavediv/divergence.hpp"

namespace wavediv {

inline constexpr double kSigmaFloor = 1e-6;

enum class Side { f_side, g_side, two_sided };

// sigma_h^2 = Var(K_{j_n}(h)(X)) estimated by the empirical variance of the
// transformed sample.
struct VarianceEstimate {
  double sigma2 = 0.0;  // >= 0 after clamping fp noise
  Side side = Side::f_side;
  double h_mean = 0.0;
  double h_second_moment = 0.0;
  long n = 0;
};

struct EstimateReport {
  DivergenceSpec spec;
  double estimate = 0.0;
  double sigma_hat = 0.0;
  double ci_level = 0.95;
  Interval ci;
  std::optional<double> z_stat;
  std::optional<double> p_value;
  long n = 0;
  int j_n = 0;
};

// Influence functions h1 = phi_1^(1)(f,g), h2 = phi_2^(1)(f,g) as closures.
// For KL h2 is returned as f/g; the sign of phi_2^(1) = -s/t does not affect
// the variance and is applied downstream.
std::pair<std::function<double(double)>, std::function<double(double)>>
h_functions(const DivergenceSpec& spec, const std::function<double(double)>& f,
            const std::function<double(double)>& g);

// v_i = (K_{j_n} h)(X_i); returns mean(v^2) - mean(v)^2 with summaries.
VarianceEstimate plug_in_variance(const std::vector<double>& sample,
                                  const ProjectionKernel& kernel,
                                  const std::function<double(double)>& h,
                                  Interval h_domain, int quad_points = 513,
                                  Side side = Side::f_side);

// Inverse standard normal CDF, |error| < 1e-8 over (0,1).
double normal_quantile(double p);

double normal_cdf(double z);

// Applies the divergence-specific variance scaling (Tsallis: /(alpha-1)^2;
// Renyi: /((alpha-1) I)^2 with I = renyi_base), builds the CI, and when
// null_value is given adds z = sqrt(n)(estimate - null)/max(sigma, floor)
// and a two-sided normal p-value. Two-sided variances enter as sigma1^2 +
// sigma2^2 exactly.
EstimateReport report(const DivergenceSpec& spec, double estimate,
                      const std::vector<VarianceEstimate>& variances, long n,
                      int j_n, double ci_level = 0.95,
                      std::optional<double> null_value = std::nullopt,
                      std::optional<double> renyi_base = std::nullopt);

// Kolmogorov-Smirnov distance of a sample to the standard normal, and the
// asymptotic p-value (Stephens' small-sample correction).
double ks_statistic_normal(std::vector<double> sample);
double kolmogorov_p(double d, long n);

}  // namespace wavediv

#endif  // WAVEDIV_INFERENCE_HPP
