// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_DENSITY_HPP
#define WAVEDIV_DENSITY_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wavediv/interval.hpp"
#include "wavediv/wavelet.hpp"

namespace wavediv {

// j_n = max(1, round(log2(n)/4)), rounding half away from zero, so that
// 2^{j_n} tracks n^{1/4}.
int resolution_level(long n);

// Linear wavelet density estimator: f_n(x) = sum_k alpha_k phi_{j,k}(x) with
// alpha_k = (1/n) sum_i 2^{j/2} phi(2^j X_i - k). Coefficients are stored for
// every translate whose support meets the domain.
struct WaveletDensityEstimate {
  ProjectionKernel kernel;
  Interval domain;
  long n = 0;
  long k_min = 0;
  Eigen::ArrayXd coeffs;
  double clip_floor = 1e-4;  // used only inside log/power transforms

  // Raw estimator value; may be negative, never clipped here.
  double operator()(double x) const;
};

WaveletDensityEstimate fit_density(const std::vector<double>& sample,
                                   const ScalingFunction& scaling,
                                   Interval domain = {0.0, 1.0},
                                   double clip_floor = 1e-4);

struct GridSpec {
  Interval range;
  int points = 513;  // >= 2
};

// Unclipped estimator values on a uniform grid inside the domain.
Eigen::ArrayXd evaluate_on_grid(const WaveletDensityEstimate& est,
                                const GridSpec& grid);

struct SupNormReport {
  double a_n = 0.0;
  int grid_size = 0;
  int level = 0;
};

// a_n = max |f_n - truth| over a uniform grid on the domain (>= 2^10 points).
SupNormReport sup_norm_error(const WaveletDensityEstimate& est,
                             const std::function<double(double)>& truth,
                             int grid_size = 1 << 10);

// Integral of the estimator over its full support (domain extended by the
// kernel window) with a 2^12+1-node Simpson rule.
double mass(const WaveletDensityEstimate& est);

}  // namespace wavediv

#endif  // WAVEDIV_DENSITY_HPP
