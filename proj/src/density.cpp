// SPDX-License-Identifier: Apache-2.0
#include "wavediv/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavediv/error.hpp"
#include "wavediv/quadrature.hpp"

namespace wavediv {

int resolution_level(long n) {
  // round half away from zero; log2(n)/4 is nonnegative here
  const double raw = std::log2(static_cast<double>(n)) / 4.0;
  const int rounded = static_cast<int>(std::floor(raw + 0.5));
  return rounded < 1 ? 1 : rounded;
}

double WaveletDensityEstimate::operator()(double x) const {
  const ScalingFunction& sf = kernel.scaling;
  const double scale = std::ldexp(1.0, kernel.level);
  const double sx = x * scale;
  const long k_max = k_min + coeffs.size() - 1;
  const double root = std::sqrt(scale);
  if (sf.family == Family::haar) {
    // histogram convention: the cell touching domain.hi is closed on the right
    long cell = static_cast<long>(std::floor(sx));
    if (x == domain.hi)
      cell = std::min(cell, static_cast<long>(std::ceil(domain.hi * scale)) - 1);
    if (cell < k_min || cell > k_max) return 0.0;
    return root * coeffs[cell - k_min];
  }
  long lo = static_cast<long>(std::ceil(sx - sf.support_hi));
  long hi = static_cast<long>(std::floor(sx - sf.support_lo));
  if (lo < k_min) lo = k_min;
  if (hi > k_max) hi = k_max;
  double acc = 0.0;
  for (long k = lo; k <= hi; ++k)
    acc += coeffs[k - k_min] * sf(sx - static_cast<double>(k));
  return root * acc;
}

WaveletDensityEstimate fit_density(const std::vector<double>& sample,
                                   const ScalingFunction& scaling,
                                   Interval domain, double clip_floor) {
  if (sample.empty()) fail(Errc::empty_sample, "empty sample");
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (!(sample[i] >= domain.lo && sample[i] <= domain.hi))
      fail(Errc::out_of_domain_value,
           "sample value " + std::to_string(sample[i]) + " at index " +
               std::to_string(i) + " lies outside the domain");

  WaveletDensityEstimate est;
  est.kernel.scaling = scaling;
  est.kernel.level = resolution_level(static_cast<long>(sample.size()));
  est.domain = domain;
  est.n = static_cast<long>(sample.size());
  est.clip_floor = clip_floor;

  const int level = est.kernel.level;
  const double scale = std::ldexp(1.0, level);
  est.k_min =
      static_cast<long>(std::floor(domain.lo * scale - scaling.support_hi)) + 1;
  const long k_max =
      static_cast<long>(std::ceil(domain.hi * scale - scaling.support_lo)) - 1;
  est.coeffs = Eigen::ArrayXd::Zero(k_max - est.k_min + 1);

  const ScalingFunction& sf = scaling;
  const long last_cell =
      static_cast<long>(std::ceil(domain.hi * scale)) - 1;
  for (const double xi : sample) {
    const double sx = xi * scale;
    if (sf.family == Family::haar) {
      // histogram convention: a sample at domain.hi lands in the last cell
      long cell = static_cast<long>(std::floor(sx));
      if (xi == domain.hi) cell = std::min(cell, last_cell);
      if (cell >= est.k_min && cell <= k_max)
        est.coeffs[cell - est.k_min] += 1.0;
      continue;
    }
    long lo = static_cast<long>(std::ceil(sx - sf.support_hi));
    long hi = static_cast<long>(std::floor(sx - sf.support_lo));
    if (lo < est.k_min) lo = est.k_min;
    if (hi > k_max) hi = k_max;
    for (long k = lo; k <= hi; ++k)
      est.coeffs[k - est.k_min] += sf(sx - static_cast<double>(k));
  }
  est.coeffs *= std::sqrt(scale) / static_cast<double>(est.n);
  return est;
}

Eigen::ArrayXd evaluate_on_grid(const WaveletDensityEstimate& est,
                                const GridSpec& grid) {
  if (grid.points < 2) fail(Errc::invalid_config, "grid needs >= 2 points");
  if (grid.range.lo < est.domain.lo || grid.range.hi > est.domain.hi)
    fail(Errc::domain_mismatch, "grid extends outside the fitted domain");
  Eigen::ArrayXd out(grid.points);
  const double step = grid.range.length() / (grid.points - 1);
  for (int i = 0; i < grid.points; ++i)
    out[i] = est(grid.range.lo + step * i);
  return out;
}

SupNormReport sup_norm_error(const WaveletDensityEstimate& est,
                             const std::function<double(double)>& truth,
                             int grid_size) {
  if (grid_size < (1 << 10)) grid_size = 1 << 10;
  SupNormReport report;
  report.grid_size = grid_size;
  report.level = est.kernel.level;
  const double step = est.domain.length() / (grid_size - 1);
  for (int i = 0; i < grid_size; ++i) {
    const double x = est.domain.lo + step * i;
    const double err = std::abs(est(x) - truth(x));
    if (err > report.a_n) report.a_n = err;
  }
  return report;
}

double mass(const WaveletDensityEstimate& est) {
  // Integrate over the full estimator support (domain plus kernel window).
  // Pieces are split at the domain edges so the interior Simpson nodes align
  // with dyadic cell boundaries (keeps Haar steps exact).
  const double radius =
      est.kernel.scaling.family == Family::haar
          ? 0.0  // Haar cells tile the domain exactly; nothing spills over
          : (est.kernel.scaling.support_hi - est.kernel.scaling.support_lo) *
                std::ldexp(1.0, -est.kernel.level);
  const auto f = [&](double x) { return est(x); };
  const int pts = (1 << 12) + 1;
  double total = simpson(f, est.domain.lo, est.domain.hi, pts);
  if (radius > 0.0) {
    total += simpson(f, est.domain.lo - radius, est.domain.lo, pts);
    total += simpson(f, est.domain.hi, est.domain.hi + radius, pts);
  }
  return total;
}

}  // namespace wavediv
