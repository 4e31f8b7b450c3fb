// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_SYNTHETIC_HPP
#define WAVEDIV_SYNTHETIC_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wavediv/divergence.hpp"

namespace wavediv {

// Closed-form density on [0,1], bounded between kappa1 > 0 and kappa2.
struct SyntheticDensity {
  std::string id;
  std::function<double(double)> pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> inv_cdf;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
};

// U (uniform), LIN (x + 0.5), BUMP (0.2 + 4.8 x (1-x)), COS (1 + cos(2 pi x)/2).
const std::vector<SyntheticDensity>& catalog();

// UnknownDensityId for ids not in the catalog.
const SyntheticDensity& density_by_id(const std::string& id);

// Inverse-CDF sampling driven by SplitMix64; bit-reproducible for fixed
// (seed, n).
std::vector<double> sample(const SyntheticDensity& density, long n,
                           std::uint64_t seed);

// true_divergence at 2^16+1 Simpson nodes, cached per (spec, a, b).
double oracle_divergence(const DivergenceSpec& spec, const SyntheticDensity& a,
                         const SyntheticDensity& b);

}  // namespace wavediv

#endif  // WAVEDIV_SYNTHETIC_HPP
