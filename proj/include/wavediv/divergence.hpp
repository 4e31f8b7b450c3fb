// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_DIVERGENCE_HPP
#define WAVEDIV_DIVERGENCE_HPP

#include <functional>
#include <string>

#include "wavediv/density.hpp"
#include "wavediv/interval.hpp"

namespace wavediv {

enum class DivergenceKind {
  hellinger_integral,  // I(f,g) = integral f^a g^(1-a)
  tsallis,             // (I - 1)/(a - 1)
  renyi,               // log(I)/(a - 1)
  kullback_leibler,    // integral f log(f/g)
  l2,                  // integral (f - g)^2
};

const char* kind_name(DivergenceKind kind);
DivergenceKind kind_from_string(const std::string& name);

struct DivergenceSpec {
  DivergenceKind kind = DivergenceKind::l2;
  double alpha = 0.0;  // required > 0, != 1 for the alpha families
};

// Throws InvalidAlpha when the alpha families get alpha <= 0 or alpha == 1.
void validate(const DivergenceSpec& spec);

bool uses_alpha(DivergenceKind kind);

// Integrand phi(s,t) with closed-form first and second partials. Tsallis and
// Renyi share the Hellinger-integral phi; their affine/log post-transforms
// live in the estimators.
struct PhiFunctional {
  std::function<double(double, double)> phi, d1, d2, d11, d22, d12;
};

PhiFunctional phi_for(const DivergenceSpec& spec);

// True divergence of two known densities by quadrature; quad_points = 0 uses
// the auto-refining rule. NonPositiveDensity if either density is <= 0 on the
// quadrature grid, NonFiniteIntegral if the result is not finite.
double true_divergence(const DivergenceSpec& spec,
                       const std::function<double(double)>& f,
                       const std::function<double(double)>& g, Interval domain,
                       int quad_points = 0);

// Plug-in estimators. Density-estimate arguments are clipped at clip_floor
// inside log/power transforms only; L2 uses raw values.
double estimate_one_sided_f(const DivergenceSpec& spec,
                            const WaveletDensityEstimate& f_est,
                            const std::function<double(double)>& g,
                            Interval domain, int quad_points = 0);

double estimate_one_sided_g(const DivergenceSpec& spec,
                            const std::function<double(double)>& f,
                            const WaveletDensityEstimate& g_est,
                            Interval domain, int quad_points = 0);

// Requires equal sample sizes and a common domain.
double estimate_two_sided(const DivergenceSpec& spec,
                          const WaveletDensityEstimate& f_est,
                          const WaveletDensityEstimate& g_est, Interval domain,
                          int quad_points = 0);

}  // namespace wavediv

#endif  // WAVEDIV_DIVERGENCE_HPP
