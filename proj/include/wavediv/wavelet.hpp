// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_WAVELET_HPP
#define WAVEDIV_WAVELET_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "wavediv/interval.hpp"

namespace wavediv {

enum class Family {
  haar,
  daubechies2,
  daubechies3,
  daubechies4,
  daubechies5,
  daubechies6,
  daubechies7,
  daubechies8,
  daubechies9,
  daubechies10,
};

const char* family_name(Family family);
Family family_from_string(const std::string& name);  // UnsupportedFamily
int family_order(Family family);                     // N: 2N taps, Haar N=1

// Compactly supported scaling function (father wavelet). Values are tabulated
// on the dyadic grid support_lo + i*2^-r by the cascade algorithm; evaluation
// between grid points is linear interpolation. Haar is evaluated in closed
// form so its discontinuity at 1 stays exact.
struct ScalingFunction {
  Family family = Family::haar;
  Eigen::ArrayXd refinement_coeffs;  // taps h_k, sum = sqrt(2)
  double support_lo = 0.0;           // B1
  double support_hi = 1.0;           // B2 = 2N-1 for Daubechies N
  int table_resolution = 12;         // r: dyadic depth of `values`
  Eigen::ArrayXd values;             // phi on the grid, (B2-B1)*2^r + 1 entries

  double operator()(double x) const;
};

// table_resolution must lie in [8, 20].
ScalingFunction build_scaling_function(Family family, int table_resolution = 12);

// Orthogonal projection kernel K_j(x,y) = 2^j sum_k phi(2^j x-k) phi(2^j y-k).
struct ProjectionKernel {
  ScalingFunction scaling;
  int level = 0;  // j >= 0
};

double kernel_eval(const ProjectionKernel& kernel, double x, double y);

// (K_j h)(x) = integral of K_j(x,y) h(y) dy over the intersection of the
// kernel window at x with h's interval. Haar uses the exact cell bounds with
// a `quad_points`-node Simpson rule; other families integrate each translate
// against the dyadic value table (trapezoid on the table lattice, which is
// exact for the tabulated piecewise-linear phi). QuadratureUnderflow when the
// intersection is empty.
double kernel_transform(const ProjectionKernel& kernel,
                        const std::function<double(double)>& h,
                        Interval h_domain, double x, int quad_points = 513);

// Shared-translate batch evaluation of (K_j h)(x_i) for many points; equal to
// kernel_transform pointwise up to quadrature tolerance but computes each
// translate integral once.
Eigen::ArrayXd kernel_transform_batch(const ProjectionKernel& kernel,
                                      const std::function<double(double)>& h,
                                      Interval h_domain,
                                      const Eigen::ArrayXd& xs,
                                      int quad_points = 513);

}  // namespace wavediv

#endif  // WAVEDIV_WAVELET_HPP
