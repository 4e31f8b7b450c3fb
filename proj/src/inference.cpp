// SPDX-License-Identifier: Apache-2.0
#include "wavediv/inference.hpp"

#include <algorithm>
#include <cmath>

#include "wavediv/error.hpp"

namespace wavediv {

std::pair<std::function<double(double)>, std::function<double(double)>>
h_functions(const DivergenceSpec& spec, const std::function<double(double)>& f,
            const std::function<double(double)>& g) {
  validate(spec);
  std::function<double(double)> h1, h2;
  switch (spec.kind) {
    case DivergenceKind::hellinger_integral:
    case DivergenceKind::tsallis:
    case DivergenceKind::renyi: {
      const double a = spec.alpha;
      h1 = [f, g, a](double y) {
        return a * std::pow(f(y), a - 1.0) * std::pow(g(y), 1.0 - a);
      };
      h2 = [f, g, a](double y) {
        return (1.0 - a) * std::pow(f(y), a) * std::pow(g(y), -a);
      };
      break;
    }
    case DivergenceKind::kullback_leibler:
      h1 = [f, g](double y) { return 1.0 + std::log(f(y) / g(y)); };
      // phi_2^(1) = -s/t; the sign cancels in the variance and is applied
      // downstream, so the ratio itself is returned.
      h2 = [f, g](double y) { return f(y) / g(y); };
      break;
    case DivergenceKind::l2:
      h1 = [f, g](double y) { return 2.0 * (f(y) - g(y)); };
      h2 = [f, g](double y) { return -2.0 * (f(y) - g(y)); };
      break;
  }
  return {h1, h2};
}

VarianceEstimate plug_in_variance(const std::vector<double>& sample,
                                  const ProjectionKernel& kernel,
                                  const std::function<double(double)>& h,
                                  Interval h_domain, int quad_points,
                                  Side side) {
  if (sample.empty()) fail(Errc::empty_sample, "empty sample");
  Eigen::ArrayXd xs(static_cast<long>(sample.size()));
  for (long i = 0; i < xs.size(); ++i) xs[i] = sample[i];
  const Eigen::ArrayXd v =
      kernel_transform_batch(kernel, h, h_domain, xs, quad_points);

  double mean = 0.0, second = 0.0;
  for (long i = 0; i < v.size(); ++i) {
    mean += v[i];
    second += v[i] * v[i];
  }
  const double n = static_cast<double>(v.size());
  mean /= n;
  second /= n;

  VarianceEstimate out;
  out.side = side;
  out.h_mean = mean;
  out.h_second_moment = second;
  out.n = v.size();
  out.sigma2 = second - mean * mean;
  if (out.sigma2 < 0.0) out.sigma2 = 0.0;  // clamp fp noise (>= -1e-12)
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Acklam's rational approximation plus one Halley refinement; |error| well
// below 1e-8 over (0,1).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    fail(Errc::invalid_config, "quantile level must lie in (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step against the exact CDF
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x -= u / (1.0 + x * u / 2.0);
  return x;
}

EstimateReport report(const DivergenceSpec& spec, double estimate,
                      const std::vector<VarianceEstimate>& variances, long n,
                      int j_n, double ci_level, std::optional<double> null_value,
                      std::optional<double> renyi_base) {
  validate(spec);
  if (variances.empty()) fail(Errc::invalid_config, "no variance estimate");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    fail(Errc::invalid_config, "ci level must lie in (0,1)");

  double sigma2 = 0.0;
  for (const VarianceEstimate& v : variances) sigma2 += v.sigma2;

  switch (spec.kind) {
    case DivergenceKind::tsallis: {
      const double d = spec.alpha - 1.0;
      sigma2 /= d * d;
      break;
    }
    case DivergenceKind::renyi: {
      if (!renyi_base)
        fail(Errc::missing_renyi_base,
             "Renyi reports need the Hellinger-integral base I");
      const double d = (spec.alpha - 1.0) * (*renyi_base);
      sigma2 /= d * d;
      break;
    }
    default:
      break;  // KL, L2, Hellinger integral: h-based variance used directly
  }

  EstimateReport out;
  out.spec = spec;
  out.estimate = estimate;
  out.sigma_hat = std::sqrt(sigma2);
  out.ci_level = ci_level;
  out.n = n;
  out.j_n = j_n;

  const double z_q = normal_quantile(1.0 - (1.0 - ci_level) / 2.0);
  const double se = std::max(out.sigma_hat, kSigmaFloor) /
                    std::sqrt(static_cast<double>(n));
  out.ci = {estimate - z_q * se, estimate + z_q * se};

  if (null_value) {
    const double z = (estimate - *null_value) / se;
    out.z_stat = z;
    out.p_value = 2.0 * (1.0 - normal_cdf(std::abs(z)));
  }
  return out;
}

double ks_statistic_normal(std::vector<double> sample) {
  if (sample.empty()) fail(Errc::empty_sample, "empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double cdf = normal_cdf(sample[i]);
    d = std::max(d, cdf - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - cdf);
  }
  return d;
}

double kolmogorov_p(double d, long n) {
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (!(lambda > 0.0)) return 1.0;
  double p;
  if (lambda < 1.18) {
    // dual Jacobi theta form; the alternating series stalls for small lambda
    const double t = std::exp(-M_PI * M_PI / (8.0 * lambda * lambda));
    const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                       (t + std::pow(t, 9.0) + std::pow(t, 25.0));
    p = 1.0 - cdf;
  } else {
    p = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      p += (k % 2 ? 2.0 : -2.0) * term;
      if (term < 1e-16) break;
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace wavediv
