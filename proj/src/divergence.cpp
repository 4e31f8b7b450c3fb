// SPDX-License-Identifier: Apache-2.0
#include "wavediv/divergence.hpp"

#include <cmath>

#include "wavediv/error.hpp"
#include "wavediv/quadrature.hpp"

namespace wavediv {

const char* kind_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::hellinger_integral:
      return "hellinger";
    case DivergenceKind::tsallis:
      return "tsallis";
    case DivergenceKind::renyi:
      return "renyi";
    case DivergenceKind::kullback_leibler:
      return "kl";
    case DivergenceKind::l2:
      return "l2";
  }
  return "unknown";
}

DivergenceKind kind_from_string(const std::string& name) {
  if (name == "hellinger") return DivergenceKind::hellinger_integral;
  if (name == "tsallis") return DivergenceKind::tsallis;
  if (name == "renyi") return DivergenceKind::renyi;
  if (name == "kl" || name == "kullback_leibler")
    return DivergenceKind::kullback_leibler;
  if (name == "l2") return DivergenceKind::l2;
  fail(Errc::invalid_config, "unknown divergence kind '" + name + "'");
}

bool uses_alpha(DivergenceKind kind) {
  return kind == DivergenceKind::hellinger_integral ||
         kind == DivergenceKind::tsallis || kind == DivergenceKind::renyi;
}

void validate(const DivergenceSpec& spec) {
  if (!uses_alpha(spec.kind)) return;
  if (!(spec.alpha > 0.0) || spec.alpha == 1.0)
    fail(Errc::invalid_alpha,
         "alpha must be positive and distinct from 1 for the alpha families");
}

PhiFunctional phi_for(const DivergenceSpec& spec) {
  validate(spec);
  PhiFunctional out;
  switch (spec.kind) {
    case DivergenceKind::hellinger_integral:
    case DivergenceKind::tsallis:
    case DivergenceKind::renyi: {
      // Tsallis/Renyi share the Hellinger-integral integrand; their affine
      // and log post-transforms are applied by the estimators.
      const double a = spec.alpha;
      out.phi = [a](double s, double t) {
        return std::pow(s, a) * std::pow(t, 1.0 - a);
      };
      out.d1 = [a](double s, double t) {
        return a * std::pow(s, a - 1.0) * std::pow(t, 1.0 - a);
      };
      out.d2 = [a](double s, double t) {
        return (1.0 - a) * std::pow(s, a) * std::pow(t, -a);
      };
      out.d11 = [a](double s, double t) {
        return a * (a - 1.0) * std::pow(s, a - 2.0) * std::pow(t, 1.0 - a);
      };
      out.d22 = [a](double s, double t) {
        return -a * (1.0 - a) * std::pow(s, a) * std::pow(t, -a - 1.0);
      };
      out.d12 = [a](double s, double t) {
        return a * (1.0 - a) * std::pow(s, a - 1.0) * std::pow(t, -a);
      };
      break;
    }
    case DivergenceKind::kullback_leibler:
      out.phi = [](double s, double t) { return s * std::log(s / t); };
      out.d1 = [](double s, double t) { return std::log(s / t) + 1.0; };
      out.d2 = [](double s, double t) { return -s / t; };
      out.d11 = [](double s, double) { return 1.0 / s; };
      out.d22 = [](double s, double t) { return s / (t * t); };
      out.d12 = [](double, double t) { return -1.0 / t; };
      break;
    case DivergenceKind::l2:
      out.phi = [](double s, double t) { return (s - t) * (s - t); };
      out.d1 = [](double s, double t) { return 2.0 * (s - t); };
      out.d2 = [](double s, double t) { return -2.0 * (s - t); };
      out.d11 = [](double, double) { return 2.0; };
      out.d22 = [](double, double) { return 2.0; };
      out.d12 = [](double, double) { return -2.0; };
      break;
  }
  return out;
}

namespace {

double integrate(const std::function<double(double)>& f, Interval domain,
                 int quad_points) {
  if (quad_points > 0) return simpson(f, domain.lo, domain.hi, quad_points);
  return simpson_auto(f, domain.lo, domain.hi);
}

double post_transform(const DivergenceSpec& spec, double base) {
  switch (spec.kind) {
    case DivergenceKind::tsallis:
      return (base - 1.0) / (spec.alpha - 1.0);
    case DivergenceKind::renyi:
      return std::log(base) / (spec.alpha - 1.0);
    default:
      return base;
  }
}

bool clips(DivergenceKind kind) {
  // Clip before log/power only; L2 keeps raw values.
  return kind != DivergenceKind::l2;
}

double finish(const DivergenceSpec& spec, double base) {
  const double value = post_transform(spec, base);
  if (!std::isfinite(value))
    fail(Errc::non_finite_integral, "divergence integral is not finite");
  return value;
}

}  // namespace

double true_divergence(const DivergenceSpec& spec,
                       const std::function<double(double)>& f,
                       const std::function<double(double)>& g, Interval domain,
                       int quad_points) {
  validate(spec);
  const PhiFunctional phi = phi_for(spec);
  const auto integrand = [&](double x) {
    const double fx = f(x);
    const double gx = g(x);
    if (!(fx > 0.0) || !(gx > 0.0))
      fail(Errc::non_positive_density,
           "density not strictly positive on the quadrature grid");
    return phi.phi(fx, gx);
  };
  return finish(spec, integrate(integrand, domain, quad_points));
}

double estimate_one_sided_f(const DivergenceSpec& spec,
                            const WaveletDensityEstimate& f_est,
                            const std::function<double(double)>& g,
                            Interval domain, int quad_points) {
  validate(spec);
  const PhiFunctional phi = phi_for(spec);
  const bool clip = clips(spec.kind);
  const double floor = f_est.clip_floor;
  const auto integrand = [&](double x) {
    double s = f_est(x);
    double t = g(x);
    if (clip) {
      s = std::max(s, floor);
      t = std::max(t, floor);
    }
    return phi.phi(s, t);
  };
  return finish(spec, integrate(integrand, domain, quad_points));
}

double estimate_one_sided_g(const DivergenceSpec& spec,
                            const std::function<double(double)>& f,
                            const WaveletDensityEstimate& g_est,
                            Interval domain, int quad_points) {
  validate(spec);
  const PhiFunctional phi = phi_for(spec);
  const bool clip = clips(spec.kind);
  const double floor = g_est.clip_floor;
  const auto integrand = [&](double x) {
    double s = f(x);
    double t = g_est(x);
    if (clip) {
      s = std::max(s, floor);
      t = std::max(t, floor);
    }
    return phi.phi(s, t);
  };
  return finish(spec, integrate(integrand, domain, quad_points));
}

double estimate_two_sided(const DivergenceSpec& spec,
                          const WaveletDensityEstimate& f_est,
                          const WaveletDensityEstimate& g_est, Interval domain,
                          int quad_points) {
  validate(spec);
  if (f_est.domain.lo != g_est.domain.lo || f_est.domain.hi != g_est.domain.hi)
    fail(Errc::domain_mismatch, "estimates fitted on different domains");
  if (f_est.n != g_est.n)
    fail(Errc::sample_size_mismatch,
         "two-sided estimation requires equal sample sizes");
  const PhiFunctional phi = phi_for(spec);
  const bool clip = clips(spec.kind);
  const double floor_f = f_est.clip_floor;
  const double floor_g = g_est.clip_floor;
  const auto integrand = [&](double x) {
    double s = f_est(x);
    double t = g_est(x);
    if (clip) {
      s = std::max(s, floor_f);
      t = std::max(t, floor_g);
    }
    return phi.phi(s, t);
  };
  return finish(spec, integrate(integrand, domain, quad_points));
}

}  // namespace wavediv
