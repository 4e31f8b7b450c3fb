// SPDX-License-Identifier: Apache-2.0
#include "wavediv/wavelet.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "wavediv/error.hpp"
#include "wavediv/quadrature.hpp"

namespace wavediv {

namespace {

// Daubechies filter taps from spectral factorization of
// P(y) = sum_{k<N} C(N-1+k,k) y^k, roots kept inside the unit circle,
// computed at 60-digit precision and rounded to 17 significant digits.
// Orientation: larger taps lead. Normalization: sum = sqrt(2).
const double kTaps2[] = {
    0.48296291314453414, 0.83651630373780791, 0.22414386804201338,
    -0.12940952255126038};
const double kTaps3[] = {
    0.33267055295008262, 0.80689150931109258, 0.45987750211849157,
    -0.13501102001025459, -0.085441273882026662, 0.035226291885709537};
const double kTaps4[] = {
    0.23037781330889650, 0.71484657055291565, 0.63088076792985891,
    -0.027983769416859854, -0.18703481171909308, 0.030841381835560764,
    0.032883011666885200, -0.010597401785069032};
const double kTaps5[] = {
    0.16010239797419291, 0.60382926979718967, 0.72430852843777293,
    0.13842814590132073, -0.24229488706638203, -0.032244869584638375,
    0.077571493840045714, -0.0062414902127982743, -0.012580751999081999,
    0.0033357252854737713};
const double kTaps6[] = {
    0.11154074335010946, 0.49462389039845309, 0.75113390802109535,
    0.31525035170919763, -0.22626469396543982, -0.12976686756726194,
    0.097501605587323049, 0.027522865530305729, -0.031582039317486030,
    0.00055384220116149614, 0.0047772575109455106, -0.0010773010853084796};
const double kTaps7[] = {
    0.077852054085009179, 0.39653931948191731, 0.72913209084623512,
    0.46978228740519312, -0.14390600392856498, -0.22403618499387498,
    0.071309219266830265, 0.080612609151083072, -0.038029936935014414,
    -0.016574541630666881, 0.012550998556099841, 0.00042957797292136652,
    -0.0018016407040474909, 0.00035371379997452025};
const double kTaps8[] = {
    0.054415842243104010, 0.31287159091429997, 0.67563073629728981,
    0.58535468365420671, -0.015829105256349306, -0.28401554296154693,
    0.00047248457391328277, 0.12874742662047846, -0.017369301001807546,
    -0.044088253930794752, 0.013981027917398282, 0.0087460940474057767,
    -0.0048703529934515743, -0.00039174037337694705, 0.00067544940645056937,
    -0.00011747678412476953};
const double kTaps9[] = {
    0.038077947363878347, 0.24383467461259035, 0.60482312369011111,
    0.65728807805130054, 0.13319738582500758, -0.29327378327917491,
    -0.096840783222976461, 0.14854074933810638, 0.030725681479333379,
    -0.067632829061329974, 0.00025094711483145196, 0.022361662123679097,
    -0.0047232047577513973, -0.0042815036824634298, 0.0018476468830562265,
    0.00023038576352319597, -0.00025196318894271014, 3.9347320316271599e-5};
const double kTaps10[] = {
    0.026670057900555554, 0.18817680007769149, 0.52720118893172559,
    0.68845903945360357, 0.28117234366057746, -0.24984642432731538,
    -0.19594627437737704, 0.12736934033579326, 0.093057364603572351,
    -0.071394147166397087, -0.029457536821875813, 0.033212674059341002,
    0.0036065535669561697, -0.010733175483330575, 0.0013953517470529012,
    0.0019924052951850561, -0.00068585669495971163, -0.00011646685512928545,
    9.3588670320069591e-5, -1.3264202894521245e-5};

struct TapsRef {
  const double* data;
  int size;
};

TapsRef taps_for(Family family) {
  switch (family) {
    case Family::daubechies2:
      return {kTaps2, 4};
    case Family::daubechies3:
      return {kTaps3, 6};
    case Family::daubechies4:
      return {kTaps4, 8};
    case Family::daubechies5:
      return {kTaps5, 10};
    case Family::daubechies6:
      return {kTaps6, 12};
    case Family::daubechies7:
      return {kTaps7, 14};
    case Family::daubechies8:
      return {kTaps8, 16};
    case Family::daubechies9:
      return {kTaps9, 18};
    case Family::daubechies10:
      return {kTaps10, 20};
    default:
      fail(Errc::unsupported_family, "no taps for family");
  }
}

// phi at the integers 1..L-1 (L = 2N-1): eigenvector of M[a][b] =
// sqrt(2) h_{2a-b} for eigenvalue 1, normalized so the values sum to 1
// (partition of unity at the integers).
Eigen::ArrayXd integer_values(const Eigen::ArrayXd& taps) {
  const int len = static_cast<int>(taps.size());
  const int support = len - 1;  // [0, support]
  const int m = support - 1;    // unknowns at 1..support-1
  const double sqrt2 = std::sqrt(2.0);

  Eigen::MatrixXd refine = Eigen::MatrixXd::Zero(m, m);
  for (int a = 1; a <= support - 1; ++a)
    for (int b = 1; b <= support - 1; ++b) {
      const int idx = 2 * a - b;
      if (idx >= 0 && idx < len) refine(a - 1, b - 1) = sqrt2 * taps[idx];
    }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(refine);
  if (solver.info() != Eigen::Success)
    fail(Errc::cascade_divergence, "refinement matrix eigen-solve failed");

  int best = -1;
  double best_gap = 1e300;
  for (int i = 0; i < m; ++i) {
    const double gap = std::abs(solver.eigenvalues()[i] - std::complex<double>(1.0, 0.0));
    if (gap < best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (best < 0 || best_gap > 1e-10)
    fail(Errc::cascade_divergence,
         "refinement matrix has no eigenvalue 1 within 1e-10");

  Eigen::VectorXd vec = solver.eigenvectors().col(best).real();
  const double total = vec.sum();
  if (std::abs(total) < 1e-12)
    fail(Errc::cascade_divergence, "degenerate eigenvector at the integers");

  Eigen::ArrayXd at_integers = Eigen::ArrayXd::Zero(support + 1);
  for (int i = 0; i < m; ++i) at_integers[i + 1] = vec[i] / total;
  return at_integers;
}

// Dyadic refinement: phi(q 2^{-m-1}) = sqrt(2) sum_k h_k phi(q 2^{-m} - k).
// Even grid points are copied from the previous level so each refinement is
// exact where values already exist.
Eigen::ArrayXd cascade_table(const Eigen::ArrayXd& taps, int depth) {
  const int support = static_cast<int>(taps.size()) - 1;
  const double sqrt2 = std::sqrt(2.0);
  Eigen::ArrayXd cur = integer_values(taps);  // depth 0
  for (int m = 0; m < depth; ++m) {
    const long n_cur = cur.size();                  // support*2^m + 1
    const long n_next = 2 * (n_cur - 1) + 1;
    Eigen::ArrayXd next(n_next);
    const long stride = (n_cur - 1) / support;      // 2^m
    for (long q = 0; q < n_next; ++q) {
      if (q % 2 == 0) {
        next[q] = cur[q / 2];
        continue;
      }
      double acc = 0.0;
      for (int k = 0; k <= support; ++k) {
        const long idx = q - k * stride;            // argument on the depth-m grid
        if (idx >= 0 && idx < n_cur) acc += taps[k] * cur[idx];
      }
      next[q] = sqrt2 * acc;
    }
    cur.swap(next);
  }
  return cur;
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::haar:
      return "haar";
    case Family::daubechies2:
      return "daubechies2";
    case Family::daubechies3:
      return "daubechies3";
    case Family::daubechies4:
      return "daubechies4";
    case Family::daubechies5:
      return "daubechies5";
    case Family::daubechies6:
      return "daubechies6";
    case Family::daubechies7:
      return "daubechies7";
    case Family::daubechies8:
      return "daubechies8";
    case Family::daubechies9:
      return "daubechies9";
    case Family::daubechies10:
      return "daubechies10";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  static const std::pair<const char*, Family> table[] = {
      {"haar", Family::haar},           {"daubechies2", Family::daubechies2},
      {"db2", Family::daubechies2},     {"daubechies3", Family::daubechies3},
      {"db3", Family::daubechies3},     {"daubechies4", Family::daubechies4},
      {"db4", Family::daubechies4},     {"daubechies5", Family::daubechies5},
      {"db5", Family::daubechies5},     {"daubechies6", Family::daubechies6},
      {"db6", Family::daubechies6},     {"daubechies7", Family::daubechies7},
      {"db7", Family::daubechies7},     {"daubechies8", Family::daubechies8},
      {"db8", Family::daubechies8},     {"daubechies9", Family::daubechies9},
      {"db9", Family::daubechies9},     {"daubechies10", Family::daubechies10},
      {"db10", Family::daubechies10}};
  for (const auto& [key, fam] : table)
    if (name == key) return fam;
  fail(Errc::unsupported_family, "unsupported wavelet family '" + name + "'");
}

int family_order(Family family) {
  if (family == Family::haar) return 1;
  return taps_for(family).size / 2;
}

double ScalingFunction::operator()(double x) const {
  if (family == Family::haar) return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0;
  if (x <= support_lo || x >= support_hi) return 0.0;
  const double pos = (x - support_lo) * std::ldexp(1.0, table_resolution);
  const long idx = static_cast<long>(pos);
  const double frac = pos - static_cast<double>(idx);
  if (idx + 1 >= values.size()) return values[values.size() - 1];
  return values[idx] + frac * (values[idx + 1] - values[idx]);
}

ScalingFunction build_scaling_function(Family family, int table_resolution) {
  if (table_resolution < 8 || table_resolution > 20)
    fail(Errc::invalid_config, "table_resolution must be in [8, 20]");

  ScalingFunction sf;
  sf.family = family;
  sf.table_resolution = table_resolution;
  if (family == Family::haar) {
    sf.refinement_coeffs = Eigen::ArrayXd(2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    sf.refinement_coeffs << inv_sqrt2, inv_sqrt2;
    sf.support_lo = 0.0;
    sf.support_hi = 1.0;
    sf.values = Eigen::ArrayXd::Ones((1L << table_resolution) + 1);
    sf.values[sf.values.size() - 1] = 0.0;  // unused: Haar evaluates exactly
    return sf;
  }

  const TapsRef taps = taps_for(family);
  sf.refinement_coeffs =
      Eigen::Map<const Eigen::ArrayXd>(taps.data, taps.size);
  sf.support_lo = 0.0;
  sf.support_hi = static_cast<double>(taps.size - 1);
  sf.values = cascade_table(sf.refinement_coeffs, table_resolution);
  return sf;
}

double kernel_eval(const ProjectionKernel& kernel, double x, double y) {
  const double scale = std::ldexp(1.0, kernel.level);
  const double sx = x * scale;
  const double sy = y * scale;
  if (kernel.scaling.family == Family::haar)
    return std::floor(sx) == std::floor(sy) ? scale : 0.0;

  const ScalingFunction& sf = kernel.scaling;
  const double lo = std::max(sx, sy) - sf.support_hi;
  const double hi = std::min(sx, sy) - sf.support_lo;
  double acc = 0.0;
  for (long k = static_cast<long>(std::ceil(lo));
       k <= static_cast<long>(std::floor(hi)); ++k)
    acc += sf(sx - k) * sf(sy - k);
  return scale * acc;
}

namespace {

// Integral of phi(t) h((t+k) 2^-j) dt over [B1,B2] clipped to h's interval,
// by trapezoid on the dyadic table lattice (exact for the piecewise-linear
// tabulated phi up to h's curvature within one lattice cell).
double translate_integral(const ScalingFunction& sf, int level, long k,
                          const std::function<double(double)>& h,
                          Interval h_domain) {
  const double inv_scale = std::ldexp(1.0, -level);
  const double tlo =
      std::max(sf.support_lo, h_domain.lo / inv_scale - static_cast<double>(k));
  const double thi =
      std::min(sf.support_hi, h_domain.hi / inv_scale - static_cast<double>(k));
  if (!(thi > tlo)) return 0.0;

  const double step = std::ldexp(1.0, -sf.table_resolution);
  const auto point = [&](double t) {
    return sf(t) * h((t + static_cast<double>(k)) * inv_scale);
  };
  // snap to the lattice
  long i0 = static_cast<long>(std::ceil((tlo - sf.support_lo) / step));
  long i1 = static_cast<long>(std::floor((thi - sf.support_lo) / step));
  const long last = sf.values.size() - 1;
  if (i0 < 0) i0 = 0;
  if (i1 > last) i1 = last;

  double acc = 0.0;
  if (i0 > i1) {  // both ends inside one lattice cell
    acc = 0.5 * (point(tlo) + point(thi)) * (thi - tlo);
    return acc;
  }
  double prev_t = sf.support_lo + static_cast<double>(i0) * step;
  double prev_v = point(prev_t);
  if (tlo < prev_t) acc += 0.5 * (point(tlo) + prev_v) * (prev_t - tlo);
  for (long i = i0 + 1; i <= i1; ++i) {
    const double t = sf.support_lo + static_cast<double>(i) * step;
    const double v = point(t);
    acc += 0.5 * (prev_v + v) * step;
    prev_t = t;
    prev_v = v;
  }
  if (thi > prev_t) acc += 0.5 * (prev_v + point(thi)) * (thi - prev_t);
  return acc;
}

struct TranslateTable {
  long k_lo = 0;
  std::vector<double> integrals;  // translate_integral for k_lo + i
};

TranslateTable build_translates(const ProjectionKernel& kernel,
                                const std::function<double(double)>& h,
                                Interval h_domain) {
  const ScalingFunction& sf = kernel.scaling;
  const double scale = std::ldexp(1.0, kernel.level);
  TranslateTable table;
  // translates whose support meets h's interval
  table.k_lo =
      static_cast<long>(std::floor(h_domain.lo * scale - sf.support_hi)) + 1;
  const long k_hi =
      static_cast<long>(std::ceil(h_domain.hi * scale - sf.support_lo)) - 1;
  table.integrals.reserve(std::max<long>(0, k_hi - table.k_lo + 1));
  for (long k = table.k_lo; k <= k_hi; ++k)
    table.integrals.push_back(
        translate_integral(sf, kernel.level, k, h, h_domain));
  return table;
}

// (K_j h)(x) = sum_k phi(2^j x - k) * I_k with I_k the translate integral.
double transform_from_table(const ProjectionKernel& kernel,
                            const TranslateTable& table, double x) {
  const ScalingFunction& sf = kernel.scaling;
  const double sx = x * std::ldexp(1.0, kernel.level);
  const long lo = static_cast<long>(std::ceil(sx - sf.support_hi));
  const long hi = static_cast<long>(std::floor(sx - sf.support_lo));
  double acc = 0.0;
  for (long k = lo; k <= hi; ++k) {
    const long i = k - table.k_lo;
    if (i < 0 || i >= static_cast<long>(table.integrals.size())) continue;
    acc += sf(sx - k) * table.integrals[i];
  }
  return acc;
}

// histogram convention: x exactly at h_domain.hi belongs to the last cell
long haar_cell(double x, double inv_scale, const Interval& h_domain) {
  long cell = static_cast<long>(std::floor(x / inv_scale));
  if (x == h_domain.hi)
    cell = std::min(
        cell, static_cast<long>(std::ceil(h_domain.hi / inv_scale)) - 1);
  return cell;
}

}  // namespace

double kernel_transform(const ProjectionKernel& kernel,
                        const std::function<double(double)>& h,
                        Interval h_domain, double x, int quad_points) {
  if (quad_points < 64) quad_points = 64;
  const double inv_scale = std::ldexp(1.0, -kernel.level);

  if (kernel.scaling.family == Family::haar) {
    const double cell =
        static_cast<double>(haar_cell(x, inv_scale, h_domain));
    const Interval window =
        intersect({cell * inv_scale, (cell + 1.0) * inv_scale}, h_domain);
    if (!(window.length() > 0.0))
      fail(Errc::quadrature_underflow,
           "kernel window does not meet the function's interval");
    const double scale = 1.0 / inv_scale;
    return simpson([&](double y) { return scale * h(y); }, window.lo,
                   window.hi, quad_points);
  }

  const double radius =
      (kernel.scaling.support_hi - kernel.scaling.support_lo) * inv_scale;
  const Interval window = intersect({x - radius, x + radius}, h_domain);
  if (!(window.length() > 0.0))
    fail(Errc::quadrature_underflow,
         "kernel window does not meet the function's interval");

  // restrict the translate range to those meeting the window at x
  const TranslateTable table = build_translates(kernel, h, window);
  return transform_from_table(kernel, table, x);
}

Eigen::ArrayXd kernel_transform_batch(const ProjectionKernel& kernel,
                                      const std::function<double(double)>& h,
                                      Interval h_domain,
                                      const Eigen::ArrayXd& xs,
                                      int quad_points) {
  Eigen::ArrayXd out(xs.size());
  if (kernel.scaling.family == Family::haar) {
    // one Simpson integral per occupied cell
    const double inv_scale = std::ldexp(1.0, -kernel.level);
    std::vector<double> cell_value;
    std::vector<long> cell_index;
    for (long i = 0; i < xs.size(); ++i) {
      const long cell = haar_cell(xs[i], inv_scale, h_domain);
      long slot = -1;
      for (long c = 0; c < static_cast<long>(cell_index.size()); ++c)
        if (cell_index[c] == cell) {
          slot = c;
          break;
        }
      if (slot < 0) {
        const Interval window =
            intersect({static_cast<double>(cell) * inv_scale,
                       static_cast<double>(cell + 1) * inv_scale},
                      h_domain);
        double value = 0.0;
        if (window.length() > 0.0) {
          const double scale = 1.0 / inv_scale;
          value = simpson([&](double y) { return scale * h(y); }, window.lo,
                          window.hi, quad_points);
        }
        cell_index.push_back(cell);
        cell_value.push_back(value);
        slot = static_cast<long>(cell_index.size()) - 1;
      }
      out[i] = cell_value[slot];
    }
    return out;
  }

  const TranslateTable table = build_translates(kernel, h, h_domain);
  for (long i = 0; i < xs.size(); ++i)
    out[i] = transform_from_table(kernel, table, xs[i]);
  return out;
}

}  // namespace wavediv
