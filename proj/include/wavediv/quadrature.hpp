// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_QUADRATURE_HPP
#define WAVEDIV_QUADRATURE_HPP

#include <cmath>
#include <utility>

namespace wavediv {

// Composite Simpson rule with `points` nodes on [a, b]. `points` is rounded
// up to the next odd value >= 3. Accumulation is left-to-right so results are
// bit-reproducible.
template <class F>
double simpson(F&& f, double a, double b, int points) {
  if (points < 3) points = 3;
  if (points % 2 == 0) ++points;
  const int n = points - 1;  // even subinterval count
  const double h = (b - a) / n;
  double odd = 0.0, even = 0.0;
  for (int i = 1; i < n; ++i) {
    const double fx = f(a + h * i);
    if (i % 2)
      odd += fx;
    else
      even += fx;
  }
  return (h / 3.0) * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// Doubles the subinterval count until two successive Simpson values agree to
// `tol` or the node cap is reached; returns the last value.
template <class F>
double simpson_auto(F&& f, double a, double b, double tol = 1e-8,
                    int start_points = (1 << 12) + 1,
                    int cap_points = (1 << 16) + 1) {
  int pts = start_points;
  double prev = simpson(f, a, b, pts);
  while (pts < cap_points) {
    pts = 2 * (pts - 1) + 1;
    const double cur = simpson(f, a, b, pts);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace wavediv

#endif  // WAVEDIV_QUADRATURE_HPP
