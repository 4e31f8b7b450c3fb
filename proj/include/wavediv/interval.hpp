// SPDX-License-Identifier: Apache-2.0
#ifndef WAVEDIV_INTERVAL_HPP
#define WAVEDIV_INTERVAL_HPP

#include <algorithm>

namespace wavediv {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace wavediv

#endif  // WAVEDIV_INTERVAL_HPP
