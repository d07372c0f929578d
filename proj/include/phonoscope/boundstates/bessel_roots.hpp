#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "phonoscope/core/error.hpp"
#include "phonoscope/special/bessel.hpp"

namespace phonoscope::boundstates {

namespace detail {

// First `count` positive roots of J_m by sign-change scan, bisection and a Newton polish.
inline std::vector<double> compute_bessel_roots(int m, int count) {
  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(count));
  auto f = [m](double x) { return special::bessel_j(m, x); };
  const double step = 0.25;  // roots of J_m are spaced by more than pi
  double lo = m == 0 ? 1e-3 : static_cast<double>(m);  // no positive root below m
  double flo = f(lo);
  while (static_cast<int>(roots.size()) < count) {
    const double hi = lo + step;
    const double fhi = f(hi);
    if (flo == 0.0) {
      roots.push_back(lo);
    } else if (flo * fhi < 0.0) {
      double a = lo, b = hi, fa = flo;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double c = 0.5 * (a + b);
        const double fc = f(c);
        if (fa * fc <= 0.0) {
          b = c;
        } else {
          a = c;
          fa = fc;
        }
      }
      double x = 0.5 * (a + b);
      // J_m' = (J_{m-1} - J_{m+1}) / 2
      for (int it = 0; it < 3; ++it) {
        const double d = 0.5 * ((m == 0 ? -special::bessel_j(1, x) * 2.0 : special::bessel_j(m - 1, x) - special::bessel_j(m + 1, x)));
        if (d == 0.0) break;
        const double nx = x - f(x) / d;
        if (!(nx > a && nx < b)) break;
        x = nx;
      }
      roots.push_back(x);
    }
    lo = hi;
    flo = fhi;
  }
  return roots;
}

}  // namespace detail

/** Root table shared read-only across threads; rows grow on demand under a lock. */
class BesselRootTable {
 public:
  static BesselRootTable& instance() {
    static BesselRootTable table;
    return table;
  }

  double root(int m, int l) {
    if (m < 0) throw DomainError("bessel_root: order must be non-negative");
    if (l < 1) throw DomainError("bessel_root: root index starts at 1");
    std::lock_guard<std::mutex> lock(mutex_);
    auto& row = table_[m];
    if (static_cast<int>(row.size()) < l) row = detail::compute_bessel_roots(m, std::max(l, 2 * static_cast<int>(row.size()) + 32));
    return row[static_cast<std::size_t>(l - 1)];
  }

 private:
  std::mutex mutex_;
  std::map<int, std::vector<double>> table_;
};

/** l-th positive root mu_{m,l} of J_m (l >= 1). */
inline double bessel_root(int m, int l) { return BesselRootTable::instance().root(m, l); }

}  // namespace phonoscope::boundstates
