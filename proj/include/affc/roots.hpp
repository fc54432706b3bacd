// Inversion of monotone scalar functions.

#ifndef AFFC_ROOTS_HPP
#define AFFC_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace affc {

/// Solves g(x) = target for a nondecreasing g with g(lo) <= target <= g(hi).
///
/// Newton steps using `dg` are taken when they stay strictly inside the
/// current bracket and shrink fast enough; otherwise the bracket is bisected.
/// Terminates when the bracket is narrower than `xtol`, when a Newton
/// correction falls below `xtol`, or at machine resolution.
template <typename F, typename DF>
double invert_increasing(F&& g, DF&& dg, double target, double lo, double hi,
                         double xtol = 1e-12, int max_iter = 200) {
  double a = lo, b = hi;
  double x = 0.5 * (a + b);
  double dx_old = b - a;
  auto polish = [&](double y) {
    const double f = g(y) - target;
    const double d = dg(y);
    if (d > 0.0 && std::isfinite(d)) {
      const double z = y - f / d;
      if (z >= a && z <= b) return z;
    }
    return y;
  };
  for (int it = 0; it < max_iter; ++it) {
    const double fx = g(x) - target;
    if (fx == 0.0) return x;
    if (fx < 0.0)
      a = x;
    else
      b = x;
    const double d = dg(x);
    double next = 0.0;
    bool newton = false;
    if (d > 0.0 && std::isfinite(d)) {
      next = x - fx / d;
      // Newton crawls where g grows exponentially; bisect unless the step
      // beats half the previous one.
      newton = next > a && next < b && std::abs(2.0 * fx) <= std::abs(dx_old * d);
    }
    if (!newton) next = 0.5 * (a + b);
    const double step = std::abs(next - x);
    dx_old = newton ? step : b - a;
    x = next;
    const double resolution =
        4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    if ((newton && step <= xtol) || b - a <= std::max(xtol, resolution)) return polish(x);
  }
  return x;
}

}  // namespace affc

#endif  // AFFC_ROOTS_HPP
