// Adaptive Gauss-Kronrod (7/15) quadrature for scalar and Eigen-vector valued
// integrands.

#ifndef AFFC_QUADRATURE_HPP
#define AFFC_QUADRATURE_HPP

#include <Eigen/Core>

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace affc {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }

template <typename Derived>
double magnitude(const Eigen::MatrixBase<Derived>& v) {
  return v.template lpNorm<Eigen::Infinity>();
}

template <typename F>
auto kronrod_panel(F& f, double a, double b, double& error) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto fc = f(centre);
  using Value = std::decay_t<decltype(fc)>;
  Value kronrod = kKronrodWeights[7] * fc;
  Value gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    Value pair = f(centre - dx) + f(centre + dx);
    kronrod = kronrod + kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss = gauss + kGaussWeights[i / 2] * pair;
  }
  kronrod = half * kronrod;
  gauss = half * gauss;
  error = magnitude(Value(kronrod - gauss));
  return kronrod;
}

template <typename F, typename Value>
Value adaptive_panel(F& f, double a, double b, double tol, Value whole, double error, int depth,
                     int max_depth) {
  if (error <= tol) return whole;
  if (depth >= max_depth || std::abs(b - a) < 1e-14 * (1.0 + std::abs(a)))
    throw QuadratureError("adaptive quadrature: tolerance not reached near x=" +
                          std::to_string(0.5 * (a + b)));
  const double m = 0.5 * (a + b);
  double el = 0.0, er = 0.0;
  Value left = kronrod_panel(f, a, m, el);
  Value right = kronrod_panel(f, m, b, er);
  // Rounding floor: once the two halves agree with the parent to machine
  // precision, further bisection cannot improve the estimate.
  Value joined = left + right;
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * magnitude(joined);
  if (el + er <= std::max(tol, floor)) return joined;
  return Value(adaptive_panel(f, a, m, 0.5 * tol, left, el, depth + 1, max_depth) +
               adaptive_panel(f, m, b, 0.5 * tol, right, er, depth + 1, max_depth));
}

}  // namespace detail

/// ∫_a^b f(x) dx to absolute tolerance `abs_tol` (orientation respected when b < a).
/// `f` may return double or an Eigen column vector.
template <typename F>
auto integrate(F&& f, double a, double b, double abs_tol = 1e-11, int max_depth = 40) {
  double error = 0.0;
  auto whole = detail::kronrod_panel(f, a, b, error);
  using Value = std::decay_t<decltype(whole)>;
  if (a == b) return Value(0.0 * whole);
  return Value(detail::adaptive_panel(f, a, b, abs_tol, whole, error, 0, max_depth));
}

}  // namespace affc

#endif  // AFFC_QUADRATURE_HPP
