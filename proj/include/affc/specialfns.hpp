// k-parametric trigonometric functions and the constant-curvature comparison
// profiles built from them.
//
//   ck(k, s)  = cos(√k s)        | 1   | cosh(√-k s)
//   sk(k, s)  = sin(√k s)/√k     | s   | sinh(√-k s)/√-k
//   xbar      = sk
//   ybar      = (1 - ck)/k       | s²/2
//   abar      = (s - sk)/(2k)    | s³/12
//   hk        = xbar · ybar      (increasing on I_k)
//   gk        = hk⁻¹, fk = abar⁻¹
//
// Every profile is an entire function of u = k s². When |u| is at most
// `kSeriesSwitch` the Taylor series in u is summed directly; this keeps the
// functions smooth across k = 0 and removes the cancellation in 1 - ck and
// s - sk.

#ifndef AFFC_SPECIALFNS_HPP
#define AFFC_SPECIALFNS_HPP

#include "affc/core.hpp"
#include "affc/roots.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace affc {

/// |k s²| at or below which the series branch is used.
inline constexpr double kSeriesSwitch = 1.0;

namespace detail {

inline constexpr int kSeriesTerms = 14;

// 1/m! for m = 0..2*kSeriesTerms+3
inline constexpr std::array<double, 2 * kSeriesTerms + 4> kInvFactorial = [] {
  std::array<double, 2 * kSeriesTerms + 4> f{};
  double v = 1.0;
  f[0] = 1.0;
  for (std::size_t m = 1; m < f.size(); ++m) {
    v /= static_cast<double>(m);
    f[m] = v;
  }
  return f;
}();

// Σ_{n>=0} (-u)^n / (2n + offset)!
template <typename Scalar>
Scalar alternating_series(Scalar u, int offset) {
  Scalar acc(0);
  for (int n = kSeriesTerms - 1; n >= 0; --n)
    acc = Scalar(kInvFactorial[2 * n + offset]) - u * acc;
  return acc;
}

}  // namespace detail

template <typename Scalar>
Scalar ck(Scalar k, Scalar s) {
  using std::cos;
  using std::cosh;
  using std::sqrt;
  if (k > Scalar(0)) return cos(sqrt(k) * s);
  if (k < Scalar(0)) return cosh(sqrt(-k) * s);
  return Scalar(1);
}

template <typename Scalar>
Scalar sk(Scalar k, Scalar s) {
  using std::abs;
  using std::sin;
  using std::sinh;
  using std::sqrt;
  const Scalar u = k * s * s;
  if (abs(u) <= Scalar(kSeriesSwitch)) return s * detail::alternating_series(u, 1);
  if (k > Scalar(0)) {
    const Scalar r = sqrt(k);
    return sin(r * s) / r;
  }
  const Scalar r = sqrt(-k);
  return sinh(r * s) / r;
}

/// First adapted coordinate of the unit-speed conic x² + k y² − 2y = 0.
template <typename Scalar>
Scalar xbar(Scalar k, Scalar s) {
  return sk(k, s);
}

/// Second adapted coordinate of the same conic; nonnegative on I_k.
template <typename Scalar>
Scalar ybar(Scalar k, Scalar s) {
  using std::abs;
  const Scalar u = k * s * s;
  if (abs(u) <= Scalar(kSeriesSwitch)) return s * s * detail::alternating_series(u, 2);
  // (1 - ck(s))/k = 2 sk(s/2)², free of cancellation.
  const Scalar h = sk(k, s / Scalar(2));
  return Scalar(2) * h * h;
}

/// Area profile: solves A''' + k A' = 1/2 with A(0) = A'(0) = A''(0) = 0.
template <typename Scalar>
Scalar abar(Scalar k, Scalar s) {
  using std::abs;
  const Scalar u = k * s * s;
  if (abs(u) <= Scalar(kSeriesSwitch))
    return s * s * s * detail::alternating_series(u, 3) / Scalar(2);
  return (s - sk(k, s)) / (Scalar(2) * k);
}

/// d/ds abar = ybar / 2.
template <typename Scalar>
Scalar abar_derivative(Scalar k, Scalar s) {
  return ybar(k, s) / Scalar(2);
}

/// Right end of I_k: +inf for k <= 0, π/(2√k) for k > 0.
inline double rectangle_profile_end(double k) {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / (2.0 * std::sqrt(k));
}

/// Right end of J_k = hk(I_k): +inf for k <= 0, k^(-3/2) for k > 0.
inline double rectangle_profile_max(double k) {
  if (k <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(k, -1.5);
}

/// hk(k, s) = xbar(k, s) · ybar(k, s) on I_k. Throws DomainError outside I_k.
template <typename Scalar>
Scalar hk(Scalar k, Scalar s) {
  if (!(s >= Scalar(0))) throw DomainError("hk: s must be >= 0");
  if (k > Scalar(0)) {
    const double end = rectangle_profile_end(static_cast<double>(k));
    if (s > Scalar(end)) throw DomainError("hk: s beyond pi/(2 sqrt k)");
    if (s == Scalar(end)) return Scalar(rectangle_profile_max(static_cast<double>(k)));
  }
  return xbar(k, s) * ybar(k, s);
}

/// d/ds hk = ck·ybar + sk².
template <typename Scalar>
Scalar hk_derivative(Scalar k, Scalar s) {
  const Scalar x = sk(k, s);
  return ck(k, s) * ybar(k, s) + x * x;
}

/// Inverse of hk on J_k.
inline double gk(double k, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("gk: argument must be finite and >= 0");
  if (a == 0.0) return 0.0;
  if (k == 0.0) return std::cbrt(2.0 * a);
  const double guess = std::cbrt(2.0 * a);  // hk(0, .) bounds hk(k, .) from the k side
  auto h = [k](double s) { return hk(k, s); };
  auto dh = [k](double s) { return hk_derivative(k, s); };
  if (k > 0.0) {
    const double top = rectangle_profile_max(k);
    const double end = rectangle_profile_end(k);
    if (a > top) throw DomainError("gk: argument beyond k^(-3/2)");
    if (a == top) return end;
    return invert_increasing(h, dh, a, std::min(guess, end), end);
  }
  return invert_increasing(h, dh, a, 0.0, guess);
}

/// Inverse of abar on [0, inf). abar is strictly increasing for every k.
inline double fk(double k, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("fk: argument must be finite and >= 0");
  if (a == 0.0) return 0.0;
  if (k == 0.0) return std::cbrt(12.0 * a);
  const double guess = std::cbrt(12.0 * a);
  auto f = [k](double s) { return abar(k, s); };
  auto df = [k](double s) { return abar_derivative(k, s); };
  if (k < 0.0) return invert_increasing(f, df, a, 0.0, guess);
  // abar(k, s) >= (s - 1/√k)/(2k) for k > 0.
  const double upper = std::max(guess, 2.0 * k * a + 1.0 / std::sqrt(k));
  return invert_increasing(f, df, a, guess, upper);
}

}  // namespace affc

#endif  // AFFC_SPECIALFNS_HPP
