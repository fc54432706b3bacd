// Basic types shared by every module: plane vectors, parameter intervals and
// the exception hierarchy.

#ifndef AFFC_CORE_HPP
#define AFFC_CORE_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace affc {

using PlaneVector = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

/// Closed parameter interval [lo, hi]. Degenerate intervals (lo == hi) are allowed.
struct DomainInterval {
  double lo = 0.0;
  double hi = 0.0;

  DomainInterval() = default;
  DomainInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo_ <= hi_)) throw std::invalid_argument("DomainInterval: lo > hi");
  }

  double length() const { return hi - lo; }
  bool contains(double s, double slack = 0.0) const { return s >= lo - slack && s <= hi + slack; }
  double clamp(double s) const { return s < lo ? lo : (s > hi ? hi : s); }
};

/// v ∧ w = v1 w2 − v2 w1, the determinant of the matrix with rows v and w.
template <typename Derived1, typename Derived2>
inline typename Derived1::Scalar wedge(const Eigen::MatrixBase<Derived1>& v,
                                       const Eigen::MatrixBase<Derived2>& w) {
  return v(0) * w(1) - v(1) * w(0);
}

// Errors. The CLI maps these onto exit codes.

/// Argument outside the domain of a function (inverse out of range, s outside I_k, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Curve is not positively oriented / locally convex (c' ∧ c'' <= 0).
struct OrientationError : DomainError {
  using DomainError::DomainError;
};

/// Graph input with f'' <= 0 where convexity is required.
struct ConvexityError : DomainError {
  using DomainError::DomainError;
};

/// Precondition violated by the caller.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical integration failed; `where` is the parameter at which it gave up.
struct IntegrationError : std::runtime_error {
  double where;
  IntegrationError(const std::string& what, double where_)
      : std::runtime_error(what + " at s=" + std::to_string(where_)), where(where_) {}
};

/// Malformed input document.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace affc

#endif  // AFFC_CORE_HPP
