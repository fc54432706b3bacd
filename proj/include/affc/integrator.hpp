// Adaptive Dormand-Prince 5(4) integration with continuous (dense) output.
//
// Based on the DOPRI5 scheme of Hairer, Nørsett and Wanner: fifth order
// propagation, embedded fourth order error estimate, and the fourth order
// continuous extension for evaluation between accepted steps.

#ifndef AFFC_INTEGRATOR_HPP
#define AFFC_INTEGRATOR_HPP

#include "affc/core.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <vector>

namespace affc {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step from the problem scale
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 200000;
};

/// Accepted steps of one integration run with their interpolation data.
/// Covers the closed interval between `start()` and `end()`, in either
/// direction.
class DenseTrajectory {
 public:
  struct Step {
    double t0;
    double h;
    // y(t0 + θh) = r0 + θ(r1 + (1−θ)(r2 + θ(r3 + (1−θ) r4)))
    Eigen::VectorXd r0, r1, r2, r3, r4;
  };

  DenseTrajectory() = default;
  DenseTrajectory(double t0, Eigen::VectorXd y0) : start_(t0), end_(t0), y0_(std::move(y0)) {}

  double start() const { return start_; }
  double end() const { return end_; }
  Eigen::Index dimension() const { return y0_.size(); }
  bool covers(double t, double slack = 0.0) const;

  /// State at t; t must lie in the covered interval.
  Eigen::VectorXd operator()(double t) const;

  std::size_t steps() const { return steps_.size(); }
  void append(Step step);

 private:
  double start_ = 0.0;
  double end_ = 0.0;
  Eigen::VectorXd y0_;
  std::vector<Step> steps_;
};

namespace detail {

struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
};

}  // namespace detail

/// Integrates y' = rhs(t, y) from (t0, y0) to t1 (t1 < t0 integrates backwards).
/// `rhs` is callable as Eigen::VectorXd(double, const Eigen::VectorXd&).
/// Throws IntegrationError when the step size underflows or the step budget
/// is exhausted.
template <typename Rhs>
DenseTrajectory integrate_ode(Rhs&& rhs, double t0, const Eigen::VectorXd& y0, double t1,
                              const IntegratorOptions& opt = {}) {
  using K = detail::Dopri5;
  DenseTrajectory traj(t0, y0);
  if (t1 == t0) return traj;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const Eigen::Index n = y0.size();

  auto scale_of = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (opt.atol + opt.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  double t = t0;
  Eigen::VectorXd y = y0;
  Eigen::VectorXd k1 = rhs(t, y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic, first-order version.
    const Eigen::VectorXd sc = scale_of(y, y);
    const double d0 = (y.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    const double d1 = (k1.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, 0.1 * span + 1e-3});
  }
  const double max_step = opt.max_step > 0.0 ? opt.max_step : span;
  h = std::min(h, max_step);

  double err_prev = 1e-4;
  bool rejected_last = false;
  for (long step = 0; step < opt.max_steps; ++step) {
    const double remaining = std::abs(t1 - t);
    if (remaining <= 0.0) return traj;
    bool last = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      last = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw IntegrationError("step size underflow", t);
    const double hs = dir * h;

    const Eigen::VectorXd k2 = rhs(t + K::c2 * hs, y + hs * (K::a21 * k1));
    const Eigen::VectorXd k3 = rhs(t + K::c3 * hs, y + hs * (K::a31 * k1 + K::a32 * k2));
    const Eigen::VectorXd k4 =
        rhs(t + K::c4 * hs, y + hs * (K::a41 * k1 + K::a42 * k2 + K::a43 * k3));
    const Eigen::VectorXd k5 = rhs(
        t + K::c5 * hs, y + hs * (K::a51 * k1 + K::a52 * k2 + K::a53 * k3 + K::a54 * k4));
    const Eigen::VectorXd k6 =
        rhs(t + hs, y + hs * (K::a61 * k1 + K::a62 * k2 + K::a63 * k3 + K::a64 * k4 +
                              K::a65 * k5));
    const Eigen::VectorXd y_new =
        y + hs * (K::a71 * k1 + K::a73 * k3 + K::a74 * k4 + K::a75 * k5 + K::a76 * k6);
    const Eigen::VectorXd k7 = rhs(t + hs, y_new);

    const Eigen::VectorXd err_vec =
        hs * (K::e1 * k1 + K::e3 * k3 + K::e4 * k4 + K::e5 * k5 + K::e6 * k6 + K::e7 * k7);
    const Eigen::VectorXd sc = scale_of(y, y_new);
    double err = (err_vec.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      DenseTrajectory::Step s;
      s.t0 = t;
      s.h = hs;
      s.r0 = y;
      s.r1 = y_new - y;
      s.r2 = hs * k1 - s.r1;
      s.r3 = s.r1 - hs * k7 - s.r2;
      s.r4 = hs * (K::d1 * k1 + K::d3 * k3 + K::d4 * k4 + K::d5 * k5 + K::d6 * k6 + K::d7 * k7);
      traj.append(std::move(s));
      t = last ? t1 : t + hs;
      y = y_new;
      k1 = k7;
      if (last) return traj;
      // PI step-size control.
      double fac = 0.9 * std::pow(err, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      if (err == 0.0) fac = 10.0;
      fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 10.0);
      h = std::min(h * fac, max_step);
      err_prev = std::max(err, 1e-4);
      rejected_last = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      rejected_last = true;
    }
  }
  throw IntegrationError("step budget exhausted", t);
}

}  // namespace affc

#endif  // AFFC_INTEGRATOR_HPP
