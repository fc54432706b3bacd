#include "affc/integrator.hpp"

#include <algorithm>
#include <string>

namespace affc {

bool DenseTrajectory::covers(double t, double slack) const {
  const double lo = std::min(start_, end_), hi = std::max(start_, end_);
  return t >= lo - slack && t <= hi + slack;
}

void DenseTrajectory::append(Step step) {
  end_ = step.t0 + step.h;
  steps_.push_back(std::move(step));
}

Eigen::VectorXd DenseTrajectory::operator()(double t) const {
  if (steps_.empty()) return y0_;
  const double dir = end_ >= start_ ? 1.0 : -1.0;
  const double u = dir * (t - start_);
  // First step whose end lies at or beyond t.
  auto it = std::lower_bound(steps_.begin(), steps_.end(), u, [&](const Step& s, double v) {
    return dir * (s.t0 + s.h - start_) < v;
  });
  if (it == steps_.end()) --it;
  const Step& s = *it;
  const double theta = (t - s.t0) / s.h;
  const double theta1 = 1.0 - theta;
  return s.r0 + theta * (s.r1 + theta1 * (s.r2 + theta * (s.r3 + theta1 * s.r4)));
}

}  // namespace affc
