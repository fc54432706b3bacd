#include "affc/odekernel.hpp"

#include "affc/integrator.hpp"
#include "affc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace affc {

// ---------------------------------------------------------------------------
// LinearOperator

LinearOperator::LinearOperator(std::vector<ScalarFunction> coeffs, DomainInterval interval)
    : coeffs_(std::move(coeffs)), interval_(interval) {
  if (coeffs_.empty()) throw ArgumentError("LinearOperator: order must be >= 1");
  // Spot check: coefficients must be finite on the interval.
  constexpr int kSamples = 33;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (!coeffs_[j]) continue;
    for (int i = 0; i < kSamples; ++i) {
      const double s = interval_.lo + interval_.length() * i / (kSamples - 1);
      if (!std::isfinite(coeffs_[j](s)))
        throw ArgumentError("LinearOperator: coefficient a_" + std::to_string(j) +
                            " is not finite at s=" + std::to_string(s));
    }
  }
}

LinearOperator LinearOperator::constant(const std::vector<double>& coeffs,
                                        DomainInterval interval) {
  std::vector<ScalarFunction> fns;
  fns.reserve(coeffs.size());
  for (double c : coeffs) {
    if (c == 0.0)
      fns.emplace_back();
    else
      fns.emplace_back([c](double) { return c; });
  }
  return LinearOperator(std::move(fns), interval);
}

LinearOperator LinearOperator::single_term(int order, int term, ScalarFunction kappa,
                                           DomainInterval interval) {
  if (order < 1 || term < 0 || term >= order)
    throw ArgumentError("single_term: need 0 <= term < order");
  std::vector<ScalarFunction> fns(static_cast<std::size_t>(order));
  fns[static_cast<std::size_t>(term)] = std::move(kappa);
  return LinearOperator(std::move(fns), interval);
}

double LinearOperator::apply_lower(double s, const Eigen::VectorXd& jet) const {
  double acc = 0.0;
  for (int j = 0; j < order(); ++j)
    if (coeffs_[j]) acc += coeffs_[j](s) * jet(j);
  return acc;
}

Eigen::VectorXd LinearOperator::system_rhs(double s, const Eigen::VectorXd& jet,
                                           double forcing) const {
  const int n = order();
  Eigen::VectorXd d(n);
  d.head(n - 1) = jet.tail(n - 1);
  d(n - 1) = forcing - apply_lower(s, jet);
  return d;
}

// ---------------------------------------------------------------------------
// IVPSolution

IVPSolution::IVPSolution(DomainInterval domain, double r, Eigen::VectorXd initial,
                         JetFunction jet)
    : domain_(domain), r_(r), initial_(std::move(initial)), jet_(std::move(jet)) {}

Eigen::VectorXd IVPSolution::jet(double s) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(domain_.lo) + std::abs(domain_.hi));
  if (!domain_.contains(s, slack))
    throw DomainError("IVPSolution: s=" + std::to_string(s) + " outside the solution domain");
  return jet_(domain_.clamp(s));
}

IVPSolution solve_ivp(const LinearOperator& op, const ScalarFunction& forcing, double r,
                      const Eigen::VectorXd& init, double tol) {
  const DomainInterval dom = op.interval();
  if (!dom.contains(r)) throw DomainError("solve_ivp: initial point outside the interval");
  if (init.size() != op.order()) throw ArgumentError("solve_ivp: need one initial value per order");

  IntegratorOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  auto rhs = [&op, &forcing](double s, const Eigen::VectorXd& y) {
    return op.system_rhs(s, y, forcing ? forcing(s) : 0.0);
  };
  auto forward = std::make_shared<DenseTrajectory>(integrate_ode(rhs, r, init, dom.hi, opt));
  auto backward = std::make_shared<DenseTrajectory>(integrate_ode(rhs, r, init, dom.lo, opt));
  return IVPSolution(dom, r, init, [forward, backward, r](double s) {
    return s >= r ? (*forward)(s) : (*backward)(s);
  });
}

// ---------------------------------------------------------------------------
// KernelFn

struct KernelFn::Cache {
  mutable std::mutex mutex;
  std::unordered_map<double, std::shared_ptr<const IVPSolution>> columns;
};

namespace {
constexpr std::size_t kMaxCachedColumns = 50000;
}

KernelFn::KernelFn(LinearOperator op, double tol)
    : op_(std::move(op)), tol_(tol), cache_(std::make_shared<Cache>()) {}

std::size_t KernelFn::cached_columns() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->columns.size();
}

std::shared_ptr<const IVPSolution> KernelFn::column(double r) const {
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->columns.find(r);
    if (it != cache_->columns.end()) return it->second;
  }
  Eigen::VectorXd jet0 = Eigen::VectorXd::Zero(op_.order());
  jet0(op_.order() - 1) = 1.0;
  auto col = std::make_shared<const IVPSolution>(solve_ivp(op_, ScalarFunction{}, r, jet0, tol_));
  std::lock_guard lock(cache_->mutex);
  if (cache_->columns.size() >= kMaxCachedColumns) cache_->columns.clear();
  cache_->columns.emplace(r, col);
  return col;
}

Eigen::VectorXd KernelFn::jet(double s, double r) const { return column(r)->jet(s); }

KernelFn lagrange_kernel(const LinearOperator& op, double tol) { return KernelFn(op, tol); }

IVPSolution solve_via_kernel(const LinearOperator& op, const ScalarFunction& forcing, double r,
                             double tol, double quad_tol) {
  if (!op.interval().contains(r)) throw DomainError("solve_via_kernel: r outside the interval");
  // Column noise must sit well below the quadrature tolerance.
  auto kernel = std::make_shared<KernelFn>(op, std::min(tol, 1e-12));
  ScalarFunction f = forcing ? forcing : ScalarFunction([](double) { return 0.0; });
  const int n = op.order();
  return IVPSolution(op.interval(), r, Eigen::VectorXd::Zero(n),
                     [kernel, f, r, quad_tol](double s) -> Eigen::VectorXd {
                       auto integrand = [&](double t) -> Eigen::VectorXd {
                         return kernel->jet(s, t) * f(t);
                       };
                       return integrate(integrand, r, s, quad_tol);
                     });
}

// ---------------------------------------------------------------------------
// Forward positivity

PositivityReport check_forward_positive(const LinearOperator& op, DomainInterval interval,
                                        int grid_n, double tol) {
  return check_forward_positive(KernelFn(op, 1e-10), interval, grid_n, tol);
}

PositivityReport check_forward_positive(const KernelFn& kernel, DomainInterval interval,
                                        int grid_n, double tol) {
  if (grid_n < 2) throw ArgumentError("check_forward_positive: grid_n must be >= 2");
  const DomainInterval& dom = kernel.op().interval();
  if (interval.lo < dom.lo || interval.hi > dom.hi)
    throw DomainError("check_forward_positive: interval exceeds the operator interval");

  struct Min {
    double value = std::numeric_limits<double>::infinity();
    double s = 0.0, r = 0.0;
  };
  const double h = interval.length() / (grid_n - 1);
  auto node = [&](int i) { return i == grid_n - 1 ? interval.hi : interval.lo + i * h; };
  const LinearOperator& op = kernel.op();
  Eigen::VectorXd jet0 = Eigen::VectorXd::Zero(op.order());
  jet0(op.order() - 1) = 1.0;
  IntegratorOptions opt;
  opt.rtol = kernel.tolerance();
  opt.atol = kernel.tolerance() * 1e-2;

  // Columns are independent; split them over worker threads.
  const int workers =
      std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), 8));
  std::vector<std::future<Min>> parts;
  for (int w = 0; w < workers; ++w) {
    parts.push_back(std::async(std::launch::async, [&, w] {
      Min m;
      for (int i = w; i < grid_n - 1; i += workers) {
        const double r = node(i);
        // Only s > r matters here, so integrate the column forward only.
        const DenseTrajectory col = integrate_ode(
            [&op](double s, const Eigen::VectorXd& y) { return op.system_rhs(s, y, 0.0); }, r,
            jet0, interval.hi, opt);
        for (int j = i + 1; j < grid_n; ++j) {
          const double s = node(j);
          const double v = col(s)(0);
          if (v < m.value) m = {v, s, r};
        }
      }
      return m;
    }));
  }
  Min best;
  for (auto& p : parts) {
    const Min m = p.get();
    if (m.value < best.value) best = m;
  }

  PositivityReport rep;
  rep.interval = interval;
  rep.grid_n = grid_n;
  rep.min_value = best.value;
  rep.min_s = best.s;
  rep.min_r = best.r;
  rep.verdict = best.value >= -tol ? PositivityReport::Verdict::certified_positive_on_grid
                                   : PositivityReport::Verdict::violation;
  return rep;
}

// ---------------------------------------------------------------------------
// Comparison

bool positive_almost_everywhere(const std::vector<double>& values, double tol, double fraction) {
  if (values.empty()) return false;
  std::size_t positive = 0;
  for (double v : values) {
    if (!(v > -tol)) return false;
    if (v > 0.0) ++positive;
  }
  return static_cast<double>(positive) >= fraction * static_cast<double>(values.size());
}

BoundReport compare_solutions(const ScalarFunction& kappa, const ScalarFunction& kappa_bar, int n,
                              int ell, const ScalarFunction& forcing, const Eigen::VectorXd& init,
                              DomainInterval interval, const ComparisonOptions& options) {
  if (ell < 0 || ell >= n) throw ArgumentError("compare_solutions: need 0 <= ell < n");
  BoundReport rep;
  rep.theorem = BoundTheorem::ode_comparison;

  const LinearOperator op = LinearOperator::single_term(n, ell, kappa, interval);
  const LinearOperator op_bar = LinearOperator::single_term(n, ell, kappa_bar, interval);

  // (a) forward positivity of the comparison kernel
  const PositivityReport pos = check_forward_positive(op_bar, interval, options.positivity_grid,
                                                      options.positivity_tol);
  {
    std::ostringstream d;
    d << "min K(s;r) = " << pos.min_value << " at s=" << pos.min_s << ", r=" << pos.min_r;
    rep.hypotheses.push_back({"forward_positive_kernel", pos.positive(), d.str()});
  }

  const IVPSolution y = solve_ivp(op, forcing, interval.lo, init, options.solver_tol);
  const IVPSolution y_bar = solve_ivp(op_bar, forcing, interval.lo, init, options.solver_tol);

  const int m = std::max(2, options.sample_grid);
  std::vector<double> grid(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    grid[i] = i == m - 1 ? interval.hi : interval.lo + interval.length() * i / (m - 1);

  // (b) y^(ℓ) > 0 almost everywhere
  std::vector<double> top;
  top.reserve(grid.size());
  for (double s : grid) top.push_back(y.jet(s)(ell));
  {
    const bool ok = positive_almost_everywhere(top, options.tol);
    const double lo = *std::min_element(top.begin(), top.end());
    rep.hypotheses.push_back(
        {"derivative_positive_ae", ok, "min y^(l) on grid = " + std::to_string(lo)});
  }

  // ordering of κ and κ̄
  bool le = true, ge = true;
  double max_gap = 0.0;
  for (double s : grid) {
    const double d = kappa(s) - kappa_bar(s);
    if (d > 1e-14) le = false;
    if (d < -1e-14) ge = false;
    max_gap = std::max(max_gap, std::abs(d));
  }
  rep.hypotheses.push_back({"curvature_ordered", le || ge,
                            le && ge ? "kappa == kappa_bar"
                                     : (le ? "kappa <= kappa_bar" : (ge ? "kappa >= kappa_bar"
                                                                         : "kappa and kappa_bar cross"))});

  // Worst sample point in the predicted direction.
  double worst = std::numeric_limits<double>::infinity();
  double worst_s = interval.lo, worst_y = 0.0, worst_ybar = 0.0;
  for (double s : grid) {
    const double a = y.value(s), b = y_bar.value(s);
    const double margin = (le || !ge) ? a - b : b - a;
    if (margin < worst) {
      worst = margin;
      worst_s = s;
      worst_y = a;
      worst_ybar = b;
    }
  }
  if (le || !ge) {
    rep.lhs = worst_ybar;
    rep.rhs = worst_y;
    rep.notes.push_back("direction: y >= ybar");
  } else {
    rep.lhs = worst_y;
    rep.rhs = worst_ybar;
    rep.notes.push_back("direction: y <= ybar");
  }
  rep.witness = worst_s;
  settle(rep, options.tol);

  // Equality at the right end forces κ ≡ κ̄.
  const double yb = y.value(interval.hi), ybb = y_bar.value(interval.hi);
  if (std::abs(yb - ybb) <= equality_threshold(ybb)) {
    rep.equality = true;
    const bool same = max_gap <= 1e-6;
    rep.notes.push_back(same ? "equality at right end; kappa == kappa_bar on samples"
                             : "equality at right end but kappa != kappa_bar on samples");
    if (!same && rep.verdict == Verdict::holds) rep.verdict = Verdict::violated;
  }
  return rep;
}

}  // namespace affc
