// Monic linear ODE initial-value problems: direct solution with dense output,
// Lagrange kernels, kernel-integral solutions, forward-positivity checks and
// the order-preserving comparison for y^(n) + κ y^(ℓ) = f.

#ifndef AFFC_ODEKERNEL_HPP
#define AFFC_ODEKERNEL_HPP

#include "affc/core.hpp"
#include "affc/report.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <vector>

namespace affc {

using ScalarFunction = std::function<double(double)>;

/// D y = y^(n) + Σ_{j<n} a_j(s) y^(j) on an interval.
class LinearOperator {
 public:
  LinearOperator(std::vector<ScalarFunction> coeffs, DomainInterval interval);

  /// Constant coefficients a_0..a_{n-1}.
  static LinearOperator constant(const std::vector<double>& coeffs, DomainInterval interval);
  /// y^(order) + kappa(s) y^(term).
  static LinearOperator single_term(int order, int term, ScalarFunction kappa,
                                    DomainInterval interval);

  int order() const { return static_cast<int>(coeffs_.size()); }
  const DomainInterval& interval() const { return interval_; }
  double coefficient(int j, double s) const { return coeffs_[j] ? coeffs_[j](s) : 0.0; }

  /// Σ a_j(s) jet_j.
  double apply_lower(double s, const Eigen::VectorXd& jet) const;
  /// Derivative of the first-order system state (y, ..., y^(n-1)) under D y = f.
  Eigen::VectorXd system_rhs(double s, const Eigen::VectorXd& jet, double forcing) const;

 private:
  std::vector<ScalarFunction> coeffs_;  // empty function == zero coefficient
  DomainInterval interval_;
};

/// Solution of an IVP with evaluable jet (y, y', ..., y^(n-1)).
class IVPSolution {
 public:
  using JetFunction = std::function<Eigen::VectorXd(double)>;

  IVPSolution(DomainInterval domain, double r, Eigen::VectorXd initial, JetFunction jet);

  const DomainInterval& domain() const { return domain_; }
  double initial_point() const { return r_; }
  const Eigen::VectorXd& initial_values() const { return initial_; }
  int order() const { return static_cast<int>(initial_.size()); }

  Eigen::VectorXd jet(double s) const;
  double value(double s) const { return jet(s)(0); }
  double operator()(double s) const { return value(s); }

 private:
  DomainInterval domain_;
  double r_;
  Eigen::VectorXd initial_;
  JetFunction jet_;
};

/// Solves D y = forcing with y^(j)(r) = init_j on the operator's interval.
/// `tol` is the integrator's relative tolerance (absolute tolerance tol/100).
IVPSolution solve_ivp(const LinearOperator& op, const ScalarFunction& forcing, double r,
                      const Eigen::VectorXd& init, double tol = 1e-10);

/// K(s; r) for a linear operator. Columns s ↦ K(s; r) are solved on demand
/// over the whole operator interval and memoised by r; copies share the cache,
/// which is internally synchronised.
class KernelFn {
 public:
  KernelFn(LinearOperator op, double tol);

  double operator()(double s, double r) const { return jet(s, r)(0); }
  /// (∂^j K/∂s^j)(s; r) for j = 0..n-1.
  Eigen::VectorXd jet(double s, double r) const;
  const LinearOperator& op() const { return op_; }
  double tolerance() const { return tol_; }
  std::size_t cached_columns() const;

 private:
  struct Cache;
  std::shared_ptr<const IVPSolution> column(double r) const;

  LinearOperator op_;
  double tol_;
  std::shared_ptr<Cache> cache_;
};

KernelFn lagrange_kernel(const LinearOperator& op, double tol = 1e-10);

/// y(s) = ∫_r^s K(s; t) f(t) dt, the zero-data solution of D y = f, with
/// derivatives y^(j)(s) = ∫_r^s ∂^j K(s; t) f(t) dt. Each evaluation runs an
/// adaptive Gauss-Kronrod quadrature (absolute tolerance `quad_tol`).
IVPSolution solve_via_kernel(const LinearOperator& op, const ScalarFunction& forcing, double r,
                             double tol = 1e-10, double quad_tol = 1e-11);

struct PositivityReport {
  enum class Verdict { certified_positive_on_grid, violation };

  DomainInterval interval;
  int grid_n = 0;
  double min_value = 0.0;
  double min_s = 0.0;  // location of the smallest K(s; r), s > r
  double min_r = 0.0;
  Verdict verdict = Verdict::certified_positive_on_grid;

  bool positive() const { return verdict == Verdict::certified_positive_on_grid; }
};

/// Samples K(s; r) on a grid_n x grid_n grid of `interval`, s > r.
PositivityReport check_forward_positive(const LinearOperator& op, DomainInterval interval,
                                        int grid_n = 201, double tol = 1e-10);
PositivityReport check_forward_positive(const KernelFn& kernel, DomainInterval interval,
                                        int grid_n = 201, double tol = 1e-10);

struct ComparisonOptions {
  double tol = 1e-7;           // slack for y >= ȳ
  double positivity_tol = 1e-10;
  int positivity_grid = 201;
  int sample_grid = 401;
  double solver_tol = 1e-10;
};

/// Compares y^(n) + κ y^(ℓ) = f against ȳ^(n) + κ̄ ȳ^(ℓ) = f with shared
/// initial data at interval.lo. Hypotheses checked and recorded: forward
/// positivity of the κ̄ kernel, y^(ℓ) > 0 almost everywhere, and a pointwise
/// ordering of κ and κ̄. κ <= κ̄ must give y >= ȳ; κ >= κ̄ must give y <= ȳ.
/// The report's lhs/rhs are the two sides at the worst sample point.
BoundReport compare_solutions(const ScalarFunction& kappa, const ScalarFunction& kappa_bar, int n,
                              int ell, const ScalarFunction& forcing, const Eigen::VectorXd& init,
                              DomainInterval interval, const ComparisonOptions& options = {});

/// Checks "positive almost everywhere" on a sample: values > -tol everywhere
/// and > 0 on at least `fraction` of the points.
bool positive_almost_everywhere(const std::vector<double>& values, double tol,
                                double fraction = 0.99);

}  // namespace affc

#endif  // AFFC_ODEKERNEL_HPP
