// Convex plane curves in affine arc length: reparameterisation, curvature,
// reconstruction from curvature, adapted frames, area functions and graphing
// intervals.

#ifndef AFFC_CURVE_HPP
#define AFFC_CURVE_HPP

#include "affc/core.hpp"
#include "affc/odekernel.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace affc {

using VectorFunction = std::function<PlaneVector(double)>;

/// A curve in an arbitrary regular parameter t. d3 and d4 may be left empty;
/// they are then obtained by differencing the next lower derivative.
struct RawCurve {
  VectorFunction pos, d1, d2, d3, d4;
};

/// Derivative j (0..4) of a raw curve, differencing where not supplied.
PlaneVector raw_derivative(const RawCurve& c, int j, double t);

/// Unit affine speed curve: c' ∧ c'' = 1 on the domain, c''' = −κ c'.
class AffineCurve {
 public:
  AffineCurve(DomainInterval domain, VectorFunction pos, VectorFunction d1, VectorFunction d2,
              VectorFunction d3, ScalarFunction curvature);

  const DomainInterval& domain() const { return domain_; }
  PlaneVector operator()(double s) const { return pos_(s); }
  PlaneVector position(double s) const { return pos_(s); }
  PlaneVector d1(double s) const { return d1_(s); }
  PlaneVector d2(double s) const { return d2_(s); }
  PlaneVector d3(double s) const { return d3_(s); }
  double curvature(double s) const { return kappa_(s); }
  const ScalarFunction& curvature_function() const { return kappa_; }

  /// Worst |c' ∧ c'' − 1| and |c''' + κ c'| over n samples.
  std::pair<double, double> invariant_defects(int n = 1000) const;

  /// Image under p ↦ M p + b with det M = 1 (curvature is unchanged).
  AffineCurve transformed(const Matrix2& M, const PlaneVector& b) const;

 private:
  DomainInterval domain_;
  VectorFunction pos_, d1_, d2_, d3_;
  ScalarFunction kappa_;
};

/// Special affine frame at p0: tangent ∧ normal = 1.
struct AdaptedFrame {
  PlaneVector origin = PlaneVector::Zero();
  PlaneVector tangent = PlaneVector::UnitX();
  PlaneVector normal = PlaneVector::UnitY();

  Matrix2 basis() const;  // columns tangent, normal
  double determinant() const { return wedge(tangent, normal); }
  /// World point to (ξ, η) with origin ↦ 0, tangent ↦ e1, normal ↦ e2.
  PlaneVector to_adapted(const PlaneVector& p) const;
  PlaneVector from_adapted(const PlaneVector& q) const;
  /// Vectors (no translation).
  PlaneVector vector_to_adapted(const PlaneVector& v) const;
};

/// Frame (c(s0), c'(s0), c''(s0)).
AdaptedFrame adapted_frame(const AffineCurve& c, double s0);

/// Λ = ∫ (c' ∧ c'')^{1/3} dt. Throws OrientationError if c' ∧ c'' <= 0 at a
/// sampled parameter.
double affine_arclength(const RawCurve& c, double t0, double t1);

/// Reparameterises by affine arc length; the result has domain [0, Λ] with
/// s = 0 at t0.
AffineCurve reparam_unit_speed(const RawCurve& c, double t0, double t1);

/// c'' ∧ c''' at s.
double affine_curvature_at(const AffineCurve& c, double s);

/// y = f(x) with derivatives f', f'', f''', f''''.
struct GraphFunction {
  ScalarFunction f, d1, d2, d3, d4;
};

/// κ(x) = −½ ((f'')^{−2/3})''. Throws ConvexityError if f''(x) <= 0.
double curvature_from_graph(const GraphFunction& g, double x);
/// The raw curve x ↦ (x, f(x)).
RawCurve graph_curve(const GraphFunction& g);

/// Closed form p0 + x̄_k(s) t + ȳ_k(s) n with frame (p0, t, n).
AffineCurve constant_curvature_curve(double k, DomainInterval domain,
                                     const AdaptedFrame& frame = {});
/// (s, s²/2).
AffineCurve unit_parabola(DomainInterval domain);

/// Solves c''' = −κ c' with c(s0), c'(s0), c''(s0) taken from `frame`
/// (s0 defaults to 0) in both directions over `domain`.
AffineCurve reconstruct_from_curvature(const ScalarFunction& kappa, DomainInterval domain,
                                       const AdaptedFrame& frame = {}, double s0 = 0.0,
                                       double tol = 1e-12);

/// Conic a x² + b xy + c y² + d x + e y + f = 0 through `point`, as a unit
/// speed curve with s = 0 at the point, oriented so c' ∧ c'' > 0.
struct ConicCoefficients {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
  double operator()(const PlaneVector& p) const;
  PlaneVector gradient(const PlaneVector& p) const;
};
AffineCurve conic_curve(const ConicCoefficients& q, const PlaneVector& point,
                        DomainInterval domain);
/// Affine curvature of the conic at a point on it.
double conic_curvature(const ConicCoefficients& q, const PlaneVector& point);

/// A(s) = ½ ∫_a^s (c(σ) − p0) ∧ c'(σ) dσ.
class AreaFunction {
 public:
  AreaFunction(AffineCurve curve, double a, PlaneVector p0);

  double base() const { return a_; }
  const PlaneVector& apex() const { return p0_; }
  const AffineCurve& curve() const { return curve_; }

  double operator()(double s) const;
  double d1(double s) const;  // ½ (c − p0) ∧ c'
  double d2(double s) const;  // ½ (c − p0) ∧ c''
  double d3(double s) const;  // ½ − κ A'

 private:
  AffineCurve curve_;
  double a_;
  PlaneVector p0_;
};

AreaFunction area_function(const AffineCurve& c, double a, const PlaneVector& p0);

/// The same area as the solution of A''' + κ A' = ½ with the initial data
/// A(a) = 0, A'(a), A''(a) from the integral form.
IVPSolution area_function_ode(const AffineCurve& c, double a, const PlaneVector& p0,
                              double tol = 1e-12);

/// sup over an n-point grid of |A''' + κ A' − ½|, with A''' obtained by
/// central differences of A''.
double area_ode_residual(const AffineCurve& c, const AreaFunction& area, int n = 201);

/// Component of s0 in {s : x'(s) > 0}, x being the first adapted coordinate at
/// c(s0). Endpoints are domain ends or zeros of x' located to 1e-10.
DomainInterval graphing_parameter_set(const AffineCurve& c, double s0);

}  // namespace affc

#endif  // AFFC_CURVE_HPP
