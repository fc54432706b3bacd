#include "affc/curve.hpp"

#include "affc/integrator.hpp"
#include "affc/quadrature.hpp"
#include "affc/specialfns.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace affc {

namespace {

// Five-point stencils; h balances truncation against rounding.
PlaneVector first_difference(const VectorFunction& f, double t) {
  const double h = 1e-3 * std::max(1.0, std::abs(t));
  return (f(t - 2 * h) - 8.0 * f(t - h) + 8.0 * f(t + h) - f(t + 2 * h)) / (12.0 * h);
}

PlaneVector second_difference(const VectorFunction& f, double t) {
  const double h = 3e-3 * std::max(1.0, std::abs(t));
  return (-f(t - 2 * h) + 16.0 * f(t - h) - 30.0 * f(t) + 16.0 * f(t + h) - f(t + 2 * h)) /
         (12.0 * h * h);
}

}  // namespace

PlaneVector raw_derivative(const RawCurve& c, int j, double t) {
  switch (j) {
    case 0: return c.pos(t);
    case 1: return c.d1(t);
    case 2: return c.d2(t);
    case 3: return c.d3 ? c.d3(t) : first_difference(c.d2, t);
    case 4:
      if (c.d4) return c.d4(t);
      if (c.d3) return first_difference(c.d3, t);
      return second_difference(c.d2, t);
    default: throw ArgumentError("raw_derivative: order must be 0..4");
  }
}

// ---------------------------------------------------------------------------
// AffineCurve

AffineCurve::AffineCurve(DomainInterval domain, VectorFunction pos, VectorFunction d1,
                         VectorFunction d2, VectorFunction d3, ScalarFunction curvature)
    : domain_(domain),
      pos_(std::move(pos)),
      d1_(std::move(d1)),
      d2_(std::move(d2)),
      d3_(std::move(d3)),
      kappa_(std::move(curvature)) {
  if (!kappa_) {
    auto d2f = d2_, d3f = d3_;
    kappa_ = [d2f, d3f](double s) { return wedge(d2f(s), d3f(s)); };
  }
}

std::pair<double, double> AffineCurve::invariant_defects(int n) const {
  double speed = 0.0, structure = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? domain_.lo : domain_.lo + domain_.length() * i / (n - 1);
    const PlaneVector a = d1(s), b = d2(s), c = d3(s);
    speed = std::max(speed, std::abs(wedge(a, b) - 1.0));
    structure = std::max(structure, (c + curvature(s) * a).lpNorm<Eigen::Infinity>());
  }
  return {speed, structure};
}

AffineCurve AffineCurve::transformed(const Matrix2& M, const PlaneVector& b) const {
  if (std::abs(M.determinant() - 1.0) > 1e-12)
    throw ArgumentError("transformed: the motion must have determinant 1");
  auto self = std::make_shared<AffineCurve>(*this);
  return AffineCurve(
      domain_, [self, M, b](double s) -> PlaneVector { return M * self->position(s) + b; },
      [self, M](double s) -> PlaneVector { return M * self->d1(s); },
      [self, M](double s) -> PlaneVector { return M * self->d2(s); },
      [self, M](double s) -> PlaneVector { return M * self->d3(s); }, kappa_);
}

// ---------------------------------------------------------------------------
// Frames

Matrix2 AdaptedFrame::basis() const {
  Matrix2 m;
  m.col(0) = tangent;
  m.col(1) = normal;
  return m;
}

PlaneVector AdaptedFrame::vector_to_adapted(const PlaneVector& v) const {
  const double det = determinant();
  return PlaneVector(wedge(v, normal) / det, wedge(tangent, v) / det);
}

PlaneVector AdaptedFrame::to_adapted(const PlaneVector& p) const {
  return vector_to_adapted(p - origin);
}

PlaneVector AdaptedFrame::from_adapted(const PlaneVector& q) const {
  return origin + q(0) * tangent + q(1) * normal;
}

AdaptedFrame adapted_frame(const AffineCurve& c, double s0) {
  if (!c.domain().contains(s0)) throw DomainError("adapted_frame: s0 outside the domain");
  return {c.position(s0), c.d1(s0), c.d2(s0)};
}

// ---------------------------------------------------------------------------
// Arc length and reparameterisation

double affine_arclength(const RawCurve& c, double t0, double t1) {
  if (!(t0 <= t1)) throw ArgumentError("affine_arclength: need t0 <= t1");
  auto sigma = [&c](double t) {
    const double w = wedge(c.d1(t), c.d2(t));
    if (!(w > 0.0))
      throw OrientationError("c' ^ c'' = " + std::to_string(w) + " <= 0 at t=" + std::to_string(t));
    return w;
  };
  constexpr int kSamples = 257;
  for (int i = 0; i < kSamples; ++i) sigma(t0 + (t1 - t0) * i / (kSamples - 1));
  return integrate([&](double t) { return std::cbrt(sigma(t)); }, t0, t1, 1e-13);
}

AffineCurve reparam_unit_speed(const RawCurve& raw, double t0, double t1) {
  const double length = affine_arclength(raw, t0, t1);
  auto c = std::make_shared<const RawCurve>(raw);

  IntegratorOptions opt;
  opt.rtol = 1e-13;
  opt.atol = 1e-14;
  auto rhs = [&c](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(1);
    d(0) = 1.0 / std::cbrt(wedge(c->d1(y(0)), c->d2(y(0))));
    return d;
  };
  auto traj = std::make_shared<DenseTrajectory>(
      integrate_ode(rhs, 0.0, Eigen::VectorXd::Constant(1, t0), length, opt));
  const DomainInterval tdom(t0, t1);
  auto param = [traj, tdom](double s) { return tdom.clamp((*traj)(s)(0)); };

  struct Jet {
    PlaneVector c1, c2, c3, c4;
    double phi, phi_t, phi_tt;
  };
  auto jet = [c](double t) {
    Jet j;
    j.c1 = c->d1(t);
    j.c2 = c->d2(t);
    j.c3 = raw_derivative(*c, 3, t);
    j.c4 = raw_derivative(*c, 4, t);
    const double sigma = wedge(j.c1, j.c2);
    const double sigma_t = wedge(j.c1, j.c3);
    const double sigma_tt = wedge(j.c2, j.c3) + wedge(j.c1, j.c4);
    j.phi = std::cbrt(sigma);
    j.phi_t = sigma_t / (3.0 * j.phi * j.phi);
    j.phi_tt = sigma_tt / (3.0 * j.phi * j.phi) - 2.0 * sigma_t * j.phi_t / (3.0 * sigma);
    return j;
  };
  auto d1 = [c, param](double s) -> PlaneVector {
    const double t = param(s);
    return c->d1(t) / std::cbrt(wedge(c->d1(t), c->d2(t)));
  };
  auto d2 = [jet, param](double s) -> PlaneVector {
    const Jet j = jet(param(s));
    const double p = j.phi;
    return j.c2 / (p * p) - j.c1 * j.phi_t / (p * p * p);
  };
  auto d3 = [jet, param](double s) -> PlaneVector {
    const Jet j = jet(param(s));
    const double p = j.phi, p3 = p * p * p, p4 = p3 * p, p5 = p4 * p;
    return j.c3 / p3 - 3.0 * j.c2 * j.phi_t / p4 - j.c1 * j.phi_tt / p4 +
           3.0 * j.c1 * j.phi_t * j.phi_t / p5;
  };
  auto pos = [c, param](double s) -> PlaneVector { return c->pos(param(s)); };
  return AffineCurve(DomainInterval(0.0, length), pos, d1, d2, d3, {});
}

double affine_curvature_at(const AffineCurve& c, double s) {
  if (!c.domain().contains(s, 1e-12 * std::max(1.0, c.domain().length())))
    throw DomainError("affine_curvature_at: s outside the domain");
  return wedge(c.d2(s), c.d3(s));
}

// ---------------------------------------------------------------------------
// Graphs

double curvature_from_graph(const GraphFunction& g, double x) {
  const double f2 = g.d2(x);
  if (!(f2 > 0.0))
    throw ConvexityError("f''(x) = " + std::to_string(f2) + " <= 0 at x=" + std::to_string(x));
  const double f3 = g.d3(x), f4 = g.d4(x);
  // −½((f'')^{−2/3})'' expanded.
  return f4 / (3.0 * std::pow(f2, 5.0 / 3.0)) - 5.0 * f3 * f3 / (9.0 * std::pow(f2, 8.0 / 3.0));
}

RawCurve graph_curve(const GraphFunction& g) {
  RawCurve c;
  c.pos = [g](double x) { return PlaneVector(x, g.f(x)); };
  c.d1 = [g](double x) { return PlaneVector(1.0, g.d1(x)); };
  c.d2 = [g](double x) { return PlaneVector(0.0, g.d2(x)); };
  if (g.d3) c.d3 = [g](double x) { return PlaneVector(0.0, g.d3(x)); };
  if (g.d4) c.d4 = [g](double x) { return PlaneVector(0.0, g.d4(x)); };
  return c;
}

// ---------------------------------------------------------------------------
// Constant curvature and reconstruction

AffineCurve constant_curvature_curve(double k, DomainInterval domain, const AdaptedFrame& frame) {
  if (std::abs(frame.determinant() - 1.0) > 1e-10)
    throw ArgumentError("constant_curvature_curve: frame must satisfy tangent ^ normal = 1");
  const PlaneVector p = frame.origin, t = frame.tangent, n = frame.normal;
  return AffineCurve(
      domain, [=](double s) -> PlaneVector { return p + xbar(k, s) * t + ybar(k, s) * n; },
      [=](double s) -> PlaneVector { return ck(k, s) * t + sk(k, s) * n; },
      [=](double s) -> PlaneVector { return -k * sk(k, s) * t + ck(k, s) * n; },
      [=](double s) -> PlaneVector { return -k * (ck(k, s) * t + sk(k, s) * n); },
      [k](double) { return k; });
}

AffineCurve unit_parabola(DomainInterval domain) { return constant_curvature_curve(0.0, domain); }

AffineCurve reconstruct_from_curvature(const ScalarFunction& kappa, DomainInterval domain,
                                       const AdaptedFrame& frame, double s0, double tol) {
  if (!domain.contains(s0)) throw DomainError("reconstruct_from_curvature: s0 outside the domain");
  if (std::abs(frame.determinant() - 1.0) > 1e-10)
    throw ArgumentError("reconstruct_from_curvature: frame must satisfy tangent ^ normal = 1");
  Eigen::VectorXd y0(6);
  y0 << frame.origin, frame.tangent, frame.normal;
  IntegratorOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  auto rhs = [&kappa](double s, const Eigen::VectorXd& y) {
    Eigen::VectorXd d(6);
    d.segment<2>(0) = y.segment<2>(2);
    d.segment<2>(2) = y.segment<2>(4);
    d.segment<2>(4) = -kappa(s) * y.segment<2>(2);
    return d;
  };
  auto fwd = std::make_shared<DenseTrajectory>(integrate_ode(rhs, s0, y0, domain.hi, opt));
  auto bwd = std::make_shared<DenseTrajectory>(integrate_ode(rhs, s0, y0, domain.lo, opt));
  auto state = [fwd, bwd, s0, domain](double s) -> Eigen::VectorXd {
    s = domain.clamp(s);
    return s >= s0 ? (*fwd)(s) : (*bwd)(s);
  };
  return AffineCurve(
      domain, [state](double s) -> PlaneVector { return state(s).segment<2>(0); },
      [state](double s) -> PlaneVector { return state(s).segment<2>(2); },
      [state](double s) -> PlaneVector { return state(s).segment<2>(4); },
      [state, kappa](double s) -> PlaneVector { return -kappa(s) * state(s).segment<2>(2); },
      kappa);
}

// ---------------------------------------------------------------------------
// Conics

double ConicCoefficients::operator()(const PlaneVector& p) const {
  const double x = p(0), y = p(1);
  return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
}

PlaneVector ConicCoefficients::gradient(const PlaneVector& p) const {
  return PlaneVector(2 * a * p(0) + b * p(1) + d, b * p(0) + 2 * c * p(1) + e);
}

namespace {

struct ConicLocal {
  PlaneVector T, N;  // local graph p + uT + w(u)N
  double w2, w3, w4;  // Taylor coefficients of w
  double det;         // T ∧ N
};

// Taylor expansion of the conic as a graph over its tangent line at p.
ConicLocal conic_local(const ConicCoefficients& q, const PlaneVector& p) {
  const double scale = std::max({std::abs(q.a), std::abs(q.b), std::abs(q.c), std::abs(q.d),
                                 std::abs(q.e), std::abs(q.f), 1e-300}) *
                       (1.0 + p.squaredNorm());
  if (std::abs(q(p)) > 1e-9 * scale) throw DomainError("conic: the point is not on the conic");
  const PlaneVector g = q.gradient(p);
  const double gn = g.norm();
  if (gn <= 1e-12 * scale) throw DomainError("conic: singular point");
  auto Q = [&q](const PlaneVector& v) {
    return q.a * v(0) * v(0) + q.b * v(0) * v(1) + q.c * v(1) * v(1);
  };
  auto B = [&q](const PlaneVector& v, const PlaneVector& w) {
    return 2 * q.a * v(0) * w(0) + q.b * (v(0) * w(1) + v(1) * w(0)) + 2 * q.c * v(1) * w(1);
  };
  ConicLocal L;
  L.T = PlaneVector(g(1), -g(0)) / gn;
  L.N = g / (gn * gn);
  double gamma = 1.0;
  if (Q(L.T) > 0) {  // bend towards +N
    L.T = -L.T;
    L.N = -L.N;
    gamma = -1.0;
  }
  const double qt = Q(L.T);
  if (std::abs(qt) <= 1e-14 * scale) throw DomainError("conic: degenerate (straight) at the point");
  // 0 = γ w + u² Q(T) + u w B(T, N) + w² Q(N)
  const double bt = B(L.T, L.N), qn = Q(L.N);
  L.w2 = -qt / gamma;
  L.w3 = -bt * L.w2 / gamma;
  L.w4 = -(bt * L.w3 + qn * L.w2 * L.w2) / gamma;
  L.det = wedge(L.T, L.N);
  return L;
}

}  // namespace

double conic_curvature(const ConicCoefficients& q, const PlaneVector& point) {
  const ConicLocal L = conic_local(q, point);
  const double f2 = 2 * L.w2, f3 = 6 * L.w3, f4 = 24 * L.w4;
  const double kg =
      f4 / (3.0 * std::pow(f2, 5.0 / 3.0)) - 5.0 * f3 * f3 / (9.0 * std::pow(f2, 8.0 / 3.0));
  return kg / std::cbrt(L.det * L.det);
}

AffineCurve conic_curve(const ConicCoefficients& q, const PlaneVector& point,
                        DomainInterval domain) {
  const ConicLocal L = conic_local(q, point);
  const double f2 = 2 * L.w2, f3 = 6 * L.w3;
  const double sigma = f2 * L.det;
  const double phi = std::cbrt(sigma);
  AdaptedFrame frame;
  frame.origin = point;
  frame.tangent = L.T / phi;
  frame.normal = f2 * L.N / (phi * phi) - L.T * (f3 * L.det) / (3.0 * std::pow(phi, 5));
  return constant_curvature_curve(conic_curvature(q, point), domain, frame);
}

// ---------------------------------------------------------------------------
// Area

AreaFunction::AreaFunction(AffineCurve curve, double a, PlaneVector p0)
    : curve_(std::move(curve)), a_(a), p0_(std::move(p0)) {
  if (!curve_.domain().contains(a_)) throw DomainError("area_function: base outside the domain");
}

double AreaFunction::operator()(double s) const {
  if (s == a_) return 0.0;
  auto f = [this](double t) { return 0.5 * wedge(curve_.position(t) - p0_, curve_.d1(t)); };
  return integrate(f, a_, s, 1e-13);
}

double AreaFunction::d1(double s) const {
  return 0.5 * wedge(curve_.position(s) - p0_, curve_.d1(s));
}

double AreaFunction::d2(double s) const {
  return 0.5 * wedge(curve_.position(s) - p0_, curve_.d2(s));
}

double AreaFunction::d3(double s) const { return 0.5 - curve_.curvature(s) * d1(s); }

AreaFunction area_function(const AffineCurve& c, double a, const PlaneVector& p0) {
  return AreaFunction(c, a, p0);
}

IVPSolution area_function_ode(const AffineCurve& c, double a, const PlaneVector& p0,
                              double tol) {
  const AreaFunction A(c, a, p0);
  const LinearOperator op =
      LinearOperator::single_term(3, 1, c.curvature_function(), c.domain());
  return solve_ivp(op, [](double) { return 0.5; }, a, Eigen::Vector3d(0.0, A.d1(a), A.d2(a)),
                   tol);
}

double area_ode_residual(const AffineCurve& c, const AreaFunction& area, int n) {
  const DomainInterval dom = c.domain();
  const double h = 1e-4 * std::max(1.0, dom.length());
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = n == 1 ? dom.lo : dom.lo + dom.length() * i / (n - 1);
    double third;
    if (s - h < dom.lo)
      third = (-3 * area.d2(s) + 4 * area.d2(s + h) - area.d2(s + 2 * h)) / (2 * h);
    else if (s + h > dom.hi)
      third = (3 * area.d2(s) - 4 * area.d2(s - h) + area.d2(s - 2 * h)) / (2 * h);
    else
      third = (area.d2(s + h) - area.d2(s - h)) / (2 * h);
    worst = std::max(worst, std::abs(third + c.curvature(s) * area.d1(s) - 0.5));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Graphing interval

DomainInterval graphing_parameter_set(const AffineCurve& c, double s0) {
  const DomainInterval dom = c.domain();
  if (!dom.contains(s0)) throw DomainError("graphing_parameter_set: s0 outside the domain");
  const PlaneVector n0 = c.d2(s0);
  auto xprime = [&](double s) { return wedge(c.d1(s), n0); };  // tangent ∧ normal = 1
  const double step = 1e-3 * std::max(dom.length(), 1e-12);

  auto boundary = [&](double dir) {
    double inside = s0;
    while (true) {
      const double next = std::clamp(inside + dir * step, dom.lo, dom.hi);
      if (next == inside) return inside;
      if (!(xprime(next) > 0.0)) {
        double a = inside, b = next;  // x'(a) > 0 >= x'(b)
        while (std::abs(b - a) > 1e-10) {
          const double m = 0.5 * (a + b);
          (xprime(m) > 0.0 ? a : b) = m;
        }
        return 0.5 * (a + b);
      }
      inside = next;
    }
  };
  return DomainInterval(boundary(-1.0), boundary(1.0));
}

}  // namespace affc
