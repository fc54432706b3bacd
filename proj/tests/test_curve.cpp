#include "doctest.h"

#include "affc/curve.hpp"
#include "affc/specialfns.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <random>

using namespace affc;
using std::numbers::pi;

namespace {

RawCurve circle(double r) {
  RawCurve c;
  c.pos = [r](double t) { return PlaneVector(r * std::cos(t), r * std::sin(t)); };
  c.d1 = [r](double t) { return PlaneVector(-r * std::sin(t), r * std::cos(t)); };
  c.d2 = [r](double t) { return PlaneVector(-r * std::cos(t), -r * std::sin(t)); };
  c.d3 = [r](double t) { return PlaneVector(r * std::sin(t), -r * std::cos(t)); };
  c.d4 = [r](double t) { return PlaneVector(r * std::cos(t), r * std::sin(t)); };
  return c;
}

RawCurve ellipse(double a, double b) {
  RawCurve c;
  c.pos = [=](double t) { return PlaneVector(a * std::cos(t), b * std::sin(t)); };
  c.d1 = [=](double t) { return PlaneVector(-a * std::sin(t), b * std::cos(t)); };
  c.d2 = [=](double t) { return PlaneVector(-a * std::cos(t), -b * std::sin(t)); };
  return c;  // higher derivatives by differencing
}

RawCurve moved(const RawCurve& c, const Matrix2& M, const PlaneVector& b) {
  RawCurve m;
  m.pos = [=](double t) -> PlaneVector { return M * c.pos(t) + b; };
  m.d1 = [=](double t) -> PlaneVector { return M * c.d1(t); };
  m.d2 = [=](double t) -> PlaneVector { return M * c.d2(t); };
  return m;
}

Matrix2 random_special(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  Matrix2 M;
  do {
    M << u(rng), u(rng), u(rng), u(rng);
  } while (std::abs(M.determinant()) < 0.2);
  const double d = M.determinant();
  if (d < 0) M.col(0) *= -1;
  return M / std::sqrt(std::abs(d));
}

ScalarFunction random_poly(std::mt19937_64& rng, double bound) {
  std::uniform_real_distribution<double> u(-bound / 3, bound / 3);
  const double a = u(rng), b = u(rng), c = u(rng);
  return [=](double s) { return a + s * (b + s * c); };
}

const double kAlpha = std::pow(2.0, -1.0 / 3.0) * std::pow(5.0, 1.0 / 6.0);

}  // namespace

TEST_CASE("wedge") {
  CHECK(wedge(PlaneVector(1, 0), PlaneVector(0, 1)) == 1.0);
  const PlaneVector v(3.5, -1.25);
  CHECK(wedge(v, v) == 0.0);
  CHECK(wedge(PlaneVector(2, -3), PlaneVector(5, -8)) == -1.0);
  CHECK(wedge(PlaneVector(1, 2), PlaneVector(3, 4)) == -wedge(PlaneVector(3, 4), PlaneVector(1, 2)));
}

TEST_CASE("affine arc length") {
  GraphFunction par{[](double x) { return x * x / 2; }, [](double x) { return x; },
                    [](double) { return 1.0; }, [](double) { return 0.0; },
                    [](double) { return 0.0; }};
  CHECK(std::abs(affine_arclength(graph_curve(par), 0, 5) - 5.0) <= 1e-12);
  CHECK(std::abs(affine_arclength(circle(1.0), 0, 2 * pi) - 2 * pi) <= 1e-12);
  const double r = std::pow(4.0, -0.75);
  CHECK(std::abs(affine_arclength(circle(r), 0, 2 * pi) - 2 * pi * std::pow(r, 2.0 / 3.0)) <= 1e-12);

  RawCurve cw = circle(1.0);
  cw.d1 = [](double t) { return PlaneVector(std::sin(t), std::cos(t)); };  // reversed orientation
  CHECK_THROWS_AS(affine_arclength(cw, 0, 1), OrientationError);

  std::mt19937_64 rng(1);
  const RawCurve e = ellipse(2.0, 0.7);
  const double base = affine_arclength(e, 0.2, 2.9);
  for (int i = 0; i < 20; ++i) {
    const RawCurve m = moved(e, random_special(rng), PlaneVector(1.5, -2));
    CHECK(std::abs(affine_arclength(m, 0.2, 2.9) - base) <= 1e-9 * base);
  }
}

TEST_CASE("unit speed reparameterisation") {
  {
    RawCurve c;
    c.pos = [](double t) { return PlaneVector(2 * t, t * t); };
    c.d1 = [](double t) { return PlaneVector(2, 2 * t); };
    c.d2 = [](double) { return PlaneVector(0, 2); };
    auto u = reparam_unit_speed(c, 0, 3);
    CHECK(std::abs(u.domain().hi - std::cbrt(4.0) * 3) <= 1e-12);
    const double s = 1.1;
    const double t = s / std::cbrt(4.0);
    CHECK((u(s) - PlaneVector(2 * t, t * t)).norm() <= 1e-11);
    auto [speed, structure] = u.invariant_defects();
    CHECK(speed <= 1e-8);
    CHECK(structure <= 1e-6);
    CHECK(std::abs(affine_curvature_at(u, 2.0)) <= 1e-7);
  }
  {
    auto u = reparam_unit_speed(circle(1.0), 0, 2 * pi);
    for (double s : {0.0, 1.0, 4.0}) {
      CHECK((u(s) - PlaneVector(std::cos(s), std::sin(s))).norm() <= 1e-10);
      CHECK(std::abs(affine_curvature_at(u, s) - 1.0) <= 1e-9);
    }
    CHECK(u.invariant_defects().first <= 1e-8);
  }
  for (double r : {0.3, 2.0}) {
    auto u = reparam_unit_speed(circle(r), 0, 3);
    CHECK(std::abs(affine_curvature_at(u, 1.0) - std::pow(r, -4.0 / 3.0)) <= 1e-8);
  }
  {
    // Ellipse with differenced third and fourth derivatives.
    auto u = reparam_unit_speed(ellipse(2.0, 0.5), 0.1, 3.0);
    auto [speed, structure] = u.invariant_defects();
    CHECK(speed <= 1e-8);
    CHECK(structure <= 1e-6);
    // Ellipse with semi-axes a, b has constant curvature (ab)^{-2/3}.
    CHECK(std::abs(u.curvature(0.7) - std::pow(1.0, -2.0 / 3.0)) <= 1e-6);
  }
}

TEST_CASE("curvature from a graph") {
  GraphFunction par{[](double x) { return x * x / 2; }, [](double x) { return x; },
                    [](double) { return 1.0; }, [](double) { return 0.0; },
                    [](double) { return 0.0; }};
  CHECK(curvature_from_graph(par, 0.3) == 0.0);

  // Lower unit semicircle 1 − √(1 − x²).
  GraphFunction circ{
      [](double x) { return 1 - std::sqrt(1 - x * x); },
      [](double x) { return x / std::sqrt(1 - x * x); },
      [](double x) { return std::pow(1 - x * x, -1.5); },
      [](double x) { return 3 * x * std::pow(1 - x * x, -2.5); },
      [](double x) { return (3 + 12 * x * x) * std::pow(1 - x * x, -3.5); }};
  for (double x : {-0.6, 0.0, 0.4, 0.8}) CHECK(std::abs(curvature_from_graph(circ, x) - 1) <= 1e-12);

  // Agreement with the reparameterised graph.
  GraphFunction ex{[](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
                   [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
                   [](double x) { return std::exp(x); }};
  auto u = reparam_unit_speed(graph_curve(ex), -1, 1);
  for (double s : {0.1, 0.5, 1.0}) {
    const double x = u(s)(0);
    CHECK(std::abs(curvature_from_graph(ex, x) - affine_curvature_at(u, s)) <= 1e-6);
  }

  GraphFunction concave = par;
  concave.d2 = [](double) { return -1.0; };
  CHECK_THROWS_AS(curvature_from_graph(concave, 0.0), ConvexityError);

  // x² + k y² − 2y = 0 near the origin: y = (1 − √(1 − k x²))/k.
  for (double k : {-2.0, 0.5, 3.0}) {
    ConicCoefficients q{1, 0, k, 0, -2, 0};
    CHECK(std::abs(conic_curvature(q, PlaneVector(0, 0)) - k) <= 1e-12);
    GraphFunction g{[k](double x) { return (1 - std::sqrt(1 - k * x * x)) / k; },
                    [k](double x) { return x / std::sqrt(1 - k * x * x); },
                    [k](double x) { return std::pow(1 - k * x * x, -1.5); },
                    [k](double x) { return 3 * k * x * std::pow(1 - k * x * x, -2.5); },
                    [k](double x) {
                      return (3 * k + 12 * k * k * x * x) * std::pow(1 - k * x * x, -3.5);
                    }};
    CHECK(std::abs(curvature_from_graph(g, 0.0) - k) <= 1e-12);
    CHECK(std::abs(curvature_from_graph(g, 0.2) - k) <= 1e-10);
  }
}

TEST_CASE("conic curves") {
  // Ellipse x²/4 + y² = 1 at (2, 0): κ = (ab)^{-2/3} = 2^{-2/3}.
  ConicCoefficients e{0.25, 0, 1, 0, 0, -1};
  auto c = conic_curve(e, PlaneVector(2, 0), DomainInterval(-1, 1));
  CHECK(std::abs(c.curvature(0) - std::pow(2.0, -2.0 / 3.0)) <= 1e-12);
  for (double s : {-1.0, 0.3, 1.0}) CHECK(std::abs(e(c(s))) <= 1e-12);
  CHECK(std::abs(wedge(c.d1(0.2), c.d2(0.2)) - 1) <= 1e-12);
  // Unit hyperbola xy = 1 at (1, 1).
  ConicCoefficients h{0, 1, 0, 0, 0, -1};
  auto hc = conic_curve(h, PlaneVector(1, 1), DomainInterval(-2, 2));
  CHECK(hc.curvature(0) < 0);
  for (double s : {-2.0, 0.5, 2.0}) CHECK(std::abs(h(hc(s))) <= 1e-10);
  // Parabola y = x² through (1, 1), rotated coefficients irrelevant: κ = 0.
  ConicCoefficients p{1, 0, 0, 0, -1, 0};
  CHECK(std::abs(conic_curvature(p, PlaneVector(1, 1))) <= 1e-14);
  auto pc = conic_curve(p, PlaneVector(1, 1), DomainInterval(-1, 1));
  CHECK(std::abs(p(pc(0.9))) <= 1e-12);
  CHECK_THROWS_AS(conic_curve(p, PlaneVector(1, 2), DomainInterval(0, 1)), DomainError);
}

TEST_CASE("reconstruction from curvature") {
  {
    AdaptedFrame fr{PlaneVector(1, 2), PlaneVector(2, 1), PlaneVector(1, 1)};
    auto c = reconstruct_from_curvature([](double) { return 0.0; }, DomainInterval(-2, 2), fr);
    for (double s : {-2.0, 0.5, 2.0})
      CHECK((c(s) - (fr.origin + s * fr.tangent + s * s / 2 * fr.normal)).norm() <= 1e-10);
  }
  for (double k : {-3.0, 1.5}) {
    auto c = reconstruct_from_curvature([k](double) { return k; }, DomainInterval(0, 1.2));
    for (double s : {0.3, 1.2}) {
      CHECK(std::abs(c(s)(0) - xbar(k, s)) <= 1e-10);
      CHECK(std::abs(c(s)(1) - ybar(k, s)) <= 1e-10);
    }
  }
  {
    auto c = reconstruct_from_curvature([](double s) { return s; }, DomainInterval(-1, 2));
    for (double s : {-1.0, 0.0, 1.3, 2.0}) CHECK(std::abs(affine_curvature_at(c, s) - s) <= 1e-6);
  }
  std::mt19937_64 rng(17);
  for (int i = 0; i < 20; ++i) {
    auto kappa = random_poly(rng, 4.0);
    auto c = reconstruct_from_curvature(kappa, DomainInterval(0, 2));
    double worst = 0;
    for (int j = 0; j <= 50; ++j) worst = std::max(worst, std::abs(affine_curvature_at(c, j / 25.0) - kappa(j / 25.0)));
    CHECK(worst <= 1e-6);
    CHECK(c.invariant_defects(200).first <= 1e-8);
  }
}

TEST_CASE("adapted frames") {
  auto par = unit_parabola(DomainInterval(-1, 1));
  auto f = adapted_frame(par, 0);
  CHECK(f.origin.norm() == 0.0);
  CHECK(f.tangent == PlaneVector(1, 0));
  CHECK(f.normal == PlaneVector(0, 1));

  auto circ = constant_curvature_curve(1.0, DomainInterval(0, 2 * pi),
                                       {PlaneVector(1, 0), PlaneVector(0, 1), PlaneVector(-1, 0)});
  auto fc = adapted_frame(circ, 0);
  CHECK((fc.tangent - PlaneVector(0, 1)).norm() <= 1e-15);
  CHECK((fc.normal - PlaneVector(-1, 0)).norm() <= 1e-15);
  CHECK((circ(1.0) - PlaneVector(std::cos(1.0), std::sin(1.0))).norm() <= 1e-15);

  std::mt19937_64 rng(2);
  auto c = reconstruct_from_curvature(random_poly(rng, 3), DomainInterval(0, 2));
  for (double s0 : {0.0, 0.7, 1.9}) {
    auto fr = adapted_frame(c, s0);
    CHECK(std::abs(fr.determinant() - 1) <= 1e-9);
    CHECK(fr.to_adapted(c(s0)).norm() <= 1e-14);
    const PlaneVector v1 = fr.vector_to_adapted(c.d1(s0)), v2 = fr.vector_to_adapted(c.d2(s0));
    CHECK((v1 - PlaneVector(1, 0)).norm() <= 1e-12);
    CHECK((v2 - PlaneVector(0, 1)).norm() <= 1e-12);
    CHECK((fr.from_adapted(fr.to_adapted(c(1.0))) - c(1.0)).norm() <= 1e-12);
  }
}

TEST_CASE("area functions") {
  auto par = unit_parabola(DomainInterval(0, 3));
  AreaFunction A = area_function(par, 0, PlaneVector(0, 0));
  CHECK(A(0) == 0.0);
  for (double s : {0.5, 2.0, 3.0}) {
    CHECK(std::abs(A(s) - s * s * s / 12) <= 1e-13);
    CHECK(std::abs(A(s) - abar(0.0, s)) <= 1e-13);
  }
  CHECK(area_ode_residual(par, A) <= 1e-6);

  const double k = -kAlpha * kAlpha;
  auto hyp = constant_curvature_curve(k, DomainInterval(0, 2));
  AreaFunction H = area_function(hyp, 0, hyp(0));
  for (double s : {0.7, 2.0}) CHECK(std::abs(H(s) - abar(k, s)) <= 1e-12);
  CHECK(area_ode_residual(hyp, H) <= 1e-6);
  for (double kk : {-2.0, 0.7, 3.0}) {
    auto cc = constant_curvature_curve(kk, DomainInterval(0, 1.5));
    CHECK(std::abs(area_function(cc, 0, cc(0))(1.5) - abar(kk, 1.5)) <= 1e-12);
  }

  // Two computation paths and the derivative ladder.
  std::vector<AffineCurve> curves = {par, hyp, reparam_unit_speed(ellipse(2, 0.5), 0.1, 2.0)};
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i)
    curves.push_back(reconstruct_from_curvature(random_poly(rng, 3), DomainInterval(0, 2)));
  for (const auto& c : curves) {
    const auto dom = c.domain();
    const PlaneVector p0 = c(dom.lo) + PlaneVector(0.1, -0.2);
    AreaFunction I = area_function(c, dom.lo, p0);
    IVPSolution O = area_function_ode(c, dom.lo, p0);
    double worst = 0;
    for (int j = 0; j <= 10; ++j) {
      const double s = dom.lo + dom.length() * j / 10;
      worst = std::max(worst, std::abs(I(s) - O(s)));
    }
    CHECK(worst <= 1e-8);
    CHECK(area_ode_residual(c, I) <= 1e-5);
    const double s = dom.lo + 0.6 * dom.length(), h = 1e-4;
    CHECK(std::abs((I(s + h) - I(s - h)) / (2 * h) - I.d1(s)) <= 1e-6);
    CHECK(std::abs((I.d1(s + h) - I.d1(s - h)) / (2 * h) - I.d2(s)) <= 1e-6);
  }
}

TEST_CASE("area is invariant under special affine motions") {
  std::mt19937_64 rng(4);
  auto c = reconstruct_from_curvature(random_poly(rng, 2), DomainInterval(0, 2));
  const double base = area_function(c, 0, c(0))(2.0);
  for (int i = 0; i < 20; ++i) {
    const Matrix2 M = random_special(rng);
    const PlaneVector b(0.3 * i, -1);
    auto m = c.transformed(M, b);
    CHECK(std::abs(area_function(m, 0, m(0))(2.0) - base) <= 1e-9 * std::abs(base));
  }
}

TEST_CASE("graphing parameter sets") {
  auto circ = constant_curvature_curve(1.0, DomainInterval(-3, 3));
  auto g = graphing_parameter_set(circ, 0);
  CHECK(std::abs(g.lo + pi / 2) <= 1e-9);
  CHECK(std::abs(g.hi - pi / 2) <= 1e-9);
  auto par = unit_parabola(DomainInterval(-4, 5));
  auto gp = graphing_parameter_set(par, 1);
  CHECK(gp.lo == -4);
  CHECK(gp.hi == 5);
  auto neg = reconstruct_from_curvature([](double s) { return -1 - s * s; }, DomainInterval(-2, 2));
  auto gn = graphing_parameter_set(neg, 0.5);
  CHECK(gn.lo == -2);
  CHECK(gn.hi == 2);
}
