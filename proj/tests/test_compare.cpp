#include "doctest.h"

#include "affc/compare.hpp"
#include "affc/specialfns.hpp"

#include <cmath>
#include <numbers>

using namespace affc;

namespace {
const double kAlpha = std::pow(2.0, -1.0 / 3.0) * std::pow(5.0, 1.0 / 6.0);
const double kAbarM1At2 = 0.81343020392350938383;

ScalarFunction constant_fn(double c) {
  return [c](double) { return c; };
}

CompareOptions fast() {
  CompareOptions o;
  o.positivity_grid = 41;
  o.sample_grid = 201;
  return o;
}
}  // namespace

TEST_CASE("area comparison") {
  auto par = unit_parabola(DomainInterval(0, 2));
  auto r = area_compare(par, constant_fn(-1), 2.0, fast());
  CHECK(r.holds());
  CHECK(std::abs(r.lhs - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(r.rhs - kAbarM1At2) <= 1e-9);
  CHECK_FALSE(r.equality);

  auto same = area_compare(par, constant_fn(0), 2.0, fast());
  CHECK(same.holds());
  CHECK(same.equality);

  const double k = -kAlpha * kAlpha;
  auto hyp = constant_curvature_curve(k, DomainInterval(0, 1));
  auto rh = area_compare(hyp, constant_fn(0), 1.0, fast());
  CHECK(rh.holds());
  CHECK(std::abs(rh.lhs - 1.0 / 12.0) <= 1e-10);
  CHECK(rh.rhs > 1.0 / 12.0);

  // Crossing curvatures: no ordering, no conclusion.
  auto cross = reconstruct_from_curvature([](double s) { return s - 1; }, DomainInterval(0, 2));
  CHECK(area_compare(cross, constant_fn(0), 2.0, fast()).verdict == Verdict::hypotheses_failed);
}

TEST_CASE("area bounds") {
  auto [a, b] = area_bounds(0, 0, 1);
  CHECK(a == b);
  CHECK(std::abs(a - 1.0 / 12) <= 1e-16);
  auto [c, d] = area_bounds(-1, 0, 2);
  CHECK(std::abs(c - 2.0 / 3) <= 1e-15);
  CHECK(std::abs(d - kAbarM1At2) <= 1e-14);
  auto [e, f] = area_bounds(0, 1, 1);
  CHECK(std::abs(e - (1 - std::sin(1.0)) / 2) <= 1e-15);
  CHECK(std::abs(f - 1.0 / 12) <= 1e-16);
  CHECK_THROWS_AS(area_bounds(1, 0, 1), ArgumentError);

  auto cc = constant_curvature_curve(-0.5, DomainInterval(0, 2));
  auto r = area_bounds_check(cc, -0.5, 0.3, 2.0, fast());
  CHECK(r.holds());
  CHECK(r.equality);
  auto r2 = area_bounds_check(cc, -0.4, 0.3, 2.0, fast());
  CHECK(r2.verdict == Verdict::hypotheses_failed);
}

TEST_CASE("coordinate bounds") {
  for (double k : {-1.0, 0.0, 0.5}) {
    auto c = constant_curvature_curve(k, DomainInterval(-1, 1));
    auto r = coord_bounds_check(c, 0, k, k, 1, fast());
    CHECK(r.holds());
    CHECK(r.equality);
  }
  auto par = unit_parabola(DomainInterval(-1, 1));
  auto r = coord_bounds_check(par, 0, -1, 1, 1, fast());
  CHECK(r.holds());
  CHECK_FALSE(r.equality);

  const double k0 = -kAlpha * kAlpha;
  auto hyp = constant_curvature_curve(k0, DomainInterval(-1.5, 1.5));
  auto rh = coord_bounds_check(hyp, 0, k0, 0, 1.5, fast());
  CHECK(rh.holds());
  CHECK(rh.equality);
  bool confirmed = false;
  for (const auto& n : rh.notes)
    if (n.find("confirmed") != std::string::npos) confirmed = true;
  CHECK(confirmed);

  // k1 too large for the window.
  auto big = constant_curvature_curve(2.0, DomainInterval(-1.5, 1.5));
  CHECK(coord_bounds_check(big, 0, 2, 2, 1.5, fast()).verdict == Verdict::hypotheses_failed);
  // Perturbed curvature does not trip the equality flag.
  auto pert = reconstruct_from_curvature([](double s) { return 0.01 + 0.0 * s; }, DomainInterval(-1, 1));
  auto rp = coord_bounds_check(pert, 0, 0, 0.02, 1, fast());
  CHECK(rp.holds());
  CHECK_FALSE(rp.equality);
}

TEST_CASE("triangle bounds") {
  CHECK(std::abs(triangle_bound_arc(0, 1) - 1.0 / 12) <= 1e-16);
  CHECK(std::abs(triangle_bound_arc(-1, 2) - kAbarM1At2) <= 1e-14);
  CHECK(std::abs(triangle_bound_rect(0, 2) - 0.5) <= 1e-16);
  CHECK(triangle_bound_rect(0, 2) < triangle_bound_arc(0, 2));

  auto par = unit_parabola(DomainInterval(0, 3));
  auto r = verify_triangle_bound(par, {0, 1, 3}, TriangleBoundKind::arc);
  CHECK(r.holds());
  CHECK(std::abs(r.lhs - 1.5) <= 1e-14);
  CHECK(std::abs(r.rhs - 2.25) <= 1e-14);

  // Equality witness: constant curvature arc, vertices at ends and midpoint.
  for (double k : {-2.0, 0.0, 0.8}) {
    auto c = constant_curvature_curve(k, DomainInterval(-1, 1));
    auto e = verify_triangle_bound(c, {-1, 0, 1}, TriangleBoundKind::rectangle);
    CHECK(e.holds());
    CHECK(e.equality);
    CHECK(std::abs(e.lhs - hk(k, 1.0)) <= 1e-12);
  }

  // Hyperbola arc through (1,0), (1,-1), (2,-3): area 1/2 equals the rectangle bound.
  const double k0 = -kAlpha * kAlpha;
  const double L = std::asinh(std::sqrt(5.0) / 2) / kAlpha;
  auto hyp = constant_curvature_curve(k0, DomainInterval(0, 2 * L));
  auto rh = verify_triangle_bound(hyp, {0, L, 2 * L}, TriangleBoundKind::rectangle);
  CHECK(std::abs(rh.lhs - 0.5) <= 1e-12);
  CHECK(std::abs(rh.rhs - 0.5) <= 1e-12);
  CHECK(rh.equality);

  // Rectangle bound needs k1 <= (π/Λ)².
  auto circ = constant_curvature_curve(1.0, DomainInterval(0, 4));
  CHECK(verify_triangle_bound(circ, {0, 1, 2}, TriangleBoundKind::rectangle).verdict ==
        Verdict::hypotheses_failed);
  CHECK_THROWS_AS(verify_triangle_bound(circ, {1, 0, 2}, TriangleBoundKind::arc), ArgumentError);
}

TEST_CASE("sharpness ratio of the arc bound") {
  // Exact ratio − 1 equals −(s_k(L) − L)/(s_k(L) c_k(L) − L) with L = Λ/2.
  for (double k0 : {-25.0, -4.0, -1.0}) {
    const double L = 1.0, x = std::sqrt(-k0) * L;
    const double closed = -(std::sinh(x) - x) / (std::sinh(x) * std::cosh(x) - x);
    CHECK(std::abs(triangle_ratio_exact(k0, 2 * L) - closed) <= 1e-12);
    CHECK(triangle_ratio_exact(k0, 2 * L) < 0);
  }
  // Its true large-|k0| behaviour is −2e^{−x}.
  const double x = std::sqrt(400.0);
  const double ratio = triangle_ratio_exact(-400.0, 2.0);
  CHECK(std::abs(ratio / (-2 * std::exp(-x)) - 1) <= 1e-6);
}

TEST_CASE("sweeps") {
  auto opt = fast();
  for (const auto& r : sweep_area_comparison(30, 0, 2.0, opt)) CHECK(r.holds());
  auto band = sweep_curvature_band(20, 1, -2.0, 1.0, 1.0, opt);
  for (const auto& r : band.sandwich) CHECK(r.holds());
  for (const auto& r : band.rectangle) CHECK(r.holds());
  auto c = reconstruct_from_curvature([](double s) { return -1 + 0.3 * std::sin(3 * s); },
                                      DomainInterval(0, 2));
  int rect = 0;
  for (const auto& r : sweep_triangles(c, 200, 3, opt)) {
    CHECK(r.verdict != Verdict::violated);
    if (r.theorem == BoundTheorem::triangle_in_rectangle && r.holds()) ++rect;
  }
  CHECK(rect == 200);
  // Same seed, same results.
  auto a = sweep_area_comparison(6, 9, 2.0, opt), b = sweep_area_comparison(6, 9, 2.0, opt);
  for (int i = 0; i < 6; ++i) CHECK(a[i].rhs == b[i].rhs);
}
