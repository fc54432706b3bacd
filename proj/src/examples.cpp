#include "affc/examples.hpp"

#include <cmath>
#include <numbers>

namespace affc {

namespace {

// Flips v2 when v1 ∧ v2 < 0 so the curve is positively oriented.
Lattice oriented(const Lattice& lat, std::vector<std::string>& notes) {
  if (wedge(lat.v1(), lat.v2()) > 0.0) return lat;
  notes.push_back("v1 ∧ v2 < 0: v2 replaced by −v2 (same lattice)");
  if (lat.exact()) {
    const auto& g = lat.exact_generators();
    return Lattice(g[0], g[1], RationalPoint{-g[2][0], -g[2][1]});
  }
  return Lattice(lat.v0(), lat.v1(), PlaneVector(-lat.v2()));
}

// A conic given in lattice coordinates (m, n), carried to the plane.
void attach_conic(ArcSpec& arc, const Lattice& lat, const RationalConic& in_lattice_coords) {
  if (lat.exact()) {
    const auto& g = lat.exact_generators();
    const Rational det = g[1][0] * g[2][1] - g[1][1] * g[2][0];
    // (m, n) = B⁻¹ (p − v0), B = [v1 v2].
    const RationalPoint col1{g[2][1] / det, -g[1][1] / det};
    const RationalPoint col2{-g[2][0] / det, g[1][0] / det};
    const RationalPoint origin{-(col1[0] * g[0][0] + col2[0] * g[0][1]),
                               -(col1[1] * g[0][0] + col2[1] * g[0][1])};
    arc.conic = in_lattice_coords.substitute(origin, col1, col2);
    return;
  }
  const double det = wedge(lat.v1(), lat.v2());
  const PlaneVector c1(lat.v2().y() / det, -lat.v1().y() / det);
  const PlaneVector c2(-lat.v2().x() / det, lat.v1().x() / det);
  const PlaneVector o = -(c1 * lat.v0().x() + c2 * lat.v0().y());
  arc.approx_conic = substitute(in_lattice_coords.to_double(), o, c1, c2);
}

std::vector<LatticeCoord> fibonacci_points(int first, int last) {
  std::vector<LatticeCoord> out;
  LatticeCoord q{1, 0};
  for (int j = 0; j <= last; ++j) {
    if (j >= first) out.push_back(q);
    q = {q.m - q.n, -q.m + 2 * q.n};  // (x, y) ↦ (x − y, −x + 2y)
  }
  return out;
}

}  // namespace

CountBoundCertificate SharpInstance::certificate() const {
  const double area = lattice.area();
  return theorem == "rigid_lat" ? bound_rigid(k0, k0, Lambda, m_dot, area)
                                : bound_sharp(k0, k0, Lambda, m_dot, area);
}

SharpInstance parabola_instance(const Lattice& input, int m0, bool rigid) {
  if (m0 < 0) throw ArgumentError("m0 must be >= 0");
  std::vector<std::string> notes;
  const Lattice lat = oriented(input, notes);
  const double alpha = std::pow(wedge(lat.v1(), lat.v2()), -1.0 / 3.0);
  const PlaneVector v0 = lat.v0(), v1 = lat.v1(), v2 = lat.v2();
  const int last = rigid ? 2 * m0 : 2 * m0 + 1;
  const DomainInterval domain(0.0, last / alpha);

  AffineCurve curve(
      domain,
      [=](double s) {
        const double u = alpha * s;
        return PlaneVector(v0 + u * v1 + (u * (u - 1.0) / 2.0) * v2);
      },
      [=](double s) { return PlaneVector(alpha * v1 + (alpha * alpha * s - alpha / 2.0) * v2); },
      [=](double) { return PlaneVector(alpha * alpha * v2); },
      [](double) { return PlaneVector(0.0, 0.0); }, [](double) { return 0.0; });

  ArcSpec arc{curve, {}, {}, {}};
  // n = m(m − 1)/2 in lattice coordinates.
  attach_conic(arc, lat, RationalConic{1, 0, 0, -1, -2, 0});

  SharpInstance inst{
      "parabola m0=" + std::to_string(m0) + (rigid ? " rigid" : ""),
      std::move(arc), lat, {}, rigid ? 2 * m0 + 1 : 2 * m0 + 2,
      rigid ? "rigid_lat" : "sharp_lat", 0.0, domain.length(), 1.0 / alpha, 1, notes};
  for (std::int64_t j = 0; j <= last; ++j) inst.expected.push_back({j, j * (j - 1) / 2});
  return inst;
}

double hyperbola_alpha() { return std::pow(2.0, -1.0 / 3.0) * std::pow(5.0, 1.0 / 6.0); }

double hyperbola_spacing() { return std::acosh(1.5) / hyperbola_alpha(); }

SharpInstance hyperbola_general_instance(const Lattice& input, int m0, bool rigid) {
  if (m0 < 1) throw ArgumentError("m0 must be >= 1");
  std::vector<std::string> notes;
  const Lattice lat = oriented(input, notes);
  const double beta = std::cbrt(wedge(lat.v1(), lat.v2()));
  const double alpha = hyperbola_alpha();
  const double a = alpha / beta;  // derivative of the inner argument αs/β
  const double r5 = std::sqrt(5.0);
  const PlaneVector v0 = lat.v0(), v1 = lat.v1(), v2 = lat.v2();
  // X = cosh u − sinh(u)/√5, Y = −2 sinh(u)/√5 with u = a s; derivatives
  // alternate between the (cosh, sinh) and (sinh, cosh) forms.
  auto point = [=](double s, int order) {
    const double u = a * s;
    const double ch = std::cosh(u), sh = std::sinh(u);
    const double f = std::pow(a, order);
    const bool odd = order % 2 == 1;
    const double X = odd ? sh - ch / r5 : ch - sh / r5;
    const double Y = odd ? -2.0 * ch / r5 : -2.0 * sh / r5;
    return PlaneVector((order == 0 ? v0 : PlaneVector::Zero().eval()) + f * (X * v1 + Y * v2));
  };
  const double L = beta * hyperbola_spacing();
  const double k = -a * a;
  const DomainInterval domain(rigid ? L : 0.0, (2 * m0 + 1) * L);
  AffineCurve curve(
      domain, [=](double s) { return point(s, 0); }, [=](double s) { return point(s, 1); },
      [=](double s) { return point(s, 2); }, [=](double s) { return point(s, 3); },
      [=](double) { return k; });

  ArcSpec arc{curve, {}, {}, {}};
  attach_conic(arc, lat, RationalConic{1, -1, -1, 0, 0, -1});

  SharpInstance inst{"hyperbola m0=" + std::to_string(m0) + (rigid ? " rigid" : ""),
                     std::move(arc),
                     lat,
                     fibonacci_points(rigid ? 1 : 0, 2 * m0 + 1),
                     rigid ? 2 * m0 + 1 : 2 * m0 + 2,
                     rigid ? "rigid_lat" : "sharp_lat",
                     k,
                     domain.length(),
                     L,
                     1,
                     notes};
  return inst;
}

SharpInstance hyperbola_zxz_instance(int m0, bool rigid) {
  return hyperbola_general_instance(Lattice::integer(), m0, rigid);
}

CircleInstance circle_instance(double k) {
  if (!(k > 0.0)) throw ArgumentError("circle curvature must be positive");
  const double r = std::pow(k, -0.75);
  const double w = std::sqrt(k);  // r² w³ = 1
  const double pi = std::numbers::pi;
  AffineCurve curve(
      DomainInterval(0.0, 2.0 * pi / w),
      [=](double s) { return PlaneVector(r * std::cos(w * s), r * std::sin(w * s)); },
      [=](double s) { return PlaneVector(-r * w * std::sin(w * s), r * w * std::cos(w * s)); },
      [=](double s) { return PlaneVector(-r * w * w * std::cos(w * s), -r * w * w * std::sin(w * s)); },
      [=](double s) {
        return PlaneVector(r * w * w * w * std::sin(w * s), -r * w * w * w * std::cos(w * s));
      },
      [=](double) { return k; });

  ArcSpec arc{curve, {}, {}, ConicCoefficients{1, 0, 1, 0, 0, -r * r}};
  if (r == std::floor(r)) {
    const auto ri = static_cast<std::int64_t>(r);
    arc.conic = RationalConic{1, 0, 1, 0, 0, Rational(-ri * ri)};
  }

  const double quarter = pi / (2.0 * w), sixth = pi / (3.0 * w);
  CircleFixture square{"square",
                       Lattice(PlaneVector(r, 0), PlaneVector(-r, r), PlaneVector(-r, -r)),
                       {0.0, quarter, 2 * quarter, 3 * quarter},
                       quarter,
                       0};
  CircleFixture hexagonal{
      "hexagonal",
      Lattice(PlaneVector(0, 0), PlaneVector(r, 0), PlaneVector(r / 2.0, r * std::sqrt(3.0) / 2.0)),
      {0.0, sixth, 2 * sixth, 3 * sixth},
      sixth,
      1};
  return {std::move(arc),
          k,
          r,
          2.0 * pi / w,
          std::move(square),
          std::move(hexagonal),
          {"four equally spaced lattice points force a rotation with 2cos θ an integer, so "
           "θ ∈ {π/3, π/2, 2π/3}; the count bounds are attained on circles only up to six points"}};
}

}  // namespace affc
