#include "affc/lattice.hpp"

#include "affc/parallel.hpp"
#include "affc/specialfns.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace affc {

namespace {

RationalPoint operator-(const RationalPoint& a, const RationalPoint& b) {
  return {a[0] - b[0], a[1] - b[1]};
}
RationalPoint operator+(const RationalPoint& a, const RationalPoint& b) {
  return {a[0] + b[0], a[1] + b[1]};
}
Rational rwedge(const RationalPoint& a, const RationalPoint& b) {
  return a[0] * b[1] - a[1] * b[0];
}
PlaneVector to_vector(const RationalPoint& p) { return {p[0].to_double(), p[1].to_double()}; }

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("lattice coordinate overflow");
  return static_cast<std::int64_t>(v);
}

// Coordinates (m, n) of w in the basis (b1, b2), exactly.
std::pair<Rational, Rational> solve_basis(const RationalPoint& b1, const RationalPoint& b2,
                                          const RationalPoint& w) {
  const Rational det = rwedge(b1, b2);
  return {rwedge(w, b2) / det, rwedge(b1, w) / det};
}

// Quadratic form in (m, n) with integer coefficients, evaluated in 128 bits.
struct IntegerConic {
  std::int64_t a, b, c, d, e, f;
  static IntegerConic from(const RationalConic& q) {
    // Scale by the lcm of the denominators.
    Rational scale = 1;
    for (const Rational* r : {&q.a, &q.b, &q.c, &q.d, &q.e, &q.f}) {
      const Rational t = *r * scale;
      if (!t.is_integer()) scale = scale * Rational(t.den());
    }
    auto s = [&](const Rational& r) { return (r * scale).num(); };
    return {s(q.a), s(q.b), s(q.c), s(q.d), s(q.e), s(q.f)};
  }
  bool zero_at(LatticeCoord q) const {
    const __int128 m = q.m, n = q.n;
    return a * m * m + b * m * n + c * n * n + d * m + e * n + f == 0;
  }
};

// Relative implicit-equation test |Q(p)| <= tol |∇Q(p)| max(1, |p|).
bool near_conic(const ConicCoefficients& q, const PlaneVector& p, double tol) {
  return std::abs(q(p)) <= tol * q.gradient(p).norm() * std::max(1.0, p.norm());
}

double poly_eval(const std::vector<Rational>& c, double x) {
  double y = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * x + it->to_double();
  return y;
}

// Arc parameter of the curve point nearest p, found by Newton on
// (c(s) − p)·c'(s) from the nearest sample and clamped to the domain.
class Locator {
 public:
  explicit Locator(const AffineCurve& c, int n = 2049) : c_(c) {
    const auto& d = c.domain();
    s_.resize(n);
    pts_.resize(n);
    for (int i = 0; i < n; ++i) {
      s_[i] = n == 1 ? d.lo : d.lo + d.length() * i / (n - 1);
      pts_[i] = c(s_[i]);
    }
  }
  const std::vector<PlaneVector>& samples() const { return pts_; }

  std::pair<double, double> locate(const PlaneVector& p) const {
    std::size_t best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      const double d = (pts_[i] - p).squaredNorm();
      if (d < bestd) {
        bestd = d;
        best = i;
      }
    }
    double s = s_[best];
    for (int it = 0; it < 60; ++it) {
      const PlaneVector r = c_(s) - p;
      const PlaneVector t = c_.d1(s);
      const double g = r.dot(t);
      const double dg = t.squaredNorm() + r.dot(c_.d2(s));
      if (!(dg > 0.0)) break;
      const double next = c_.domain().clamp(s - g / dg);
      const bool done = std::abs(next - s) <= 1e-15 * (1.0 + std::abs(s));
      s = next;
      if (done) break;
    }
    return {s, (c_(s) - p).norm()};
  }

 private:
  const AffineCurve& c_;
  std::vector<double> s_;
  std::vector<PlaneVector> pts_;
};

}  // namespace

// Lattice

Lattice::Lattice(const PlaneVector& v0, const PlaneVector& v1, const PlaneVector& v2)
    : v_{v0, v1, v2} {
  if (!(std::abs(wedge(v1, v2)) > 0.0) || !v0.allFinite() || !v1.allFinite() || !v2.allFinite())
    throw ArgumentError("lattice generators must be finite and independent");
  bool integral = true;
  for (const auto& v : v_) integral = integral && is_integral(v.x()) && is_integral(v.y());
  if (integral) {
    std::array<RationalPoint, 3> g;
    for (int i = 0; i < 3; ++i)
      g[i] = {Rational(static_cast<std::int64_t>(v_[i].x())),
              Rational(static_cast<std::int64_t>(v_[i].y()))};
    exact_ = g;
  }
}

Lattice::Lattice(const RationalPoint& v0, const RationalPoint& v1, const RationalPoint& v2)
    : v_{to_vector(v0), to_vector(v1), to_vector(v2)}, exact_(std::array{v0, v1, v2}) {
  if (rwedge(v1, v2) == Rational(0)) throw ArgumentError("lattice generators must be independent");
}

Lattice Lattice::from_strings(const std::array<std::string, 6>& xy) {
  std::array<Rational, 6> r;
  for (int i = 0; i < 6; ++i) r[i] = Rational::parse(xy[i]);
  return Lattice(RationalPoint{r[0], r[1]}, RationalPoint{r[2], r[3]}, RationalPoint{r[4], r[5]});
}

const std::array<RationalPoint, 3>& Lattice::exact_generators() const {
  if (!exact_) throw ArgumentError("lattice has no exact representation");
  return *exact_;
}

std::optional<Rational> Lattice::exact_area() const {
  if (!exact_) return std::nullopt;
  return abs(rwedge((*exact_)[1], (*exact_)[2]));
}

PlaneVector Lattice::point(LatticeCoord q) const {
  return v_[0] + static_cast<double>(q.m) * v_[1] + static_cast<double>(q.n) * v_[2];
}

RationalPoint Lattice::exact_point(LatticeCoord q) const {
  const auto& g = exact_generators();
  return {g[0][0] + Rational(q.m) * g[1][0] + Rational(q.n) * g[2][0],
          g[0][1] + Rational(q.m) * g[1][1] + Rational(q.n) * g[2][1]};
}

PlaneVector Lattice::real_coordinates(const PlaneVector& p) const {
  const PlaneVector w = p - v_[0];
  const double det = wedge(v_[1], v_[2]);
  return {wedge(w, v_[2]) / det, wedge(v_[1], w) / det};
}

std::optional<LatticeCoord> Lattice::coordinates(const PlaneVector& p, double tol) const {
  const PlaneVector mn = real_coordinates(p);
  const double m = std::round(mn.x()), n = std::round(mn.y());
  if (std::abs(mn.x() - m) > tol || std::abs(mn.y() - n) > tol) return std::nullopt;
  return LatticeCoord{static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)};
}

std::optional<LatticeCoord> Lattice::coordinates(const RationalPoint& p) const {
  const auto& g = exact_generators();
  const auto [m, n] = solve_basis(g[1], g[2], p - g[0]);
  if (!m.is_integer() || !n.is_integer()) return std::nullopt;
  return LatticeCoord{m.num(), n.num()};
}

// RationalConic

Rational RationalConic::operator()(const RationalPoint& p) const {
  const Rational& x = p[0];
  const Rational& y = p[1];
  return a * x * x + b * x * y + c * y * y + d * x + e * y + f;
}

ConicCoefficients RationalConic::to_double() const {
  return {a.to_double(), b.to_double(), c.to_double(), d.to_double(), e.to_double(), f.to_double()};
}

RationalConic RationalConic::substitute(const RationalPoint& o, const RationalPoint& c1,
                                        const RationalPoint& c2) const {
  // Linear forms k0 + km m + kn n for x and y.
  struct Lin {
    Rational k0, km, kn;
  };
  const Lin X{o[0], c1[0], c2[0]}, Y{o[1], c1[1], c2[1]};
  RationalConic out{0, 0, 0, 0, 0, 0};
  auto add_product = [&](const Rational& w, const Lin& u, const Lin& v) {
    out.a += w * u.km * v.km;
    out.b += w * (u.km * v.kn + u.kn * v.km);
    out.c += w * u.kn * v.kn;
    out.d += w * (u.k0 * v.km + u.km * v.k0);
    out.e += w * (u.k0 * v.kn + u.kn * v.k0);
    out.f += w * u.k0 * v.k0;
  };
  auto add_linear = [&](const Rational& w, const Lin& u) {
    out.d += w * u.km;
    out.e += w * u.kn;
    out.f += w * u.k0;
  };
  add_product(a, X, X);
  add_product(b, X, Y);
  add_product(c, Y, Y);
  add_linear(d, X);
  add_linear(e, Y);
  out.f += f;
  return out;
}

ConicCoefficients substitute(const ConicCoefficients& q, const PlaneVector& o,
                             const PlaneVector& c1, const PlaneVector& c2) {
  using L = std::array<double, 3>;  // k0 + km m + kn n
  const L X{o.x(), c1.x(), c2.x()}, Y{o.y(), c1.y(), c2.y()};
  ConicCoefficients out;
  auto add_product = [&](double w, const L& u, const L& v) {
    out.a += w * u[1] * v[1];
    out.b += w * (u[1] * v[2] + u[2] * v[1]);
    out.c += w * u[2] * v[2];
    out.d += w * (u[0] * v[1] + u[1] * v[0]);
    out.e += w * (u[0] * v[2] + u[2] * v[0]);
    out.f += w * u[0] * v[0];
  };
  add_product(q.a, X, X);
  add_product(q.b, X, Y);
  add_product(q.c, Y, Y);
  out.d += q.d * X[1] + q.e * Y[1];
  out.e += q.d * X[2] + q.e * Y[2];
  out.f += q.d * X[0] + q.e * Y[0] + q.f;
  return out;
}

std::vector<LatticeCoord> LatticePointSet::coords() const {
  std::vector<LatticeCoord> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.coord);
  return out;
}

// Enumeration

LatticePointSet enumerate_on_arc(const ArcSpec& arc, const Lattice& lat,
                                 const std::optional<Window>& window) {
  LatticePointSet result;
  if (window && (window->xmin > window->xmax || window->ymin > window->ymax)) return result;

  const Locator locator(arc.curve);

  // Box in lattice coordinates around the sampled arc, widened by the largest
  // sample gap so that the chord error cannot hide a point.
  double mlo = std::numeric_limits<double>::infinity(), mhi = -mlo, nlo = mlo, nhi = -mlo, gap = 0;
  PlaneVector prev;
  bool first = true;
  for (const auto& p : locator.samples()) {
    const PlaneVector q = lat.real_coordinates(p);
    mlo = std::min(mlo, q.x());
    mhi = std::max(mhi, q.x());
    nlo = std::min(nlo, q.y());
    nhi = std::max(nhi, q.y());
    if (!first) gap = std::max(gap, (q - prev).norm());
    prev = q;
    first = false;
  }
  const double margin = 1.0 + gap;
  mlo = std::floor(mlo - margin);
  mhi = std::ceil(mhi + margin);
  nlo = std::floor(nlo - margin);
  nhi = std::ceil(nhi + margin);
  if (window && std::isfinite(window->xmin) && std::isfinite(window->xmax) &&
      std::isfinite(window->ymin) && std::isfinite(window->ymax)) {
    double wmlo = mlo, wmhi = mhi, wnlo = nlo, wnhi = nhi;
    bool init = false;
    for (double x : {window->xmin, window->xmax})
      for (double y : {window->ymin, window->ymax}) {
        const PlaneVector q = lat.real_coordinates(PlaneVector(x, y));
        if (!init) {
          wmlo = wmhi = q.x();
          wnlo = wnhi = q.y();
          init = true;
        }
        wmlo = std::min(wmlo, q.x());
        wmhi = std::max(wmhi, q.x());
        wnlo = std::min(wnlo, q.y());
        wnhi = std::max(wnhi, q.y());
      }
    mlo = std::max(mlo, std::floor(wmlo) - 1);
    mhi = std::min(mhi, std::ceil(wmhi) + 1);
    nlo = std::max(nlo, std::floor(wnlo) - 1);
    nhi = std::min(nhi, std::ceil(wnhi) + 1);
  }
  if (mlo > mhi || nlo > nhi) return result;
  if ((mhi - mlo + 1) * (nhi - nlo + 1) > 2e8)
    throw ArgumentError("enumeration box too large: restrict the arc or supply a window");

  const bool exact_lattice = lat.exact();
  std::optional<IntegerConic> int_conic;
  if (exact_lattice && arc.conic) {
    const auto& g = lat.exact_generators();
    int_conic = IntegerConic::from(arc.conic->substitute(g[0], g[1], g[2]));
  }
  const bool exact_graph = exact_lattice && arc.graph && !int_conic;
  std::optional<ConicCoefficients> float_conic =
      arc.conic ? std::optional(arc.conic->to_double()) : arc.approx_conic;
  const bool exact_mode = int_conic || exact_graph;

  struct Strip {
    std::vector<LatticePoint> points;
    bool fallback = false;
  };
  const auto m0 = static_cast<std::int64_t>(mlo);
  const auto n0 = static_cast<std::int64_t>(nlo);
  const auto n1 = static_cast<std::int64_t>(nhi);
  const int strips = static_cast<int>(mhi - mlo) + 1;

  auto strip = [&](int i) {
    Strip out;
    const std::int64_t m = m0 + i;
    for (std::int64_t n = n0; n <= n1; ++n) {
      const LatticeCoord q{m, n};
      const PlaneVector p = lat.point(q);
      if (window && !window->contains(p)) continue;
      bool member = false;
      double accept = 1e-6;  // locator slack once membership is settled
      if (int_conic) {
        member = int_conic->zero_at(q);
      } else if (exact_graph) {
        try {
          const RationalPoint rp = lat.exact_point(q);
          Rational y = 0;
          for (auto it = arc.graph->rbegin(); it != arc.graph->rend(); ++it) y = y * rp[0] + *it;
          member = y == rp[1];
        } catch (const std::overflow_error&) {
          out.fallback = true;
          member = std::abs(p.y() - poly_eval(*arc.graph, p.x())) <= 1e-9 * std::max(1.0, std::abs(p.y()));
        }
      } else if (float_conic) {
        member = near_conic(*float_conic, p, 1e-9);
      } else if (arc.graph) {
        member = std::abs(p.y() - poly_eval(*arc.graph, p.x())) <= 1e-9 * std::max(1.0, std::abs(p.y()));
      } else {
        member = true;
        accept = 1e-9;
      }
      if (!member) continue;
      const auto [s, dist] = locator.locate(p);
      if (dist <= accept * std::max(1.0, p.norm())) out.points.push_back({q, p, s});
    }
    return out;
  };
  const auto parts = parallel_map<Strip>(strips, strip);

  for (const auto& part : parts) {
    result.points.insert(result.points.end(), part.points.begin(), part.points.end());
    result.inexact_warning = result.inexact_warning || part.fallback;
  }
  std::sort(result.points.begin(), result.points.end(),
            [](const LatticePoint& a, const LatticePoint& b) { return a.s < b.s; });
  result.exact = exact_mode && !result.inexact_warning;
  result.inexact_warning = !result.exact;
  return result;
}

// Multipliers

std::int64_t triangle_multiplier(LatticeCoord q1, LatticeCoord q2, LatticeCoord q3) {
  const __int128 v = static_cast<__int128>(q2.m - q1.m) * (q3.n - q1.n) -
                     static_cast<__int128>(q2.n - q1.n) * (q3.m - q1.m);
  return checked(v < 0 ? -v : v);
}

std::int64_t triangle_multiplier(const Lattice& lat, const PlaneVector& p1, const PlaneVector& p2,
                                 const PlaneVector& p3) {
  std::array<LatticeCoord, 3> q;
  const std::array<const PlaneVector*, 3> ps{&p1, &p2, &p3};
  for (int i = 0; i < 3; ++i) {
    const auto c = lat.coordinates(*ps[i]);
    if (!c) throw ArgumentError("triangle_multiplier: point is not in the lattice");
    q[i] = *c;
  }
  return triangle_multiplier(q[0], q[1], q[2]);
}

MDotCertificate m_of_curve(const LatticePointSet& found) {
  MDotCertificate cert;
  const auto& pts = found.points;
  if (pts.size() < 3) {
    cert.basis = "fewer than three known points: conservative default 1";
    return cert;
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) {
        ++cert.triples;
        const auto v = triangle_multiplier(pts[i].coord, pts[j].coord, pts[k].coord);
        if (v == 0) {
          ++cert.degenerate;
          continue;
        }
        if (v < best) {
          best = v;
          cert.witness = std::array{i, j, k};
        }
      }
  if (!cert.witness) {
    cert.basis = "all known triples collinear: conservative default 1";
    return cert;
  }
  cert.value = best;
  cert.basis = "minimum over " + std::to_string(cert.triples) + " triples of " +
               std::to_string(pts.size()) + " known points";
  return cert;
}

std::int64_t parity_m_dot(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t R) {
  auto odd = [](std::int64_t v) { return v % 2 != 0; };
  return odd(a) && !odd(b) && odd(c) && odd(R) ? 2 : 1;
}

// Count bounds

bool CountBoundCertificate::hypotheses_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const Hypothesis& h) { return h.checked; });
}

namespace {

CountBoundCertificate make_certificate(std::string id, double k0, std::optional<double> k1,
                                       double Lambda, std::int64_t m_dot, double area) {
  if (!(Lambda > 0.0) || !std::isfinite(Lambda)) throw ArgumentError("Λ must be positive");
  if (m_dot < 1) throw ArgumentError("ṁ must be >= 1");
  if (!(area > 0.0)) throw ArgumentError("A_L must be positive");
  if (k1 && !(k0 <= *k1)) throw ArgumentError("k0 must not exceed k1");
  CountBoundCertificate c;
  c.theorem = std::move(id);
  c.k0 = k0;
  c.k1 = k1;
  c.Lambda = Lambda;
  c.m_dot = m_dot;
  c.lattice_area = area;
  return c;
}

// a <= b up to rounding in the inverse functions.
bool le_rounded(double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); }

double half_area(const CountBoundCertificate& c) {
  return static_cast<double>(c.m_dot) * c.lattice_area / 2.0;
}

// L = gk(k0, ṁA_L/2), or nullopt with a failed hypothesis.
std::optional<double> rectangle_length(CountBoundCertificate& c) {
  try {
    const double L = gk(c.k0, half_area(c));
    c.L = L;
    c.hypotheses.push_back({"G_k0_defined", true, "L = gk(k0, ṁA_L/2) = " + fmt(L)});
    return L;
  } catch (const DomainError& e) {
    c.hypotheses.push_back({"G_k0_defined", false, e.what()});
    return std::nullopt;
  }
}

void k1_rectangle_hypothesis(CountBoundCertificate& c, double length) {
  const double cap = std::pow(std::numbers::pi / length, 2);
  const bool ok = *c.k1 <= 0.0 || *c.k1 <= cap;
  c.hypotheses.push_back({"k1_small", ok, "k1 = " + fmt(*c.k1) + " vs (π/" + fmt(length) +
                                              ")² = " + fmt(cap)});
}

}  // namespace

CountBoundCertificate bound_two_points(double k0, double Lambda, std::int64_t m_dot,
                                       double lattice_area) {
  auto c = make_certificate("2pts1", k0, std::nullopt, Lambda, m_dot, lattice_area);
  const double a = abar(k0, Lambda);
  const bool ok = le_rounded(a, half_area(c));
  c.hypotheses.push_back({"area_condition", ok,
                          "abar(k0, Λ) = " + fmt(a) + " vs ṁA_L/2 = " + fmt(half_area(c))});
  if (ok) c.bound = 2;
  return c;
}

CountBoundCertificate bound_general(double k0, double Lambda, std::int64_t m_dot,
                                    double lattice_area) {
  auto c = make_certificate("low_aff_bd", k0, std::nullopt, Lambda, m_dot, lattice_area);
  const double F = fk(k0, half_area(c));
  c.L = F;
  double ratio = Lambda / F;
  if (std::abs(ratio - std::round(ratio)) <= 1e-12 * std::max(1.0, ratio)) ratio = std::round(ratio);
  const auto pieces = static_cast<std::int64_t>(std::ceil(ratio));
  c.m = pieces;
  c.bound = static_cast<int>(2 * pieces);
  c.hypotheses.push_back({"convex_subarcs", true,
                          "sub-arcs of affine length <= F = " + fmt(F) +
                              " are taken convex (the ṁ-scaled length)"});
  return c;
}

CountBoundCertificate bound_three_points(double k0, double k1, double Lambda, std::int64_t m_dot,
                                         double lattice_area) {
  auto c = make_certificate("2pts2", k0, k1, Lambda, m_dot, lattice_area);
  c.L = Lambda / 2.0;
  try {
    const double h = hk(k0, Lambda / 2.0);
    const bool ok = le_rounded(h, half_area(c));
    c.hypotheses.push_back({"rectangle_condition", ok,
                            "hk(k0, Λ/2) = " + fmt(h) + " vs ṁA_L/2 = " + fmt(half_area(c))});
    if (ok && std::abs(h - half_area(c)) <= 1e-10 * std::max(1.0, half_area(c))) {
      c.rigidity = true;
      c.notes.push_back(
          "equality: three points force constant curvature k0 with vertices at both ends and the "
          "midpoint");
    }
  } catch (const DomainError& e) {
    c.hypotheses.push_back({"rectangle_condition", false, e.what()});
  }
  k1_rectangle_hypothesis(c, Lambda);
  if (c.hypotheses_hold()) c.bound = 3;
  return c;
}

CountBoundCertificate bound_sharp(double k0, double k1, double Lambda, std::int64_t m_dot,
                                  double lattice_area) {
  auto c = make_certificate("sharp_lat", k0, k1, Lambda, m_dot, lattice_area);
  const auto L = rectangle_length(c);
  if (!L) return c;
  const auto m = static_cast<std::int64_t>(std::floor(Lambda / (2.0 * *L) + 1e-9));
  c.m = m;
  k1_rectangle_hypothesis(c, 2.0 * *L);
  if (c.hypotheses_hold()) c.bound = static_cast<int>(2 * m + 2);
  return c;
}

CountBoundCertificate bound_rigid(double k0, double k1, double Lambda, std::int64_t m_dot,
                                  double lattice_area) {
  auto c = make_certificate("rigid_lat", k0, k1, Lambda, m_dot, lattice_area);
  const auto L = rectangle_length(c);
  if (!L) return c;
  const double ratio = Lambda / (2.0 * *L);
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw ArgumentError("Λ/(2L) = " + fmt(ratio) + " is not an integer; use bound_sharp");
  const auto m = static_cast<std::int64_t>(std::round(ratio));
  c.m = m;
  k1_rectangle_hypothesis(c, 2.0 * *L);
  c.hypotheses.push_back({"open_arc", true, "the arc is not a closed curve (caller's premise)"});
  if (c.hypotheses_hold()) {
    c.bound = static_cast<int>(2 * m + 1);
    c.rigidity = true;
    c.notes.push_back("equality iff constant curvature k0 with lattice points evenly spaced at "
                      "affine distance L = " + fmt(*L) + ", including both endpoints");
  }
  return c;
}

// Lattice equality and motions

namespace {

// Every point of `a` lies in `b`.
bool contained(const Lattice& a, const Lattice& b) {
  if (a.exact() && b.exact()) {
    const auto& ga = a.exact_generators();
    const auto& gb = b.exact_generators();
    for (const RationalPoint& w : {ga[0] - gb[0], ga[1], ga[2]}) {
      const auto [m, n] = solve_basis(gb[1], gb[2], w);
      if (!m.is_integer() || !n.is_integer()) return false;
    }
    return true;
  }
  if (!b.coordinates(a.v0())) return false;
  for (const PlaneVector& w : {a.v1(), a.v2()})
    if (!b.coordinates(PlaneVector(b.v0() + w))) return false;
  return true;
}

}  // namespace

bool lattice_equal(const Lattice& a, const Lattice& b) { return contained(a, b) && contained(b, a); }

RationalPoint RationalMotion::operator()(const RationalPoint& p) const {
  return {m11 * p[0] + m12 * p[1] + b1, m21 * p[0] + m22 * p[1] + b2};
}

MotionCheck motion_preserves_lattice(const RationalMotion& phi, const Lattice& lat,
                                     LatticeCoord p1, LatticeCoord p2, LatticeCoord p3) {
  if (!lat.exact()) throw ArgumentError("motion_preserves_lattice needs an exact lattice");
  MotionCheck out;
  out.determinant_one = phi.determinant() == Rational(1);
  const RationalPoint a = phi(lat.exact_point(p1));
  const RationalPoint b = phi(lat.exact_point(p2));
  const RationalPoint c = phi(lat.exact_point(p3));
  out.images_in_lattice = lat.coordinates(a) && lat.coordinates(b) && lat.coordinates(c);
  out.area_hypothesis = abs(rwedge(b - a, c - a)) == *lat.exact_area();
  const auto& g = lat.exact_generators();
  out.generators_direct = lat.coordinates(phi(g[0])) && lat.coordinates(phi(g[0] + g[1])) &&
                          lat.coordinates(phi(g[0] + g[2]));
  return out;
}

// Orbits

bool OrbitResult::ok() const {
  return all_in_lattice && all_on_curve &&
         std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const Hypothesis& h) { return h.checked; });
}

OrbitResult equal_spaced_orbit(const ArcSpec& arc, const Lattice& lat,
                               const std::array<double, 4>& params, int count) {
  if (count < 1) throw ArgumentError("orbit count must be positive");
  OrbitResult out;
  const AffineCurve& c = arc.curve;

  std::optional<IntegerConic> int_conic;
  if (lat.exact() && arc.conic) {
    const auto& g = lat.exact_generators();
    int_conic = IntegerConic::from(arc.conic->substitute(g[0], g[1], g[2]));
  }
  const std::optional<ConicCoefficients> float_conic =
      arc.conic ? std::optional(arc.conic->to_double()) : arc.approx_conic;
  auto on_curve = [&](LatticeCoord q, double s) {
    if (int_conic) return int_conic->zero_at(q);
    const PlaneVector p = lat.point(q);
    if (float_conic) return near_conic(*float_conic, p, 1e-9);
    if (!c.domain().contains(s, 1e-12)) return false;
    return (c(c.domain().clamp(s)) - p).norm() <= 1e-8 * std::max(1.0, p.norm());
  };

  // Seed points.
  std::array<LatticeCoord, 4> q{};
  bool in_lattice = true, seed_on_curve = true;
  for (int i = 0; i < 4; ++i) {
    const auto coord = lat.coordinates(c(params[i]));
    if (!coord) {
      in_lattice = false;
      continue;
    }
    q[i] = *coord;
    seed_on_curve = seed_on_curve && on_curve(q[i], params[i]);
  }
  bool distinct = true;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) distinct = distinct && q[i] != q[j];
  out.hypotheses.push_back({"seed_in_lattice", in_lattice, ""});
  out.hypotheses.push_back({"seed_distinct", distinct, ""});
  out.hypotheses.push_back({"seed_on_curve", seed_on_curve, ""});

  const double L = params[1] - params[0];
  out.spacing = L;
  const double spread = std::max(std::abs(params[2] - params[1] - L), std::abs(params[3] - params[2] - L));
  out.hypotheses.push_back({"equal_spacing", L > 0.0 && spread <= 1e-9,
                            "L = " + fmt(L) + ", deviation " + fmt(spread)});
  if (!in_lattice || !distinct) return out;

  const std::int64_t unit = triangle_multiplier(q[1], q[2], q[3]);
  out.hypotheses.push_back({"unit_triangle", unit == 1,
                            "Area(p2 p3 p4) = " + std::to_string(unit) + " · A_L/2"});

  // A (q2 − q1, q3 − q1) = (q3 − q2, q4 − q2) solved exactly.
  const __int128 M00 = q[1].m - q[0].m, M01 = q[2].m - q[0].m;
  const __int128 M10 = q[1].n - q[0].n, M11 = q[2].n - q[0].n;
  const __int128 N00 = q[2].m - q[1].m, N01 = q[3].m - q[1].m;
  const __int128 N10 = q[2].n - q[1].n, N11 = q[3].n - q[1].n;
  const __int128 D = M00 * M11 - M01 * M10;
  bool integer_motion = D != 0;
  if (integer_motion) {
    // A = N adj(M) / D with adj(M) = [[M11, −M01], [−M10, M00]].
    const __int128 raw[2][2] = {{N00 * M11 - N01 * M10, -N00 * M01 + N01 * M00},
                                {N10 * M11 - N11 * M10, -N10 * M01 + N11 * M00}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        if (raw[i][j] % D != 0) integer_motion = false;
        else out.A[i][j] = checked(raw[i][j] / D);
      }
  }
  out.hypotheses.push_back({"integer_motion", integer_motion,
                            integer_motion ? "" : "motion does not map the lattice to itself"});
  if (!integer_motion) return out;
  out.t = {checked(static_cast<__int128>(q[1].m) - out.A[0][0] * static_cast<__int128>(q[0].m) -
                   out.A[0][1] * static_cast<__int128>(q[0].n)),
           checked(static_cast<__int128>(q[1].n) - out.A[1][0] * static_cast<__int128>(q[0].m) -
                   out.A[1][1] * static_cast<__int128>(q[0].n))};
  const __int128 detA = static_cast<__int128>(out.A[0][0]) * out.A[1][1] -
                        static_cast<__int128>(out.A[0][1]) * out.A[1][0];
  out.hypotheses.push_back({"special_motion", detA == 1, "det = " + std::to_string(static_cast<long long>(detA))});

  const double k0 = c.curvature(params[0]);
  try {
    out.hk_defect = std::abs(hk(k0, L) - lat.area() / 2.0);
  } catch (const DomainError&) {
    out.hk_defect = std::numeric_limits<double>::infinity();
  }
  out.hypotheses.push_back({"hk_identity", out.hk_defect <= 1e-10 * std::max(1.0, lat.area()),
                            "|hk(k0, L) − A_L/2| = " + fmt(out.hk_defect)});

  out.points.exact = static_cast<bool>(int_conic);
  out.points.inexact_warning = !int_conic;
  out.all_in_lattice = true;  // integer motion in lattice coordinates
  out.all_on_curve = true;
  LatticeCoord cur = q[0];
  for (int j = 0; j < count; ++j) {
    const double s = params[0] + j * L;
    out.all_on_curve = out.all_on_curve && on_curve(cur, s);
    out.points.points.push_back({cur, lat.point(cur), s});
    cur = {checked(out.A[0][0] * static_cast<__int128>(cur.m) + out.A[0][1] * static_cast<__int128>(cur.n) + out.t[0]),
           checked(out.A[1][0] * static_cast<__int128>(cur.m) + out.A[1][1] * static_cast<__int128>(cur.n) + out.t[1])};
  }
  return out;
}

std::pair<double, bool> rotation_trace(double theta) {
  const double v = 2.0 * std::cos(theta);
  return {v, std::abs(v - std::round(v)) <= 1e-9};
}

}  // namespace affc
