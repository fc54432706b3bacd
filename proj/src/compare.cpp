#include "affc/compare.hpp"

#include "affc/parallel.hpp"
#include "affc/specialfns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace affc {

namespace {

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(10);
  o << v;
  return o.str();
}

std::vector<double> grid(DomainInterval I, int n) {
  std::vector<double> g(static_cast<std::size_t>(std::max(n, 2)));
  const int m = static_cast<int>(g.size());
  for (int i = 0; i < m; ++i) g[i] = i == m - 1 ? I.hi : I.lo + I.length() * i / (m - 1);
  return g;
}

double max_gap(const ScalarFunction& a, const ScalarFunction& b, DomainInterval I, int n) {
  double worst = 0.0;
  for (double s : grid(I, n)) worst = std::max(worst, std::abs(a(s) - b(s)));
  return worst;
}

// Collects several inequalities lo <= hi and keeps the one closest to failing.
struct Worst {
  double lhs = 0.0, rhs = 0.0, where = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  double slack_base;

  explicit Worst(double base) : slack_base(base) {}

  // `bound` decides the slack scale.
  void add(double lo, double hi, double bound, double s) {
    const double m = hi - lo + inequality_slack(bound, slack_base);
    if (m < margin) {
      margin = m;
      lhs = lo;
      rhs = hi;
      where = s;
    }
  }
  void finish(BoundReport& r) const {
    r.lhs = lhs;
    r.rhs = rhs;
    r.witness = where;
    if (!r.hypotheses_hold())
      r.verdict = Verdict::hypotheses_failed;
    else
      r.verdict = margin >= 0.0 ? Verdict::holds : Verdict::violated;
  }
};

bool in_band(const AffineCurve& c, DomainInterval I, double k0, double k1, double tol, int n,
             std::string& detail) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double s : grid(I, n)) {
    const double k = c.curvature(s);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  detail = "sampled curvature in [" + fmt(lo) + ", " + fmt(hi) + "], required [" + fmt(k0) +
           ", " + fmt(k1) + "]";
  return lo >= k0 - tol && hi <= k1 + tol;
}

void rigidity_follow_up(BoundReport& r, const AffineCurve& c, DomainInterval I, double k,
                        double tol, int n, const std::string& side) {
  r.equality = true;
  const double gap = max_gap(c.curvature_function(), [k](double) { return k; }, I, n);
  if (gap <= tol) {
    r.notes.push_back("equality on the " + side + " side; curvature constant " + fmt(k) +
                      " confirmed on samples");
  } else {
    r.notes.push_back("equality on the " + side + " side but curvature deviates from " + fmt(k) +
                      " by " + fmt(gap));
    if (r.verdict == Verdict::holds) r.verdict = Verdict::violated;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

BoundReport area_compare(const AffineCurve& c, const ScalarFunction& kappa_bar, double L,
                         const CompareOptions& opt) {
  if (!(L > 0.0)) throw ArgumentError("area_compare: L must be positive");
  const DomainInterval I(0.0, L);
  if (!c.domain().contains(0.0) || !c.domain().contains(L))
    throw DomainError("area_compare: curve must be defined on [0, L]");
  BoundReport r;
  r.theorem = BoundTheorem::area_comparison;

  const LinearOperator op = LinearOperator::single_term(3, 1, kappa_bar, I);
  const PositivityReport pos = check_forward_positive(op, I, opt.positivity_grid);
  r.hypotheses.push_back({"forward_positive_kernel", pos.positive(),
                          "min K(s;r) = " + fmt(pos.min_value) + " at s=" + fmt(pos.min_s) +
                              ", r=" + fmt(pos.min_r)});

  bool le = true, ge = true;
  for (double s : grid(I, opt.sample_grid)) {
    const double d = c.curvature(s) - kappa_bar(s);
    if (d > 1e-14) le = false;
    if (d < -1e-14) ge = false;
  }
  r.hypotheses.push_back({"curvature_ordered", le || ge,
                          le && ge ? "kappa == kappa_bar"
                          : le     ? "kappa <= kappa_bar"
                          : ge     ? "kappa >= kappa_bar"
                                   : "kappa and kappa_bar cross"});

  const double A = area_function(c, 0.0, c(0.0))(L);
  const double Abar = solve_ivp(op, [](double) { return 0.5; }, 0.0, Eigen::Vector3d::Zero())(L);
  if (le) {
    r.lhs = Abar;
    r.rhs = A;
    r.notes.push_back("direction: A(L) >= Abar(L)");
  } else {
    r.lhs = A;
    r.rhs = Abar;
    r.notes.push_back("direction: A(L) <= Abar(L)");
  }
  r.witness = L;
  settle(r, inequality_slack(Abar, opt.slack));

  if (r.hypotheses_hold() && std::abs(A - Abar) <= equality_threshold(Abar)) {
    r.equality = true;
    const double gap = max_gap(c.curvature_function(), kappa_bar, I, opt.sample_grid);
    if (gap <= opt.rigidity_tol) {
      r.notes.push_back("equality; kappa == kappa_bar confirmed on samples");
    } else {
      r.notes.push_back("equality but kappa differs from kappa_bar by " + fmt(gap));
      r.verdict = Verdict::violated;
    }
  }
  return r;
}

std::pair<double, double> area_bounds(double k0, double k1, double L) {
  if (k0 > k1) throw ArgumentError("area_bounds: need k0 <= k1");
  return {abar(k1, L), abar(k0, L)};
}

BoundReport area_bounds_check(const AffineCurve& c, double k0, double k1, double L,
                              const CompareOptions& opt) {
  const auto [lower, upper] = area_bounds(k0, k1, L);
  const DomainInterval I(0.0, L);
  if (!c.domain().contains(0.0) || !c.domain().contains(L))
    throw DomainError("area_bounds_check: curve must be defined on [0, L]");
  BoundReport r;
  r.theorem = BoundTheorem::area_bounds;
  std::string detail;
  const bool band = in_band(c, I, k0, k1, opt.curvature_tol, opt.sample_grid, detail);
  r.hypotheses.push_back({"curvature_in_band", band, detail});

  const double A = area_function(c, 0.0, c(0.0))(L);
  Worst w(opt.slack);
  w.add(lower, A, lower, L);
  w.add(A, upper, upper, L);
  w.finish(r);
  if (!r.hypotheses_hold()) return r;
  if (std::abs(A - lower) <= equality_threshold(lower))
    rigidity_follow_up(r, c, I, k1, opt.rigidity_tol, opt.sample_grid, "lower");
  if (std::abs(A - upper) <= equality_threshold(upper))
    rigidity_follow_up(r, c, I, k0, opt.rigidity_tol, opt.sample_grid, "upper");
  return r;
}

BoundReport coord_bounds_check(const AffineCurve& c, double s0, double k0, double k1, double L,
                               const CompareOptions& opt) {
  if (!(L > 0.0)) throw ArgumentError("coord_bounds_check: L must be positive");
  BoundReport r;
  r.theorem = BoundTheorem::coordinate_bounds;
  const DomainInterval dom = c.domain();
  const double edge = 1e-12 * std::max(1.0, std::abs(s0) + L);
  const bool window = dom.contains(s0 - L, edge) && dom.contains(s0 + L, edge);
  r.hypotheses.push_back({"window_in_domain", window,
                          "[" + fmt(s0 - L) + ", " + fmt(s0 + L) + "] within [" + fmt(dom.lo) +
                              ", " + fmt(dom.hi) + "]"});
  const double kmax = std::pow(std::numbers::pi / (2.0 * L), 2);
  r.hypotheses.push_back(
      {"k1_small", k0 <= k1 && k1 <= kmax, "k1 = " + fmt(k1) + ", (pi/2L)^2 = " + fmt(kmax)});
  if (!window) {
    r.verdict = Verdict::hypotheses_failed;
    return r;
  }
  const DomainInterval I(dom.clamp(s0 - L), dom.clamp(s0 + L));
  std::string detail;
  r.hypotheses.push_back(
      {"curvature_in_band", in_band(c, I, k0, k1, opt.curvature_tol, opt.sample_grid, detail),
       detail});
  if (!r.hypotheses_hold()) {
    r.verdict = Verdict::hypotheses_failed;
    return r;
  }

  const AdaptedFrame frame = adapted_frame(c, s0);
  Worst w(opt.slack);
  for (double s : grid(I, opt.sample_grid)) {
    const double t = std::abs(s - s0);
    const PlaneVector q = frame.to_adapted(c(s));
    const double x = std::abs(q(0)), y = q(1);
    const double xl = xbar(k1, t), xu = xbar(k0, t), yl = ybar(k1, t), yu = ybar(k0, t);
    w.add(xl, x, xl, s);
    w.add(x, xu, xu, s);
    w.add(yl, y, yl, s);
    w.add(y, yu, yu, s);
  }
  w.finish(r);

  // The curve is a graph over (−R, R) in the adapted frame.
  const DomainInterval g = graphing_parameter_set(c, s0);
  const double R = sk(k1, L);
  const double xlo = frame.to_adapted(c(g.lo))(0), xhi = frame.to_adapted(c(g.hi))(0);
  const double tolR = inequality_slack(R, opt.slack);
  const bool graph_ok = g.lo <= I.lo + 1e-9 && g.hi >= I.hi - 1e-9 && xlo <= -R + tolR &&
                        xhi >= R - tolR;
  r.notes.push_back("graphing parameter set [" + fmt(g.lo) + ", " + fmt(g.hi) +
                    "], x-range [" + fmt(xlo) + ", " + fmt(xhi) + "], R = " + fmt(R));
  if (!graph_ok && r.verdict == Verdict::holds) {
    r.verdict = Verdict::violated;
    r.notes.push_back("graphing interval does not contain (-R, R)");
  }

  // Equality at the window ends forces constant curvature on that half.
  for (double side : {-1.0, 1.0}) {
    const double s1 = s0 + side * L;
    const DomainInterval half(std::min(s0, s1), std::max(s0, s1));
    const PlaneVector q = frame.to_adapted(c(s1));
    const double x = std::abs(q(0)), y = q(1);
    const bool upper = std::abs(x - xbar(k0, L)) <= equality_threshold(xbar(k0, L)) ||
                       std::abs(y - ybar(k0, L)) <= equality_threshold(ybar(k0, L));
    const bool lower = std::abs(x - xbar(k1, L)) <= equality_threshold(xbar(k1, L)) ||
                       std::abs(y - ybar(k1, L)) <= equality_threshold(ybar(k1, L));
    const std::string tag = side < 0 ? " (s < s0)" : " (s > s0)";
    if (upper) rigidity_follow_up(r, c, half, k0, opt.rigidity_tol, opt.sample_grid, "upper" + tag);
    if (lower) rigidity_follow_up(r, c, half, k1, opt.rigidity_tol, opt.sample_grid, "lower" + tag);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Triangles

double triangle_bound_arc(double k0, double Lambda) {
  if (!(Lambda > 0.0)) throw ArgumentError("triangle_bound_arc: arc length must be positive");
  return abar(k0, Lambda);
}

double triangle_bound_rect(double k0, double Lambda) {
  if (!(Lambda > 0.0)) throw ArgumentError("triangle_bound_rect: arc length must be positive");
  return hk(k0, Lambda / 2.0);
}

double triangle_area(const PlaneVector& p1, const PlaneVector& p2, const PlaneVector& p3) {
  return 0.5 * std::abs(wedge(p2 - p1, p3 - p1));
}

double triangle_ratio_exact(double k0, double Lambda) {
  const double L = Lambda / 2.0;
  const AffineCurve c = constant_curvature_curve(k0, DomainInterval(-L, L));
  return triangle_area(c(-L), c(0.0), c(L)) / abar(k0, Lambda) - 1.0;
}

double triangle_ratio_asymptotic(double k0, double Lambda) {
  return -std::exp(-std::sqrt(std::abs(k0)) * Lambda / 2.0) / 2.0;
}

std::pair<double, double> curvature_range(const AffineCurve& c, int n) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double s : grid(c.domain(), n)) {
    lo = std::min(lo, c.curvature(s));
    hi = std::max(hi, c.curvature(s));
  }
  return {lo, hi};
}

BoundReport verify_triangle_bound(const AffineCurve& c, const std::array<double, 3>& p,
                                  TriangleBoundKind kind, std::optional<double> k0_opt,
                                  std::optional<double> k1_opt, const CompareOptions& opt) {
  const DomainInterval dom = c.domain();
  if (!(p[0] < p[1] && p[1] < p[2]) || !dom.contains(p[0]) || !dom.contains(p[2]))
    throw ArgumentError("verify_triangle_bound: parameters must increase within the domain");
  const double Lambda = dom.length();
  std::pair<double, double> range{0.0, 0.0};
  if (!k0_opt || !k1_opt) range = curvature_range(c, opt.sample_grid);
  const double k0 = k0_opt.value_or(range.first), k1 = k1_opt.value_or(range.second);

  BoundReport r;
  std::string detail;
  const bool band = in_band(c, dom, k0, kind == TriangleBoundKind::arc
                                            ? std::numeric_limits<double>::infinity()
                                            : k1,
                            opt.curvature_tol, opt.sample_grid, detail);
  r.hypotheses.push_back({"curvature_bounds", band, detail});
  const double area = triangle_area(c(p[0]), c(p[1]), c(p[2]));
  double bound;
  if (kind == TriangleBoundKind::arc) {
    r.theorem = BoundTheorem::triangle_in_arc;
    bound = triangle_bound_arc(k0, Lambda);
    r.notes.push_back("strict inequality; exact equality is impossible");
  } else {
    r.theorem = BoundTheorem::triangle_in_rectangle;
    const double kmax = std::pow(std::numbers::pi / Lambda, 2);
    r.hypotheses.push_back(
        {"k1_small", k1 <= kmax, "k1 = " + fmt(k1) + ", (pi/Lambda)^2 = " + fmt(kmax)});
    if (!r.hypotheses_hold()) {
      r.lhs = area;
      r.verdict = Verdict::hypotheses_failed;
      return r;
    }
    bound = triangle_bound_rect(k0, Lambda);
  }
  r.lhs = area;
  r.rhs = bound;
  settle(r, inequality_slack(bound, opt.slack));
  if (area == 0.0) r.notes.push_back("degenerate (collinear) vertices");

  if (kind == TriangleBoundKind::rectangle && r.hypotheses_hold() &&
      std::abs(area - bound) <= equality_threshold(bound)) {
    rigidity_follow_up(r, c, dom, k0, opt.rigidity_tol, opt.sample_grid, "upper");
    const double tol = 1e-6 * std::max(1.0, Lambda);
    const bool placed = std::abs(p[0] - dom.lo) <= tol && std::abs(p[2] - dom.hi) <= tol &&
                        std::abs(p[1] - 0.5 * (dom.lo + dom.hi)) <= tol;
    r.notes.push_back(placed ? "vertices at initial point, midpoint and endpoint"
                             : "equality with vertices away from the end/mid points");
    if (!placed && r.verdict == Verdict::holds) r.verdict = Verdict::violated;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sweeps

ScalarFunction random_curvature_in_band(std::mt19937_64& rng, double k0, double k1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a1 = u(rng), a2 = (1.0 - a1) * u(rng);
  const double w1 = 4.0 * u(rng), w2 = 8.0 * u(rng);
  const double p1 = 6.3 * u(rng), p2 = 6.3 * u(rng);
  const double mid = u(rng);  // centre of the oscillation inside the band
  const double amp = std::min(mid, 1.0 - mid);
  return [=](double s) {
    const double t = mid + amp * (a1 * std::sin(w1 * s + p1) + a2 * std::sin(w2 * s + p2));
    return k0 + (k1 - k0) * t;
  };
}

std::vector<BoundReport> sweep_area_comparison(int trials, std::uint64_t seed, double L,
                                               const CompareOptions& opt) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double kc = std::pow(std::numbers::pi / L, 2);
  struct Trial {
    ScalarFunction kappa, kappa_bar;
  };
  std::vector<Trial> plan;
  for (int i = 0; i < trials; ++i) {
    ScalarFunction kb;
    switch (i % 3) {
      case 0: {  // constant
        const double k = -3.0 + (kc + 3.0) * u(rng);
        kb = [k](double) { return k; };
        break;
      }
      case 1: {  // nonpositive
        const double c = 2.0 * u(rng), w = 4.0 * u(rng), ph = 6.3 * u(rng);
        kb = [=](double s) { return -c * (1.0 + 0.5 * std::sin(w * s + ph)); };
        break;
      }
      default: {  // bounded by k1 <= (π/L)²
        const double k1 = kc * (0.2 + 0.8 * u(rng)), d = 3.0 * u(rng), w = 4.0 * u(rng);
        kb = [=](double s) { return k1 - d * 0.5 * (1.0 + std::cos(w * s)); };
        break;
      }
    }
    const double e = 1.5 * u(rng), w = 5.0 * u(rng), ph = 6.3 * u(rng);
    const double sign = (i / 3) % 2 == 0 ? -1.0 : 1.0;
    ScalarFunction k = [=](double s) {
      return kb(s) + sign * e * 0.5 * (1.0 + std::sin(w * s + ph));
    };
    plan.push_back({k, kb});
  }
  return parallel_map<BoundReport>(trials, [&](int i) {
    const AffineCurve c = reconstruct_from_curvature(plan[i].kappa, DomainInterval(0.0, L));
    return area_compare(c, plan[i].kappa_bar, L, opt);
  });
}

BandSweepResult sweep_curvature_band(int trials, std::uint64_t seed, double k0, double k1,
                                     double L, const CompareOptions& opt) {
  std::mt19937_64 rng(seed);
  std::vector<ScalarFunction> kappas;
  for (int i = 0; i < trials; ++i) kappas.push_back(random_curvature_in_band(rng, k0, k1));
  auto pairs = parallel_map<std::pair<BoundReport, BoundReport>>(trials, [&](int i) {
    const AffineCurve c = reconstruct_from_curvature(kappas[i], DomainInterval(-L, L));
    return std::make_pair(area_bounds_check(c, k0, k1, L, opt),
                          coord_bounds_check(c, 0.0, k0, k1, L, opt));
  });
  BandSweepResult out;
  for (auto& p : pairs) {
    out.sandwich.push_back(std::move(p.first));
    out.rectangle.push_back(std::move(p.second));
  }
  return out;
}

std::vector<BoundReport> sweep_triangles(const AffineCurve& c, int trials, std::uint64_t seed,
                                         const CompareOptions& opt) {
  std::mt19937_64 rng(seed);
  const DomainInterval dom = c.domain();
  std::uniform_real_distribution<double> u(dom.lo, dom.hi);
  const auto [k0, k1] = curvature_range(c, opt.sample_grid);
  std::vector<std::array<double, 3>> triples;
  while (static_cast<int>(triples.size()) < trials) {
    std::array<double, 3> t{u(rng), u(rng), u(rng)};
    std::sort(t.begin(), t.end());
    if (t[0] < t[1] && t[1] < t[2]) triples.push_back(t);
  }
  std::vector<BoundReport> out;
  out.reserve(2 * triples.size());
  for (const auto& t : triples) {
    out.push_back(verify_triangle_bound(c, t, TriangleBoundKind::arc, k0, k1, opt));
    out.push_back(verify_triangle_bound(c, t, TriangleBoundKind::rectangle, k0, k1, opt));
  }
  return out;
}

}  // namespace affc
