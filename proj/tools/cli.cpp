#include "cli.hpp"

#include "specs.hpp"

#include "affc/compare.hpp"
#include "affc/examples.hpp"
#include "affc/lattice.hpp"
#include "affc/specialfns.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace affc::cli {

namespace {

struct Common {
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

struct Output {
  json doc;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  int code = ExitCode::ok;
  std::string summary;  // one line for stderr
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json hypotheses_json(const std::vector<Hypothesis>& hs) {
  json out = json::array();
  for (const auto& h : hs) out.push_back({{"name", h.name}, {"checked", h.checked}, {"detail", h.detail}});
  return out;
}

json report_json(const BoundReport& r) {
  return {{"theorem", to_string(r.theorem)},
          {"verdict", to_string(r.verdict)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"equality", r.equality},
          {"witness", r.witness ? json(*r.witness) : json(nullptr)},
          {"hypotheses", hypotheses_json(r.hypotheses)},
          {"notes", r.notes}};
}

json certificate_json(const CountBoundCertificate& c) {
  return {{"theorem", c.theorem},
          {"inputs",
           {{"k0", c.k0},
            {"k1", c.k1 ? json(*c.k1) : json(nullptr)},
            {"Lambda", c.Lambda},
            {"m_dot", c.m_dot},
            {"lattice_area", c.lattice_area}}},
          {"intermediate",
           {{"L", c.L ? json(*c.L) : json(nullptr)}, {"m", c.m ? json(*c.m) : json(nullptr)}}},
          {"bound", c.bound ? json(*c.bound) : json(nullptr)},
          {"hypotheses", hypotheses_json(c.hypotheses)},
          {"rigidity", c.rigidity},
          {"notes", c.notes}};
}

json points_json(const LatticePointSet& s) {
  json out = json::array();
  for (const auto& p : s.points)
    out.push_back({{"m", p.coord.m}, {"n", p.coord.n}, {"x", p.position.x()}, {"y", p.position.y()}, {"s", p.s}});
  return out;
}

std::vector<double> grid(const DomainInterval& d, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? d.lo : d.lo + d.length() * i / (n - 1));
  return out;
}

PlaneVector parse_pair(const std::string& text, const std::string& what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError(what + ": expected x,y");
  return {parse_real(json(text.substr(0, comma)), what), parse_real(json(text.substr(comma + 1)), what)};
}

// Verify ids: descriptive names plus the short ids used in the literature.
const std::map<std::string, std::string>& verify_aliases() {
  static const std::map<std::string, std::string> m{
      {"ode-comparison", "ode-comparison"},       {"thm3.4", "ode-comparison"},
      {"area-comparison", "area-comparison"},     {"thm4.1", "area-comparison"},
      {"area-sandwich", "area-sandwich"},         {"cor4.2", "area-sandwich"},
      {"triangle-arc", "triangle-arc"},           {"prop4.3", "triangle-arc"},
      {"rectangle", "rectangle"},                 {"thm5.6", "rectangle"},
      {"triangle-rectangle", "triangle-rectangle"}, {"thm5.8", "triangle-rectangle"}};
  return m;
}

const std::map<std::string, std::string>& count_aliases() {
  static const std::map<std::string, std::string> m{
      {"2pts1", "2pts1"},           {"thm6.6", "2pts1"},         {"low_aff_bd", "low_aff_bd"},
      {"thm6.7", "low_aff_bd"},     {"2pts2", "2pts2"},          {"thm6.9", "2pts2"},
      {"sharp_lat", "sharp_lat"},   {"thm6.13", "sharp_lat"},    {"rigid_lat", "rigid_lat"},
      {"thm6.14", "rigid_lat"},     {"auto", "auto"}};
  return m;
}

std::string resolve(const std::map<std::string, std::string>& table, const std::string& id) {
  const auto it = table.find(id);
  if (it == table.end()) throw ParseError("unknown theorem id '" + id + "'");
  return it->second;
}

CountBoundCertificate certify(const std::string& theorem, double k0, double k1, double Lambda,
                              std::int64_t m_dot, double area) {
  if (theorem == "2pts1") return bound_two_points(k0, Lambda, m_dot, area);
  if (theorem == "low_aff_bd") return bound_general(k0, Lambda, m_dot, area);
  if (theorem == "2pts2") return bound_three_points(k0, k1, Lambda, m_dot, area);
  if (theorem == "rigid_lat") return bound_rigid(k0, k1, Lambda, m_dot, area);
  if (theorem == "sharp_lat") return bound_sharp(k0, k1, Lambda, m_dot, area);
  // auto: the rigid form when Λ/(2L) is an integer.
  try {
    return bound_rigid(k0, k1, Lambda, m_dot, area);
  } catch (const ArgumentError&) {
    return bound_sharp(k0, k1, Lambda, m_dot, area);
  }
}

int verdict_code(const std::vector<BoundReport>& reports) {
  bool failed = false;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::violated) return ExitCode::violated;
    failed = failed || r.verdict == Verdict::hypotheses_failed;
  }
  return failed ? ExitCode::hypotheses : ExitCode::ok;
}

// Commands

Output cmd_arclength(const std::string& curve_file) {
  const auto lc = load_curve(read_json_file(curve_file));
  const double value = lc.raw_arclength.value_or(lc.arc.curve.domain().length());
  Output o;
  o.doc = {{"command", "arclength"}, {"type", lc.type}, {"value", value}};
  o.csv_header = {"quantity", "value"};
  o.csv_rows = {{"arclength", num(value)}};
  return o;
}

Output cmd_curvature(const std::string& curve_file, int samples) {
  const auto lc = load_curve(read_json_file(curve_file));
  const auto& c = lc.arc.curve;
  Output o;
  o.csv_header = {"s", "kappa"};
  json values = json::array();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double s : grid(c.domain(), samples)) {
    const double k = affine_curvature_at(c, s);
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    values.push_back({{"s", s}, {"kappa", k}});
    o.csv_rows.push_back({num(s), num(k)});
  }
  o.doc = {{"command", "curvature"}, {"type", lc.type}, {"min", lo}, {"max", hi}, {"samples", values}};
  return o;
}

Output cmd_area(const std::string& curve_file, int samples, std::optional<double> a,
                const std::string& apex, double tol) {
  const auto lc = load_curve(read_json_file(curve_file));
  const auto& c = lc.arc.curve;
  const double base = a.value_or(c.domain().lo);
  if (!c.domain().contains(base)) throw DomainError("area: base point outside the domain");
  const PlaneVector p0 = apex.empty() ? c(base) : parse_pair(apex, "p0");
  const auto integral = area_function(c, base, p0);
  const auto ode = area_function_ode(c, base, p0, tol);
  Output o;
  o.csv_header = {"s", "area", "area_ode"};
  json values = json::array();
  double gap = 0.0;
  for (double s : grid(c.domain(), samples)) {
    const double A = integral(s), B = ode(s);
    gap = std::max(gap, std::abs(A - B));
    values.push_back({{"s", s}, {"area", A}, {"area_ode", B}});
    o.csv_rows.push_back({num(s), num(A), num(B)});
  }
  o.doc = {{"command", "area"}, {"base", base}, {"apex", {p0.x(), p0.y()}},
           {"max_path_difference", gap}, {"ode_residual", area_ode_residual(c, integral)},
           {"samples", values}};
  return o;
}

Output cmd_kernel(int n, double k, double from, double to, int samples, int positivity_grid,
                  double tol) {
  if (n != 2 && n != 3) throw ArgumentError("kernel: order must be 2 or 3");
  const DomainInterval I(from, to);
  const auto op = LinearOperator::single_term(n, n - 2, [k](double) { return k; }, I);
  const auto K = lagrange_kernel(op, tol);
  auto closed = [&](double s, double r) {
    const double d = s - r;
    if (n == 2) return sk(k, d);
    return k == 0.0 ? d * d / 2.0 : (1.0 - ck(k, d)) / k;
  };
  Output o;
  o.csv_header = {"s", "r", "K", "closed_form"};
  json values = json::array();
  double worst = 0.0;
  const auto pts = grid(I, samples);
  for (double r : pts)
    for (double s : pts) {
      if (s < r) continue;
      const double v = K(s, r), w = closed(s, r);
      worst = std::max(worst, std::abs(v - w));
      values.push_back({{"s", s}, {"r", r}, {"K", v}, {"closed_form", w}});
      o.csv_rows.push_back({num(s), num(r), num(v), num(w)});
    }
  const auto pos = check_forward_positive(K, I, positivity_grid);
  o.doc = {{"command", "kernel"},
           {"operator", n == 2 ? "y'' + k y" : "y''' + k y'"},
           {"k", k},
           {"interval", {from, to}},
           {"max_closed_form_difference", worst},
           {"positivity",
            {{"verdict", pos.positive() ? "certified_positive_on_grid" : "violation"},
             {"grid", pos.grid_n},
             {"min_value", pos.min_value},
             {"min_s", pos.min_s},
             {"min_r", pos.min_r}}},
           {"samples", values}};
  return o;
}

struct VerifyArgs {
  std::string theorem;
  double k0 = -1.0, k1 = 0.0, L = 2.0;
  int trials = 100;
  std::string curve;
  std::optional<double> s0;
  int n = 2;
  std::optional<int> ell;
  std::optional<double> forcing;
};

Output cmd_verify(const VerifyArgs& a, const Common& common) {
  const std::string id = resolve(verify_aliases(), a.theorem);
  CompareOptions opt;
  if (common.tol) opt.slack = *common.tol;
  std::vector<BoundReport> reports;

  std::optional<AffineCurve> curve;
  if (!a.curve.empty()) curve = load_curve(read_json_file(a.curve)).arc.curve;
  auto band_curve = [&] {
    if (curve) return *curve;
    std::mt19937_64 rng(common.seed);
    return reconstruct_from_curvature(random_curvature_in_band(rng, a.k0, a.k1), DomainInterval(0.0, a.L));
  };

  if (id == "ode-comparison") {
    if (a.n != 2 && a.n != 3) throw ArgumentError("order must be 2 or 3");
    const int ell = a.ell.value_or(a.n - 2);
    const double f = a.forcing.value_or(a.n == 3 ? 0.5 : 0.0);
    Eigen::VectorXd init = Eigen::VectorXd::Zero(a.n);
    if (a.n == 2) init(1) = 1.0;
    ComparisonOptions co;
    if (common.tol) co.tol = *common.tol;
    const double k = a.k0, kb = a.k1;
    reports.push_back(compare_solutions([k](double) { return k; }, [kb](double) { return kb; }, a.n, ell,
                                        [f](double) { return f; }, init, DomainInterval(0.0, a.L), co));
  } else if (id == "area-comparison") {
    reports = sweep_area_comparison(a.trials, common.seed, a.L, opt);
  } else if (id == "area-sandwich") {
    if (curve) {
      const auto [lo, hi] = curvature_range(*curve);
      reports.push_back(area_bounds_check(*curve, lo, hi, curve->domain().length(), opt));
    } else {
      reports = sweep_curvature_band(a.trials, common.seed, a.k0, a.k1, a.L, opt).sandwich;
    }
  } else if (id == "rectangle") {
    if (curve) {
      const auto [lo, hi] = curvature_range(*curve);
      const auto& d = curve->domain();
      const double s0 = a.s0.value_or((d.lo + d.hi) / 2);
      const double L = std::min(s0 - d.lo, d.hi - s0);
      reports.push_back(coord_bounds_check(*curve, s0, lo, hi, L, opt));
    } else {
      reports = sweep_curvature_band(a.trials, common.seed, a.k0, a.k1, a.L, opt).rectangle;
    }
  } else {
    const auto target = id == "triangle-arc" ? BoundTheorem::triangle_in_arc : BoundTheorem::triangle_in_rectangle;
    for (auto& r : sweep_triangles(band_curve(), a.trials, common.seed, opt))
      if (r.theorem == target) reports.push_back(std::move(r));
  }

  Output o;
  json rs = json::array();
  int counts[3] = {0, 0, 0};
  int equalities = 0;
  o.csv_header = {"index", "theorem", "verdict", "lhs", "rhs", "equality"};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    rs.push_back(report_json(r));
    ++counts[static_cast<int>(r.verdict)];
    equalities += r.equality;
    o.csv_rows.push_back({std::to_string(i), to_string(r.theorem), to_string(r.verdict), num(r.lhs),
                          num(r.rhs), r.equality ? "1" : "0"});
  }
  o.doc = {{"command", "verify"},
           {"theorem", id},
           {"trials", reports.size()},
           {"summary",
            {{"holds", counts[static_cast<int>(Verdict::holds)]},
             {"violated", counts[static_cast<int>(Verdict::violated)]},
             {"hypotheses_failed", counts[static_cast<int>(Verdict::hypotheses_failed)]},
             {"equality", equalities}}},
           {"reports", rs}};
  o.code = verdict_code(reports);
  o.summary = id + ": " + std::to_string(counts[0]) + " holds, " + std::to_string(counts[1]) +
              " violated, " + std::to_string(counts[2]) + " hypotheses failed";
  return o;
}

Output certificate_output(const CountBoundCertificate& c) {
  Output o;
  o.doc = {{"command", "bounds"}, {"certificate", certificate_json(c)}};
  o.csv_header = {"quantity", "value"};
  o.csv_rows = {{"theorem", c.theorem},
                {"L", c.L ? num(*c.L) : ""},
                {"m", c.m ? std::to_string(*c.m) : ""},
                {"bound", c.bound ? std::to_string(*c.bound) : ""}};
  o.code = c.bound ? ExitCode::ok : ExitCode::hypotheses;
  return o;
}

struct CountArgs {
  std::string curve, lattice, theorem = "auto";
  std::optional<double> xmin, xmax, ymin, ymax, k0, k1;
  std::int64_t m_dot = 1;
};

Output cmd_count(const CountArgs& a) {
  const json cdoc = read_json_file(a.curve);
  const auto lc = load_curve(cdoc);
  const Lattice lat = a.lattice.empty() ? load_lattice(cdoc) : load_lattice(read_json_file(a.lattice));
  std::optional<Window> window;
  if (a.xmin || a.xmax || a.ymin || a.ymax) {
    Window w;
    if (a.xmin) w.xmin = *a.xmin;
    if (a.xmax) w.xmax = *a.xmax;
    if (a.ymin) w.ymin = *a.ymin;
    if (a.ymax) w.ymax = *a.ymax;
    window = w;
  }
  const auto found = enumerate_on_arc(lc.arc, lat, window);
  auto [lo, hi] = curvature_range(lc.arc.curve);
  const double k0 = a.k0.value_or(lo), k1 = std::max(a.k1.value_or(hi), k0);
  const auto cert = certify(resolve(count_aliases(), a.theorem), k0, k1, lc.arc.curve.domain().length(),
                            a.m_dot, lat.area());
  const auto mdot = m_of_curve(found);
  const auto count = static_cast<int>(found.size());

  Output o;
  std::string marker;
  if (!cert.bound) {
    o.code = ExitCode::hypotheses;
  } else if (count > *cert.bound) {
    o.code = ExitCode::violated;
    marker = "VIOLATED";
  } else if (count == *cert.bound) {
    marker = "SHARP";
  }
  o.summary = "bound " + (cert.bound ? std::to_string(*cert.bound) : std::string("none")) + ", count " +
              std::to_string(count) + (marker.empty() ? "" : ", " + marker);
  o.doc = {{"command", "count"},
           {"certificate", certificate_json(cert)},
           {"count", count},
           {"marker", marker},
           {"summary", o.summary},
           {"exact", found.exact},
           {"inexact_warning", found.inexact_warning},
           {"m_dot_certificate",
            {{"value", mdot.value}, {"triples", mdot.triples}, {"basis", mdot.basis}}},
           {"points", points_json(found)}};
  o.csv_header = {"m", "n", "x", "y", "s"};
  for (const auto& p : found.points)
    o.csv_rows.push_back({std::to_string(p.coord.m), std::to_string(p.coord.n), num(p.position.x()),
                          num(p.position.y()), num(p.s)});
  return o;
}

// Figures: every series is a list of plane points.

using Series = std::vector<std::pair<std::string, std::vector<PlaneVector>>>;

std::vector<PlaneVector> sample(const AffineCurve& c, int n) {
  std::vector<PlaneVector> out;
  for (double s : grid(c.domain(), n)) out.push_back(c(s));
  return out;
}

std::vector<PlaneVector> lattice_points_in(const Lattice& lat, double half_width) {
  std::vector<PlaneVector> out;
  const int R = 12;
  for (int m = -R; m <= R; ++m)
    for (int n = -R; n <= R; ++n) {
      const PlaneVector p = lat.point({m, n});
      if (std::abs(p.x()) <= half_width && std::abs(p.y()) <= half_width) out.push_back(p);
    }
  std::sort(out.begin(), out.end(), [](const PlaneVector& a, const PlaneVector& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  return out;
}

Series figure(const std::string& id, int n, json& meta) {
  Series out;
  if (id == "fig1") {
    // Arcs of curvature −1 and 1 from a common frame, with their secants.
    const double L = 2.0;
    const auto c = constant_curvature_curve(-1.0, {0.0, L});
    const auto cb = constant_curvature_curve(1.0, {0.0, L});
    out = {{"c", sample(c, n)}, {"c_bar", sample(cb, n)}, {"secant_c", {c(0), c(L)}},
           {"secant_c_bar", {cb(0), cb(L)}}};
    meta = {{"k", -1.0}, {"k_bar", 1.0}, {"L", L}, {"area_c", abar(-1.0, L)}, {"area_c_bar", abar(1.0, L)}};
  } else if (id == "fig5") {
    const double k0 = -1.0, L = 1.0;
    const auto c = constant_curvature_curve(k0, {-L, L});
    out = {{"curve", sample(c, n)}, {"triangle", {c(-L), c(0), c(L)}}};
    meta = {{"k0", k0}, {"L", L}, {"triangle_area", hk(k0, L)}};
  } else if (id == "fig6") {
    const double L = 1.0, k0 = -0.9;
    const auto c = reconstruct_from_curvature([](double s) { return -0.5 + 0.4 * std::sin(3.0 * s); },
                                              {-L, L});
    const double X = xbar(k0, L), Y = ybar(k0, L);
    out = {{"curve", sample(c, n)},
           {"rectangle", {{-X, 0}, {X, 0}, {X, Y}, {-X, Y}, {-X, 0}}},
           {"triangle", {c(-L), c(-L / 3.0), c(L)}}};
    meta = {{"k0", k0}, {"k1", -0.1}, {"L", L}, {"half_width", X}, {"height", Y}};
  } else if (id == "fig7") {
    const auto inst = hyperbola_zxz_instance(1, false);
    Window w;
    w.ymin = -8;
    w.ymax = 0;
    const auto pts = enumerate_on_arc(inst.arc, inst.lattice, w);
    std::vector<PlaneVector> marked;
    for (const auto& p : pts.points) marked.push_back(p.position);
    out = {{"curve", sample(inst.arc.curve, n)}, {"lattice_points", marked}};
    meta = {{"alpha", hyperbola_alpha()}, {"L", hyperbola_spacing()}, {"k0", inst.k0}};
  } else if (id == "fig8") {
    const auto ci = circle_instance(1.0);
    out.push_back({"circle", sample(ci.arc.curve, n)});
    for (const auto* fx : {&ci.square, &ci.hexagonal}) {
      std::vector<PlaneVector> marked;
      for (double s : fx->params) marked.push_back(ci.arc.curve(s));
      out.push_back({fx->name + "_lattice", lattice_points_in(fx->lattice, 2.0)});
      out.push_back({fx->name + "_points", marked});
    }
    meta = {{"k", 1.0}, {"radius", ci.radius}, {"square_trace", ci.square.expected_trace},
            {"hexagonal_trace", ci.hexagonal.expected_trace}};
  } else {
    throw ParseError("unknown figure id '" + id + "' (fig1, fig5, fig6, fig7, fig8)");
  }
  return out;
}

Output cmd_figures(const std::string& id, int n) {
  json meta;
  const Series series = figure(id, n, meta);
  Output o;
  o.csv_header = {"series", "index", "x", "y"};
  json js = json::array();
  for (const auto& [name, pts] : series) {
    json arr = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      arr.push_back({pts[i].x(), pts[i].y()});
      o.csv_rows.push_back({name, std::to_string(i), num(pts[i].x()), num(pts[i].y())});
    }
    js.push_back({{"name", name}, {"points", arr}});
  }
  o.doc = {{"command", "figures"}, {"figure", id}, {"parameters", meta}, {"series", js}};
  return o;
}

struct ExamplesArgs {
  std::string kind;
  int m0 = 1;
  bool rigid = false;
  std::string lattice;
};

Output cmd_examples(const ExamplesArgs& a) {
  Output o;
  if (!a.kind.empty()) {
    const Lattice lat = a.lattice.empty() ? Lattice::integer() : load_lattice(read_json_file(a.lattice));
    if (a.kind == "circle") throw ArgumentError("circle instances are listed without --kind");
    const SharpInstance inst = a.kind == "parabola"    ? parabola_instance(lat, a.m0, a.rigid)
                               : a.kind == "hyperbola" ? hyperbola_general_instance(lat, a.m0, a.rigid)
                                                       : throw ParseError("unknown kind '" + a.kind + "'");
    o.doc = instance_document(inst);
    o.doc["command"] = "examples";
    o.csv_header = {"m", "n"};
    for (const auto& q : inst.expected) o.csv_rows.push_back({std::to_string(q.m), std::to_string(q.n)});
    return o;
  }
  // Every extremal instance, enumerated and certified.
  std::vector<SharpInstance> all;
  for (int m0 = 1; m0 <= 5; ++m0) all.push_back(parabola_instance(Lattice::integer(), m0));
  for (int m0 = 1; m0 <= 4; ++m0) all.push_back(hyperbola_zxz_instance(m0, true));
  json list = json::array();
  o.csv_header = {"name", "theorem", "bound", "count", "sharp"};
  for (const auto& inst : all) {
    const auto found = enumerate_on_arc(inst.arc, inst.lattice);
    const auto cert = inst.certificate();
    const bool sharp = cert.bound && static_cast<int>(found.size()) == *cert.bound &&
                       found.coords() == inst.expected;
    if (!sharp) o.code = ExitCode::violated;
    list.push_back({{"name", inst.name}, {"theorem", inst.theorem}, {"bound", cert.bound ? json(*cert.bound) : json(nullptr)},
                    {"count", found.size()}, {"sharp", sharp}});
    o.csv_rows.push_back({inst.name, inst.theorem, cert.bound ? std::to_string(*cert.bound) : "",
                          std::to_string(found.size()), sharp ? "1" : "0"});
  }
  const auto ci = circle_instance(1.0);
  json circles = json::array();
  for (const auto* fx : {&ci.square, &ci.hexagonal}) {
    const auto orbit = equal_spaced_orbit(ci.arc, fx->lattice, fx->params, 7);
    circles.push_back({{"configuration", fx->name}, {"trace", orbit.trace()}, {"orbit_ok", orbit.ok()}});
  }
  o.doc = {{"command", "examples"}, {"instances", list}, {"circle", {{"configurations", circles}, {"notes", ci.notes}}}};
  return o;
}

void emit(const Output& o, const Common& c, std::ostream& out, std::ostream& err) {
  std::ostringstream text;
  if (c.format == "csv") {
    auto line = [&](const std::vector<std::string>& row) {
      for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << row[i];
      text << '\n';
    };
    line(o.csv_header);
    for (const auto& r : o.csv_rows) line(r);
  } else {
    json doc = o.doc;
    doc["schema"] = 1;
    doc["seed"] = c.seed;
    text << doc.dump(2) << '\n';
  }
  if (!o.summary.empty()) err << o.summary << '\n';
  if (c.out.empty()) {
    out << text.str();
  } else {
    std::ofstream f(c.out);
    if (!f) throw ParseError("cannot write '" + c.out + "'");
    f << text.str();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Affine curvature comparison and lattice-point bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--tol", common.tol, "Numerical tolerance of the command (slack for verify)");
  app.add_option("--seed", common.seed, "Seed for randomised sweeps")->capture_default_str();
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", common.out, "Write output to PATH");

  std::string curve_file;
  int samples = 11;
  auto* arclength = app.add_subcommand("arclength", "Affine arc length of a curve spec");
  arclength->add_option("--curve", curve_file, "Curve spec (JSON)")->required();
  auto* curvature = app.add_subcommand("curvature", "Sampled affine curvature");
  curvature->add_option("--curve", curve_file, "Curve spec (JSON)")->required();
  curvature->add_option("--samples", samples);

  std::optional<double> area_base;
  std::string apex;
  auto* area = app.add_subcommand("area", "Area function by quadrature and by its ODE");
  area->add_option("--curve", curve_file, "Curve spec (JSON)")->required();
  area->add_option("--samples", samples);
  area->add_option("--a", area_base, "Base parameter (default: domain start)");
  area->add_option("--p0", apex, "Apex x,y (default: c(a))");

  int order = 3, kgrid = 11, pgrid = 101;
  double kval = 0.0, kfrom = 0.0, kto = 1.0;
  auto* kernel = app.add_subcommand("kernel", "Lagrange kernel of y'' + k y or y''' + k y'");
  kernel->add_option("--n", order, "Order, 2 or 3");
  kernel->add_option("--k", kval);
  kernel->add_option("--from", kfrom);
  kernel->add_option("--to", kto);
  kernel->add_option("--grid", kgrid, "Sample grid per axis");
  kernel->add_option("--positivity-grid", pgrid);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a comparison theorem on instances or sweeps");
  verify->add_option("theorem", va.theorem,
                     "ode-comparison, area-comparison, area-sandwich, triangle-arc, rectangle, "
                     "triangle-rectangle")
      ->required();
  verify->add_option("--k0", va.k0, "Lower curvature bound (κ for ode-comparison)");
  verify->add_option("--k1", va.k1, "Upper curvature bound (κ̄ for ode-comparison)");
  verify->add_option("--L", va.L, "Length");
  verify->add_option("--trials", va.trials);
  verify->add_option("--curve", va.curve, "Curve spec instead of random curves");
  verify->add_option("--s0", va.s0);
  verify->add_option("--n", va.n, "ODE order for ode-comparison");
  verify->add_option("--ell", va.ell);
  verify->add_option("--f", va.forcing, "Constant forcing");

  std::string theorem;
  double k0 = 0.0, Lambda = 0.0, lattice_area = 1.0;
  std::optional<double> k1;
  std::int64_t m_dot = 1;
  auto* bounds = app.add_subcommand("bounds", "Lattice-point count bound from numbers");
  bounds->add_option("--theorem", theorem,
                     "2pts1, low_aff_bd, 2pts2, sharp_lat, rigid_lat")
      ->required();
  bounds->add_option("--k0", k0)->required();
  bounds->add_option("--k1", k1);
  bounds->add_option("--Lambda", Lambda)->required();
  bounds->add_option("--mdot", m_dot);
  bounds->add_option("--area", lattice_area, "Fundamental area A_L");

  CountArgs ca;
  auto* count = app.add_subcommand("count", "Enumerate lattice points on an arc and certify a bound");
  count->add_option("--curve", ca.curve, "Curve spec, or a document with curve and lattice")->required();
  count->add_option("--lattice", ca.lattice, "Lattice spec (JSON)");
  count->add_option("--theorem", ca.theorem, "auto, 2pts1, low_aff_bd, 2pts2, sharp_lat, rigid_lat");
  count->add_option("--xmin", ca.xmin);
  count->add_option("--xmax", ca.xmax);
  count->add_option("--ymin", ca.ymin);
  count->add_option("--ymax", ca.ymax);
  count->add_option("--k0", ca.k0, "Lower curvature bound (default: sampled)");
  count->add_option("--k1", ca.k1, "Upper curvature bound (default: sampled)");
  count->add_option("--mdot", ca.m_dot, "Triangle multiplier to use (default 1)");

  std::string figure_id;
  int figure_samples = 200;
  auto* figures = app.add_subcommand("figures", "CSV/JSON point data for the figures");
  figures->add_option("id", figure_id, "fig1, fig5, fig6, fig7 or fig8")->required();
  figures->add_option("--samples", figure_samples);

  ExamplesArgs ea;
  auto* examples = app.add_subcommand("examples", "Extremal instances (all, or one exported as specs)");
  examples->add_option("--kind", ea.kind, "parabola or hyperbola");
  examples->add_option("--m0", ea.m0);
  examples->add_flag("--rigid", ea.rigid);
  examples->add_option("--lattice", ea.lattice, "Lattice spec (default ℤ²)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return ExitCode::parse;
  }

  try {
    const double tol = common.tol.value_or(1e-12);
    Output o;
    if (*arclength) o = cmd_arclength(curve_file);
    else if (*curvature) o = cmd_curvature(curve_file, samples);
    else if (*area) o = cmd_area(curve_file, samples, area_base, apex, tol);
    else if (*kernel) o = cmd_kernel(order, kval, kfrom, kto, kgrid, pgrid, common.tol.value_or(1e-10));
    else if (*verify) o = cmd_verify(va, common);
    else if (*bounds) o = certificate_output(certify(resolve(count_aliases(), theorem), k0, k1.value_or(k0),
                                                     Lambda, m_dot, lattice_area));
    else if (*count) o = cmd_count(ca);
    else if (*figures) o = cmd_figures(figure_id, figure_samples);
    else o = cmd_examples(ea);
    emit(o, common, out, err);
    return o.code;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return ExitCode::parse;
  } catch (const ArgumentError& e) {
    err << "argument error: " << e.what() << '\n';
    return ExitCode::parse;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return ExitCode::domain;
  } catch (const IntegrationError& e) {
    err << "integration error: " << e.what() << '\n';
    return ExitCode::domain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return ExitCode::failure;
  }
}

}  // namespace affc::cli
