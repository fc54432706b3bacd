#include "specs.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace affc::cli {

namespace {

const json& field(const json& spec, const char* name) {
  if (!spec.is_object() || !spec.contains(name))
    throw ParseError(std::string("missing field '") + name + "'");
  return spec.at(name);
}

PlaneVector parse_point(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 2) throw ParseError(what + ": expected [x, y]");
  return {parse_real(v[0], what + ".x"), parse_real(v[1], what + ".y")};
}

DomainInterval parse_domain(const json& v) {
  const PlaneVector d = parse_point(v, "domain");
  if (!(d.x() <= d.y())) throw ParseError("domain: lower end exceeds upper end");
  return {d.x(), d.y()};
}

// Exact value of a decimal or fraction literal, if it is one with a modest
// denominator (larger ones would overflow the 64-bit rational arithmetic).
std::optional<Rational> exact_literal(const json& v) {
  try {
    Rational r;
    if (v.is_string()) {
      r = Rational::parse(v.get<std::string>());
    } else if (v.is_number_integer()) {
      r = Rational(v.get<std::int64_t>());
    } else if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d != std::floor(d) || std::abs(d) > 1e15) return std::nullopt;
      r = Rational(static_cast<std::int64_t>(d));
    } else {
      return std::nullopt;
    }
    if (r.den() > 1000000 || std::abs(r.num()) > (std::int64_t{1} << 40)) return std::nullopt;
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::vector<double> parse_poly(const json& v, const std::string& what) {
  if (!v.is_array() || v.empty()) throw ParseError(what + ": expected a coefficient list");
  std::vector<double> out;
  for (const auto& c : v) out.push_back(parse_real(c, what));
  return out;
}

std::optional<std::vector<Rational>> exact_poly(const json& v) {
  std::vector<Rational> out;
  for (const auto& c : v) {
    auto r = exact_literal(c);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  return out;
}

// j-th derivative of Σ c_i x^i.
double poly_derivative(const std::vector<double>& c, int j, double x) {
  double y = 0.0;
  for (int i = static_cast<int>(c.size()) - 1; i >= j; --i) {
    double f = 1.0;
    for (int t = 0; t < j; ++t) f *= i - t;
    y = y * x + f * c[static_cast<std::size_t>(i)];
  }
  return y;
}

std::optional<AdaptedFrame> parse_frame(const json& spec) {
  if (!spec.contains("frame")) return std::nullopt;
  const json& f = spec.at("frame");
  AdaptedFrame frame;
  frame.origin = parse_point(field(f, "origin"), "frame.origin");
  frame.tangent = parse_point(field(f, "tangent"), "frame.tangent");
  frame.normal = parse_point(field(f, "normal"), "frame.normal");
  if (std::abs(frame.determinant() - 1.0) > 1e-12)
    throw ParseError("frame: tangent ∧ normal must equal 1");
  return frame;
}

// A conic known in frame coordinates, expressed in the plane.
ConicCoefficients conic_through_frame(const ConicCoefficients& q, const AdaptedFrame& frame) {
  // (ξ, η) = B⁻¹ (p − origin) with det B = 1.
  const PlaneVector c1(frame.normal.y(), -frame.tangent.y());
  const PlaneVector c2(-frame.normal.x(), frame.tangent.x());
  const PlaneVector o = -(c1 * frame.origin.x() + c2 * frame.origin.y());
  return substitute(q, o, c1, c2);
}

std::string literal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json point_literal(const PlaneVector& p) { return json::array({literal(p.x()), literal(p.y())}); }

}  // namespace

double parse_real(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ParseError(what + ": expected a number or decimal string");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto r = std::from_chars(first, s.data() + s.size(), out);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
    throw ParseError(what + ": not a decimal literal: '" + s + "'");
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

LoadedCurve load_curve(const json& doc) {
  const json& spec = doc.contains("curve") ? doc.at("curve") : doc;
  const std::string type = field(spec, "type").get<std::string>();
  const auto frame = parse_frame(spec);
  LoadedCurve out{type, ArcSpec{unit_parabola({0, 0}), {}, {}, {}}, {}};

  if (type == "parabola") {
    // (s, s²/2), i.e. x² − 2y = 0.
    const auto domain = parse_domain(field(spec, "domain"));
    out.arc.curve = unit_parabola(domain);
    if (frame) {
      out.arc.curve = out.arc.curve.transformed(frame->basis(), frame->origin);
      out.arc.approx_conic = conic_through_frame({1, 0, 0, 0, -2, 0}, *frame);
    } else {
      out.arc.conic = RationalConic{1, 0, 0, 0, -2, 0};
    }
  } else if (type == "constant-curvature") {
    // x² + k y² − 2y = 0 in frame coordinates.
    const json& kj = field(spec, "k");
    const double k = parse_real(kj, "k");
    const auto domain = parse_domain(field(spec, "domain"));
    out.arc.curve = constant_curvature_curve(k, domain, frame.value_or(AdaptedFrame{}));
    const auto kr = exact_literal(kj);
    if (!frame && kr)
      out.arc.conic = RationalConic{1, 0, *kr, 0, -2, 0};
    else
      out.arc.approx_conic = conic_through_frame({1, 0, k, 0, -2, 0}, frame.value_or(AdaptedFrame{}));
  } else if (type == "conic") {
    const json& co = field(spec, "coefficients");
    std::array<double, 6> q{};
    std::array<std::optional<Rational>, 6> qr;
    const char* names[] = {"a", "b", "c", "d", "e", "f"};
    bool exact = true;
    for (int i = 0; i < 6; ++i) {
      const json v = co.contains(names[i]) ? co.at(names[i]) : json("0");
      q[i] = parse_real(v, std::string("coefficients.") + names[i]);
      qr[i] = exact_literal(v);
      exact = exact && qr[i].has_value();
    }
    const ConicCoefficients cq{q[0], q[1], q[2], q[3], q[4], q[5]};
    const PlaneVector p = parse_point(field(spec, "point"), "point");
    if (std::abs(cq(p)) > 1e-9 * std::max(1.0, cq.gradient(p).norm()))
      throw DomainError("conic: the point does not lie on the conic");
    out.arc.curve = conic_curve(cq, p, parse_domain(field(spec, "domain")));
    if (exact)
      out.arc.conic = RationalConic{*qr[0], *qr[1], *qr[2], *qr[3], *qr[4], *qr[5]};
    else
      out.arc.approx_conic = cq;
  } else if (type == "graph") {
    const json& pj = field(spec, "polynomial");
    const auto c = parse_poly(pj, "polynomial");
    const PlaneVector xr = parse_point(field(spec, "x_domain"), "x_domain");
    if (!(xr.x() < xr.y())) throw ParseError("x_domain: empty interval");
    GraphFunction g{[c](double x) { return poly_derivative(c, 0, x); },
                    [c](double x) { return poly_derivative(c, 1, x); },
                    [c](double x) { return poly_derivative(c, 2, x); },
                    [c](double x) { return poly_derivative(c, 3, x); },
                    [c](double x) { return poly_derivative(c, 4, x); }};
    for (int i = 0; i <= 256; ++i) curvature_from_graph(g, xr.x() + (xr.y() - xr.x()) * i / 256.0);
    const RawCurve raw = graph_curve(g);
    out.raw_arclength = affine_arclength(raw, xr.x(), xr.y());
    out.arc.curve = reparam_unit_speed(raw, xr.x(), xr.y());
    out.arc.graph = exact_poly(pj);
  } else if (type == "curvature-ivp") {
    const auto c = parse_poly(field(spec, "kappa"), "kappa");
    const auto domain = parse_domain(field(spec, "domain"));
    const double s0 = spec.contains("s0") ? parse_real(spec.at("s0"), "s0") : domain.clamp(0.0);
    out.arc.curve = reconstruct_from_curvature([c](double s) { return poly_derivative(c, 0, s); },
                                               domain, frame.value_or(AdaptedFrame{}), s0);
  } else {
    throw ParseError("unknown curve type '" + type + "'");
  }
  return out;
}

Lattice load_lattice(const json& doc) {
  const json& spec = doc.contains("lattice") ? doc.at("lattice") : doc;
  std::array<json, 6> parts;
  const char* names[] = {"v0", "v1", "v2"};
  for (int i = 0; i < 3; ++i) {
    const json& v = field(spec, names[i]);
    if (!v.is_array() || v.size() != 2) throw ParseError(std::string(names[i]) + ": expected [x, y]");
    parts[2 * i] = v[0];
    parts[2 * i + 1] = v[1];
  }
  std::array<Rational, 6> r;
  bool exact = true;
  for (int i = 0; i < 6 && exact; ++i) {
    const auto e = exact_literal(parts[i]);
    if (e) r[i] = *e;
    exact = e.has_value();
  }
  if (exact)
    return Lattice(RationalPoint{r[0], r[1]}, RationalPoint{r[2], r[3]}, RationalPoint{r[4], r[5]});
  std::array<double, 6> d{};
  for (int i = 0; i < 6; ++i) d[i] = parse_real(parts[i], "lattice");
  return Lattice(PlaneVector(d[0], d[1]), PlaneVector(d[2], d[3]), PlaneVector(d[4], d[5]));
}

json lattice_spec(const Lattice& lat) {
  json out;
  const char* names[] = {"v0", "v1", "v2"};
  if (lat.exact()) {
    const auto& g = lat.exact_generators();
    for (int i = 0; i < 3; ++i) out[names[i]] = json::array({g[i][0].str(), g[i][1].str()});
  } else {
    const PlaneVector v[] = {lat.v0(), lat.v1(), lat.v2()};
    for (int i = 0; i < 3; ++i) out[names[i]] = point_literal(v[i]);
  }
  return out;
}

json instance_document(const SharpInstance& inst) {
  json curve{{"type", "conic"}};
  json co;
  const char* names[] = {"a", "b", "c", "d", "e", "f"};
  if (inst.arc.conic) {
    const Rational* q[] = {&inst.arc.conic->a, &inst.arc.conic->b, &inst.arc.conic->c,
                           &inst.arc.conic->d, &inst.arc.conic->e, &inst.arc.conic->f};
    for (int i = 0; i < 6; ++i) co[names[i]] = q[i]->str();
  } else {
    const auto& a = *inst.arc.approx_conic;
    const double q[] = {a.a, a.b, a.c, a.d, a.e, a.f};
    for (int i = 0; i < 6; ++i) co[names[i]] = literal(q[i]);
  }
  curve["coefficients"] = co;
  const LatticeCoord first = inst.expected.front();
  if (inst.lattice.exact()) {
    const auto p = inst.lattice.exact_point(first);
    curve["point"] = json::array({p[0].str(), p[1].str()});
  } else {
    curve["point"] = point_literal(inst.lattice.point(first));
  }
  curve["domain"] = json::array({"0", literal(inst.Lambda)});

  json expected = json::array();
  for (const auto& q : inst.expected) expected.push_back(json::array({q.m, q.n}));
  return {{"name", inst.name},
          {"curve", curve},
          {"lattice", lattice_spec(inst.lattice)},
          {"theorem", inst.theorem},
          {"expected_bound", inst.expected_bound},
          {"expected_points", expected}};
}

}  // namespace affc::cli
