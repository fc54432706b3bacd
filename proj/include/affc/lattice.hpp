// Plane lattices, exact lattice-point enumeration on convex arcs, the triangle
// multiplier ṁ and the lattice-point count bounds.

#ifndef AFFC_LATTICE_HPP
#define AFFC_LATTICE_HPP

#include "affc/curve.hpp"
#include "affc/rational.hpp"
#include "affc/report.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace affc {

using RationalPoint = std::array<Rational, 2>;

struct LatticeCoord {
  std::int64_t m = 0;
  std::int64_t n = 0;
  friend auto operator<=>(const LatticeCoord&, const LatticeCoord&) = default;
};

/// {v0 + m v1 + n v2 : m, n ∈ ℤ}. Exact when the generators are known as
/// rationals; membership and multipliers are then decided without rounding.
class Lattice {
 public:
  /// Exact iff every component is an integer.
  Lattice(const PlaneVector& v0, const PlaneVector& v1, const PlaneVector& v2);
  Lattice(const RationalPoint& v0, const RationalPoint& v1, const RationalPoint& v2);
  /// Components as integer, fraction or decimal strings.
  static Lattice from_strings(const std::array<std::string, 6>& xy);
  static Lattice integer() { return Lattice(PlaneVector(0, 0), PlaneVector(1, 0), PlaneVector(0, 1)); }

  bool exact() const { return exact_.has_value(); }
  const PlaneVector& v0() const { return v_[0]; }
  const PlaneVector& v1() const { return v_[1]; }
  const PlaneVector& v2() const { return v_[2]; }
  /// Rational generators (v0, v1, v2); throws ArgumentError when inexact.
  const std::array<RationalPoint, 3>& exact_generators() const;

  /// A_L = |v1 ∧ v2|.
  double area() const { return std::abs(wedge(v_[1], v_[2])); }
  std::optional<Rational> exact_area() const;

  PlaneVector point(LatticeCoord q) const;
  RationalPoint exact_point(LatticeCoord q) const;
  /// Real (m, n) with p = v0 + m v1 + n v2.
  PlaneVector real_coordinates(const PlaneVector& p) const;
  /// Lattice coordinates of p if every real coordinate is within tol of an integer.
  std::optional<LatticeCoord> coordinates(const PlaneVector& p, double tol = 1e-9) const;
  /// Exact membership; requires an exact lattice.
  std::optional<LatticeCoord> coordinates(const RationalPoint& p) const;

 private:
  std::array<PlaneVector, 3> v_;
  std::optional<std::array<RationalPoint, 3>> exact_;
};

/// a x² + b xy + c y² + d x + e y + f over the rationals.
struct RationalConic {
  Rational a, b, c, d, e, f;
  Rational operator()(const RationalPoint& p) const;
  ConicCoefficients to_double() const;
  /// The conic in coordinates q with p = origin + B q, B = [col1 col2].
  RationalConic substitute(const RationalPoint& origin, const RationalPoint& col1,
                           const RationalPoint& col2) const;
};

/// Floating counterpart of RationalConic::substitute.
ConicCoefficients substitute(const ConicCoefficients& q, const PlaneVector& origin,
                             const PlaneVector& col1, const PlaneVector& col2);

/// A curve arc together with whatever equation decides membership. With an
/// exact equation and an exact lattice, enumeration uses no tolerances.
struct ArcSpec {
  AffineCurve curve;
  std::optional<RationalConic> conic;          // exact implicit equation
  std::optional<std::vector<Rational>> graph;  // exact y = Σ c_i x^i
  std::optional<ConicCoefficients> approx_conic;  // floating equation otherwise
};

struct Window {
  double xmin = -std::numeric_limits<double>::infinity();
  double xmax = std::numeric_limits<double>::infinity();
  double ymin = -std::numeric_limits<double>::infinity();
  double ymax = std::numeric_limits<double>::infinity();
  bool contains(const PlaneVector& p) const {
    return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
  }
};

struct LatticePoint {
  LatticeCoord coord;
  PlaneVector position;
  double s = 0.0;  // arc parameter
};

struct LatticePointSet {
  std::vector<LatticePoint> points;  // strictly increasing s
  bool exact = true;                 // every membership decision was exact
  bool inexact_warning = false;      // tolerance fallback was used
  std::size_t size() const { return points.size(); }
  std::vector<LatticeCoord> coords() const;
};

/// Every lattice point on the arc (optionally inside a window), found by a
/// bounding-box scan with an exact membership test where available and a
/// locator for the arc parameter.
LatticePointSet enumerate_on_arc(const ArcSpec& arc, const Lattice& lat,
                                 const std::optional<Window>& window = {});

/// |(q2 − q1) ∧ (q3 − q1)| in lattice coordinates; 0 means collinear.
std::int64_t triangle_multiplier(LatticeCoord q1, LatticeCoord q2, LatticeCoord q3);
/// Same for plane points; throws ArgumentError if a point is not in the lattice.
std::int64_t triangle_multiplier(const Lattice& lat, const PlaneVector& p1, const PlaneVector& p2,
                                 const PlaneVector& p3);

struct MDotCertificate {
  std::int64_t value = 1;
  std::optional<std::array<std::size_t, 3>> witness;  // indices of a minimising triple
  std::size_t triples = 0;
  std::size_t degenerate = 0;  // collinear triples skipped
  std::string basis;
};

/// Minimum multiplier over all triples of the found points; 1 with fewer than 3.
MDotCertificate m_of_curve(const LatticePointSet& found);

/// ṁ >= 2 for a x² + b xy + c y² = R when a, c, R are odd and b is even (any
/// lattice triangle on it has even doubled area); 1 otherwise.
std::int64_t parity_m_dot(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t R);

struct CountBoundCertificate {
  std::string theorem;  // 2pts1, low_aff_bd, 2pts2, sharp_lat, rigid_lat
  double k0 = 0.0;
  std::optional<double> k1;
  double Lambda = 0.0;
  std::int64_t m_dot = 1;
  double lattice_area = 1.0;
  std::optional<double> L;
  std::optional<std::int64_t> m;
  std::optional<int> bound;  // empty when the hypotheses fail
  std::vector<Hypothesis> hypotheses;
  bool rigidity = false;  // equality characterisation applies
  std::vector<std::string> notes;

  bool hypotheses_hold() const;
};

/// At most 2 points when abar(k0, Λ) <= ṁ A_L / 2.
CountBoundCertificate bound_two_points(double k0, double Lambda, std::int64_t m_dot,
                                       double lattice_area);
/// 2⌈Λ / fk(k0, ṁ A_L / 2)⌉.
CountBoundCertificate bound_general(double k0, double Lambda, std::int64_t m_dot,
                                    double lattice_area);
/// At most 3 points when hk(k0, Λ/2) <= ṁ A_L / 2 and k1 <= (π/Λ)².
CountBoundCertificate bound_three_points(double k0, double k1, double Lambda, std::int64_t m_dot,
                                         double lattice_area);
/// 2m + 2 with L = gk(k0, ṁ A_L / 2), m = ⌊Λ/(2L)⌋, when k1 <= (π/(2L))².
CountBoundCertificate bound_sharp(double k0, double k1, double Lambda, std::int64_t m_dot,
                                  double lattice_area);
/// 2m + 1 for an open arc with m = Λ/(2L) an integer (to 1e-9); otherwise
/// throws ArgumentError.
CountBoundCertificate bound_rigid(double k0, double k1, double Lambda, std::int64_t m_dot,
                                  double lattice_area);

/// Same point set: each generator system is an integer combination of the other.
bool lattice_equal(const Lattice& a, const Lattice& b);

/// p ↦ M p + b over the rationals.
struct RationalMotion {
  Rational m11 = 1, m12 = 0, m21 = 0, m22 = 1, b1 = 0, b2 = 0;
  RationalPoint operator()(const RationalPoint& p) const;
  Rational determinant() const { return m11 * m22 - m12 * m21; }
};

struct MotionCheck {
  bool determinant_one = false;
  bool images_in_lattice = false;
  bool area_hypothesis = false;   // image triangle has area A_L / 2
  bool generators_direct = false; // φ(v0), φ(v0 + v1), φ(v0 + v2) in the lattice
  bool preserves() const {
    return determinant_one && images_in_lattice && area_hypothesis && generators_direct;
  }
};

/// Exact check that a special affine motion preserves an exact lattice, using
/// the images of three lattice points.
MotionCheck motion_preserves_lattice(const RationalMotion& phi, const Lattice& lat,
                                     LatticeCoord p1, LatticeCoord p2, LatticeCoord p3);

struct OrbitResult {
  LatticePointSet points;  // p1, φ(p1), φ²(p1), ...
  // The motion in lattice coordinates: q ↦ A q + t with integer entries.
  std::array<std::array<std::int64_t, 2>, 2> A{};
  std::array<std::int64_t, 2> t{};
  double spacing = 0.0;
  double hk_defect = 0.0;  // |hk(k0, L) − A_L/2|
  bool all_in_lattice = false;
  bool all_on_curve = false;
  std::vector<Hypothesis> hypotheses;
  bool ok() const;
  std::int64_t trace() const { return A[0][0] + A[1][1]; }
};

/// From four lattice points c(s1..s4) equally spaced on a constant-curvature
/// arc, builds the motion taking each point to the next and iterates it
/// `count` times starting at c(s1).
OrbitResult equal_spaced_orbit(const ArcSpec& arc, const Lattice& lat,
                               const std::array<double, 4>& params, int count);

/// 2cos θ and whether it is an integer to 1e-9.
std::pair<double, bool> rotation_trace(double theta);

}  // namespace affc

#endif  // AFFC_LATTICE_HPP
