// Extremal instances for the lattice-point bounds: parabolic and hyperbolic
// arcs that attain them, and the circle with its two lattice configurations.

#ifndef AFFC_EXAMPLES_HPP
#define AFFC_EXAMPLES_HPP

#include "affc/lattice.hpp"

#include <array>
#include <string>
#include <vector>

namespace affc {

struct SharpInstance {
  std::string name;
  ArcSpec arc;
  Lattice lattice;
  std::vector<LatticeCoord> expected;  // in order along the arc
  int expected_bound = 0;
  std::string theorem;  // sharp_lat or rigid_lat
  double k0 = 0.0;      // constant curvature
  double Lambda = 0.0;  // affine length of the arc
  double spacing = 0.0; // affine distance between consecutive lattice points
  std::int64_t m_dot = 1;
  std::vector<std::string> notes;

  /// The certificate of the attained theorem, recomputed from the inputs.
  CountBoundCertificate certificate() const;
};

/// c(s) = v0 + (αs) v1 + (αs)(αs − 1)/2 v2 with α = (v1 ∧ v2)^{−1/3} on
/// [0, (2m0+1)/α] (2m0+2 points) or, rigid, [0, 2m0/α] (2m0+1 points).
SharpInstance parabola_instance(const Lattice& lat, int m0, bool rigid = false);

/// α = 2^{−1/3} 5^{1/6} for the branch of x² − xy − y² = 1 through (1, 0).
double hyperbola_alpha();
/// L with cosh(αL) = 3/2, the affine spacing of its integer points.
double hyperbola_spacing();

/// c(s) = (cosh αs − sinh(αs)/√5, −2 sinh(αs)/√5) on [0, (2m0+1)L] or,
/// rigid, [L, (2m0+1)L].
SharpInstance hyperbola_zxz_instance(int m0, bool rigid);

/// The same arc carried to L(v0, v1, v2): ĉ(s) = v0 + X(s/β) v1 + Y(s/β) v2
/// with β = (v1 ∧ v2)^{1/3}, spacing βL and curvature −α²/β².
SharpInstance hyperbola_general_instance(const Lattice& lat, int m0, bool rigid = false);

/// Four lattice points equally spaced on a circle, with the rotation trace
/// that the lattice forces.
struct CircleFixture {
  std::string name;
  Lattice lattice;
  std::array<double, 4> params;
  double spacing = 0.0;
  std::int64_t expected_trace = 0;
};

struct CircleInstance {
  ArcSpec arc;  // the full circle, s ∈ [0, 2π/√k]
  double k = 1.0;
  double radius = 1.0;  // k^{−3/4}
  double Lambda = 0.0;
  CircleFixture square;     // rotation by π/2
  CircleFixture hexagonal;  // rotation by π/3
  std::vector<std::string> notes;
};

/// Circle of radius k^{−3/4} centred at the origin, κ ≡ k.
CircleInstance circle_instance(double k);

}  // namespace affc

#endif  // AFFC_EXAMPLES_HPP
