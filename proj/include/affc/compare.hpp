// Geometric comparison theorems as checked reports: area comparison, the
// constant-curvature area sandwich, adapted-coordinate (rectangle) bounds and
// the two inscribed-triangle bounds.

#ifndef AFFC_COMPARE_HPP
#define AFFC_COMPARE_HPP

#include "affc/curve.hpp"
#include "affc/report.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace affc {

struct CompareOptions {
  double slack = 1e-7;  // scaled by max(1, |bound|)
  int positivity_grid = 201;
  int sample_grid = 401;
  double curvature_tol = 1e-9;  // slack when checking k0 <= κ <= k1 on samples
  double rigidity_tol = 1e-6;   // κ ≡ κ̄ follow-up
};

/// A_{c,0,c(0)}(L) against Ā solving Ā''' + κ̄ Ā' = ½ with zero data.
/// κ <= κ̄ must give A >= Ā and κ >= κ̄ must give A <= Ā.
BoundReport area_compare(const AffineCurve& c, const ScalarFunction& kappa_bar, double L,
                         const CompareOptions& opt = {});

/// (abar(k1, L), abar(k0, L)). Throws ArgumentError if k0 > k1.
std::pair<double, double> area_bounds(double k0, double k1, double L);

/// Checks abar(k1, L) <= A_{c,0,c(0)}(L) <= abar(k0, L) for a curve with
/// k0 <= κ <= k1 on [0, L].
BoundReport area_bounds_check(const AffineCurve& c, double k0, double k1, double L,
                              const CompareOptions& opt = {});

/// Adapted-coordinate bounds on (s0 − L, s0 + L):
///   x̄_{k1}(|s|) <= |x(s)| <= x̄_{k0}(|s|),  ȳ_{k1}(s) <= y(s) <= ȳ_{k0}(s).
BoundReport coord_bounds_check(const AffineCurve& c, double s0, double k0, double k1, double L,
                               const CompareOptions& opt = {});

/// abar(k0, Λ): strict bound for a triangle inscribed in an arc with κ >= k0.
double triangle_bound_arc(double k0, double Lambda);
/// hk(k0, Λ/2): bound when in addition κ <= k1 <= (π/Λ)².
double triangle_bound_rect(double k0, double Lambda);

/// Ratio − 1 of the midpoint triangle on the constant-curvature arc
/// [−Λ/2, Λ/2] to abar(k0, Λ), computed from the triangle itself.
double triangle_ratio_exact(double k0, double Lambda);
/// The asymptotic form −e^{−√|k0| Λ/2}/2 quoted for k0 → −∞.
double triangle_ratio_asymptotic(double k0, double Lambda);

enum class TriangleBoundKind { arc, rectangle };

/// ½|(p2 − p1) ∧ (p3 − p1)|.
double triangle_area(const PlaneVector& p1, const PlaneVector& p2, const PlaneVector& p3);

/// Triangle with vertices c(params) against the selected bound. Λ is the
/// domain length; k0/k1 default to the sampled extremes of κ.
BoundReport verify_triangle_bound(const AffineCurve& c, const std::array<double, 3>& params,
                                  TriangleBoundKind kind, std::optional<double> k0 = {},
                                  std::optional<double> k1 = {}, const CompareOptions& opt = {});

/// Sampled extremes of κ over the domain (n points).
std::pair<double, double> curvature_range(const AffineCurve& c, int n = 401);

// Randomised sweeps. Every sweep is deterministic for a given seed.

/// κ(s) with k0 <= κ <= k1, a random smooth oscillation inside the band.
ScalarFunction random_curvature_in_band(std::mt19937_64& rng, double k0, double k1);

/// Area-comparison trials on [0, L], cycling over the three forward-positivity
/// cases for κ̄ (constant, nonpositive, bounded by (π/L)²) and both orderings.
std::vector<BoundReport> sweep_area_comparison(int trials, std::uint64_t seed, double L = 2.0,
                                               const CompareOptions& opt = {});

struct BandSweepResult {
  std::vector<BoundReport> sandwich;   // area_bounds_check on [0, L]
  std::vector<BoundReport> rectangle;  // coord_bounds_check at s0 = 0 on [−L, L]
};
/// Random κ in [k0, k1], each reconstructed on [−L, L].
BandSweepResult sweep_curvature_band(int trials, std::uint64_t seed, double k0, double k1,
                                     double L, const CompareOptions& opt = {});

/// Random inscribed triangles on `c`; returns the arc-bound and rectangle-bound
/// reports for each triple (the rectangle report only if its hypothesis holds).
std::vector<BoundReport> sweep_triangles(const AffineCurve& c, int trials, std::uint64_t seed,
                                         const CompareOptions& opt = {});

}  // namespace affc

#endif  // AFFC_COMPARE_HPP
