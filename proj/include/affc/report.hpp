// Result carrier for checked inequality instances.

#ifndef AFFC_REPORT_HPP
#define AFFC_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace affc {

enum class BoundTheorem {
  ode_comparison,         // y^(n) + κ y^(ℓ) = f  vs  the κ̄ problem
  area_comparison,        // area function vs the κ̄ area profile
  area_bounds,            // two-sided constant-curvature area sandwich
  triangle_in_arc,        // inscribed triangle < abar(k0, Λ)
  coordinate_bounds,      // adapted-coordinate rectangle bounds
  triangle_in_rectangle,  // inscribed triangle <= hk(k0, Λ/2)
};

enum class Verdict { holds, violated, hypotheses_failed };

struct Hypothesis {
  std::string name;
  bool checked = false;
  std::string detail;
};

struct BoundReport {
  BoundTheorem theorem{};
  std::vector<Hypothesis> hypotheses;
  double lhs = 0.0;
  double rhs = 0.0;
  Verdict verdict = Verdict::hypotheses_failed;
  bool equality = false;
  std::optional<double> witness;
  std::vector<std::string> notes;

  bool hypotheses_hold() const {
    return std::all_of(hypotheses.begin(), hypotheses.end(),
                       [](const Hypothesis& h) { return h.checked; });
  }
  bool holds() const { return verdict == Verdict::holds; }
};

/// Absolute slack for inequality checks: 1e-7 scaled by max(1, |bound|).
inline double inequality_slack(double bound, double base = 1e-7) {
  return base * std::max(1.0, std::abs(bound));
}

/// |lhs − rhs| at or below this triggers the rigidity (equality-case) follow-up.
inline double equality_threshold(double rhs) { return 1e-6 * std::max(1.0, std::abs(rhs)); }

/// Sets the verdict from the hypotheses and the inequality lhs <= rhs + slack.
inline void settle(BoundReport& report, double slack) {
  if (!report.hypotheses_hold())
    report.verdict = Verdict::hypotheses_failed;
  else
    report.verdict = report.lhs <= report.rhs + slack ? Verdict::holds : Verdict::violated;
}

std::string to_string(BoundTheorem t);
std::string to_string(Verdict v);

}  // namespace affc

#endif  // AFFC_REPORT_HPP
