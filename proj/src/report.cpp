#include "affc/report.hpp"

namespace affc {

std::string to_string(BoundTheorem t) {
  switch (t) {
    case BoundTheorem::ode_comparison: return "ode_comparison";
    case BoundTheorem::area_comparison: return "area_comparison";
    case BoundTheorem::area_bounds: return "area_bounds";
    case BoundTheorem::triangle_in_arc: return "triangle_in_arc";
    case BoundTheorem::coordinate_bounds: return "coordinate_bounds";
    case BoundTheorem::triangle_in_rectangle: return "triangle_in_rectangle";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::violated: return "violated";
    case Verdict::hypotheses_failed: return "hypotheses_failed";
  }
  return "unknown";
}

}  // namespace affc
