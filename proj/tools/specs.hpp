// Curve and lattice specification documents (JSON) for the command-line tool.

#ifndef AFFC_TOOLS_SPECS_HPP
#define AFFC_TOOLS_SPECS_HPP

#include "affc/examples.hpp"
#include "affc/lattice.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace affc::cli {

using nlohmann::json;

/// A decimal string (round-to-nearest) or a JSON number. Throws ParseError.
double parse_real(const json& v, const std::string& what);

json read_json_file(const std::string& path);

struct LoadedCurve {
  std::string type;
  ArcSpec arc;
  std::optional<double> raw_arclength;  // for inputs not already in affine arc length
};

/// Types: parabola, conic, graph, constant-curvature, curvature-ivp.
LoadedCurve load_curve(const json& spec);

/// {"v0": [x, y], "v1": [x, y], "v2": [x, y]}; exact when every component is
/// a modest rational.
Lattice load_lattice(const json& spec);

json lattice_spec(const Lattice& lat);
/// Curve spec, lattice spec and expectations for an extremal instance.
json instance_document(const SharpInstance& inst);

}  // namespace affc::cli

#endif  // AFFC_TOOLS_SPECS_HPP
