#pragma once

#include <string>

#include "json.hpp"

#include "thetamirror/lattice.hpp"
#include "thetamirror/mirror.hpp"
#include "thetamirror/periods.hpp"
#include "thetamirror/troptypes.hpp"

namespace theta::io {

using json = nlohmann::ordered_json;

// Big integers are written as JSON numbers when they fit in 64 bits, else as strings.
json to_json(const Int& x);
Int int_from_json(const json& j);

json to_json(const CurveClassMonoid& m);
CurveClassMonoid monoid_from_json(const json& j);

json to_json(const AffineSurface& s);
AffineSurface surface_from_json(const json& j);

json to_json(const AffineSurface& s, const ScatteringDiagram& d);
ScatteringDiagram diagram_from_json(const AffineSurface& s, const json& j);

json to_json(const Series& x);
Series series_from_json(const CurveClassMonoid& m, const json& j);

json to_json(const AffineSurface& s, const ThetaElem& e);
ThetaElem theta_from_json(const AffineSurface& s, const json& j);

json to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const json& j);

json to_json(const TropicalType& t);
TropicalType type_from_json(const json& j);

json to_json(const PeriodReport& r);

// "0", "c:a,b" with a 1-based cone, or a ray alias "v1", "v2", ...
BDirection parse_direction(const AffineSurface& s, const std::string& text);

// Builtin name, or path to a target JSON file.
AffineSurface load_target(const std::string& name_or_path);
json read_json_file(const std::string& path);

}  // namespace theta::io
