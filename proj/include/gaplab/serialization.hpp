#pragma once

#include "json.hpp"

#include "gaplab/geometry.hpp"
#include "gaplab/torsion_solver.hpp"
#include "gaplab/torus_signal.hpp"

namespace gaplab {

nlohmann::json to_json(const ConvexDomain& d);
ConvexDomain domain_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HessianReport& r);

nlohmann::json to_json(const FourierSeries& s);
FourierSeries series_from_json(const nlohmann::json& j);

}  // namespace gaplab
