// Small surfaces and diagrams shared by the unit and acceptance tests.
#pragma once

#include <string>
#include <vector>

#include "thetamirror/scattering.hpp"

namespace fixture {

// Flat plane with the fan of P1xP1 and no kinks; two formal parameters.
inline theta::AffineSurface flat_plane() {
  using namespace theta;
  CurveClassMonoid mon{{"t1", "t2"}, {1, 1}};
  std::vector<Ray> rays(4);
  for (int i = 0; i < 4; ++i) rays[i] = {0, {0, 0}, "D" + std::to_string(i + 1)};
  return AffineSurface("flat", rays, mon);
}

// Lines R·(2,1) and R·(1,1) (global coordinates) with functions 1 + t1 z^(2,1), 1 + t2 z^(1,1).
inline theta::ScatteringDiagram two_lines(std::int64_t order) {
  using namespace theta;
  ScatteringDiagram d;
  d.order = order;
  // cone 3 has basis (-e1, -e2), so z^(2,1) = z^{-(2,1)} there
  d.walls.push_back({0, {2, 1}, {{1, {1, 0}, 1}}});
  d.walls.push_back({2, {2, 1}, {{1, {1, 0}, -1}}});
  d.walls.push_back({0, {1, 1}, {{1, {0, 1}, 1}}});
  d.walls.push_back({2, {1, 1}, {{1, {0, 1}, -1}}});
  return d;
}

}  // namespace fixture
