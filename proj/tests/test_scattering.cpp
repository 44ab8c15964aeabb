#include <algorithm>

#include "doctest.h"
#include "thetamirror/errors.hpp"
#include "thetamirror/scattering.hpp"
#include "fixtures.hpp"

using namespace theta;
using fixture::flat_plane;
using fixture::two_lines;

TEST_CASE("cross_wall expansions") {
  AffineSurface s = p2_toric();
  Wall trivial{0, {1, 1}, {}};
  Monomial m{1, {0}, {0, {1, 0}}};
  auto r = cross_wall(s, m, trivial, 5);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == m);

  Wall w{0, {1, 1}, {{1, {1}, 1}}};
  r = cross_wall(s, m, w, 5);
  REQUIRE(r.size() == 2);
  CHECK(r[1].A == CurveClass{1});
  CHECK(r[1].m.v == Vec2{2, 1});

  Monomial m2{1, {0}, {0, {2, 0}}};
  r = cross_wall(s, m2, w, 5);
  REQUIRE(r.size() == 3);
  CHECK(r[0].coeff == 1);
  CHECK(r[1].coeff == 2);
  CHECK(r[2].coeff == 1);
  CHECK(r[2].A == CurveClass{2});

  CHECK_THROWS_AS(cross_wall(s, Monomial{1, {0}, {0, {1, 1}}}, w, 5), TangentToWall);
}

TEST_CASE("cross_ray_kink") {
  AffineSurface s = p2_toric();
  Monomial along{1, {0}, {0, {1, 0}}};
  CHECK(cross_ray_kink(s, along, 0).A == CurveClass{0});
  Monomial down{1, {0}, {0, {0, -1}}};
  Monomial x = cross_ray_kink(s, down, 0);
  CHECK(x.A == CurveClass{1});
  CHECK(x.m.cone == 2);
  Monomial down2{1, {0}, {0, {3, -2}}};
  CHECK(cross_ray_kink(s, down2, 0).A == CurveClass{2});
}

TEST_CASE("broken lines without walls") {
  AffineSurface s = p2_toric();
  ScatteringDiagram d{4, {}};
  BPoint z{0, {Rational(5, 2), Rational(7, 3)}};
  auto lines = enumerate_broken_lines(s, d, {0, {1, 1}}, z);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0].final_monomial().m.v == Vec2{1, 1});
  CHECK(lines[0].final_monomial().coeff == 1);
  CHECK(lines[0].segments.front().from_infinity);

  // v3 reaches cone 1 by crossing rays and picks up the kink
  auto v3 = enumerate_broken_lines(s, d, {1, {0, 1}}, z);
  REQUIRE(v3.size() == 1);
  CHECK(v3[0].final_monomial().m.v == Vec2{-1, -1});
  CHECK(v3[0].final_monomial().A == CurveClass{1});

  CHECK_THROWS_AS(enumerate_broken_lines(s, d, {0, {1, 0}}, BPoint{0, {Rational(1), Rational(0)}}),
                  NonGenericEndpoint);
}

TEST_CASE("line-conic diagram is consistent") {
  AffineSurface s = p2_line_conic();
  for (int order = 1; order <= 6; ++order) {
    auto d = builtin_diagram(s, order);
    auto rep = check_consistency(s, d, order);
    CHECK(rep.ok);
  }
}

TEST_CASE("a lone wall is inconsistent at its degree") {
  AffineSurface s = p2_toric();
  ScatteringDiagram d{4, {{0, {1, 1}, {{1, {1}, -1}}}}};
  auto rep = check_consistency(s, d, 4);
  CHECK_FALSE(rep.ok);
  REQUIRE(rep.first_failing_degree);
  CHECK(*rep.first_failing_degree == 1);
  CHECK(check_consistency(s, ScatteringDiagram{4, {}}, 4).ok);
}

TEST_CASE("completion") {
  AffineSurface s = p2_line_conic();
  auto d = builtin_diagram(s, 5);
  auto c = complete_to_order(s, d, 5);
  CHECK(c.same_functions(s, d));
  CHECK(complete_to_order(p2_toric(), ScatteringDiagram{5, {}}, 5).walls.empty());

  AffineSurface f = flat_plane();
  for (int order = 2; order <= 5; ++order) {
    auto two = two_lines(order);
    auto done = complete_to_order(f, two, order);
    CHECK(check_consistency(f, done, order).ok);
    if (order >= 3) {
      REQUIRE(done.walls.size() == 5);
      auto it = std::find_if(done.walls.begin(), done.walls.end(),
                             [](const Wall& w) { return w.dir == Vec2{3, 2}; });
      REQUIRE(it != done.walls.end());
      CHECK(it->cone == 2);
      REQUIRE(it->terms.size() == 1);
      CHECK(it->terms[0] == WallTerm{1, {1, 1}, -1});
    }
    CHECK(complete_to_order(f, done, order).same_functions(f, done));
  }
}

TEST_CASE("completion keeps walls above the order when kinks need them") {
  AffineSurface s = p2_line_conic();
  for (int order = 1; order <= 3; ++order) {
    auto d = builtin_diagram(s, order);
    auto done = complete_to_order(s, d, order);
    CHECK(done.order == order);
    CHECK(check_consistency(s, done, order).ok);
  }
}
