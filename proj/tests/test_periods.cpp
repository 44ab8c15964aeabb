#include <map>

#include "doctest.h"
#include "thetamirror/errors.hpp"
#include "thetamirror/periods.hpp"

using namespace theta;

namespace {

// brute-force constant term of (x + 1/x + y + 1/y)^m
Int laurent_constant_term(int m) {
  std::map<Vec2, Int> p{{{0, 0}, 1}};
  for (int i = 0; i < m; ++i) {
    std::map<Vec2, Int> q;
    for (const auto& [e, c] : p)
      for (Vec2 step : {Vec2{1, 0}, Vec2{-1, 0}, Vec2{0, 1}, Vec2{0, -1}}) q[e + step] += c;
    p = std::move(q);
  }
  return p[{0, 0}];
}

}  // namespace

TEST_CASE("superpotentials") {
  AffineSurface lc = p2_line_conic();
  ThetaElem W = superpotential(lc, 3);
  CHECK(W.terms().size() == 2);
  CHECK(W.coefficient(BDirection{0, {1, 0}}) == Series::constant(lc.monoid(), 3, 1));
  CHECK(W.coefficient(BDirection{0, {0, 1}}) == Series::constant(lc.monoid(), 3, 1));
  CHECK(superpotential(p2_toric(), 3).terms().size() == 3);
  CHECK(superpotential(p1xp1_toric(), 3).terms().size() == 4);
}

TEST_CASE("quantum period oracles") {
  PeriodSeries p2 = quantum_period_oracle("p2-toric", 4);
  CHECK(p2.coeffs == std::vector<Int>{1, 6, 90, 1680});
  PeriodSeries q = quantum_period_oracle("p1xp1-toric", 9);
  for (int m = 0; m < 9; ++m) CHECK(q[m] == laurent_constant_term(m));
  CHECK(q[2] == 4);
  CHECK_THROWS_AS(quantum_period_oracle("dp5", 3), NoOracle);
}

TEST_CASE("classical period equals the quantum period") {
  for (const AffineSurface& s : {p2_line_conic(), p2_toric(), p1xp1_toric()}) {
    PeriodReport r = compare_periods(s, builtin_diagram(s, 4), 4);
    CHECK_MESSAGE(r.equal(), s.name() << ": " << r.classical.str() << " vs " << r.quantum.str());
    CHECK_NOTHROW(r.check());
  }
}

TEST_CASE("line-conic binomial decomposition") {
  AffineSurface s = p2_line_conic();
  PeriodReport r = compare_periods(s, builtin_diagram(s, 4), 4);
  REQUIRE(r.binomial.size() == 4);
  CHECK(r.binomial[1].second == 6);
  CHECK(r.binomial[2].second == 90);
  CHECK(r.binomial[3].second == 1680);
  CHECK(r.binomial_holds);
}

TEST_CASE("a corrupted diagram is detected at degree 1") {
  AffineSurface s = p2_line_conic();
  ScatteringDiagram d = builtin_diagram(s, 4);
  d.walls.clear();
  PeriodReport r = compare_periods(s, d, 4);
  REQUIRE(r.first_mismatch);
  CHECK(*r.first_mismatch == 1);
  try {
    r.check();
    FAIL("no mismatch raised");
  } catch (const Mismatch& e) {
    CHECK(e.degree() == 1);
  }
}
