#include <random>

#include "doctest.h"
#include "thetamirror/errors.hpp"
#include "thetamirror/mirror.hpp"
#include "oracles.hpp"

using namespace theta;
using oracle::p1xp1_oracle;
using oracle::p2_oracle;

namespace {

const BDirection v1{0, {1, 0}}, v2{0, {0, 1}}, s1{0, {1, 1}}, s2{1, {1, 1}};

}  // namespace

TEST_CASE("line-conic relations") {
  AffineSurface s = p2_line_conic();
  ThetaAlgebra alg(s, builtin_diagram(s, 3));
  const auto& mon = s.monoid();
  Series one = Series::constant(mon, 3, 1), t = Series::monomial(mon, 3, {1});

  ThetaElem e(mon, 3);
  e.add(s1, one);
  e.add(canonical(s, s2), one);
  CHECK(alg.basis_product(v1, v2) == e);

  ThetaElem f(mon, 3);
  f.add(canonical(s, v1), t);
  CHECK(alg.basis_product(s2, s1) == f);

  for (const BDirection& si : {s1, s2}) {
    ThetaElem g(mon, 3);
    g.add({0, {0, 0}}, t);
    g.add(canonical(s, BDirection{si.cone, {1, 2}}), one);
    CHECK(alg.basis_product(v2, si) == g);
  }
  CHECK(alg.trace({v1, v2, v2}).str() == "2·t^[l]");
}

TEST_CASE("line-conic central binomial traces") {
  AffineSurface s = p2_line_conic();
  ThetaAlgebra alg(s, builtin_diagram(s, 5));
  const Int expect[] = {2, 6, 20, 70};
  for (int k = 1; k <= 4; ++k) {
    ThetaElem x = alg.multiply(alg.power(alg.basis(v1), k), alg.power(alg.basis(v2), 2 * k));
    Series tr = alg.trace(x);
    CHECK(tr.coefficient({k}) == expect[k - 1]);
    CHECK(tr.terms().size() == 1);
  }
}

TEST_CASE("toric traces match the Laurent oracle") {
  std::mt19937 rng(7);
  for (auto [s, oracle] : {std::pair{p2_toric(), p2_oracle()}, std::pair{p1xp1_toric(), p1xp1_oracle()}}) {
    const std::int64_t order = 7;
    ThetaAlgebra alg(s, builtin_diagram(s, order));
    auto dirs = direction_window(s, 2);
    std::uniform_int_distribution<std::size_t> pick(0, dirs.size() - 1);
    int nonzero = 0;
    for (int trial = 0; trial < 150; ++trial) {
      std::vector<BDirection> in(2 + trial % 3);
      for (auto& d : in) d = dirs[pick(rng)];
      Series got = alg.trace(in), want = oracle.trace(s, order, in);
      CHECK_MESSAGE(got == want, s.name());
      nonzero += !want.is_zero();
    }
    // exhaustive over pairs and triples, where the sum condition hits often
    for (const auto& p : dirs)
      for (const auto& q : dirs) {
        Series want = oracle.trace(s, order, {p, q});
        CHECK(alg.trace({p, q}) == want);
        nonzero += !want.is_zero();
      }
    for (const auto& p : dirs)
      for (const auto& q : dirs)
        for (const auto& r : dirs) {
          Series want = oracle.trace(s, order, {p, q, r});
          CHECK(alg.trace({p, q, r}) == want);
          nonzero += !want.is_zero();
        }
    CHECK(nonzero > 30);
  }
}

TEST_CASE("algebra axioms on a window") {
  for (const AffineSurface& s : {p2_line_conic(), p2_toric(), p1xp1_toric()}) {
    ThetaAlgebra alg(s, builtin_diagram(s, 4));
    auto dirs = direction_window(s, 1);
    for (const auto& p : dirs) {
      CHECK(alg.multiply(alg.one(), alg.basis(p)) == alg.basis(p));
      for (const auto& q : dirs) {
        CHECK(alg.multiply(alg.basis(p), alg.basis(q)) == alg.multiply(alg.basis(q), alg.basis(p)));
        for (const auto& r : dirs) {
          ThetaElem a = alg.multiply(alg.multiply(alg.basis(p), alg.basis(q)), alg.basis(r));
          ThetaElem b = alg.multiply(alg.basis(p), alg.multiply(alg.basis(q), alg.basis(r)));
          CHECK_MESSAGE(a == b, s.name());
        }
      }
    }
  }
}

TEST_CASE("threaded structure constants agree") {
  AffineSurface s = p2_line_conic();
  ThetaAlgebra a1(s, builtin_diagram(s, 5)), a4(s, builtin_diagram(s, 5), 4);
  for (const auto& p : direction_window(s, 2))
    for (const auto& q : direction_window(s, 2)) CHECK(a1.structure_constants(p, q) == a4.structure_constants(p, q));
}

TEST_CASE("power and identity") {
  AffineSurface s = p2_toric();
  ThetaAlgebra alg(s, builtin_diagram(s, 4));
  CHECK(alg.power(alg.basis(v1), 0) == alg.one());
  CHECK(alg.power(alg.basis(v1), 3) == alg.multiply(alg.basis(v1), alg.multiply(alg.basis(v1), alg.basis(v1))));
  CHECK_THROWS_AS(alg.power(alg.basis(v1), -1), InvalidInput);
  CHECK_THROWS_AS(alg.trace(std::vector<BDirection>{}), InvalidInput);
  CHECK(alg.naive_count({v1, v2, {1, {0, 1}}}, {1}) == 1);
  CHECK(alg.naive_count({v1, v2, {1, {0, 1}}}, {-1}) == 0);
}

TEST_CASE("Frobenius reconstruction recovers products") {
  for (const AffineSurface& s : {p2_line_conic(), p2_toric()}) {
    auto rep = frobenius_check(s, [&](std::int64_t T) { return builtin_diagram(s, T); }, 3, 1);
    CHECK_MESSAGE(rep.ok(), s.name());
    CHECK(rep.resolved > 0);
    CHECK(rep.mismatches.empty());
  }
}
