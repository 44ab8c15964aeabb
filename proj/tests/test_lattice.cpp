#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "thetamirror/errors.hpp"
#include "thetamirror/lattice.hpp"

using namespace theta;

TEST_CASE("snf of small examples") {
  auto s = smith_normal_form(IntMatrix::identity(2));
  CHECK(s.D == IntMatrix::identity(2));

  s = smith_normal_form(IntMatrix::from_rows({{2, 0}, {0, 3}}));
  CHECK(s.diagonal() == std::vector<Int>{1, 6});

  s = smith_normal_form(IntMatrix::from_rows({{2, 4}, {6, 8}}));
  CHECK(s.diagonal() == std::vector<Int>{2, 4});
  CHECK(oracle::check_smith(IntMatrix::from_rows({{2, 4}, {6, 8}}), s).empty());
}

TEST_CASE("snf handles zero and rectangular shapes") {
  IntMatrix z(3, 2);
  auto s = smith_normal_form(z);
  CHECK(s.rank == 0);
  CHECK(oracle::check_smith(z, s).empty());

  IntMatrix r = IntMatrix::from_rows({{0, 6, 4}, {0, 9, 6}});
  s = smith_normal_form(r);
  CHECK(s.rank == 1);
  CHECK(s.diagonal() == std::vector<Int>{1, 0});
  CHECK(oracle::check_smith(r, s).empty());
}

TEST_CASE("snf is deterministic") {
  IntMatrix m = IntMatrix::from_rows({{4, -6, 2}, {3, 3, 9}, {-7, 1, 0}});
  auto a = smith_normal_form(m), b = smith_normal_form(m);
  CHECK(a.U == b.U);
  CHECK(a.V == b.V);
}

TEST_CASE("snf invariants on random matrices") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> sz(1, 6);
  for (int it = 0; it < 200; ++it) {
    IntMatrix m = oracle::random_matrix(rng, sz(rng), sz(rng), -20, 20);
    auto s = smith_normal_form(m);
    INFO("iteration " << it);
    CHECK(oracle::check_smith(m, s) == "");
  }
}

TEST_CASE("cokernel orders") {
  auto c = cokernel_order(IntMatrix::identity(2));
  CHECK(c.finite);
  CHECK(c.order == 1);

  c = cokernel_order(IntMatrix::from_rows({{2, 1}, {0, 2}}));
  CHECK(c.order == 4);

  c = cokernel_order(IntMatrix::from_rows({{1}, {0}}));
  CHECK_FALSE(c.finite);
  CHECK(c.torsion == 1);
  CHECK(c.free_rank == 1);
}

TEST_CASE("cokernel matches quotient enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ncols(1, 3), nrows(1, 2), e(-5, 5);
  for (int it = 0; it < 300; ++it) {
    int r = nrows(rng), k = ncols(rng);
    std::vector<std::vector<std::int64_t>> cols(k, std::vector<std::int64_t>(r));
    IntMatrix m(r, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < r; ++i) m(i, j) = cols[j][i] = e(rng);
    std::int64_t tors = 0;
    std::int64_t want = oracle::brute_cokernel(cols, r, &tors);
    auto got = cokernel_order(m);
    INFO("iteration " << it);
    CHECK(got.finite == (want >= 0));
    if (want >= 0) CHECK(got.order == want);
    CHECK(got.torsion == tors);
  }
}

TEST_CASE("integer kernel") {
  IntMatrix m = IntMatrix::from_rows({{1, 2, 3}, {2, 4, 6}});
  auto k = integer_kernel(m);
  CHECK(k.size() == 2);
  for (auto& v : k) {
    Int s = v[0] + 2 * v[1] + 3 * v[2];
    CHECK(s == 0);
  }
}

TEST_CASE("splitting multiplicity") {
  GluingData g;
  g.piece_eval = {IntMatrix::identity(2), IntMatrix::identity(2)};
  g.star_legs = {{1, 0}, {0, 1}};
  g.glued_eval = IntMatrix::identity(2);
  auto r = splitting_multiplicity(g);
  CHECK(r.coker_epsilon == 1);
  CHECK(r.identity_holds);

  // indices 2 and 3: the intersection has index 6, so coker(eps) is trivial.
  // Star legs lie in the image of their piece (the leg parameter column).
  g.star_legs = {{0, 1}, {1, 0}};
  g.piece_eval = {IntMatrix::from_rows({{2, 0}, {0, 1}}), IntMatrix::from_rows({{1, 0}, {0, 3}})};
  g.glued_eval = IntMatrix::from_rows({{2, 0}, {0, 3}});
  r = splitting_multiplicity(g);
  CHECK(r.coker_epsilon == 1);
  CHECK(r.k_tau == 6);
  CHECK(r.product_of_pieces == 6);

  // the same pieces with a surjective glued map cannot satisfy the identity
  g.glued_eval = IntMatrix::identity(2);
  CHECK_THROWS_AS(splitting_multiplicity(g), IdentityViolation);

  // equal sublattices: 2 * 2 = 2 * 2
  g.star_legs = {{0, 1}, {0, 1}};
  g.piece_eval = {IntMatrix::from_rows({{2, 0}, {0, 1}}), IntMatrix::from_rows({{2, 0}, {0, 1}})};
  g.glued_eval = IntMatrix::from_rows({{2, 0}, {0, 1}});
  r = splitting_multiplicity(g);
  CHECK(r.coker_epsilon == 2);
  CHECK(r.k_tau == 2);

  g.piece_eval = {IntMatrix::from_rows({{1}, {0}}), IntMatrix::from_rows({{1}, {0}})};
  g.star_legs = {{1, 0}, {1, 0}};
  CHECK_THROWS_AS(splitting_multiplicity(g), InfiniteCokernel);
}

TEST_CASE("rational solve and kernel") {
  RatMatrix m(2, 2);
  m(0, 0) = 2;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 3;
  auto x = solve(m, {Rational(3), Rational(4)});
  REQUIRE(x);
  CHECK((*x)[0] == Rational(1));
  CHECK((*x)[1] == Rational(1));
  RatMatrix s(1, 2);
  s(0, 0) = 1;
  s(0, 1) = 1;
  CHECK(kernel(s).size() == 1);
  CHECK_FALSE(solve(RatMatrix::from(IntMatrix::from_rows({{1, 1}, {1, 1}})), {Rational(1), Rational(2)}));
}
