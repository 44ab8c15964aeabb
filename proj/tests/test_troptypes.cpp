#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "thetamirror/errors.hpp"
#include "thetamirror/troptypes.hpp"

using namespace theta;

namespace {

TropicalType star(const Cell& at, std::vector<Vec2> us, std::size_t out) {
  TropicalType t;
  t.vertices = {at};
  for (std::size_t i = 0; i < us.size(); ++i) t.legs.push_back({0, at, us[i], "L" + std::to_string(i)});
  t.out_leg = out;
  return t;
}

// Straight line through a vertex on ray 2 (e2 in cone 1's chart), leaving into cone 1 along u_out.
TropicalType straight_line(const AffineSurface& s, Vec2 u_out) {
  TropicalType t;
  t.vertices = {Cell::ray(1)};
  t.legs.push_back({0, Cell::cone(1), s.transport(0, 1, -1 * u_out), "in"});
  t.legs.push_back({0, Cell::cone(0), u_out, "out"});
  t.out_leg = 1;
  return t;
}

TropicalType relabel(const TropicalType& t, const std::vector<int>& perm) {
  TropicalType r = t;
  for (std::size_t v = 0; v < perm.size(); ++v) r.vertices[perm[v]] = t.vertices[v];
  for (auto& e : r.edges) {
    e.from = perm[e.from];
    e.to = perm[e.to];
  }
  for (auto& l : r.legs) l.vertex = perm[l.vertex];
  std::reverse(r.edges.begin(), r.edges.end());
  return r;
}

}  // namespace

TEST_CASE("validation") {
  AffineSurface s = p2_toric();
  TropicalType t;
  t.vertices = {Cell::origin()};
  t.legs = {{0, Cell::cone(0), {1, 1}, "a"}, {0, Cell::cone(1), {1, 1}, "b"}, {0, Cell::cone(2), {1, 1}, "c"}};
  CHECK(validate(s, t).empty());

  TropicalType off = star(Cell::ray(1), {{1, 1}}, 0);
  off.legs[0].cell = Cell::ray(1);
  CHECK(!validate(s, off).empty());

  TropicalType split;
  split.vertices = {Cell::cone(0), Cell::cone(0)};
  CHECK(!validate(s, split).empty());

  TropicalType cyc;
  cyc.vertices = {Cell::cone(0), Cell::cone(0)};
  cyc.edges = {{0, 1, Cell::cone(0), {1, 0}}, {1, 0, Cell::cone(0), {-1, 0}}};
  CHECK(!validate(s, cyc).empty());

  CHECK(parse_cell("ray:2") == Cell::ray(1));
  CHECK(format_cell(Cell::cone(0)) == "cone:1");
  CHECK_THROWS_AS(parse_cell("cone:0"), InvalidInput);
}

TEST_CASE("balancing") {
  AffineSurface s = p2_toric();
  CHECK(is_balanced(s, star(Cell::cone(0), {{1, 0}, {0, 1}, {-1, -1}}, 0)));
  CHECK_FALSE(is_balanced(s, star(Cell::cone(0), {{1, 0}, {0, 1}}, 0)));

  TropicalType two;
  two.vertices = {Cell::cone(0), Cell::cone(0)};
  two.edges = {{0, 1, Cell::cone(0), {-1, -1}}};
  two.legs = {{0, Cell::cone(0), {1, 0}, "a"}, {0, Cell::cone(0), {0, 1}, "b"},
              {1, Cell::cone(0), {-1, 0}, "c"}, {1, Cell::cone(0), {0, -1}, "d"}};
  CHECK(is_balanced(s, two));

  // across a ray the chart changes; the straight line is balanced
  CHECK(is_balanced(s, straight_line(s, {1, 1})));
  CHECK(is_balanced(p2_line_conic(), straight_line(p2_line_conic(), {1, 3})));
  CHECK_THROWS_AS(is_balanced(s, star(Cell::origin(), {{0, 0}}, 0)), UnsupportedVertex);
}

TEST_CASE("realizability cones") {
  AffineSurface s = p2_toric();
  UniversalCone free = realizability_cone(s, star(Cell::cone(0), {}, 0));
  CHECK(free.dimension == 2);
  CHECK(free.realizable());

  UniversalCone onray = realizability_cone(s, straight_line(s, {1, 1}));
  CHECK(onray.dimension == 1);

  TropicalType bad;
  bad.vertices = {Cell::ray(0), Cell::ray(1)};
  bad.edges = {{0, 1, Cell::cone(0), {1, 0}}};
  UniversalCone c = realizability_cone(s, bad);
  CHECK_FALSE(c.realizable());
  CHECK(c.dimension == 0);

  TropicalType obstructed;
  obstructed.vertices = {Cell::cone(0), Cell::cone(1)};
  obstructed.edges = {{0, 1, Cell::cone(0), {-1, 1}}};
  CHECK_THROWS_AS(realizability_cone(s, obstructed), ChartObstruction);

  // interior point is strictly positive and satisfies the equalities
  TropicalType two;
  two.vertices = {Cell::cone(0), Cell::ray(0)};
  two.edges = {{0, 1, Cell::cone(0), {1, -1}}};
  UniversalCone u = realizability_cone(s, two);
  REQUIRE(u.realizable());
  CHECK(u.dimension == 2);
  for (const auto& x : u.interior) CHECK(x > 0);
  for (std::size_t i = 0; i < u.equalities.rows(); ++i) {
    Rational acc = 0;
    for (std::size_t j = 0; j < u.equalities.cols(); ++j) acc += u.equalities(i, j) * u.interior[j];
    CHECK(acc == 0);
  }
}

TEST_CASE("classification") {
  AffineSurface s = p2_toric();
  TypeClassification bl = classify(s, straight_line(s, {1, 1}));
  CHECK(bl.kind == TypeClassification::BrokenLine);
  CHECK(bl.dim_tau == 1);
  CHECK(bl.dim_out == 2);

  TypeClassification kt = classify(s, star(Cell::cone(0), {{0, 0}, {1, 2}, {-1, -2}}, 0));
  CHECK(kt.kind == TypeClassification::KTrace);
  CHECK(kt.k == 2);
  CHECK(kt.dim_tau == 2);

  TypeClassification no = classify(s, star(Cell::cone(0), {{1, 0}, {-1, 0}}, 1));
  CHECK(no.kind == TypeClassification::None);
  CHECK(no.dim_tau == 2);

  // rigid: one vertex at the origin emitting the output leg
  TropicalType rigid = star(Cell::origin(), {{1, 2}}, 0);
  rigid.legs[0].cell = Cell::cone(0);
  TypeClassification w = classify(s, rigid);
  CHECK(w.kind == TypeClassification::Wall);
  CHECK(w.dim_tau == 0);
  CHECK(w.dim_out == 1);
  // the same leg with a vertex off the origin moves in a family
  TropicalType moving;
  moving.vertices = {Cell::ray(1), Cell::ray(0)};
  moving.edges = {{0, 1, Cell::cone(0), {1, -1}}};
  moving.legs = {{1, Cell::cone(0), {-1, 1}, "w"}};
  moving.out_leg = 0;
  CHECK(classify(s, moving).kind == TypeClassification::None);
  CHECK(classify(s, star(Cell::cone(0), {{1, 0}, {0, 1}}, 0)).reason == "not balanced");
}

TEST_CASE("spines") {
  TropicalType t = star(Cell::cone(0), {{1, 0}, {-1, 0}}, 0);
  Spine sp = spine(t);
  CHECK(sp.vertices == std::vector<int>{0});
  CHECK(sp.edges.empty());

  TropicalType path;
  path.vertices = {Cell::cone(0), Cell::cone(0), Cell::cone(0), Cell::cone(0)};
  path.edges = {{0, 1, Cell::cone(0), {1, 0}}, {1, 2, Cell::cone(0), {1, 0}}, {1, 3, Cell::cone(0), {0, 1}}};
  path.legs = {{0, Cell::cone(0), {-1, 0}, "a"}, {2, Cell::cone(0), {1, 0}, "b"}};
  sp = spine(path);
  CHECK(sp.vertices == std::vector<int>{0, 1, 2});
  CHECK(sp.edges == std::vector<std::size_t>{0, 1});

  TropicalType single = star(Cell::cone(0), {{1, 0}}, 0);
  CHECK(spine(single).vertices == std::vector<int>{0});
}

TEST_CASE("k_tau") {
  AffineSurface s = p2_toric();
  CHECK(k_tau(s, straight_line(s, {1, 1})) == 1);
  CHECK(k_tau(s, straight_line(s, {2, 1})) == 2);
  TropicalType along = straight_line(s, {0, 1});
  CHECK_THROWS_AS(k_tau(s, along), InfiniteCokernel);
}

TEST_CASE("automorphisms") {
  TropicalType t;
  t.vertices = {Cell::cone(0), Cell::cone(0), Cell::cone(0)};
  t.edges = {{0, 1, Cell::cone(0), {1, 1}}, {0, 2, Cell::cone(0), {1, 1}}};
  t.legs = {{0, Cell::cone(0), {0, 0}, "o"}};
  CHECK(automorphism_count(t) == 2);
  t.legs.push_back({1, Cell::cone(0), {0, 0}, "x"});
  CHECK(automorphism_count(t) == 1);
}

TEST_CASE("cutting k-trace types") {
  AffineSurface s = p2_toric();
  // two straight lines through rays meeting at v_out
  TropicalType t;
  t.vertices = {Cell::cone(0), Cell::ray(0), Cell::ray(1)};
  t.edges = {{0, 1, Cell::cone(0), {1, -1}}, {0, 2, Cell::cone(0), {-1, 1}}};
  t.legs = {{0, Cell::cone(0), {0, 0}, "out"}, {1, Cell::cone(2), s.transport(0, 0, Vec2{1, -1}), "a"},
            {2, Cell::cone(1), s.transport(0, 1, Vec2{-1, 1}), "b"}};
  t.out_leg = 0;
  REQUIRE(classify(s, t).kind == TypeClassification::KTrace);
  CutResult cut = cut_at_vout(s, t);
  REQUIRE(cut.pieces.size() == 2);
  for (const auto& p : cut.pieces) {
    CHECK_FALSE(p.trivial);
    CHECK(p.classification.kind == TypeClassification::BrokenLine);
    CHECK(spine_conditions_hold(s, p.type));
  }
  CHECK(cut.star.legs.size() == 3);
  CHECK(splitting_multiplicity(cut.gluing).identity_holds);

  CutResult one = cut_at_vout(s, star(Cell::cone(0), {{0, 0}, {0, 0}}, 0));
  REQUIRE(one.pieces.size() == 1);
  CHECK(one.pieces[0].trivial);
  CHECK(splitting_multiplicity(one.gluing).coker_epsilon == 1);

  CHECK_THROWS_AS(cut_at_vout(s, straight_line(s, {1, 1})), NotKTrace);
}

TEST_CASE("splitting with a nontrivial cokernel") {
  // two lines crossing the same ray with index-2 images: k_τ = 2, |coker ε| = 2
  AffineSurface s = p2_toric();
  const Vec2 d1{1, -2}, d2{-1, -2};
  TropicalType t;
  t.vertices = {Cell::cone(0), Cell::ray(0), Cell::ray(0)};
  t.edges = {{0, 1, Cell::cone(0), d1}, {0, 2, Cell::cone(0), d2}};
  t.legs = {{0, Cell::cone(0), {0, 0}, "out"}, {1, Cell::cone(2), s.transport(0, 0, d1), "a"},
            {2, Cell::cone(2), s.transport(0, 0, d2), "b"}, {0, Cell::cone(0), {0, 4}, "c"}};
  t.out_leg = 0;
  TypeClassification c = classify(s, t);
  REQUIRE(c.kind == TypeClassification::KTrace);
  CHECK(c.k == 3);
  SplittingReport r = splitting_multiplicity(cut_at_vout(s, t).gluing);
  CHECK(r.coker_epsilon == 2);
  CHECK(r.k_tau == 2);
  CHECK(r.product_of_pieces == 4);
}

TEST_CASE("k-trace corpus: splitting identity and relabeling invariance") {
  std::mt19937 rng(3);
  std::size_t total = 0, with_pieces = 0;
  for (const AffineSurface& s : {p2_toric(), p1xp1_toric(), p2_line_conic()}) {
    auto corpus = ktrace_corpus(s, 3, 1);
    auto wide = ktrace_corpus(s, 2, 2);
    corpus.insert(corpus.end(), wide.begin(), wide.end());
    total += corpus.size();
    for (const auto& t : corpus) {
      TypeClassification c = classify(s, t);
      REQUIRE(c.kind == TypeClassification::KTrace);
      CutResult cut = cut_at_vout(s, t);
      CHECK(static_cast<int>(cut.pieces.size()) == c.k);
      for (const auto& p : cut.pieces) {
        if (p.trivial) continue;
        ++with_pieces;
        CHECK(p.classification.kind == TypeClassification::BrokenLine);
        CHECK(spine_conditions_hold(s, p.type));
      }
      SplittingReport rep;
      CHECK_NOTHROW(rep = splitting_multiplicity(cut.gluing));
      CHECK(rep.identity_holds);

      std::vector<int> perm(t.vertices.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      TypeClassification c2 = classify(s, relabel(t, perm));
      CHECK(c2.kind == c.kind);
      CHECK(c2.k == c.k);
      CHECK(c2.dim_tau == c.dim_tau);
      CHECK(c2.dim_out == c.dim_out);
    }
  }
  CHECK(total >= 20);
  CHECK(with_pieces > 0);
  MESSAGE("corpus size " << total);
}
