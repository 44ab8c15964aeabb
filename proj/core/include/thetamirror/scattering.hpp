#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <vector>

#include "thetamirror/geometry.hpp"
#include "thetamirror/numeric.hpp"

namespace theta {

// coeff · t^A · z^m, with m a tangent vector in the chart of m.cone.
struct Monomial {
  Int coeff = 1;
  CurveClass A;
  BDirection m;
  bool operator==(const Monomial&) const = default;
};

// coeff · t^A · z^{k·dir}; k is signed (outgoing walls carry k < 0).
struct WallTerm {
  Int coeff = 1;
  CurveClass A;
  std::int64_t k = -1;
  bool operator==(const WallTerm&) const = default;
};

// Ray from the origin inside a maximal cone, with function 1 + Σ terms.
struct Wall {
  int cone = 0;
  Vec2 dir{1, 1};  // primitive, both coordinates > 0
  std::vector<WallTerm> terms;
  bool operator==(const Wall&) const = default;
};

struct ScatteringDiagram {
  std::int64_t order = 1;
  std::vector<Wall> walls;

  // Throws InvalidInput on walls that are not rays strictly inside a cone or
  // carry terms of nonpositive degree.
  void validate(const AffineSurface& s) const;
  // Walls sorted, same-support walls merged, zero and out-of-order terms dropped.
  ScatteringDiagram normalized(const AffineSurface& s) const;
  // Multiset of (cone, dir, term) triples; equality up to wall order.
  bool same_functions(const AffineSurface& s, const ScatteringDiagram& o) const;
};

// Shipped initial diagram: empty for toric targets, two walls for p2-line-conic.
ScatteringDiagram builtin_diagram(const AffineSurface& s, std::int64_t order);

// Terms of f^n (n >= 0) keyed by (class, multiple of dir), truncated at degree < bound.
std::map<std::pair<CurveClass, std::int64_t>, Int> wall_power(const CurveClassMonoid& mon,
                                                              const std::vector<WallTerm>& terms, std::int64_t n,
                                                              std::int64_t bound);

// Broken-line crossing of a wall: the monomial travels along -m, the exponent
// is |<n_w, m>| with n_w primitive and positive on the incoming side.
std::vector<Monomial> cross_wall(const AffineSurface& s, const Monomial& m, const Wall& w, std::int64_t order);
// Transport across a ray, class += |<n_ρ, m>| κ_ρ.
Monomial cross_ray_kink(const AffineSurface& s, const Monomial& m, int ray);

struct BrokenLineSegment {
  int cone = 0;
  RVec2 from;            // earlier point along the line
  RVec2 to;              // later point
  bool from_infinity = false;
  Monomial mono;
};

struct BrokenLine {
  BDirection p;
  BPoint z;
  std::vector<BrokenLineSegment> segments;  // in order of travel, ending at z
  const Monomial& final_monomial() const { return segments.back().mono; }
};

// Enumerates broken lines on a fixed (surface, diagram). Thread safe; caches the
// abstract reachable states per asymptotic direction.
class BrokenLineEngine {
 public:
  BrokenLineEngine(AffineSurface s, ScatteringDiagram d);

  const AffineSurface& surface() const { return s_; }
  const ScatteringDiagram& diagram() const { return d_; }
  std::int64_t order() const { return d_.order; }

  // Throws NonGenericEndpoint if z is the origin or on a ray or wall.
  void check_generic(const BPoint& z) const;

  // Final monomials (exponent in z's chart, class) with summed coefficients.
  std::map<std::pair<Vec2, CurveClass>, Int> final_monomials(const BDirection& p, const BPoint& z) const;
  std::vector<BrokenLine> lines(const BDirection& p, const BPoint& z) const;

  struct State {
    int cone;
    Vec2 m;
    CurveClass A;
    auto operator<=>(const State&) const = default;
  };
  // Superset of (cone, exponent, class) values a broken line for p can carry.
  const std::set<State>& reachable(const BDirection& p) const;

 private:
  struct Walk;
  void trace(Walk& w, int cone, const RVec2& pos, const Vec2& m, const CurveClass& A, const Int& coeff) const;

  AffineSurface s_;
  ScatteringDiagram d_;
  std::vector<std::vector<const Wall*>> walls_by_cone_;
  mutable std::mutex mu_;
  mutable std::map<BDirection, std::unique_ptr<std::set<State>>> reach_;
};

std::vector<BrokenLine> enumerate_broken_lines(const AffineSurface& s, const ScatteringDiagram& d,
                                               const BDirection& p, const BPoint& z);

struct ConsistencyTerm {
  int generator = 0;  // 0 or 1: z^{e1} or z^{e2} of the base chart
  Vec2 m;             // exponent in the base chart
  CurveClass A;
  Int coeff;
};

struct ConsistencyReport {
  bool ok = true;
  std::optional<std::int64_t> first_failing_degree;
  std::vector<ConsistencyTerm> discrepancy;  // terms of degree < order other than the identity
};

// Path-ordered product of wall crossings, chart changes and kinks around the
// origin, applied to the chart generators of cone 0.
ConsistencyReport check_consistency(const AffineSurface& s, const ScatteringDiagram& d, std::int64_t order);

// Adds outgoing walls degree by degree until the loop is the identity below `order`.
ScatteringDiagram complete_to_order(const AffineSurface& s, const ScatteringDiagram& d, std::int64_t order);

}  // namespace theta
