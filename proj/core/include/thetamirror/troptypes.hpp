#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetamirror/geometry.hpp"
#include "thetamirror/lattice.hpp"

namespace theta {

// Cell of the cone complex: the origin, a ray, or a maximal cone.
struct Cell {
  enum Kind { Origin = 0, RayCell = 1, Cone = 2 } kind = Origin;
  int index = 0;

  int dim() const { return static_cast<int>(kind); }
  auto operator<=>(const Cell&) const = default;
  static Cell origin() { return {Origin, 0}; }
  static Cell ray(int r) { return {RayCell, r}; }
  static Cell cone(int c) { return {Cone, c}; }
};

// "origin", "ray:i", "cone:i" with 1-based indices.
std::string format_cell(const Cell& c);
Cell parse_cell(const std::string& s);

// Tangent vectors live in the chart of their cell: a cone's own chart, and for a
// ray the chart of the lowest-indexed cone containing it.
struct TropEdge {
  int from = 0, to = 0;
  Cell cell;
  Vec2 u{0, 0};  // points from `from` to `to`
};

struct TropLeg {
  int vertex = 0;
  Cell cell;
  Vec2 u{0, 0};  // points away from the vertex
  std::string label;
};

// Genus-0 tropical type (G, σ, u) on a rank-2 target.
struct TropicalType {
  std::vector<Cell> vertices;
  std::vector<TropEdge> edges;
  std::vector<TropLeg> legs;
  std::optional<std::size_t> out_leg;
};

// Every incidence and lattice violation, empty when well formed.
std::vector<std::string> validate(const AffineSurface& s, const TropicalType& t);

// Throws UnsupportedVertex for a vertex at the origin.
bool is_balanced(const AffineSurface& s, const TropicalType& t);

// Cone of vertex positions and edge lengths. Variables: per vertex 0 (origin),
// 1 (ray parameter) or 2 (cone chart coordinates); then one length per edge.
// All variables are >= 0 and the type is realizable iff some point has all of them > 0.
struct UniversalCone {
  std::vector<std::string> variables;
  RatMatrix equalities;                  // equalities · x = 0
  std::vector<std::size_t> forced_zero;  // variables vanishing on the whole cone
  std::vector<Rational> interior;        // a point of the relative interior
  std::size_t dimension = 0;
  bool realizable() const { return forced_zero.empty(); }
};

// Throws ChartObstruction when an edge's cell does not contain its endpoints.
UniversalCone realizability_cone(const AffineSurface& s, const TropicalType& t);

struct TypeClassification {
  enum Kind { None, BrokenLine, Wall, KTrace } kind = None;
  int k = 0;               // KTrace only
  int dim_tau = -1;        // dim τ
  int dim_out = -1;        // dim h(τ_out), or dim h(τ_{v_out}) for k-traces
  std::string reason;      // why None

  std::string str() const;
};

TypeClassification classify(const AffineSurface& s, const TropicalType& t);

// Minimal subtree containing every leg.
struct Spine {
  std::vector<int> vertices;
  std::vector<std::size_t> edges;
};
Spine spine(const TropicalType& t);

// Transversality of broken lines forces: each spine vertex has
// dim h(τ_v) = 1 and no spine edge direction lies in the span of h(τ_v).
bool spine_conditions_hold(const AffineSurface& s, const TropicalType& t);

struct CutPiece {
  TropicalType type;  // legs: the original input leg(s) and the cut edge as output leg
  bool trivial = false;
  TypeClassification classification;
};

struct CutResult {
  std::vector<CutPiece> pieces;
  TropicalType star;  // v_out with L_out and one leg per cut
  GluingData gluing;
};

// Throws NotKTrace unless classify(t) is a k-trace.
CutResult cut_at_vout(const AffineSurface& s, const TropicalType& t);

// |coker(Λ_{τ_out} -> Λ_{σ(L_out)})|; InfiniteCokernel if dim h(τ_out) < dim σ(L_out).
Int k_tau(const AffineSurface& s, const TropicalType& t);

// Automorphisms of the graph preserving cells, tangent vectors and legs.
std::size_t automorphism_count(const TropicalType& t);

// k-trace types on a surface: stars at a vertex in each maximal cone whose inputs
// are direct legs or straight lines crossing a ray of that cone.
std::vector<TropicalType> ktrace_corpus(const AffineSurface& s, int max_k, std::int64_t max_entry);

}  // namespace theta
