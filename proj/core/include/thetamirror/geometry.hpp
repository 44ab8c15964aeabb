#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "thetamirror/numeric.hpp"

namespace theta {

// Coordinates in the generator basis of the curve monoid. Entries are
// nonnegative for genuine classes; intermediate bookkeeping may go negative.
using CurveClass = std::vector<std::int64_t>;

struct CurveClassMonoid {
  std::vector<std::string> labels;
  std::vector<std::int64_t> L;  // ample degree functional, L(g) > 0

  std::size_t rank() const { return labels.size(); }
  std::int64_t degree(const CurveClass& a) const;
  CurveClass zero() const { return CurveClass(rank(), 0); }
  bool is_effective(const CurveClass& a) const;
  // Throws InvalidInput unless rank, labels and L are consistent with L(g) > 0.
  void validate() const;
  // All effective classes of degree < order, sorted.
  std::vector<CurveClass> classes_below(std::int64_t order) const;
  std::string format(const CurveClass& a) const;
};

CurveClass operator+(const CurveClass& a, const CurveClass& b);
CurveClass operator-(const CurveClass& a, const CurveClass& b);
CurveClass operator*(std::int64_t k, const CurveClass& a);

struct Ray {
  std::int64_t selfint = 0;
  CurveClass kink;
  std::string label;
  bool boundary = false;  // B stops here; straight paths end on reaching it
};

// Tangent vector (or lattice point) in the quadrant chart of a maximal cone.
struct BDirection {
  int cone = 0;
  Vec2 v{0, 0};
  auto operator<=>(const BDirection&) const = default;
};

struct BPoint {
  int cone = 0;
  RVec2 x{Rational(0), Rational(0)};
  bool operator==(const BPoint&) const = default;
};

using Mat2 = std::array<std::array<std::int64_t, 2>, 2>;  // row-major

inline Vec2 mat_apply(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}
Mat2 operator*(const Mat2& a, const Mat2& b);

// Rank-2 charted cone complex: ray i and ray i+1 bound cone i, cyclically.
// The chart of a cone has basis (lower-indexed ray, higher-indexed ray).
class AffineSurface {
 public:
  AffineSurface() = default;
  AffineSurface(std::string name, std::vector<Ray> rays, CurveClassMonoid monoid, std::string provenance = {});

  const std::string& name() const { return name_; }
  const std::string& provenance() const { return provenance_; }
  const CurveClassMonoid& monoid() const { return monoid_; }
  const std::vector<Ray>& rays() const { return rays_; }
  const Ray& ray(int r) const { return rays_.at(r); }
  int num_rays() const { return static_cast<int>(rays_.size()); }
  int num_cones() const { return num_rays(); }

  std::array<int, 2> cone_rays(int cone) const;
  bool cone_has_ray(int cone, int ray) const;
  // Index (0 or 1) of the ray in the cone's chart basis; NotAdjacent if absent.
  int ray_slot(int cone, int ray) const;
  // The other maximal cone containing the ray.
  int neighbor(int cone, int ray) const;
  // +1 if the cone's chart basis runs in the cyclic (counterclockwise) direction.
  int orientation(int cone) const;

  Mat2 transition(int cone, int ray) const;
  Vec2 transport(int cone, int ray, const Vec2& m) const;
  RVec2 transport(int cone, int ray, const RVec2& p) const;
  // Counterclockwise loop cone 0 -> 1 -> ... -> 0, expressed in cone 0's chart.
  Mat2 monodromy() const;

  // Ray containing a nonzero chart vector, if it lies on a ray of the cone.
  std::optional<int> ray_of(int cone, const Vec2& v) const;
  std::optional<int> ray_of(int cone, const RVec2& p) const;

 private:
  std::string name_;
  std::vector<Ray> rays_;
  CurveClassMonoid monoid_;
  std::string provenance_;
};

// Points on a shared ray move to the lower-indexed cone; zero goes to cone 0.
BDirection canonical(const AffineSurface& s, BDirection d);
BPoint canonical(const AffineSurface& s, BPoint p);
bool same_direction(const AffineSurface& s, const BDirection& a, const BDirection& b);

BDirection parallel_transport(const AffineSurface& s, const BDirection& m, int across_ray);

struct PathSegment {
  int cone = 0;
  RVec2 from;
  RVec2 to;
  Vec2 dir{0, 0};
  Rational t0;
  Rational t1;
  bool unbounded = false;  // runs off to infinity inside the cone
};

// Straight path from start in direction m (in start's chart) up to parameter
// t_max (unbounded if absent). Throws HitsSingularity if it meets the origin.
std::vector<PathSegment> straight_extend(const AffineSurface& s, const BPoint& start, const Vec2& m,
                                         std::optional<Rational> t_max = std::nullopt);

// Value of the PL function dual to divisor `ray` on u.
std::int64_t pl_pairing(const AffineSurface& s, const BDirection& u, int ray);

AffineSurface p2_toric();
AffineSurface p1xp1_toric();
AffineSurface p2_line_conic();
std::vector<std::string> builtin_target_names();
// Throws InvalidInput for unknown names.
AffineSurface builtin_target(const std::string& name);

std::string format_direction(const AffineSurface& s, const BDirection& d);

}  // namespace theta
