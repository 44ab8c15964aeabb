#include "thetamirror/geometry.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "thetamirror/errors.hpp"

namespace theta {

std::int64_t CurveClassMonoid::degree(const CurveClass& a) const {
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.size() && i < L.size(); ++i) d += a[i] * L[i];
  return d;
}

bool CurveClassMonoid::is_effective(const CurveClass& a) const {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x >= 0; });
}

void CurveClassMonoid::validate() const {
  if (labels.empty()) throw InvalidInput("curve monoid needs at least one generator");
  if (L.size() != labels.size()) throw InvalidInput("curve monoid: L has wrong length");
  for (auto x : L)
    if (x <= 0) throw InvalidInput("curve monoid: L must be positive on every generator");
}

std::vector<CurveClass> CurveClassMonoid::classes_below(std::int64_t order) const {
  std::vector<CurveClass> out;
  CurveClass a(rank(), 0);
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
    if (i == rank()) {
      out.push_back(a);
      return;
    }
    for (std::int64_t k = 0; k * L[i] < left; ++k) {
      a[i] = k;
      rec(i + 1, left - k * L[i]);
    }
    a[i] = 0;
  };
  if (order > 0) rec(0, order);
  std::sort(out.begin(), out.end());
  return out;
}

std::string CurveClassMonoid::format(const CurveClass& a) const {
  if (rank() == 1) {
    std::ostringstream os;
    if (a[0] == 1)
      os << "[" << labels[0] << "]";
    else
      os << a[0] << "[" << labels[0] << "]";
    return os.str();
  }
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (a[i] != 1) os << a[i];
    os << labels[i];
  }
  if (first) os << "0";
  return "[" + os.str() + "]";
}

CurveClass operator+(const CurveClass& a, const CurveClass& b) {
  CurveClass c(a);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

CurveClass operator-(const CurveClass& a, const CurveClass& b) {
  CurveClass c(a);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

CurveClass operator*(std::int64_t k, const CurveClass& a) {
  CurveClass c(a);
  for (auto& x : c) x *= k;
  return c;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

AffineSurface::AffineSurface(std::string name, std::vector<Ray> rays, CurveClassMonoid monoid,
                             std::string provenance)
    : name_(std::move(name)), rays_(std::move(rays)), monoid_(std::move(monoid)), provenance_(std::move(provenance)) {
  monoid_.validate();
  if (rays_.size() < 2) throw InvalidInput("surface needs at least two rays");
  for (const auto& r : rays_) {
    if (r.kink.size() != monoid_.rank()) throw InvalidInput("ray kink has wrong rank");
    if (!monoid_.is_effective(r.kink)) throw InvalidInput("ray kink must be effective");
  }
}

std::array<int, 2> AffineSurface::cone_rays(int cone) const {
  const int s = num_rays();
  if (cone < 0 || cone >= s) throw InvalidInput("cone index out of range");
  if (cone == s - 1) return {0, s - 1};
  return {cone, cone + 1};
}

bool AffineSurface::cone_has_ray(int cone, int ray) const {
  auto cr = cone_rays(cone);
  return cr[0] == ray || cr[1] == ray;
}

int AffineSurface::ray_slot(int cone, int ray) const {
  auto cr = cone_rays(cone);
  if (cr[0] == ray) return 0;
  if (cr[1] == ray) return 1;
  throw NotAdjacent("ray " + std::to_string(ray + 1) + " does not bound cone " + std::to_string(cone + 1));
}

int AffineSurface::neighbor(int cone, int ray) const {
  ray_slot(cone, ray);
  for (int c = 0; c < num_cones(); ++c)
    if (c != cone && cone_has_ray(c, ray)) return c;
  throw NotAdjacent("ray has a single adjacent cone");
}

int AffineSurface::orientation(int cone) const { return cone == num_rays() - 1 ? -1 : 1; }

Vec2 AffineSurface::transport(int cone, int ray, const Vec2& m) const {
  int i = ray_slot(cone, ray);
  int c2 = neighbor(cone, ray);
  std::int64_t along = m[i], other = m[1 - i];
  Vec2 out{0, 0};
  int j = ray_slot(c2, ray);
  out[j] = along - rays_[ray].selfint * other;
  out[1 - j] = -other;
  return out;
}

RVec2 AffineSurface::transport(int cone, int ray, const RVec2& p) const {
  int i = ray_slot(cone, ray);
  int c2 = neighbor(cone, ray);
  Rational along = p[i], other = p[1 - i];
  RVec2 out{Rational(0), Rational(0)};
  int j = ray_slot(c2, ray);
  out[j] = along - Rational(rays_[ray].selfint) * other;
  out[1 - j] = -other;
  return out;
}

Mat2 AffineSurface::transition(int cone, int ray) const {
  Vec2 a = transport(cone, ray, Vec2{1, 0});
  Vec2 b = transport(cone, ray, Vec2{0, 1});
  return Mat2{{{a[0], b[0]}, {a[1], b[1]}}};
}

Mat2 AffineSurface::monodromy() const {
  Mat2 m{{{1, 0}, {0, 1}}};
  const int s = num_rays();
  for (int c = 0; c < s; ++c) m = transition(c, (c + 1) % s) * m;
  return m;
}

std::optional<int> AffineSurface::ray_of(int cone, const Vec2& v) const {
  if (is_zero(v)) return std::nullopt;
  auto cr = cone_rays(cone);
  if (v[0] == 0) return cr[1];
  if (v[1] == 0) return cr[0];
  return std::nullopt;
}

std::optional<int> AffineSurface::ray_of(int cone, const RVec2& p) const {
  if (p[0] == 0 && p[1] == 0) return std::nullopt;
  auto cr = cone_rays(cone);
  if (p[0] == 0) return cr[1];
  if (p[1] == 0) return cr[0];
  return std::nullopt;
}

BDirection canonical(const AffineSurface& s, BDirection d) {
  if (is_zero(d.v)) return {0, {0, 0}};
  if (auto r = s.ray_of(d.cone, d.v)) {
    int other = s.neighbor(d.cone, *r);
    if (other < d.cone) return {other, s.transport(d.cone, *r, d.v)};
  }
  return d;
}

BPoint canonical(const AffineSurface& s, BPoint p) {
  if (p.x[0] == 0 && p.x[1] == 0) return {0, p.x};
  if (auto r = s.ray_of(p.cone, p.x)) {
    int other = s.neighbor(p.cone, *r);
    if (other < p.cone) return {other, s.transport(p.cone, *r, p.x)};
  }
  return p;
}

bool same_direction(const AffineSurface& s, const BDirection& a, const BDirection& b) {
  return canonical(s, a) == canonical(s, b);
}

BDirection parallel_transport(const AffineSurface& s, const BDirection& m, int across_ray) {
  return {s.neighbor(m.cone, across_ray), s.transport(m.cone, across_ray, m.v)};
}

std::vector<PathSegment> straight_extend(const AffineSurface& s, const BPoint& start, const Vec2& m,
                                         std::optional<Rational> t_max) {
  if (is_zero(m)) throw InvalidInput("straight_extend: zero direction");
  if (start.x[0] == 0 && start.x[1] == 0) throw HitsSingularity("path starts at the origin");
  if (start.x[0] < 0 || start.x[1] < 0) throw InvalidInput("straight_extend: start outside its cone");
  std::vector<PathSegment> out;
  int cone = start.cone;
  RVec2 x = start.x;
  Vec2 dir = m;
  Rational t = 0;
  const int max_steps = 8 * s.num_rays() + 64;
  for (int step = 0; step < max_steps; ++step) {
    std::optional<Rational> te;
    int slot = -1;
    for (int j = 0; j < 2; ++j) {
      if (dir[j] >= 0) continue;
      Rational tj = -x[j] / dir[j];
      if (!te || tj < *te) {
        te = tj;
        slot = j;
      }
    }
    if (t_max && (!te || t + *te >= *t_max)) {
      Rational dt = *t_max - t;
      RVec2 end{x[0] + dt * dir[0], x[1] + dt * dir[1]};
      if (end[0] == 0 && end[1] == 0) throw HitsSingularity("path reaches the origin");
      out.push_back({cone, x, end, dir, t, *t_max, false});
      return out;
    }
    if (!te) {
      out.push_back({cone, x, x, dir, t, t, true});
      return out;
    }
    RVec2 hit{x[0] + *te * dir[0], x[1] + *te * dir[1]};
    if (hit[0] == 0 && hit[1] == 0) throw HitsSingularity("path meets the origin");
    if (*te > 0) out.push_back({cone, x, hit, dir, t, t + *te, false});
    int r = s.cone_rays(cone)[1 - slot];
    t += *te;
    if (s.ray(r).boundary) return out;
    x = s.transport(cone, r, hit);
    dir = s.transport(cone, r, dir);
    cone = s.neighbor(cone, r);
  }
  throw NonConvergent("straight_extend: too many chart changes");
}

std::int64_t pl_pairing(const AffineSurface& s, const BDirection& u, int ray) {
  if (!s.cone_has_ray(u.cone, ray)) return 0;
  return u.v[s.ray_slot(u.cone, ray)];
}

AffineSurface p2_toric() {
  CurveClassMonoid mon{{"l"}, {1}};
  std::vector<Ray> rays{{1, {1}, "D1"}, {1, {1}, "D2"}, {1, {1}, "D3"}};
  return AffineSurface("p2-toric", rays, mon);
}

AffineSurface p1xp1_toric() {
  CurveClassMonoid mon{{"f1", "f2"}, {2, 2}};
  std::vector<Ray> rays{{0, {1, 0}, "D1"}, {0, {0, 1}, "D2"}, {0, {1, 0}, "D3"}, {0, {0, 1}, "D4"}};
  return AffineSurface("p1xp1-toric", rays, mon);
}

AffineSurface p2_line_conic() {
  CurveClassMonoid mon{{"l"}, {1}};
  std::vector<Ray> rays{{1, {1}, "line"}, {4, {2}, "conic"}};
  return AffineSurface("p2-line-conic", rays, mon,
                       "kinks are the divisor classes; walls fixed so the line+conic example relations hold");
}

std::vector<std::string> builtin_target_names() { return {"p1xp1-toric", "p2-line-conic", "p2-toric"}; }

AffineSurface builtin_target(const std::string& name) {
  if (name == "p2-toric") return p2_toric();
  if (name == "p1xp1-toric") return p1xp1_toric();
  if (name == "p2-line-conic") return p2_line_conic();
  throw InvalidInput("unknown target '" + name + "'");
}

std::string format_direction(const AffineSurface& s, const BDirection& d) {
  BDirection c = canonical(s, d);
  if (is_zero(c.v)) return "0";
  std::ostringstream os;
  os << c.cone + 1 << ":" << c.v[0] << "," << c.v[1];
  return os.str();
}

}  // namespace theta
