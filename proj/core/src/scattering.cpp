#include "thetamirror/scattering.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "thetamirror/errors.hpp"

namespace theta {

namespace {

using PowerMap = std::map<std::pair<CurveClass, std::int64_t>, Int>;
using LoopMap = std::map<std::pair<Vec2, CurveClass>, Int>;

bool is_zero_class(const CurveClass& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

bool leq(const CurveClass& a, const CurveClass& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

PowerMap multiply_truncated(const CurveClassMonoid& mon, const PowerMap& a, const PowerMap& b, std::int64_t bound) {
  PowerMap out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      CurveClass c = ka.first + kb.first;
      if (mon.degree(c) >= bound) continue;
      Int& slot = out[{c, ka.second + kb.second}];
      slot += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

PowerMap function_map(const CurveClassMonoid& mon, const std::vector<WallTerm>& terms, std::int64_t bound) {
  PowerMap f;
  if (bound > 0) f[{mon.zero(), 0}] = 1;
  for (const auto& t : terms)
    if (mon.degree(t.A) < bound) f[{t.A, t.k}] += t.coeff;
  return f;
}

PowerMap inverse_power(const CurveClassMonoid& mon, const std::vector<WallTerm>& terms, std::int64_t n,
                       std::int64_t bound) {
  // f^{-1} = Σ_i (1 - f)^i
  PowerMap minus_rest;
  for (const auto& t : terms)
    if (mon.degree(t.A) < bound) minus_rest[{t.A, t.k}] -= t.coeff;
  PowerMap inv, power;
  if (bound > 0) inv[{mon.zero(), 0}] = 1;
  power = inv;
  while (true) {
    power = multiply_truncated(mon, power, minus_rest, bound);
    if (power.empty()) break;
    for (const auto& [k, c] : power) inv[k] += c;
  }
  PowerMap out;
  if (bound > 0) out[{mon.zero(), 0}] = 1;
  for (std::int64_t i = 0; i < n; ++i) out = multiply_truncated(mon, out, inv, bound);
  return out;
}

std::int64_t pairing_abs(const Vec2& dir, const Vec2& m) { return std::abs(cross(dir, m)); }

}  // namespace

PowerMap wall_power(const CurveClassMonoid& mon, const std::vector<WallTerm>& terms, std::int64_t n,
                    std::int64_t bound) {
  if (n < 0) return inverse_power(mon, terms, -n, bound);
  PowerMap out;
  if (bound > 0) out[{mon.zero(), 0}] = 1;
  PowerMap f = function_map(mon, terms, bound);
  for (std::int64_t i = 0; i < n; ++i) out = multiply_truncated(mon, out, f, bound);
  return out;
}

void ScatteringDiagram::validate(const AffineSurface& s) const {
  const auto& mon = s.monoid();
  if (order < 1) throw InvalidInput("diagram order must be at least 1");
  for (const auto& w : walls) {
    if (w.cone < 0 || w.cone >= s.num_cones()) throw InvalidInput("wall cone out of range");
    if (w.dir[0] <= 0 || w.dir[1] <= 0) throw InvalidInput("wall direction must lie strictly inside its cone");
    if (content(w.dir) != 1) throw InvalidInput("wall direction must be primitive");
    for (const auto& t : w.terms) {
      if (t.A.size() != mon.rank()) throw InvalidInput("wall term class has wrong rank");
      if (!mon.is_effective(t.A)) throw InvalidInput("wall term class must be effective");
      if (mon.degree(t.A) <= 0) throw InvalidInput("wall term must have positive degree");
      if (t.k == 0) throw InvalidInput("wall term exponent must be a nonzero multiple of the direction");
    }
  }
}

ScatteringDiagram ScatteringDiagram::normalized(const AffineSurface& s) const {
  validate(s);
  const auto& mon = s.monoid();
  std::map<std::pair<int, Vec2>, PowerMap> funcs;
  for (const auto& w : walls) {
    PowerMap f = function_map(mon, w.terms, order);
    auto key = std::make_pair(w.cone, w.dir);
    auto it = funcs.find(key);
    if (it == funcs.end())
      funcs.emplace(key, f);
    else
      it->second = multiply_truncated(mon, it->second, f, order);
  }
  ScatteringDiagram out;
  out.order = order;
  for (const auto& [key, f] : funcs) {
    Wall w{key.first, key.second, {}};
    for (const auto& [k, c] : f) {
      if (is_zero_class(k.first) && k.second == 0) continue;
      if (c != 0) w.terms.push_back({c, k.first, k.second});
    }
    if (!w.terms.empty()) out.walls.push_back(std::move(w));
  }
  return out;
}

bool ScatteringDiagram::same_functions(const AffineSurface& s, const ScatteringDiagram& o) const {
  return normalized(s).walls == o.normalized(s).walls;
}

ScatteringDiagram builtin_diagram(const AffineSurface& s, std::int64_t order) {
  ScatteringDiagram d;
  d.order = order;
  if (s.name() == "p2-line-conic") {
    // the direction (1,2) is fixed by the monodromy
    for (int c = 0; c < 2; ++c) d.walls.push_back({c, {1, 2}, {{1, {1}, -1}}});
  }
  return d;
}

std::vector<Monomial> cross_wall(const AffineSurface& s, const Monomial& m, const Wall& w, std::int64_t order) {
  if (m.m.cone != w.cone) throw InvalidInput("cross_wall: monomial and wall live in different charts");
  std::int64_t n = pairing_abs(w.dir, m.m.v);
  if (n == 0) throw TangentToWall("monomial direction is parallel to the wall");
  const auto& mon = s.monoid();
  std::vector<Monomial> out;
  for (const auto& [k, c] : wall_power(mon, w.terms, n, order - mon.degree(m.A)))
    out.push_back({m.coeff * c, m.A + k.first, {m.m.cone, m.m.v + k.second * w.dir}});
  return out;
}

Monomial cross_ray_kink(const AffineSurface& s, const Monomial& m, int ray) {
  int slot = s.ray_slot(m.m.cone, ray);
  std::int64_t pair = std::abs(m.m.v[1 - slot]);
  Monomial out = m;
  out.A = m.A + pair * s.ray(ray).kink;
  out.m = parallel_transport(s, m.m, ray);
  return out;
}

BrokenLineEngine::BrokenLineEngine(AffineSurface s, ScatteringDiagram d) : s_(std::move(s)) {
  d_ = d.normalized(s_);
  walls_by_cone_.resize(s_.num_cones());
  for (const auto& w : d_.walls) walls_by_cone_[w.cone].push_back(&w);
}

void BrokenLineEngine::check_generic(const BPoint& z) const {
  if (z.cone < 0 || z.cone >= s_.num_cones()) throw InvalidInput("endpoint cone out of range");
  if (z.x[0] <= 0 || z.x[1] <= 0) throw NonGenericEndpoint("endpoint lies on a ray or outside its cone");
  for (const Wall* w : walls_by_cone_[z.cone])
    if (z.x[0] * w->dir[1] == z.x[1] * w->dir[0]) throw NonGenericEndpoint("endpoint lies on a wall");
}

const std::set<BrokenLineEngine::State>& BrokenLineEngine::reachable(const BDirection& p0) const {
  BDirection p = canonical(s_, p0);
  std::lock_guard<std::mutex> lock(mu_);
  auto it = reach_.find(p);
  if (it != reach_.end()) return *it->second;
  const auto& mon = s_.monoid();
  auto seen = std::make_unique<std::set<State>>();
  std::vector<State> stack{{p.cone, p.v, mon.zero()}};
  if (auto r = s_.ray_of(p.cone, p.v)) stack.push_back({s_.neighbor(p.cone, *r), s_.transport(p.cone, *r, p.v), mon.zero()});
  const std::size_t cap = 4'000'000;
  while (!stack.empty()) {
    State st = std::move(stack.back());
    stack.pop_back();
    if (!seen->insert(st).second) continue;
    if (seen->size() > cap) throw NonConvergent("broken line search does not terminate");
    if (is_zero(st.m)) continue;
    const std::int64_t deg = mon.degree(st.A);
    auto cr = s_.cone_rays(st.cone);
    for (int slot = 0; slot < 2; ++slot) {
      int r = cr[slot];
      std::int64_t other = st.m[1 - slot];
      if (other <= 0 || s_.ray(r).boundary) continue;
      CurveClass A2 = st.A + other * s_.ray(r).kink;
      if (mon.degree(A2) >= d_.order) continue;
      stack.push_back({s_.neighbor(st.cone, r), s_.transport(st.cone, r, st.m), std::move(A2)});
    }
    for (const Wall* w : walls_by_cone_[st.cone]) {
      std::int64_t n = pairing_abs(w->dir, st.m);
      if (n == 0) continue;
      for (const auto& [k, c] : wall_power(mon, w->terms, n, d_.order - deg)) {
        if (k.second == 0 && is_zero_class(k.first)) continue;
        stack.push_back({st.cone, st.m + k.second * w->dir, st.A + k.first});
      }
    }
  }
  return *reach_.emplace(p, std::move(seen)).first->second;
}

struct BrokenLineEngine::Walk {
  BDirection p;
  BPoint z;
  int depth = 0;
  int max_depth = 0;
  bool record = false;
  Int found;  // summed coefficients of completed lines
  std::vector<BrokenLineSegment> segs;  // traversed backwards
  std::vector<Int> partial;            // bend coefficients collected after each segment
  std::vector<BrokenLine>* out = nullptr;
};

void BrokenLineEngine::trace(Walk& w, int cone, const RVec2& pos, const Vec2& m, const CurveClass& A,
                             const Int& coeff) const {
  if (!s_.monoid().is_effective(A)) return;
  if (++w.depth > w.max_depth) throw NonConvergent("broken line trace does not terminate");
  struct Guard {
    int& d;
    ~Guard() { --d; }
  } guard{w.depth};

  enum Kind { None, RayHit, WallHit } kind = None;
  Rational best;
  int which = -1;
  for (int j = 0; j < 2; ++j) {
    if (m[j] >= 0) continue;
    Rational t = -pos[j] / m[j];
    if (kind == None || t < best) {
      kind = RayHit;
      best = t;
      which = j;
    }
  }
  const auto& ws = walls_by_cone_[cone];
  for (std::size_t i = 0; i < ws.size(); ++i) {
    const Vec2& d = ws[i]->dir;
    std::int64_t den = cross(m, d);
    if (den == 0) continue;
    Rational t = -(pos[0] * d[1] - pos[1] * d[0]) / den;
    if (t <= 0) continue;
    Rational x = pos[0] + t * m[0];
    if (x <= 0) continue;  // the opposite half-line
    if (kind == None || t < best) {
      kind = WallHit;
      best = t;
      which = static_cast<int>(i);
    }
  }

  const Monomial here{1, A, {cone, m}};
  if (kind == None) {
    if (!is_zero_class(A) || !same_direction(s_, {cone, m}, w.p)) return;
    w.found += coeff;
    if (w.record) {
      BrokenLine bl;
      bl.p = w.p;
      bl.z = w.z;
      bl.segments.push_back({cone, pos, pos, true, here});
      for (auto it = w.segs.rbegin(); it != w.segs.rend(); ++it) bl.segments.push_back(*it);
      // coefficient of a segment = (all bends) / (bends after it)
      bl.segments[0].mono.coeff = 1;
      for (std::size_t i = 1; i < bl.segments.size(); ++i)
        bl.segments[i].mono.coeff = coeff / w.partial[w.partial.size() - i];
      w.out->push_back(std::move(bl));
    }
    return;
  }

  RVec2 pt{pos[0] + best * m[0], pos[1] + best * m[1]};
  if (pt[0] == 0 && pt[1] == 0) throw HitsSingularity("broken line passes through the origin");
  if (w.record) {
    w.segs.push_back({cone, pt, pos, false, here});
    w.partial.push_back(coeff);
  }
  struct Pop {
    Walk& w;
    ~Pop() {
      if (w.record) {
        w.segs.pop_back();
        w.partial.pop_back();
      }
    }
  } pop{w};

  if (kind == RayHit) {
    int r = s_.cone_rays(cone)[1 - which];
    if (s_.ray(r).boundary) return;
    int slot = s_.ray_slot(cone, r);
    std::int64_t pair = std::abs(m[1 - slot]);
    CurveClass A2 = A - pair * s_.ray(r).kink;
    if (!s_.monoid().is_effective(A2)) return;
    trace(w, s_.neighbor(cone, r), s_.transport(cone, r, pt), s_.transport(cone, r, m), A2, coeff);
    return;
  }
  const Wall& wall = *ws[which];
  const auto& mon = s_.monoid();
  std::int64_t n = pairing_abs(wall.dir, m);
  for (const auto& [k, c] : wall_power(mon, wall.terms, n, mon.degree(A) + 1)) {
    if (!leq(k.first, A)) continue;
    trace(w, cone, pt, m - k.second * wall.dir, A - k.first, coeff * c);
  }
}

std::map<std::pair<Vec2, CurveClass>, Int> BrokenLineEngine::final_monomials(const BDirection& p0,
                                                                            const BPoint& z) const {
  check_generic(z);
  BDirection p = canonical(s_, p0);
  std::map<std::pair<Vec2, CurveClass>, Int> out;
  if (is_zero(p.v)) {
    out[{Vec2{0, 0}, s_.monoid().zero()}] = 1;
    return out;
  }
  const auto& states = reachable(p);
  for (const State& st : states) {
    if (st.cone != z.cone || is_zero(st.m)) continue;
    Walk w;
    w.p = p;
    w.z = z;
    w.max_depth = 64 + 8 * static_cast<int>(d_.walls.size() + s_.num_rays()) * static_cast<int>(d_.order + 2);
    try {
      trace(w, z.cone, z.x, st.m, st.A, 1);
    } catch (const HitsSingularity& e) {
      throw NonGenericEndpoint(e.what());
    }
    if (w.found != 0) out[{st.m, st.A}] += w.found;
  }
  return out;
}

std::vector<BrokenLine> BrokenLineEngine::lines(const BDirection& p0, const BPoint& z) const {
  check_generic(z);
  BDirection p = canonical(s_, p0);
  std::vector<BrokenLine> out;
  if (is_zero(p.v)) return out;
  for (const State& st : reachable(p)) {
    if (st.cone != z.cone || is_zero(st.m)) continue;
    Walk w;
    w.p = p;
    w.z = z;
    w.record = true;
    w.out = &out;
    w.max_depth = 64 + 8 * static_cast<int>(d_.walls.size() + s_.num_rays()) * static_cast<int>(d_.order + 2);
    try {
      trace(w, z.cone, z.x, st.m, st.A, 1);
    } catch (const HitsSingularity& e) {
      throw NonGenericEndpoint(e.what());
    }
  }
  return out;
}

std::vector<BrokenLine> enumerate_broken_lines(const AffineSurface& s, const ScatteringDiagram& d,
                                               const BDirection& p, const BPoint& z) {
  return BrokenLineEngine(s, d).lines(p, z);
}

namespace {

LoopMap run_loop(const AffineSurface& s, const ScatteringDiagram& d, LoopMap cur, std::int64_t order) {
  const auto& mon = s.monoid();
  const int S = s.num_cones();
  for (int c = 0; c < S; ++c) {
    const int o = s.orientation(c);
    std::vector<const Wall*> ws;
    for (const auto& w : d.walls)
      if (w.cone == c) ws.push_back(&w);
    std::sort(ws.begin(), ws.end(), [o](const Wall* a, const Wall* b) { return o * cross(a->dir, b->dir) > 0; });
    for (const Wall* w : ws) {
      Vec2 n{o * w->dir[1], -o * w->dir[0]};
      LoopMap next;
      for (const auto& [key, coef] : cur) {
        const auto& [m, A] = key;
        std::int64_t deg = mon.degree(A);
        if (deg >= order) continue;
        std::int64_t e = dot(n, m);
        for (const auto& [k, c2] : wall_power(mon, w->terms, e, order - deg)) next[{m + k.second * w->dir, A + k.first}] += coef * c2;
      }
      cur.clear();
      for (auto& [k, v] : next)
        if (v != 0) cur.emplace(k, v);
    }
    const int r = (c + 1) % S;
    const int slot = s.ray_slot(c, r);
    LoopMap next;
    for (const auto& [key, coef] : cur) {
      const auto& [m, A] = key;
      next[{s.transport(c, r, m), A + m[1 - slot] * s.ray(r).kink}] += coef;
    }
    cur.clear();
    for (auto& [k, v] : next)
      if (v != 0) cur.emplace(k, v);
  }
  return cur;
}

}  // namespace

namespace {

using ResidueMap = std::map<std::tuple<int, Vec2, CurveClass>, Int>;

// Loop image of the two generators, keeping only terms of degree < order.
// Intermediate terms are truncated at order + slack.
ResidueMap loop_residue(const AffineSurface& s, const ScatteringDiagram& d, std::int64_t order, std::int64_t slack) {
  const auto& mon = s.monoid();
  ResidueMap out;
  for (int g = 0; g < 2; ++g) {
    Vec2 e{g == 0 ? 1 : 0, g == 1 ? 1 : 0};
    LoopMap start{{{e, mon.zero()}, 1}};
    LoopMap res = run_loop(s, d, start, order + slack);
    res[{e, mon.zero()}] -= 1;
    for (const auto& [key, coef] : res)
      if (coef != 0 && mon.degree(key.second) < order) out[{g, key.first, key.second}] = coef;
  }
  return out;
}

}  // namespace

ConsistencyReport check_consistency(const AffineSurface& s, const ScatteringDiagram& d0, std::int64_t order) {
  const auto& mon = s.monoid();
  // Kinks can lower the naive degree of a term inside the loop, so intermediate
  // truncation is widened until the residue below `order` stabilizes.
  std::int64_t base = 0;
  for (const auto& r : s.rays()) base += mon.degree(r.kink);
  auto run = [&](std::int64_t slack) {
    ScatteringDiagram d = d0;
    d.order = std::max(d0.order, order + slack);
    return loop_residue(s, d.normalized(s), order, slack);
  };
  std::int64_t step = std::max<std::int64_t>(order, 1);
  ResidueMap prev = run(base);
  for (int i = 1; i <= 3; ++i) {
    ResidueMap next = run(base + i * step);
    if (next == prev) break;
    prev = std::move(next);
  }
  ConsistencyReport rep;
  for (const auto& [key, coef] : prev) {
    const auto& [g, m, A] = key;
    rep.discrepancy.push_back({g, m, A, coef});
    std::int64_t deg = mon.degree(A);
    if (!rep.first_failing_degree || deg < *rep.first_failing_degree) rep.first_failing_degree = deg;
  }
  rep.ok = rep.discrepancy.empty();
  return rep;
}

namespace {

void add_term(ScatteringDiagram& d, int cone, const Vec2& dir, const WallTerm& t) {
  for (auto& w : d.walls) {
    if (w.cone != cone || w.dir != dir) continue;
    for (auto& x : w.terms)
      if (x.A == t.A && x.k == t.k) {
        x.coeff += t.coeff;
        return;
      }
    w.terms.push_back(t);
    return;
  }
  d.walls.push_back({cone, dir, {t}});
}

std::map<std::pair<CurveClass, Vec2>, std::array<Int, 2>> group_discrepancy(const ConsistencyReport& r) {
  std::map<std::pair<CurveClass, Vec2>, std::array<Int, 2>> g;
  for (const auto& t : r.discrepancy) {
    Vec2 e{t.generator == 0 ? 1 : 0, t.generator == 1 ? 1 : 0};
    g[{t.A, t.m - e}][t.generator] += t.coeff;
  }
  return g;
}

}  // namespace

ScatteringDiagram complete_to_order(const AffineSurface& s, const ScatteringDiagram& d0, std::int64_t order) {
  const auto& mon = s.monoid();
  const int S = s.num_cones();
  // Kinks lower degrees inside the loop, so input walls above `order` still
  // matter; normalize with the same slack the consistency check uses.
  std::int64_t slack = 0;
  for (const auto& r : s.rays()) slack += mon.degree(r.kink);
  auto normalize = [&](ScatteringDiagram x) {
    x.order = std::max(d0.order, order) + slack;
    x = x.normalized(s);
    x.order = order;
    return x;
  };
  ScatteringDiagram d = normalize(d0);
  for (std::int64_t deg = 0; deg < order; ++deg) {
    ConsistencyReport rep = check_consistency(s, d, deg + 1);
    if (rep.ok) continue;
    if (*rep.first_failing_degree < deg || deg == 0) {
      std::ostringstream os;
      os << "discrepancy at degree " << *rep.first_failing_degree << " while completing degree " << deg;
      throw NonConvergent(os.str());
    }
    for (const auto& [key, g] : group_discrepancy(rep)) {
      const auto& [A, w] = key;
      if (g[0] == 0 && g[1] == 0) continue;
      if (is_zero(w)) throw NonConvergent("discrepancy with zero exponent cannot be removed by a wall");
      if (g[0] * w[0] + g[1] * w[1] != 0) throw NonConvergent("discrepancy is not a wall-crossing derivation");
      // develop the ray -w counterclockwise from the base chart
      Vec2 wc = w;
      CurveClass Ac = A;
      int cone = -1;
      for (int c = 0; c < S; ++c) {
        Vec2 u{-wc[0], -wc[1]};
        if (u[0] > 0 && u[1] > 0) {
          cone = c;
          break;
        }
        if ((u[0] == 0 && u[1] > 0) || (u[1] == 0 && u[0] > 0))
          throw NonConvergent("completion would need a wall along a ray");
        int r = (c + 1) % S;
        int slot = s.ray_slot(c, r);
        Ac = Ac + wc[1 - slot] * s.ray(r).kink;
        wc = s.transport(c, r, wc);
      }
      if (cone < 0) throw NonConvergent("outgoing ray not found in one turn");
      if (!mon.is_effective(Ac) || mon.degree(Ac) <= 0) throw NonConvergent("new wall term has no positive class");
      Vec2 dir = primitive(Vec2{-wc[0], -wc[1]});
      std::int64_t k = -content(wc);

      ScatteringDiagram trial = d;
      add_term(trial, cone, dir, {1, Ac, k});
      auto after = group_discrepancy(check_consistency(s, trial, deg + 1));
      std::array<Int, 2> g2{0, 0};
      if (auto it = after.find(key); it != after.end()) g2 = it->second;
      std::array<Int, 2> delta{g2[0] - g[0], g2[1] - g[1]};
      int j = delta[0] != 0 ? 0 : 1;
      if (delta[j] == 0) throw NonConvergent("trial wall does not affect the discrepancy");
      if (g[j] % delta[j] != 0) throw NonConvergent("non-integral wall coefficient");
      Int a = -g[j] / delta[j];
      if (g[1 - j] + a * delta[1 - j] != 0) throw NonConvergent("wall coefficient is not consistent");
      add_term(d, cone, dir, {a, Ac, k});
    }
    d = normalize(d);
    ConsistencyReport check = check_consistency(s, d, deg + 1);
    if (!check.ok) throw NonConvergent("completion failed at degree " + std::to_string(deg));
  }
  return d;
}

}  // namespace theta
