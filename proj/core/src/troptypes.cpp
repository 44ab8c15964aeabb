#include "thetamirror/troptypes.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "thetamirror/errors.hpp"

namespace theta {

namespace {

int home_cone(const AffineSurface&, int r) { return r == 0 ? 0 : r - 1; }

// Cone whose chart carries tangent vectors of the cell, -1 for the origin.
int chart_of(const AffineSurface& s, const Cell& c) {
  switch (c.kind) {
    case Cell::Cone: return c.index;
    case Cell::RayCell: return home_cone(s, c.index);
    default: return -1;
  }
}

bool cell_valid(const AffineSurface& s, const Cell& c) {
  return c.kind == Cell::Origin || (c.index >= 0 && c.index < s.num_rays());
}

bool is_face(const AffineSurface& s, const Cell& a, const Cell& b) {
  if (a.kind == Cell::Origin) return true;
  if (a.kind == Cell::RayCell) {
    if (b.kind == Cell::RayCell) return a.index == b.index;
    return b.kind == Cell::Cone && s.cone_has_ray(b.index, a.index);
  }
  return a == b;
}

// Tangent vector in the lattice of its cell: 2, 1 or 0 coordinates.
std::vector<std::int64_t> cell_coords(const AffineSurface& s, const Cell& c, const Vec2& u) {
  if (c.kind == Cell::Cone) return {u[0], u[1]};
  if (c.kind == Cell::RayCell) return {u[s.ray_slot(home_cone(s, c.index), c.index)]};
  return {};
}

struct Layout {
  std::vector<std::size_t> vert_off;
  std::size_t edge_off = 0;
  std::size_t nvars = 0;
  std::vector<std::string> names;
};

Layout layout(const TropicalType& t) {
  Layout l;
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    l.vert_off.push_back(l.nvars);
    const Cell& c = t.vertices[v];
    std::string h = "h(v" + std::to_string(v) + ")";
    if (c.kind == Cell::RayCell) l.names.push_back(h);
    if (c.kind == Cell::Cone) {
      l.names.push_back(h + ".x");
      l.names.push_back(h + ".y");
    }
    l.nvars += c.dim();
  }
  l.edge_off = l.nvars;
  for (std::size_t e = 0; e < t.edges.size(); ++e) l.names.push_back("l(e" + std::to_string(e) + ")");
  l.nvars += t.edges.size();
  return l;
}

// Position of vertex v in the lattice of a cell containing it, as rows over the variables.
std::vector<std::vector<Int>> eval_rows(const AffineSurface& s, const TropicalType& t, const Layout& l, int v,
                                        const Cell& in) {
  const Cell& c = t.vertices[v];
  std::vector<std::vector<Int>> rows(in.dim(), std::vector<Int>(l.nvars));
  const std::size_t o = l.vert_off[v];
  if (c.kind == Cell::Origin) return rows;
  if (in.kind == Cell::RayCell) {
    rows[0][o] = 1;
  } else if (c.kind == Cell::RayCell) {
    rows[s.ray_slot(in.index, c.index)][o] = 1;
  } else {
    rows[0][o] = 1;
    rows[1][o + 1] = 1;
  }
  return rows;
}

IntMatrix equality_system(const AffineSurface& s, const TropicalType& t, const Layout& l) {
  std::vector<std::vector<Int>> rows;
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const TropEdge& ed = t.edges[e];
    if (!is_face(s, t.vertices[ed.from], ed.cell) || !is_face(s, t.vertices[ed.to], ed.cell))
      throw ChartObstruction("edge " + std::to_string(e) + " has no chart containing both endpoints");
    auto a = eval_rows(s, t, l, ed.to, ed.cell), b = eval_rows(s, t, l, ed.from, ed.cell);
    auto u = cell_coords(s, ed.cell, ed.u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::vector<Int> r(l.nvars);
      for (std::size_t j = 0; j < l.nvars; ++j) r[j] = a[i][j] - b[i][j];
      r[l.edge_off + e] -= u[i];
      rows.push_back(std::move(r));
    }
  }
  IntMatrix m(rows.size(), l.nvars);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < l.nvars; ++j) m(i, j) = rows[i][j];
  return m;
}

// Equalities plus x_i = 0 for the forced-zero variables.
IntMatrix span_system(const IntMatrix& eq, const std::vector<std::size_t>& zero) {
  IntMatrix m(eq.rows() + zero.size(), eq.cols());
  for (std::size_t i = 0; i < eq.rows(); ++i)
    for (std::size_t j = 0; j < eq.cols(); ++j) m(i, j) = eq(i, j);
  for (std::size_t k = 0; k < zero.size(); ++k) m(eq.rows() + k, zero[k]) = 1;
  return m;
}

struct Analysis {
  Layout lay;
  IntMatrix eq;
  UniversalCone cone;
  std::vector<std::vector<Int>> lattice;      // integer basis of the cone's span
  std::vector<std::vector<Rational>> span;    // rational basis of the same
};

Analysis analyse(const AffineSurface& s, const TropicalType& t) {
  Analysis a;
  a.lay = layout(t);
  a.eq = equality_system(s, t, a.lay);
  const std::size_t n = a.lay.nvars;
  UniversalCone& c = a.cone;
  c.variables = a.lay.names;
  c.equalities = RatMatrix::from(a.eq);
  c.interior.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    RatMatrix m = c.equalities;
    std::vector<Rational> row(n), rhs(m.rows(), Rational(0));
    row[i] = 1;
    m.append_row(row);
    rhs.push_back(1);
    auto x = nonneg_solution(m, rhs);
    if (!x) {
      c.forced_zero.push_back(i);
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) c.interior[j] += (*x)[j];
  }
  IntMatrix sys = span_system(a.eq, c.forced_zero);
  if (n == 0) return a;
  RatMatrix rs = RatMatrix::from(sys);
  c.dimension = n - rank(rs);
  a.span = kernel(rs);
  a.lattice = integer_kernel(sys);
  return a;
}

// Rank of (eval_v restricted to the span) together with extra columns.
std::size_t image_rank(const AffineSurface& s, const TropicalType& t, const Analysis& a, int v, const Cell& in,
                       const std::vector<std::vector<std::int64_t>>& extra) {
  auto rows = eval_rows(s, t, a.lay, v, in);
  const std::size_t d = in.dim();
  RatMatrix m(d, a.span.size() + extra.size());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < a.span.size(); ++k) {
      Rational acc = 0;
      for (std::size_t j = 0; j < a.lay.nvars; ++j) acc += Rational(rows[i][j]) * a.span[k][j];
      m(i, k) = acc;
    }
    for (std::size_t k = 0; k < extra.size(); ++k) m(i, a.span.size() + k) = extra[k][i];
  }
  return d == 0 ? 0 : rank(m);
}

// Integer image of the cone lattice (plus extra columns) in the lattice of `in`.
IntMatrix image_lattice(const AffineSurface& s, const TropicalType& t, const Analysis& a, int v, const Cell& in,
                        const std::vector<std::vector<std::int64_t>>& extra) {
  auto rows = eval_rows(s, t, a.lay, v, in);
  const std::size_t d = in.dim();
  IntMatrix m(d, a.lattice.size() + extra.size());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < a.lattice.size(); ++k) {
      Int acc = 0;
      for (std::size_t j = 0; j < a.lay.nvars; ++j) acc += rows[i][j] * a.lattice[k][j];
      m(i, k) = acc;
    }
    for (std::size_t k = 0; k < extra.size(); ++k) m(i, a.lattice.size() + k) = extra[k][i];
  }
  return m;
}

std::size_t valence(const TropicalType& t, int v) {
  std::size_t n = 0;
  for (const auto& e : t.edges) n += (e.from == v) + (e.to == v);
  for (const auto& l : t.legs) n += l.vertex == v;
  return n;
}

}  // namespace

std::string format_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Cone: return "cone:" + std::to_string(c.index + 1);
    case Cell::RayCell: return "ray:" + std::to_string(c.index + 1);
    default: return "origin";
  }
}

Cell parse_cell(const std::string& s) {
  if (s == "origin") return Cell::origin();
  auto colon = s.find(':');
  if (colon != std::string::npos) {
    std::string kind = s.substr(0, colon);
    int idx = 0;
    try {
      idx = std::stoi(s.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidInput("bad cell '" + s + "'");
    }
    if (idx < 1) throw InvalidInput("cell indices are 1-based: '" + s + "'");
    if (kind == "cone") return Cell::cone(idx - 1);
    if (kind == "ray") return Cell::ray(idx - 1);
  }
  throw InvalidInput("bad cell '" + s + "' (expected origin, ray:i or cone:i)");
}

std::vector<std::string> validate(const AffineSurface& s, const TropicalType& t) {
  std::vector<std::string> out;
  const int V = static_cast<int>(t.vertices.size());
  if (V == 0) out.push_back("no vertices");
  for (int v = 0; v < V; ++v)
    if (!cell_valid(s, t.vertices[v])) out.push_back("vertex " + std::to_string(v) + ": unknown cell");
  auto check_u = [&](const std::string& what, const Cell& c, const Vec2& u) {
    if (!cell_valid(s, c)) {
      out.push_back(what + ": unknown cell");
      return;
    }
    if (c.kind == Cell::Origin && !is_zero(u)) out.push_back(what + ": tangent vector must vanish at the origin");
    if (c.kind == Cell::RayCell && u[1 - s.ray_slot(home_cone(s, c.index), c.index)] != 0)
      out.push_back(what + ": tangent vector not along " + format_cell(c));
  };
  std::vector<int> parent(V);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const auto& ed = t.edges[e];
    std::string w = "edge " + std::to_string(e);
    if (ed.from < 0 || ed.from >= V || ed.to < 0 || ed.to >= V) {
      out.push_back(w + ": endpoint out of range");
      continue;
    }
    check_u(w, ed.cell, ed.u);
    if (ed.from == ed.to) out.push_back(w + ": loop");
    if (cell_valid(s, ed.cell))
      for (int v : {ed.from, ed.to})
        if (cell_valid(s, t.vertices[v]) && !is_face(s, t.vertices[v], ed.cell))
          out.push_back(w + ": " + format_cell(t.vertices[v]) + " is not a face of " + format_cell(ed.cell));
    int a = find(ed.from), b = find(ed.to);
    if (a == b && ed.from != ed.to) out.push_back(w + ": closes a cycle (genus must be 0)");
    parent[a] = b;
  }
  for (int v = 1; v < V; ++v)
    if (find(v) != find(0)) {
      out.push_back("graph is disconnected");
      break;
    }
  for (std::size_t i = 0; i < t.legs.size(); ++i) {
    const auto& lg = t.legs[i];
    std::string w = "leg " + std::to_string(i);
    if (lg.vertex < 0 || lg.vertex >= V) {
      out.push_back(w + ": vertex out of range");
      continue;
    }
    check_u(w, lg.cell, lg.u);
    if (cell_valid(s, lg.cell) && cell_valid(s, t.vertices[lg.vertex]) && !is_face(s, t.vertices[lg.vertex], lg.cell))
      out.push_back(w + ": " + format_cell(t.vertices[lg.vertex]) + " is not a face of " + format_cell(lg.cell));
  }
  if (t.out_leg && *t.out_leg >= t.legs.size()) out.push_back("output leg out of range");
  return out;
}

namespace {

// Balancing at every vertex; vertices at the origin throw or are skipped.
bool balanced(const AffineSurface& s, const TropicalType& t, bool skip_origin) {
  const int V = static_cast<int>(t.vertices.size());
  std::vector<Vec2> sum(V, Vec2{0, 0});
  auto add = [&](int v, const Cell& cell, const Vec2& u) {
    const Cell& at = t.vertices[v];
    if (at.kind == Cell::Origin) {
      if (skip_origin) return;
      throw UnsupportedVertex("vertex " + std::to_string(v) + " lies at the origin");
    }
    int h = chart_of(s, at), c = chart_of(s, cell);
    Vec2 w = u;
    if (c != h) w = s.transport(c, at.index, u);
    sum[v] = sum[v] + w;
  };
  for (const auto& e : t.edges) {
    add(e.from, e.cell, e.u);
    add(e.to, e.cell, -1 * e.u);
  }
  for (const auto& l : t.legs) add(l.vertex, l.cell, l.u);
  for (int v = 0; v < V; ++v)
    if (t.vertices[v].kind == Cell::Origin && !skip_origin)
      throw UnsupportedVertex("vertex " + std::to_string(v) + " lies at the origin");
  return std::all_of(sum.begin(), sum.end(), [](const Vec2& x) { return is_zero(x); });
}

}  // namespace

bool is_balanced(const AffineSurface& s, const TropicalType& t) { return balanced(s, t, false); }

UniversalCone realizability_cone(const AffineSurface& s, const TropicalType& t) { return analyse(s, t).cone; }

std::string TypeClassification::str() const {
  std::ostringstream os;
  switch (kind) {
    case BrokenLine: os << "broken-line"; break;
    case Wall: os << "wall"; break;
    case KTrace: os << k << "-trace"; break;
    default: os << "none"; break;
  }
  if (dim_tau >= 0) os << " (dim tau = " << dim_tau << ", dim h_out = " << dim_out << ")";
  if (kind == None && !reason.empty()) os << ": " << reason;
  return os.str();
}

TypeClassification classify(const AffineSurface& s, const TropicalType& t) {
  TypeClassification c;
  auto bad = validate(s, t);
  if (!bad.empty()) {
    c.reason = bad.front();
    return c;
  }
  // balancing at the origin is not defined here; rigid wall types live there
  if (!balanced(s, t, true)) {
    c.reason = "not balanced";
    return c;
  }
  Analysis a = analyse(s, t);
  if (!a.cone.realizable()) {
    c.reason = "not realizable";
    return c;
  }
  if (!t.out_leg) {
    c.reason = "no output leg";
    return c;
  }
  const TropLeg& out = t.legs[*t.out_leg];
  c.dim_tau = static_cast<int>(a.cone.dimension);
  std::vector<std::vector<std::int64_t>> extra;
  if (!is_zero(out.u)) extra.push_back(cell_coords(s, out.cell, out.u));
  c.dim_out = static_cast<int>(image_rank(s, t, a, out.vertex, out.cell, extra));
  const std::size_t nl = t.legs.size();

  if (nl == 2 && !is_zero(out.u) && out.cell.kind != Cell::Origin && !is_zero(t.legs[1 - *t.out_leg].u) &&
      c.dim_tau == 1 && c.dim_out == 2) {
    c.kind = TypeClassification::BrokenLine;
    return c;
  }
  if (nl == 1 && !is_zero(out.u) && c.dim_tau == 0 && c.dim_out == 1 &&
      !(out.cell.kind == Cell::RayCell && s.ray(out.cell.index).boundary)) {
    c.kind = TypeClassification::Wall;
    return c;
  }
  if (nl >= 2 && is_zero(out.u) && valence(t, out.vertex) == nl && c.dim_tau == 2 && c.dim_out == 2) {
    c.kind = TypeClassification::KTrace;
    c.k = static_cast<int>(nl - 1);
    return c;
  }
  c.reason = "dimension or leg conditions not met";
  return c;
}

Spine spine(const TropicalType& t) {
  const int V = static_cast<int>(t.vertices.size());
  std::vector<bool> alive(V, true), marked(V, false), edge_alive(t.edges.size(), true);
  for (const auto& l : t.legs)
    if (l.vertex >= 0 && l.vertex < V) marked[l.vertex] = true;
  if (t.legs.empty()) return {};
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < V; ++v) {
      if (!alive[v] || marked[v]) continue;
      std::size_t deg = 0, last = 0;
      for (std::size_t e = 0; e < t.edges.size(); ++e)
        if (edge_alive[e] && (t.edges[e].from == v || t.edges[e].to == v)) {
          ++deg;
          last = e;
        }
      if (deg <= 1) {
        alive[v] = false;
        if (deg == 1) edge_alive[last] = false;
        changed = true;
      }
    }
  }
  Spine sp;
  for (int v = 0; v < V; ++v)
    if (alive[v]) sp.vertices.push_back(v);
  for (std::size_t e = 0; e < t.edges.size(); ++e)
    if (edge_alive[e]) sp.edges.push_back(e);
  return sp;
}

bool spine_conditions_hold(const AffineSurface& s, const TropicalType& t) {
  Analysis a = analyse(s, t);
  Spine sp = spine(t);
  for (int v : sp.vertices) {
    const Cell& c = t.vertices[v];
    if (c.kind == Cell::Origin) return false;
    Cell in = c.kind == Cell::Cone ? c : Cell::cone(home_cone(s, c.index));
    if (image_rank(s, t, a, v, in, {}) != 1) return false;
  }
  for (std::size_t e : sp.edges) {
    const TropEdge& ed = t.edges[e];
    auto u = cell_coords(s, ed.cell, ed.u);
    for (int v : {ed.from, ed.to}) {
      std::size_t r0 = image_rank(s, t, a, v, ed.cell, {});
      if (image_rank(s, t, a, v, ed.cell, {u}) == r0) return false;
    }
  }
  return true;
}

CutResult cut_at_vout(const AffineSurface& s, const TropicalType& t) {
  TypeClassification cls = classify(s, t);
  if (cls.kind != TypeClassification::KTrace) throw NotKTrace("not a k-trace type: " + cls.str());
  const std::size_t out = *t.out_leg;
  const int vo = t.legs[out].vertex;
  const Cell cone = t.vertices[vo];
  const int V = static_cast<int>(t.vertices.size());

  CutResult res;
  res.gluing.n = 2;
  res.star.vertices = {cone};
  res.star.legs.push_back({0, t.legs[out].cell, {0, 0}, t.legs[out].label});
  res.star.out_leg = 0;
  auto add_star_leg = [&](const Cell& cell, const Vec2& away, const std::string& label) {
    res.star.legs.push_back({0, cell, away, label});
    Vec2 p = is_zero(away) ? away : primitive(away);
    res.gluing.star_legs.push_back({Int(p[0]), Int(p[1])});
  };

  for (std::size_t i = 0; i < t.legs.size(); ++i) {
    if (i == out || t.legs[i].vertex != vo) continue;
    CutPiece piece;
    piece.trivial = true;
    TropLeg l = t.legs[i];
    l.vertex = -1;
    piece.type.legs = {l};
    piece.type.out_leg = 0;
    piece.classification.reason = "trivial";
    res.pieces.push_back(std::move(piece));
    res.gluing.piece_eval.push_back(IntMatrix::identity(2));
    add_star_leg(t.legs[i].cell, t.legs[i].u, t.legs[i].label);
  }

  for (std::size_t e = 0; e < t.edges.size(); ++e) {
    const TropEdge& cut = t.edges[e];
    if (cut.from != vo && cut.to != vo) continue;
    const int w = cut.from == vo ? cut.to : cut.from;
    const Vec2 toward = cut.from == vo ? -1 * cut.u : cut.u;  // from w to v_out
    // component of w once the cut edge is removed
    std::vector<int> index(V, -1);
    std::vector<int> order{w};
    index[w] = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (std::size_t f = 0; f < t.edges.size(); ++f) {
        if (f == e) continue;
        const auto& ed = t.edges[f];
        int x = order[k], y = ed.from == x ? ed.to : ed.to == x ? ed.from : -1;
        if (y < 0 || index[y] >= 0) continue;
        index[y] = static_cast<int>(order.size());
        order.push_back(y);
      }
    CutPiece piece;
    for (int x : order) piece.type.vertices.push_back(t.vertices[x]);
    for (std::size_t f = 0; f < t.edges.size(); ++f) {
      const auto& ed = t.edges[f];
      if (f != e && index[ed.from] >= 0) piece.type.edges.push_back({index[ed.from], index[ed.to], ed.cell, ed.u});
    }
    for (const auto& l : t.legs)
      if (index[l.vertex] >= 0) piece.type.legs.push_back({index[l.vertex], l.cell, l.u, l.label});
    piece.type.legs.push_back({0, cut.cell, toward, "cut" + std::to_string(e)});
    piece.type.out_leg = piece.type.legs.size() - 1;
    piece.classification = classify(s, piece.type);

    Analysis pa = analyse(s, piece.type);
    res.gluing.piece_eval.push_back(image_lattice(s, piece.type, pa, 0, cone, {{toward[0], toward[1]}}));
    add_star_leg(cut.cell, -1 * toward, "cut" + std::to_string(e));
    res.pieces.push_back(std::move(piece));
  }

  Analysis a = analyse(s, t);
  res.gluing.glued_eval = image_lattice(s, t, a, vo, cone, {});
  return res;
}

Int k_tau(const AffineSurface& s, const TropicalType& t) {
  if (!t.out_leg || *t.out_leg >= t.legs.size()) throw InvalidInput("k_tau needs an output leg");
  const TropLeg& out = t.legs[*t.out_leg];
  Analysis a = analyse(s, t);
  std::vector<std::vector<std::int64_t>> extra;
  if (!is_zero(out.u)) extra.push_back(cell_coords(s, out.cell, out.u));
  IntMatrix m = image_lattice(s, t, a, out.vertex, out.cell, extra);
  if (out.cell.dim() == 0) return 1;
  CokernelOrder c = cokernel_order(m);
  if (!c.finite) throw InfiniteCokernel("dim h(tau_out) < dim sigma(L_out)");
  return c.order;
}

std::size_t automorphism_count(const TropicalType& t) {
  const int V = static_cast<int>(t.vertices.size());
  std::vector<int> fixed(V, -1);
  for (const auto& l : t.legs)
    if (l.vertex >= 0) fixed[l.vertex] = l.vertex;
  auto has_edge = [&](int a, int b, const Cell& c, const Vec2& u) {
    for (const auto& e : t.edges)
      if (e.cell == c && ((e.from == a && e.to == b && e.u == u) || (e.from == b && e.to == a && e.u == -1 * u)))
        return true;
    return false;
  };
  std::vector<int> img(V, -1);
  std::vector<bool> used(V, false);
  std::size_t count = 0;
  std::function<void(int)> go = [&](int v) {
    if (v == V) {
      for (const auto& e : t.edges)
        if (!has_edge(img[e.from], img[e.to], e.cell, e.u)) return;
      ++count;
      return;
    }
    for (int w = 0; w < V; ++w) {
      if (used[w] || t.vertices[w] != t.vertices[v]) continue;
      if (fixed[v] >= 0 && w != v) continue;
      bool ok = true;
      for (const auto& e : t.edges) {
        int a = e.from == v ? e.to : e.to == v ? e.from : -1;
        if (a < 0 || a > v) continue;
        int ia = img[a];
        if (e.from == v ? !has_edge(w, ia, e.cell, e.u) : !has_edge(ia, w, e.cell, e.u)) ok = false;
      }
      if (!ok) continue;
      used[w] = true;
      img[v] = w;
      go(v + 1);
      used[w] = false;
    }
  };
  go(0);
  return count;
}

std::vector<TropicalType> ktrace_corpus(const AffineSurface& s, int max_k, std::int64_t max_entry) {
  std::vector<Vec2> dirs;
  for (std::int64_t a = -max_entry; a <= max_entry; ++a)
    for (std::int64_t b = -max_entry; b <= max_entry; ++b)
      if (a != 0 || b != 0) dirs.push_back({a, b});
  std::vector<TropicalType> out;
  std::set<std::string> seen;
  for (int c = 0; c < s.num_cones(); ++c) {
    auto [r0, r1] = s.cone_rays(c);
    const std::array<int, 2> slot_ray{s.ray_slot(c, r0) == 0 ? r0 : r1, s.ray_slot(c, r0) == 0 ? r1 : r0};
    // input multisets summing to zero, as non-decreasing index sequences
    std::vector<std::vector<Vec2>> inputs{{{0, 0}}};
    std::function<void(std::vector<std::size_t>&, int)> rec = [&](std::vector<std::size_t>& idx, int k) {
      if (static_cast<int>(idx.size()) == k) {
        Vec2 sum{0, 0};
        for (auto i : idx) sum = sum + dirs[i];
        if (is_zero(sum)) {
          std::vector<Vec2> in;
          for (auto i : idx) in.push_back(dirs[i]);
          inputs.push_back(in);
        }
        return;
      }
      for (std::size_t i = idx.empty() ? 0 : idx.back(); i < dirs.size(); ++i) {
        idx.push_back(i);
        rec(idx, k);
        idx.pop_back();
      }
    };
    for (int k = 2; k <= max_k; ++k) {
      std::vector<std::size_t> idx;
      rec(idx, k);
    }
    for (const auto& in : inputs) {
      const int k = static_cast<int>(in.size());
      // mode per input: 0 direct leg, 1 crosses slot-0 ray, 2 crosses slot-1 ray
      std::vector<int> mode(k, 0);
      for (;;) {
        bool usable = true;
        for (int i = 0; i < k; ++i)
          if ((mode[i] == 1 && in[i][1] >= 0) || (mode[i] == 2 && in[i][0] >= 0)) usable = false;
        if (usable) {
          TropicalType t;
          t.vertices.push_back(Cell::cone(c));
          t.legs.push_back({0, Cell::cone(c), {0, 0}, "out"});
          t.out_leg = 0;
          for (int i = 0; i < k; ++i) {
            std::string label = "in" + std::to_string(i + 1);
            if (mode[i] == 0) {
              t.legs.push_back({0, Cell::cone(c), in[i], label});
              continue;
            }
            int r = slot_ray[mode[i] - 1];
            int w = static_cast<int>(t.vertices.size());
            t.vertices.push_back(Cell::ray(r));
            t.edges.push_back({0, w, Cell::cone(c), in[i]});
            t.legs.push_back({w, Cell::cone(s.neighbor(c, r)), s.transport(c, r, in[i]), label});
          }
          if (classify(s, t).kind == TypeClassification::KTrace) {
            std::ostringstream key;
            key << c;
            for (int i = 0; i < k; ++i) key << ' ' << in[i][0] << ',' << in[i][1] << ':' << mode[i];
            if (seen.insert(key.str()).second) out.push_back(std::move(t));
          }
        }
        int i = 0;
        while (i < k && mode[i] == 2) mode[i++] = 0;
        if (i == k) break;
        ++mode[i];
      }
    }
  }
  return out;
}

}  // namespace theta
