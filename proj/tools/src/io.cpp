#include "thetatools/io.hpp"

#include <fstream>
#include <limits>

#include "thetamirror/errors.hpp"

namespace theta::io {

namespace {

template <class T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("field '") + key + "': " + e.what());
  }
}

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InvalidInput("expected an integer pair, got " + j.dump());
  return {j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
}

CurveClass class_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected a curve class array, got " + j.dump());
  CurveClass a;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InvalidInput("curve class entries must be integers");
    a.push_back(x.get<std::int64_t>());
  }
  return a;
}

}  // namespace

json to_json(const Int& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(x);
  return x.str();
}

Int int_from_json(const json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw InvalidInput("expected an integer, got " + j.dump());
}

json to_json(const CurveClassMonoid& m) { return {{"labels", m.labels}, {"L", m.L}}; }

CurveClassMonoid monoid_from_json(const json& j) {
  CurveClassMonoid m{get<std::vector<std::string>>(j, "labels"), get<std::vector<std::int64_t>>(j, "L")};
  m.validate();
  return m;
}

json to_json(const AffineSurface& s) {
  json rays = json::array();
  for (const auto& r : s.rays())
    rays.push_back({{"label", r.label}, {"selfint", r.selfint}, {"kink", r.kink}, {"boundary", r.boundary}});
  json j = {{"name", s.name()}, {"monoid", to_json(s.monoid())}, {"rays", rays}};
  if (!s.provenance().empty()) j["provenance"] = s.provenance();
  return j;
}

AffineSurface surface_from_json(const json& j) {
  CurveClassMonoid m = monoid_from_json(get<json>(j, "monoid"));
  std::vector<Ray> rays;
  for (const auto& r : get<json>(j, "rays")) {
    Ray ray;
    ray.label = get<std::string>(r, "label");
    ray.selfint = get<std::int64_t>(r, "selfint");
    ray.kink = class_from_json(get<json>(r, "kink"));
    ray.boundary = r.value("boundary", false);
    rays.push_back(std::move(ray));
  }
  return AffineSurface(get<std::string>(j, "name"), std::move(rays), std::move(m), j.value("provenance", ""));
}

json to_json(const AffineSurface& s, const ScatteringDiagram& d) {
  json walls = json::array();
  for (const auto& w : d.walls) {
    json terms = json::array();
    for (const auto& t : w.terms) terms.push_back({{"coeff", to_json(t.coeff)}, {"class", t.A}, {"k", t.k}});
    walls.push_back({{"cone", w.cone + 1}, {"dir", w.dir}, {"terms", terms}});
  }
  (void)s;
  return {{"order", d.order}, {"walls", walls}};
}

ScatteringDiagram diagram_from_json(const AffineSurface& s, const json& j) {
  ScatteringDiagram d;
  d.order = get<std::int64_t>(j, "order");
  for (const auto& w : get<json>(j, "walls")) {
    Wall wall;
    wall.cone = get<int>(w, "cone") - 1;
    wall.dir = vec_from_json(get<json>(w, "dir"));
    for (const auto& t : get<json>(w, "terms"))
      wall.terms.push_back({int_from_json(get<json>(t, "coeff")), class_from_json(get<json>(t, "class")),
                            get<std::int64_t>(t, "k")});
    d.walls.push_back(std::move(wall));
  }
  d.validate(s);
  return d;
}

json to_json(const Series& x) {
  json terms = json::array();
  for (const auto& [A, c] : x.terms()) terms.push_back({{"class", A}, {"coeff", to_json(c)}});
  return {{"order", x.order()}, {"terms", terms}};
}

Series series_from_json(const CurveClassMonoid& m, const json& j) {
  Series s(m, get<std::int64_t>(j, "order"));
  for (const auto& t : get<json>(j, "terms")) {
    CurveClass A = class_from_json(get<json>(t, "class"));
    if (A.size() != m.L.size()) throw InvalidInput("curve class has the wrong rank");
    s.add(A, int_from_json(get<json>(t, "coeff")));
  }
  return s;
}

json to_json(const AffineSurface& s, const ThetaElem& e) {
  json terms = json::array();
  for (const auto& [p, c] : e.terms()) terms.push_back({{"dir", format_direction(s, p)}, {"coeff", to_json(c)}});
  return {{"order", e.order()}, {"terms", terms}};
}

ThetaElem theta_from_json(const AffineSurface& s, const json& j) {
  ThetaElem e(s.monoid(), get<std::int64_t>(j, "order"));
  for (const auto& t : get<json>(j, "terms"))
    e.add(canonical(s, parse_direction(s, get<std::string>(t, "dir"))), series_from_json(s.monoid(), get<json>(t, "coeff")));
  return e;
}

json to_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(to_json(m(i, k)));
    rows.push_back(r);
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

IntMatrix matrix_from_json(const json& j) {
  const auto rows = get<std::size_t>(j, "rows"), cols = get<std::size_t>(j, "cols");
  const json& e = get<json>(j, "entries");
  if (!e.is_array() || e.size() != rows) throw InvalidInput("matrix: entries do not match the row count");
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!e[i].is_array() || e[i].size() != cols) throw InvalidInput("matrix: row " + std::to_string(i) + " has the wrong length");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = int_from_json(e[i][k]);
  }
  return m;
}

json to_json(const TropicalType& t) {
  json vertices = json::array(), edges = json::array(), legs = json::array(), vcells = json::array(),
       ecells = json::array(), eu = json::array();
  for (std::size_t v = 0; v < t.vertices.size(); ++v) {
    vertices.push_back(v);
    vcells.push_back(format_cell(t.vertices[v]));
  }
  for (const auto& e : t.edges) {
    edges.push_back({e.from, e.to});
    ecells.push_back(format_cell(e.cell));
    eu.push_back(e.u);
  }
  for (const auto& l : t.legs) {
    json lj = {{"v", l.vertex}, {"cell", format_cell(l.cell)}, {"u", l.u}};
    if (!l.label.empty()) lj["label"] = l.label;
    legs.push_back(lj);
  }
  json j = {{"vertices", vertices},
            {"edges", edges},
            {"legs", legs},
            {"sigma", {{"vertices", vcells}, {"edges", ecells}}},
            {"u", {{"edges", eu}}}};
  if (t.out_leg) j["out"] = *t.out_leg;
  return j;
}

TropicalType type_from_json(const json& j) {
  TropicalType t;
  const json& sigma = get<json>(j, "sigma");
  const auto vcells = get<std::vector<std::string>>(sigma, "vertices");
  if (vcells.size() != get<json>(j, "vertices").size()) throw InvalidInput("sigma.vertices must have one cell per vertex");
  for (const auto& c : vcells) t.vertices.push_back(parse_cell(c));
  const json& edges = get<json>(j, "edges");
  const auto ecells = edges.empty() ? std::vector<std::string>{} : get<std::vector<std::string>>(sigma, "edges");
  const json eu = edges.empty() ? json::array() : get<json>(get<json>(j, "u"), "edges");
  if (ecells.size() != edges.size() || eu.size() != edges.size())
    throw InvalidInput("sigma.edges and u.edges must have one entry per edge");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!edges[e].is_array() || edges[e].size() != 2) throw InvalidInput("edges are [v, w] pairs");
    t.edges.push_back({edges[e][0].get<int>(), edges[e][1].get<int>(), parse_cell(ecells[e]), vec_from_json(eu[e])});
  }
  for (const auto& l : get<json>(j, "legs"))
    t.legs.push_back({get<int>(l, "v"), parse_cell(get<std::string>(l, "cell")), vec_from_json(get<json>(l, "u")),
                      l.value("label", "")});
  if (j.contains("out")) t.out_leg = get<std::size_t>(j, "out");
  return t;
}

json to_json(const PeriodReport& r) {
  json rows = json::array();
  for (std::int64_t k = 0; k < r.classical.order; ++k)
    rows.push_back({{"degree", k},
                    {"classical", to_json(r.classical[k])},
                    {"quantum", to_json(r.quantum[k])},
                    {"equal", r.classical[k] == r.quantum[k]}});
  json j = {{"target", r.target}, {"order", r.classical.order}, {"coefficients", rows}, {"equal", r.equal()}};
  if (r.first_mismatch) j["first_mismatch"] = *r.first_mismatch;
  if (!r.binomial.empty()) {
    json b = json::array();
    for (std::size_t k = 0; k < r.binomial.size(); ++k)
      b.push_back({{"k", k}, {"period", to_json(r.binomial[k].first)}, {"binomial_trace", to_json(r.binomial[k].second)}});
    j["binomial"] = b;
  }
  return j;
}

BDirection parse_direction(const AffineSurface& s, const std::string& text) {
  if (text == "0") return {0, {0, 0}};
  if (text.size() >= 2 && text[0] == 'v') {
    int r = 0;
    try {
      r = std::stoi(text.substr(1));
    } catch (const std::exception&) {
      throw InvalidInput("bad direction '" + text + "'");
    }
    if (r < 1 || r > s.num_rays()) throw InvalidInput("no ray '" + text + "' on " + s.name());
    int c = r - 1 == 0 ? 0 : r - 2;
    Vec2 v{0, 0};
    v[s.ray_slot(c, r - 1)] = 1;
    return canonical(s, BDirection{c, v});
  }
  auto colon = text.find(':'), comma = text.find(',');
  if (colon == std::string::npos || comma == std::string::npos || comma < colon)
    throw InvalidInput("bad direction '" + text + "' (expected 0, v<i> or cone:a,b)");
  int cone = 0;
  std::int64_t a = 0, b = 0;
  try {
    std::size_t used = 0;
    cone = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw InvalidInput("");
    a = std::stoll(text.substr(colon + 1, comma - colon - 1), &used);
    if (used != comma - colon - 1) throw InvalidInput("");
    b = std::stoll(text.substr(comma + 1), &used);
    if (used != text.size() - comma - 1) throw InvalidInput("");
  } catch (const std::exception&) {
    throw InvalidInput("bad direction '" + text + "'");
  }
  if (cone < 1 || cone > s.num_cones()) throw InvalidInput("no cone " + std::to_string(cone) + " on " + s.name());
  if (a < 0 || b < 0) throw InvalidInput("direction '" + text + "' lies outside its cone");
  return canonical(s, BDirection{cone - 1, {a, b}});
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

AffineSurface load_target(const std::string& name_or_path) {
  for (const auto& n : builtin_target_names())
    if (n == name_or_path) return builtin_target(n);
  if (name_or_path.find('/') == std::string::npos && name_or_path.find(".json") == std::string::npos)
    throw InvalidInput("unknown target '" + name_or_path + "'");
  return surface_from_json(read_json_file(name_or_path));
}

}  // namespace theta::io
