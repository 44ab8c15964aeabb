#include "thetamirror/mirror.hpp"

#include <algorithm>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "thetamirror/errors.hpp"
#include "thetamirror/lattice.hpp"

namespace theta {

ThetaElem ThetaElem::basis(const AffineSurface& s, const BDirection& p, std::int64_t order) {
  ThetaElem e(s.monoid(), order);
  e.add(canonical(s, p), Series::constant(s.monoid(), order, 1));
  return e;
}

void ThetaElem::add(const BDirection& p, const Series& c) {
  if (c.is_zero()) return;
  if (c.order() != order_) throw TruncationMismatch("theta coefficient has a different order");
  auto it = terms_.find(p);
  if (it == terms_.end()) {
    terms_.emplace(p, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Series ThetaElem::coefficient(const BDirection& p) const {
  auto it = terms_.find(p);
  return it == terms_.end() ? Series(mon_, order_) : it->second;
}

ThetaElem& ThetaElem::operator+=(const ThetaElem& o) {
  if (o.order_ != order_) throw TruncationMismatch("adding theta elements of different orders");
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

ThetaElem ThetaElem::operator+(const ThetaElem& o) const {
  ThetaElem r = *this;
  r += o;
  return r;
}

ThetaElem ThetaElem::scaled(const Series& c) const {
  ThetaElem r(mon_, order_);
  for (const auto& [p, x] : terms_) r.add(p, x * c);
  return r;
}

ThetaElem ThetaElem::truncated(std::int64_t order) const {
  ThetaElem r(mon_, order);
  for (const auto& [p, x] : terms_) r.add(p, x.truncated(order));
  return r;
}

std::string ThetaElem::str(const AffineSurface& s) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    if (theta::is_zero(p.v)) {
      os << (c.terms().size() > 1 ? "(" + c.str() + ")" : c.str());
      continue;
    }
    std::string cs = c.str();
    if (cs != "1") os << (c.terms().size() > 1 ? "(" + cs + ")" : cs) << "·";
    os << "ϑ[" << format_direction(s, p) << "]";
  }
  return os.str();
}

ThetaAlgebra::ThetaAlgebra(const AffineSurface& s, const ScatteringDiagram& d, int threads)
    : engine_(s, d), threads_(std::max(1, threads)) {}

ThetaElem ThetaAlgebra::basis(const BDirection& p) const { return ThetaElem::basis(surface(), p, order()); }

BPoint ThetaAlgebra::endpoint_for(const BDirection& r) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = endpoints_.find(r);
    if (it != endpoints_.end()) return it->second;
  }
  // z = r + offset / M, M doubling until z avoids rays and walls
  const RVec2 base = is_zero(r.v) ? RVec2{Rational(3, 7), Rational(5, 11)} : to_rational(r.v);
  const RVec2 offset{Rational(1, 997), Rational(1, 1009)};
  BPoint z;
  for (int M = 1;; M *= 2) {
    z = {r.cone, {base[0] + offset[0] / M, base[1] + offset[1] / M}};
    try {
      engine_.check_generic(z);
      break;
    } catch (const NonGenericEndpoint&) {
      if (M > (1 << 20)) throw;
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  return endpoints_.emplace(r, z).first->second;
}

const ThetaAlgebra::Finals& ThetaAlgebra::finals(const BDirection& p, const BDirection& r) {
  auto key = std::make_pair(p, r);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = finals_.find(key);
    if (it != finals_.end()) return *it->second;
  }
  auto f = std::make_shared<Finals>(engine_.final_monomials(p, endpoint_for(r)));
  std::lock_guard<std::mutex> lock(mu_);
  return *finals_.emplace(key, std::move(f)).first->second;
}

Series ThetaAlgebra::alpha(const BDirection& p, const BDirection& q, const BDirection& r) {
  const Finals& fp = finals(p, r);
  const Finals& fq = finals(q, r);
  std::map<Vec2, std::vector<std::pair<const CurveClass*, const Int*>>> by_m;
  for (const auto& [k, c] : fq) by_m[k.first].push_back({&k.second, &c});
  Series out(monoid(), order());
  for (const auto& [k, c1] : fp) {
    auto it = by_m.find(r.v - k.first);
    if (it == by_m.end()) continue;
    for (const auto& [A2, c2] : it->second) out.add(k.second + *A2, c1 * *c2);
  }
  return out;
}

std::vector<BDirection> ThetaAlgebra::candidate_outputs(const BDirection& p, const BDirection& q) const {
  const auto& mon = monoid();
  const int S = surface().num_cones();
  std::vector<std::map<Vec2, std::int64_t>> mp(S), mq(S);
  auto collect = [&](const std::set<BrokenLineEngine::State>& st, std::vector<std::map<Vec2, std::int64_t>>& out) {
    for (const auto& x : st) {
      std::int64_t d = mon.degree(x.A);
      auto [it, fresh] = out[x.cone].try_emplace(x.m, d);
      if (!fresh) it->second = std::min(it->second, d);
    }
  };
  collect(engine_.reachable(p), mp);
  collect(engine_.reachable(q), mq);
  std::set<BDirection> out{{0, {0, 0}}};
  for (int c = 0; c < S; ++c)
    for (const auto& [m1, d1] : mp[c])
      for (const auto& [m2, d2] : mq[c]) {
        if (d1 + d2 >= order()) continue;
        Vec2 r = m1 + m2;
        if (r[0] < 0 || r[1] < 0) continue;
        out.insert(canonical(surface(), {c, r}));
      }
  return {out.begin(), out.end()};
}

const StructureRow& ThetaAlgebra::structure_constants(const BDirection& p0, const BDirection& q0) {
  BDirection p = canonical(surface(), p0), q = canonical(surface(), q0);
  if (q < p) std::swap(p, q);
  auto key = std::make_pair(p, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = rows_.find(key);
    if (it != rows_.end()) return it->second;
  }
  StructureRow row;
  if (is_zero(p.v)) {
    row.emplace(q, Series::constant(monoid(), order(), 1));
  } else {
    std::vector<BDirection> rs = candidate_outputs(p, q);
    std::vector<Series> vals(rs.size());
    std::vector<std::exception_ptr> errs(rs.size());
    auto work = [&](std::size_t from) {
      for (std::size_t i = from; i < rs.size(); i += threads_) {
        try {
          vals[i] = alpha(p, q, rs[i]);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    };
    if (threads_ > 1 && rs.size() > 1) {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads_; ++t) pool.emplace_back(work, static_cast<std::size_t>(t));
      for (auto& th : pool) th.join();
    } else {
      work(0);
    }
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (errs[i]) std::rethrow_exception(errs[i]);
      if (!vals[i].is_zero()) row.emplace(rs[i], std::move(vals[i]));
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  return rows_.emplace(key, std::move(row)).first->second;
}

const ThetaElem& ThetaAlgebra::basis_product(const BDirection& p0, const BDirection& q0) {
  BDirection p = canonical(surface(), p0), q = canonical(surface(), q0);
  if (q < p) std::swap(p, q);
  auto key = std::make_pair(p, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;
  }
  ThetaElem e(monoid(), order());
  for (const auto& [r, c] : structure_constants(p, q)) e.add(r, c);
  std::lock_guard<std::mutex> lock(mu_);
  return products_.emplace(key, std::move(e)).first->second;
}

const Series& ThetaAlgebra::pairing(const BDirection& p0, const BDirection& q0) {
  BDirection p = canonical(surface(), p0), q = canonical(surface(), q0);
  if (q < p) std::swap(p, q);
  auto key = std::make_pair(p, q);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pairings_.find(key);
    if (it != pairings_.end()) return it->second;
  }
  Series v = alpha(p, q, {0, {0, 0}});
  std::lock_guard<std::mutex> lock(mu_);
  return pairings_.emplace(key, std::move(v)).first->second;
}

ThetaElem ThetaAlgebra::multiply(const ThetaElem& a, const ThetaElem& b) {
  if (a.order() != order() || b.order() != order()) throw TruncationMismatch("operand order differs from the algebra");
  ThetaElem out(monoid(), order());
  for (const auto& [p, sp] : a.terms())
    for (const auto& [q, sq] : b.terms()) {
      Series c = sp * sq;
      for (const auto& [r, sr] : structure_constants(p, q)) out.add(r, c * sr);
    }
  return out;
}

ThetaElem ThetaAlgebra::power(const ThetaElem& a, int k) {
  if (k < 0) throw InvalidInput("negative power");
  ThetaElem result = one(), base = a;
  while (k > 0) {
    if (k & 1) result = multiply(result, base);
    k >>= 1;
    if (k > 0) base = multiply(base, base);
  }
  return result;
}

Series ThetaAlgebra::trace(const std::vector<BDirection>& inputs) {
  if (inputs.empty()) throw InvalidInput("trace needs at least one input");
  ThetaElem x = basis(inputs[0]);
  for (std::size_t i = 1; i < inputs.size(); ++i) x = multiply(x, basis(inputs[i]));
  return trace(x);
}

Series ThetaAlgebra::trace(const ThetaElem& a) const { return a.coefficient({0, {0, 0}}); }

Int ThetaAlgebra::naive_count(const std::vector<BDirection>& inputs, const CurveClass& A) {
  if (!monoid().is_effective(A)) return 0;
  return trace(inputs).coefficient(A);
}

std::map<BDirection, BPoint> ThetaAlgebra::endpoints() const {
  std::lock_guard<std::mutex> lock(mu_);
  return endpoints_;
}

ThetaElem multiply(const AffineSurface& s, const ScatteringDiagram& d, const ThetaElem& a, const ThetaElem& b) {
  ThetaAlgebra alg(s, d);
  return alg.multiply(a, b);
}

Series trace(const AffineSurface& s, const ScatteringDiagram& d, const std::vector<BDirection>& inputs) {
  ThetaAlgebra alg(s, d);
  return alg.trace(inputs);
}

StructureRow structure_constants(const AffineSurface& s, const ScatteringDiagram& d, const BDirection& p,
                                 const BDirection& q) {
  ThetaAlgebra alg(s, d);
  return alg.structure_constants(p, q);
}

Int naive_counts(const AffineSurface& s, const ScatteringDiagram& d, const std::vector<BDirection>& inputs,
                 const CurveClass& A) {
  ThetaAlgebra alg(s, d);
  return alg.naive_count(inputs, A);
}

std::vector<BDirection> direction_window(const AffineSurface& s, std::int64_t n) {
  std::set<BDirection> out{{0, {0, 0}}};
  for (int c = 0; c < s.num_cones(); ++c)
    for (std::int64_t a = 0; a <= n; ++a)
      for (std::int64_t b = 0; a + b <= n; ++b)
        if (a + b > 0) out.insert(canonical(s, BDirection{c, Vec2{a, b}}));
  return {out.begin(), out.end()};
}

TraceTables compute_trace_tables(ThetaAlgebra& alg, const std::vector<BDirection>& inputs,
                                 const std::vector<BDirection>& basis, const std::vector<BDirection>& test) {
  TraceTables t;
  t.inputs = inputs;
  t.basis = basis;
  t.test = test;
  t.order = alg.order();
  for (std::size_t u = 0; u < basis.size(); ++u)
    for (std::size_t k = 0; k < test.size(); ++k) {
      const Series& v = alg.pairing(basis[u], test[k]);
      if (!v.is_zero()) t.two_pt.emplace(std::make_pair(u, k), v);
    }
  for (std::size_t i = 0; i < inputs.size(); ++i)
    for (std::size_t j = i; j < inputs.size(); ++j) {
      const StructureRow& row = alg.structure_constants(inputs[i], inputs[j]);
      for (std::size_t k = 0; k < test.size(); ++k) {
        Series v(alg.monoid(), alg.order());
        for (const auto& [r, c] : row) v += c * alg.pairing(r, test[k]);
        if (!v.is_zero()) t.three_pt.emplace(std::make_tuple(i, j, k), v);
      }
    }
  return t;
}

Reconstruction reconstruct_product(const TraceTables& t, const CurveClassMonoid& mon, std::int64_t order) {
  const std::size_t nU = t.basis.size(), nK = t.test.size();
  const std::vector<CurveClass> low = mon.classes_below(order);
  const std::vector<CurveClass> all = mon.classes_below(t.order);
  std::map<CurveClass, std::size_t> low_index;
  for (std::size_t i = 0; i < low.size(); ++i) low_index[low[i]] = i;
  auto var = [&](std::size_t l, std::size_t a) { return l * low.size() + a; };
  const std::size_t nvar = nU * low.size();

  auto gram = [&](std::size_t l, std::size_t k) -> const Series* {
    auto it = t.two_pt.find({l, k});
    return it == t.two_pt.end() ? nullptr : &it->second;
  };
  auto below = [](const CurveClass& a, const CurveClass& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] > b[i]) return false;
    return true;
  };

  // equation (k, B) is exact when every contributing unknown has degree < order
  RatMatrix M;
  std::vector<std::pair<std::size_t, CurveClass>> eqs;
  for (std::size_t k = 0; k < nK; ++k)
    for (const CurveClass& B : all) {
      bool exact = true;
      std::vector<Rational> row(nvar);
      bool any = false;
      for (std::size_t l = 0; l < nU && exact; ++l) {
        const Series* g = gram(l, k);
        if (!g) continue;
        for (const auto& [Ag, c] : g->terms()) {
          if (!below(Ag, B)) continue;
          CurveClass A = B - Ag;
          auto it = low_index.find(A);
          if (it == low_index.end()) {
            exact = false;
            break;
          }
          row[var(l, it->second)] += Rational(c);
          any = true;
        }
      }
      if (!exact || !any) continue;
      M.append_row(row);
      eqs.emplace_back(k, B);
    }
  Reconstruction rec;
  rec.order = order;
  rec.unknowns = nvar;
  rec.equations = eqs.size();
  if (eqs.empty() || rank(M) < nvar)
    throw DegenerateGram("two-point traces do not determine products on this window (rank " +
                         std::to_string(eqs.empty() ? 0 : rank(M)) + " < " + std::to_string(nvar) + ")");

  const std::size_t nI = t.inputs.size();
  for (std::size_t i = 0; i < nI; ++i)
    for (std::size_t j = i; j < nI; ++j) {
      std::vector<Rational> rhs(eqs.size());
      for (std::size_t e = 0; e < eqs.size(); ++e) {
        auto it = t.three_pt.find({i, j, eqs[e].first});
        if (it != t.three_pt.end()) rhs[e] = Rational(it->second.coefficient(eqs[e].second));
      }
      auto x = solve(M, rhs);
      bool integral = x.has_value();
      if (x)
        for (const auto& v : *x)
          if (denominator(v) != 1) integral = false;
      if (!integral) {
        rec.unresolved.emplace_back(i, j);
        continue;
      }
      ThetaElem prod(mon, order);
      for (std::size_t l = 0; l < nU; ++l) {
        Series c(mon, order);
        for (std::size_t a = 0; a < low.size(); ++a) c.add(low[a], numerator((*x)[var(l, a)]));
        prod.add(t.basis[l], c);
      }
      rec.products.emplace(std::make_pair(i, j), std::move(prod));
    }
  return rec;
}

FrobeniusReport frobenius_check(const AffineSurface& s, const std::function<ScatteringDiagram(std::int64_t)>& diagram_at,
                                std::int64_t c, std::int64_t n, int threads) {
  if (c < 1 || n < 1) throw InvalidInput("frobenius_check needs c >= 1 and n >= 1");
  const auto inputs = direction_window(s, n), basis = direction_window(s, 2 * n), test = direction_window(s, 4 * n);
  std::int64_t lmax = 1;
  for (auto l : s.monoid().L) lmax = std::max(lmax, l);
  const std::int64_t emax = 4 * n * lmax + 4;
  for (std::int64_t e = 1;; ++e) {
    ThetaAlgebra alg(s, diagram_at(c + e), threads);
    TraceTables t = compute_trace_tables(alg, inputs, basis, test);
    Reconstruction rec;
    try {
      rec = reconstruct_product(t, s.monoid(), c);
    } catch (const DegenerateGram&) {
      if (e >= emax) throw;
      continue;
    }
    FrobeniusReport r;
    r.order = c;
    r.trace_order = c + e;
    r.inputs = inputs.size();
    r.basis = basis.size();
    r.tests = test.size();
    r.unknowns = rec.unknowns;
    r.equations = rec.equations;
    auto name = [&](std::size_t i, std::size_t j) {
      return format_direction(s, inputs[i]) + "*" + format_direction(s, inputs[j]);
    };
    for (const auto& [i, j] : rec.unresolved) r.unresolved.push_back(name(i, j));
    for (const auto& [ij, prod] : rec.products) {
      ++r.resolved;
      ThetaElem direct = alg.basis_product(inputs[ij.first], inputs[ij.second]).truncated(c);
      if (direct == prod)
        ++r.agree;
      else
        r.mismatches.push_back(name(ij.first, ij.second) + ": " + prod.str(s) + " vs " + direct.str(s));
    }
    return r;
  }
}

}  // namespace theta
