#include "thetamirror/periods.hpp"

#include <map>
#include <sstream>

#include "thetamirror/errors.hpp"

namespace theta {

namespace {

Int binomial(std::int64_t n, std::int64_t k) {
  Int r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Int factorial(std::int64_t n) {
  Int r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

PeriodSeries collapse(const Series& s, std::int64_t order) {
  PeriodSeries p{order, std::vector<Int>(order)};
  for (const auto& [A, c] : s.terms()) {
    std::int64_t d = s.monoid().degree(A);
    if (d < order) p.coeffs[d] += c;
  }
  return p;
}

}  // namespace

std::string PeriodSeries::str() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < coeffs.size(); ++k) os << (k ? ", " : "") << coeffs[k];
  return os.str();
}

ThetaElem superpotential(const AffineSurface& s, std::int64_t order) {
  ThetaElem W(s.monoid(), order);
  const int n = static_cast<int>(s.rays().size());
  for (int r = 0; r < n; ++r) {
    int c = 0;
    while (!s.cone_has_ray(c, r)) ++c;
    Vec2 v{0, 0};
    v[s.ray_slot(c, r)] = 1;
    W.add(canonical(s, BDirection{c, v}), Series::constant(s.monoid(), order, 1));
  }
  return W;
}

PeriodSeries classical_period(ThetaAlgebra& alg, const ThetaElem& W, std::int64_t order, int max_power) {
  if (order > alg.order()) throw TruncationMismatch("period order exceeds the algebra order");
  if (max_power < 0) max_power = static_cast<int>((alg.surface().rays().size() + 1) * order);
  Series total(alg.monoid(), order);
  ThetaElem Wk = alg.one();
  for (int k = 0;; ++k) {
    total += alg.trace(Wk).truncated(order);
    if (k == max_power) break;
    Wk = alg.multiply(Wk, W);
  }
  return collapse(total, order);
}

PeriodSeries quantum_period_oracle(const std::string& target, std::int64_t order) {
  PeriodSeries p{order, std::vector<Int>(order)};
  if (target == "p2-toric" || target == "p2-line-conic") {
    for (std::int64_t k = 0; k < order; ++k) p.coeffs[k] = factorial(3 * k) / (factorial(k) * factorial(k) * factorial(k));
    return p;
  }
  if (target == "p1xp1-toric") {
    // constant term of (x + 1/x + y + 1/y)^m: choose i steps in x and m - i in y, each balanced
    for (std::int64_t m = 0; m < order; ++m) {
      if (m % 2) continue;
      Int ct = 0;
      for (std::int64_t i = 0; i <= m; i += 2) ct += binomial(m, i) * binomial(i, i / 2) * binomial(m - i, (m - i) / 2);
      p.coeffs[m] = ct;
    }
    return p;
  }
  throw NoOracle("no quantum period oracle for '" + target + "'");
}

void PeriodReport::check() const {
  if (first_mismatch)
    throw Mismatch("classical and quantum periods differ for " + target, *first_mismatch);
  for (std::size_t k = 0; k < binomial.size(); ++k)
    if (binomial[k].first != binomial[k].second)
      throw Mismatch("binomial decomposition fails for " + target, static_cast<std::int64_t>(k));
}

PeriodReport compare_periods(const AffineSurface& s, const ScatteringDiagram& d, std::int64_t order, int threads) {
  PeriodReport r;
  r.target = s.name();
  r.quantum = quantum_period_oracle(s.name(), order);
  ThetaAlgebra alg(s, d, threads);
  r.classical = classical_period(alg, superpotential(s, alg.order()), order);
  for (std::int64_t k = 0; k < order; ++k)
    if (r.classical[k] != r.quantum[k]) {
      r.first_mismatch = k;
      break;
    }
  if (s.name() == "p2-line-conic") {
    const BDirection v1{0, {1, 0}}, v2{0, {0, 1}};
    for (std::int64_t k = 0; k < order; ++k) {
      ThetaElem x = alg.multiply(alg.power(alg.basis(v2), static_cast<int>(2 * k)), alg.power(alg.basis(v1), static_cast<int>(k)));
      Int rhs = binomial(3 * k, k) * alg.trace(x).coefficient({k});
      r.binomial.emplace_back(r.classical[k], rhs);
      if (r.binomial.back().first != rhs) r.binomial_holds = false;
    }
  }
  return r;
}

}  // namespace theta
