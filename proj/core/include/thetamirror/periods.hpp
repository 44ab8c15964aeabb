#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thetamirror/mirror.hpp"

namespace theta {

// Coefficients by total L-degree, 0 <= degree < order.
struct PeriodSeries {
  std::int64_t order = 0;
  std::vector<Int> coeffs;

  Int operator[](std::int64_t k) const { return k < static_cast<std::int64_t>(coeffs.size()) ? coeffs[k] : Int(0); }
  bool operator==(const PeriodSeries&) const = default;
  std::string str() const;
};

// W = sum of ϑ over the primitive ray generators.
ThetaElem superpotential(const AffineSurface& s, std::int64_t order);

// Σ_{k <= max_power} tr(W^k) collapsed by degree. max_power < 0 means (rays + 1) * order,
// enough for any builtin target since tr(W^k) has degree >= k / rays.
PeriodSeries classical_period(ThetaAlgebra& alg, const ThetaElem& W, std::int64_t order, int max_power = -1);

// Regularized quantum period from closed formulas: p2 targets use (3k)!/(k!)^3,
// p1xp1-toric the constant term of (x + 1/x + y + 1/y)^m. Throws NoOracle otherwise.
PeriodSeries quantum_period_oracle(const std::string& target, std::int64_t order);

struct PeriodReport {
  std::string target;
  PeriodSeries classical, quantum;
  std::optional<std::int64_t> first_mismatch;
  // line-conic only: per k, (coefficient of π_W, C(3k,k) · tr(ϑ_v2^2k ϑ_v1^k))
  std::vector<std::pair<Int, Int>> binomial;
  bool binomial_holds = true;

  bool equal() const { return !first_mismatch && binomial_holds; }
  // Throws Mismatch at the first failing degree.
  void check() const;
};

PeriodReport compare_periods(const AffineSurface& s, const ScatteringDiagram& d, std::int64_t order, int threads = 1);

}  // namespace theta
