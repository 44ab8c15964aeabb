#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "thetamirror/scattering.hpp"
#include "thetamirror/series.hpp"

namespace theta {

// Element of R = ⊕ ϑ_p S_X, keyed by canonical directions.
class ThetaElem {
 public:
  ThetaElem() = default;
  ThetaElem(const CurveClassMonoid& m, std::int64_t order) : mon_(m), order_(order) {}
  static ThetaElem basis(const AffineSurface& s, const BDirection& p, std::int64_t order);

  std::int64_t order() const { return order_; }
  const CurveClassMonoid& monoid() const { return mon_; }
  const std::map<BDirection, Series>& terms() const { return terms_; }

  // p must already be canonical.
  void add(const BDirection& p, const Series& c);
  Series coefficient(const BDirection& p) const;
  bool is_zero() const { return terms_.empty(); }

  ThetaElem operator+(const ThetaElem& o) const;
  ThetaElem& operator+=(const ThetaElem& o);
  ThetaElem scaled(const Series& c) const;
  ThetaElem truncated(std::int64_t order) const;
  bool operator==(const ThetaElem& o) const { return terms_ == o.terms_; }

  std::string str(const AffineSurface& s) const;

 private:
  CurveClassMonoid mon_;
  std::int64_t order_ = 0;
  std::map<BDirection, Series> terms_;
};

// Row (p, q) of the structure-constant table: r -> α_{p,q}^r.
using StructureRow = std::map<BDirection, Series>;

// Theta-function algebra of a (surface, diagram) pair, truncated at the diagram order.
// Basis products are cached; structure constants for distinct outputs r can be
// evaluated on several threads with identical results.
class ThetaAlgebra {
 public:
  ThetaAlgebra(const AffineSurface& s, const ScatteringDiagram& d, int threads = 1);

  const AffineSurface& surface() const { return engine_.surface(); }
  const ScatteringDiagram& diagram() const { return engine_.diagram(); }
  const BrokenLineEngine& engine() const { return engine_; }
  std::int64_t order() const { return engine_.order(); }
  const CurveClassMonoid& monoid() const { return surface().monoid(); }

  ThetaElem basis(const BDirection& p) const;
  ThetaElem one() const { return basis({0, {0, 0}}); }

  const StructureRow& structure_constants(const BDirection& p, const BDirection& q);
  const ThetaElem& basis_product(const BDirection& p, const BDirection& q);
  // ϑ_0-coefficient of ϑ_p ϑ_q, evaluated directly.
  const Series& pairing(const BDirection& p, const BDirection& q);

  ThetaElem multiply(const ThetaElem& a, const ThetaElem& b);
  ThetaElem power(const ThetaElem& a, int k);
  Series trace(const std::vector<BDirection>& inputs);
  Series trace(const ThetaElem& a) const;
  Int naive_count(const std::vector<BDirection>& inputs, const CurveClass& A);

  // Generic endpoint used for each output direction r (reproducibility record).
  std::map<BDirection, BPoint> endpoints() const;

 private:
  using Finals = std::map<std::pair<Vec2, CurveClass>, Int>;
  BPoint endpoint_for(const BDirection& r);
  const Finals& finals(const BDirection& p, const BDirection& r);
  Series alpha(const BDirection& p, const BDirection& q, const BDirection& r);
  std::vector<BDirection> candidate_outputs(const BDirection& p, const BDirection& q) const;

  BrokenLineEngine engine_;
  int threads_;
  mutable std::mutex mu_;
  std::map<BDirection, BPoint> endpoints_;
  std::map<std::pair<BDirection, BDirection>, std::shared_ptr<Finals>> finals_;
  std::map<std::pair<BDirection, BDirection>, StructureRow> rows_;
  std::map<std::pair<BDirection, BDirection>, ThetaElem> products_;
  std::map<std::pair<BDirection, BDirection>, Series> pairings_;
};

ThetaElem multiply(const AffineSurface& s, const ScatteringDiagram& d, const ThetaElem& a, const ThetaElem& b);
Series trace(const AffineSurface& s, const ScatteringDiagram& d, const std::vector<BDirection>& inputs);
StructureRow structure_constants(const AffineSurface& s, const ScatteringDiagram& d, const BDirection& p,
                                 const BDirection& q);
// Coefficient of t^A in trace(inputs); zero for classes with a negative coordinate.
Int naive_counts(const AffineSurface& s, const ScatteringDiagram& d, const std::vector<BDirection>& inputs,
                 const CurveClass& A);

// Canonical directions with chart coordinates a + b <= n, zero first.
std::vector<BDirection> direction_window(const AffineSurface& s, std::int64_t n);

// Two- and three-point traces. two_pt is indexed (basis, test), three_pt
// (input i <= input j, test). Products of inputs are expanded in basis.
struct TraceTables {
  std::vector<BDirection> inputs;
  std::vector<BDirection> basis;
  std::vector<BDirection> test;
  std::int64_t order = 0;
  std::map<std::pair<std::size_t, std::size_t>, Series> two_pt;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Series> three_pt;
};

TraceTables compute_trace_tables(ThetaAlgebra& alg, const std::vector<BDirection>& inputs,
                                 const std::vector<BDirection>& basis, const std::vector<BDirection>& test);

struct Reconstruction {
  std::int64_t order = 0;
  std::map<std::pair<std::size_t, std::size_t>, ThetaElem> products;  // i <= j
  std::vector<std::pair<std::size_t, std::size_t>> unresolved;        // inconsistent on the window
  std::size_t unknowns = 0;
  std::size_t equations = 0;
};

// Solves tr(e_i e_j, e_k) = three_pt(i, j, k) for the product coefficients of
// degree < order. Only equations not involving truncated unknowns are used.
// Throws DegenerateGram if the two-point table does not determine the unknowns.
Reconstruction reconstruct_product(const TraceTables& t, const CurveClassMonoid& mon, std::int64_t order);

struct FrobeniusReport {
  std::int64_t order = 0;        // c: products compared below this degree
  std::int64_t trace_order = 0;  // order the traces were computed at
  std::size_t inputs = 0, basis = 0, tests = 0;
  std::size_t unknowns = 0, equations = 0;
  std::size_t resolved = 0, agree = 0;
  std::vector<std::string> unresolved;  // "p*q"
  std::vector<std::string> mismatches;  // "p*q: reconstructed vs direct"
  bool ok() const { return agree == resolved && unresolved.empty(); }
};

// Reconstructs ϑ_pϑ_q mod degree c for inputs a + b <= n from traces alone and
// compares with the broken-line products. The output basis uses a + b <= 2n,
// test directions a + b <= 4n, and the trace order grows until the Gram
// system has full rank. diagram_at(T) must return a diagram of order T.
FrobeniusReport frobenius_check(const AffineSurface& s, const std::function<ScatteringDiagram(std::int64_t)>& diagram_at,
                                std::int64_t c, std::int64_t n, int threads = 1);

}  // namespace theta
