#pragma once

#include <map>
#include <string>

#include "thetamirror/geometry.hpp"
#include "thetamirror/numeric.hpp"

namespace theta {

// Element of S_X truncated at L-degree `order`: classes of degree >= order are dropped.
class Series {
 public:
  Series() = default;
  Series(const CurveClassMonoid& m, std::int64_t order);
  static Series constant(const CurveClassMonoid& m, std::int64_t order, const Int& c);
  static Series monomial(const CurveClassMonoid& m, std::int64_t order, const CurveClass& a, const Int& c = 1);

  std::int64_t order() const { return order_; }
  const CurveClassMonoid& monoid() const { return mon_; }
  const std::map<CurveClass, Int>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  Int coefficient(const CurveClass& a) const;
  void add(const CurveClass& a, const Int& c);

  Series& operator+=(const Series& o);
  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series scaled(const Int& c) const;
  bool operator==(const Series& o) const { return terms_ == o.terms_; }

  // Re-truncate at a lower order.
  Series truncated(std::int64_t order) const;
  // Coefficients summed by total L-degree.
  std::map<std::int64_t, Int> by_degree() const;
  std::string str() const;

 private:
  CurveClassMonoid mon_;
  std::int64_t order_ = 0;
  std::map<CurveClass, Int> terms_;
};

using SXElem = Series;

}  // namespace theta
