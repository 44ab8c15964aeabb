#include "thetamirror/series.hpp"

#include <algorithm>
#include <sstream>

#include "thetamirror/errors.hpp"

namespace theta {

Series::Series(const CurveClassMonoid& m, std::int64_t order) : mon_(m), order_(order) {}

Series Series::constant(const CurveClassMonoid& m, std::int64_t order, const Int& c) {
  return monomial(m, order, m.zero(), c);
}

Series Series::monomial(const CurveClassMonoid& m, std::int64_t order, const CurveClass& a, const Int& c) {
  Series s(m, order);
  s.add(a, c);
  return s;
}

Int Series::coefficient(const CurveClass& a) const {
  auto it = terms_.find(a);
  return it == terms_.end() ? Int(0) : it->second;
}

void Series::add(const CurveClass& a, const Int& c) {
  if (c == 0 || mon_.degree(a) >= order_) return;
  auto [it, fresh] = terms_.try_emplace(a, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Series& Series::operator+=(const Series& o) {
  if (o.order_ != order_) throw TruncationMismatch("adding series of different orders");
  for (const auto& [a, c] : o.terms_) add(a, c);
  return *this;
}

Series Series::operator+(const Series& o) const {
  Series s = *this;
  s += o;
  return s;
}

Series Series::operator-(const Series& o) const { return *this + o.scaled(-1); }

Series Series::operator*(const Series& o) const {
  if (o.order_ != order_) throw TruncationMismatch("multiplying series of different orders");
  Series s(mon_, order_);
  for (const auto& [a, c] : terms_)
    for (const auto& [b, d] : o.terms_) s.add(a + b, c * d);
  return s;
}

Series Series::scaled(const Int& c) const {
  Series s(mon_, order_);
  for (const auto& [a, x] : terms_) s.add(a, x * c);
  return s;
}

Series Series::truncated(std::int64_t order) const {
  Series s(mon_, order);
  for (const auto& [a, c] : terms_) s.add(a, c);
  return s;
}

std::map<std::int64_t, Int> Series::by_degree() const {
  std::map<std::int64_t, Int> out;
  for (const auto& [a, c] : terms_) out[mon_.degree(a)] += c;
  return out;
}

std::string Series::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [a, c] : terms_) {
    bool neg = c < 0;
    Int mag = neg ? Int(-c) : c;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    bool zero = std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
    if (zero) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag << "·";
    os << "t^" << mon_.format(a);
  }
  return os.str();
}

}  // namespace theta
