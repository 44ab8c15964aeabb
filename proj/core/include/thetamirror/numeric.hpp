#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace theta {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Integer tangent vector in a cone chart (coordinates along the two ray generators).
using Vec2 = std::array<std::int64_t, 2>;
// Rational point in a cone chart.
using RVec2 = std::array<Rational, 2>;

inline std::int64_t cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
inline std::int64_t dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(std::int64_t k, const Vec2& a) { return {k * a[0], k * a[1]}; }
inline bool is_zero(const Vec2& a) { return a[0] == 0 && a[1] == 0; }

inline std::int64_t content(const Vec2& a) { return std::gcd(a[0], a[1]); }

inline Vec2 primitive(const Vec2& a) {
  std::int64_t g = content(a);
  if (g == 0) return a;
  return {a[0] / g, a[1] / g};
}

inline RVec2 to_rational(const Vec2& a) { return {Rational(a[0]), Rational(a[1])}; }

inline std::string to_string(const Int& x) { return x.str(); }
inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace theta
