// Independent reference computations used by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "thetamirror/lattice.hpp"
#include "thetamirror/series.hpp"
#include "thetamirror/geometry.hpp"

namespace oracle {

// |Z^r / image| for r <= 2 by enumerating the image inside (Z/N)^r.
// Returns -1 for an infinite quotient; `torsion` receives the torsion order.
inline std::int64_t brute_cokernel(const std::vector<std::vector<std::int64_t>>& cols, int r,
                                   std::int64_t* torsion = nullptr) {
  // rank of the column span
  int rk = 0;
  std::int64_t N = 0;
  if (r == 1) {
    std::int64_t g = 0;
    for (auto& c : cols) g = std::gcd(g, c[0]);
    rk = g != 0;
    if (torsion) *torsion = g == 0 ? 1 : std::abs(g);
    return rk == 1 ? std::abs(g) : -1;
  }
  for (std::size_t i = 0; i < cols.size() && N == 0; ++i)
    for (std::size_t j = i + 1; j < cols.size() && N == 0; ++j)
      N = std::abs(cols[i][0] * cols[j][1] - cols[i][1] * cols[j][0]);
  if (N == 0) {
    std::int64_t g = 0;
    for (auto& c : cols) g = std::gcd(g, std::gcd(c[0], c[1]));
    if (torsion) *torsion = g == 0 ? 1 : g;
    return -1;
  }
  auto md = [N](std::int64_t x) { return ((x % N) + N) % N; };
  std::set<std::pair<std::int64_t, std::int64_t>> seen{{0, 0}};
  std::vector<std::pair<std::int64_t, std::int64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    for (auto& c : cols) {
      std::pair<std::int64_t, std::int64_t> n{md(a + c[0]), md(b + c[1])};
      if (seen.insert(n).second) stack.push_back(n);
    }
  }
  std::int64_t idx = N * N / static_cast<std::int64_t>(seen.size());
  if (torsion) *torsion = idx;
  return idx;
}

inline theta::IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  theta::IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

// Checks every Smith decomposition invariant; returns an empty string on success.
inline std::string check_smith(const theta::IntMatrix& m, const theta::SmithDecomposition& s) {
  using boost::multiprecision::abs;
  if (!(s.U * m * s.V == s.D)) return "U*M*V != D";
  if (!s.D.is_diagonal()) return "D not diagonal";
  if (abs(theta::determinant(s.U)) != 1) return "U not unimodular";
  if (abs(theta::determinant(s.V)) != 1) return "V not unimodular";
  auto d = s.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0) return "negative diagonal entry";
    if (i + 1 < d.size()) {
      if (d[i] == 0 && d[i + 1] != 0) return "zero before nonzero";
      if (d[i] != 0 && d[i + 1] % d[i] != 0) return "divisibility chain broken";
    }
  }
  return {};
}

// Toric oracle: ϑ_p = t^{φ(p)} x^p in global Laurent coordinates, so a trace is
// [Σ p_i = 0] t^{Σ φ(p_i)}.
struct ToricOracle {
  std::vector<theta::Vec2> rays;  // global ray generators
  std::function<theta::CurveClass(const theta::Vec2&)> phi;

  theta::Vec2 global(const theta::AffineSurface& s, const theta::BDirection& d) const {
    auto [i, j] = s.cone_rays(d.cone);
    const auto &a = rays[i], &b = rays[j];
    return {d.v[0] * a[0] + d.v[1] * b[0], d.v[0] * a[1] + d.v[1] * b[1]};
  }
  theta::Series trace(const theta::AffineSurface& s, std::int64_t order, const std::vector<theta::BDirection>& in) const {
    using namespace theta;
    Series out(s.monoid(), order);
    std::int64_t x = 0, y = 0;
    CurveClass A(s.monoid().L.size(), 0);
    for (const auto& d : in) {
      Vec2 g = global(s, d);
      x += g[0];
      y += g[1];
      CurveClass f = phi(g);
      for (std::size_t i = 0; i < A.size(); ++i) A[i] += f[i];
    }
    if (x == 0 && y == 0) out.add(A, 1);
    return out;
  }
};

inline ToricOracle p2_oracle() {
  return {{{1, 0}, {0, 1}, {-1, -1}},
          [](const theta::Vec2& p) { return theta::CurveClass{std::max<std::int64_t>({0, -p[0], -p[1]})}; }};
}

inline ToricOracle p1xp1_oracle() {
  return {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, [](const theta::Vec2& p) {
            return theta::CurveClass{std::max<std::int64_t>(0, -p[1]), std::max<std::int64_t>(0, -p[0])};
          }};
}

}  // namespace oracle
