#include "thetamirror/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "thetamirror/errors.hpp"

namespace theta {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<Int>>& rows) {
  if (rows.empty()) return IntMatrix();
  return from_rows(rows.size(), rows.front().size(), rows);
}

IntMatrix IntMatrix::from_rows(std::size_t r, std::size_t c, const std::vector<std::vector<Int>>& entries) {
  if (entries.size() != r) throw InvalidInput("matrix: row count does not match entries");
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (entries[i].size() != c) throw InvalidInput("matrix: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = entries[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::size_t r, const std::vector<std::vector<Int>>& cols) {
  IntMatrix m(r, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != r) throw InvalidInput("matrix: column has wrong length");
    for (std::size_t i = 0; i < r; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw InvalidInput("matrix product: shape mismatch");
  IntMatrix p(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
    }
  return p;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<Int> IntMatrix::column(std::size_t j) const {
  std::vector<Int> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

std::vector<std::vector<Int>> IntMatrix::to_rows() const {
  std::vector<std::vector<Int>> out(rows_, std::vector<Int>(cols_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

bool IntMatrix::is_diagonal() const {
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (i != j && (*this)(i, j) != 0) return false;
  return true;
}

std::vector<Int> SmithDecomposition::diagonal() const {
  std::vector<Int> d;
  for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
  return d;
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

// row_dst += q * row_src
void add_row(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) += q * m(src, j);
}

void add_col(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) += q * m(i, src);
}

// Smallest |entry| in the trailing block, ties broken by (row, col).
bool find_pivot(const IntMatrix& d, std::size_t t, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Int a = abs(d(i, j));
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  IntMatrix D = m, U = IntMatrix::identity(R), V = IntMatrix::identity(C);
  std::size_t t = 0;
  for (; t < std::min(R, C); ++t) {
    std::size_t pi = 0, pj = 0;
    if (!find_pivot(D, t, pi, pj)) break;
    for (;;) {
      swap_rows(D, t, pi);
      swap_rows(U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(V, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (D(i, t) == 0) continue;
        Int q = D(i, t) / D(t, t);
        add_row(D, i, t, -q);
        add_row(U, i, t, -q);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (D(t, j) == 0) continue;
        Int q = D(t, j) / D(t, t);
        add_col(D, j, t, -q);
        add_col(V, j, t, -q);
        if (D(t, j) != 0) clean = false;
      }
      if (clean) {
        // divisibility of the trailing block
        for (std::size_t i = t + 1; i < R && clean; ++i)
          for (std::size_t j = t + 1; j < C; ++j)
            if (D(i, j) % D(t, t) != 0) {
              add_row(D, t, i, 1);
              add_row(U, t, i, 1);
              clean = false;
              break;
            }
        if (clean) break;
      }
      find_pivot(D, t, pi, pj);
    }
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < C; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < R; ++j) U(t, j) = -U(t, j);
    }
  }
  return {std::move(U), std::move(D), std::move(V), t};
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  // Bareiss elimination
  IntMatrix a = m;
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      swap_rows(a, k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::size_t rank(const IntMatrix& m) { return smith_normal_form(m).rank; }

std::vector<std::vector<Int>> integer_kernel(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  std::vector<std::vector<Int>> out;
  for (std::size_t j = s.rank; j < m.cols(); ++j) out.push_back(s.V.column(j));
  return out;
}

CokernelOrder cokernel_order(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  CokernelOrder c;
  for (std::size_t i = 0; i < s.rank; ++i) c.torsion *= s.D(i, i);
  c.free_rank = m.rows() - s.rank;
  c.finite = c.free_rank == 0;
  c.order = c.finite ? c.torsion : Int(0);
  return c;
}

IntMatrix GluingData::epsilon() const {
  const std::size_t k = piece_eval.size();
  if (star_legs.size() != k) throw InvalidInput("gluing data: star legs and pieces differ in number");
  std::size_t cols = n + k;
  for (const auto& p : piece_eval) {
    if (p.rows() != n) throw InvalidInput("gluing data: piece map has wrong target rank");
    cols += p.cols();
  }
  IntMatrix e(n * k, cols);
  std::size_t off = n + k;
  for (std::size_t i = 0; i < k; ++i) {
    if (star_legs[i].size() != n) throw InvalidInput("gluing data: star leg has wrong rank");
    for (std::size_t r = 0; r < n; ++r) {
      e(i * n + r, r) = -1;
      e(i * n + r, n + i) = -star_legs[i][r];
      for (std::size_t j = 0; j < piece_eval[i].cols(); ++j) e(i * n + r, off + j) = piece_eval[i](r, j);
    }
    off += piece_eval[i].cols();
  }
  return e;
}

SplittingReport splitting_multiplicity(const GluingData& g) {
  if (g.piece_eval.empty()) throw InvalidInput("gluing data without pieces");
  SplittingReport rep;
  CokernelOrder ce = cokernel_order(g.epsilon());
  if (!ce.finite) throw InfiniteCokernel("coker(epsilon) is infinite");
  rep.coker_epsilon = ce.order;
  rep.product_of_pieces = 1;
  for (std::size_t i = 0; i < g.piece_eval.size(); ++i) {
    CokernelOrder ci = cokernel_order(g.piece_eval[i]);
    if (!ci.finite) throw InfiniteCokernel("piece " + std::to_string(i) + " has infinite cokernel");
    rep.piece_k.push_back(ci.order);
    rep.product_of_pieces *= ci.order;
  }
  if (g.glued_eval.rows() != g.n) throw InvalidInput("gluing data: glued map has wrong target rank");
  CokernelOrder cg = cokernel_order(g.glued_eval);
  if (!cg.finite) throw InfiniteCokernel("glued evaluation has infinite cokernel");
  rep.k_tau = cg.order;
  rep.identity_holds = rep.product_of_pieces == rep.k_tau * rep.coker_epsilon;
  if (!rep.identity_holds) {
    std::ostringstream os;
    os << "prod k_i = " << rep.product_of_pieces << " but k_tau * |coker eps| = " << rep.k_tau << " * "
       << rep.coker_epsilon;
    throw IdentityViolation(os.str());
  }
  return rep;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

RatMatrix RatMatrix::from(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

void RatMatrix::append_row(const std::vector<Rational>& row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_) throw InvalidInput("append_row: wrong length");
  e_.insert(e_.end(), row.begin(), row.end());
  ++rows_;
}

std::vector<std::size_t> rref(RatMatrix& m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::size_t rank(const RatMatrix& m) {
  RatMatrix c = m;
  return rref(c).size();
}

std::optional<std::vector<Rational>> solve(const RatMatrix& m, const std::vector<Rational>& b) {
  if (b.size() != m.rows()) throw InvalidInput("solve: right-hand side has wrong length");
  RatMatrix a(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
    a(i, m.cols()) = b[i];
  }
  std::vector<std::size_t> piv = rref(a);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<Rational> x(m.cols());
  for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a(i, m.cols());
  return x;
}

std::vector<std::vector<Rational>> kernel(const RatMatrix& m) {
  RatMatrix a = m;
  std::vector<std::size_t> piv = rref(a);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_piv[f]) continue;
    std::vector<Rational> v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a(i, f);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::vector<Rational>> nonneg_solution(const RatMatrix& m, const std::vector<Rational>& b) {
  if (b.size() != m.rows()) throw InvalidInput("nonneg_solution: right-hand side has wrong length");
  const std::size_t R = m.rows(), n = m.cols(), W = n + R;
  // tableau [A | I | b] with b >= 0, artificial columns n..n+R-1 start in the basis
  RatMatrix t(R, W + 1);
  std::vector<std::size_t> basis(R);
  for (std::size_t i = 0; i < R; ++i) {
    int sg = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sg * m(i, j);
    t(i, n + i) = 1;
    t(i, W) = sg * b[i];
    basis[i] = n + i;
  }
  std::vector<Rational> cost(W + 1);
  for (std::size_t i = 0; i < R; ++i)
    for (std::size_t j = 0; j <= W; ++j)
      if (j < n || j == W) cost[j] -= t(i, j);
  for (;;) {
    std::size_t enter = W;
    for (std::size_t j = 0; j < W; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == W) break;
    std::size_t leave = R;
    Rational best;
    for (std::size_t i = 0; i < R; ++i) {
      if (t(i, enter) <= 0) continue;
      Rational q = t(i, W) / t(i, enter);
      if (leave == R || q < best || (q == best && basis[i] < basis[leave])) {
        leave = i;
        best = q;
      }
    }
    if (leave == R) break;  // unbounded direction; cannot happen for a bounded-below phase one
    Rational inv = 1 / t(leave, enter);
    for (std::size_t j = 0; j <= W; ++j) t(leave, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == leave || t(i, enter) == 0) continue;
      Rational f = t(i, enter);
      for (std::size_t j = 0; j <= W; ++j) t(i, j) -= f * t(leave, j);
    }
    Rational f = cost[enter];
    for (std::size_t j = 0; j <= W; ++j) cost[j] -= f * t(leave, j);
    basis[leave] = enter;
  }
  if (cost[W] != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < R; ++i)
    if (basis[i] < n) x[basis[i]] = t(i, W);
  return x;
}

}  // namespace theta
