#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "thetamirror/numeric.hpp"

namespace theta {

// Dense integer matrix. Columns are images of domain generators, so an m×n
// matrix is a map Z^n -> Z^m.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  static IntMatrix identity(std::size_t n);
  // Rows of equal length; an empty list gives a 0×0 matrix.
  static IntMatrix from_rows(const std::vector<std::vector<Int>>& rows);
  static IntMatrix from_rows(std::size_t rows, std::size_t cols,
                             const std::vector<std::vector<Int>>& entries);
  static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Int>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;

  IntMatrix transpose() const;
  std::vector<Int> column(std::size_t j) const;
  std::vector<std::vector<Int>> to_rows() const;
  bool is_diagonal() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> e_;
};

struct SmithDecomposition {
  IntMatrix U;  // unimodular, rows × rows
  IntMatrix D;  // same shape as the source, nonnegative diagonal
  IntMatrix V;  // unimodular, cols × cols
  std::size_t rank = 0;

  std::vector<Int> diagonal() const;
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

Int determinant(const IntMatrix& m);
std::size_t rank(const IntMatrix& m);

// Basis of the integer kernel, as columns.
std::vector<std::vector<Int>> integer_kernel(const IntMatrix& m);

struct CokernelOrder {
  bool finite = true;
  Int order = 1;    // valid when finite
  Int torsion = 1;  // order of the torsion subgroup
  std::size_t free_rank = 0;
};

CokernelOrder cokernel_order(const IntMatrix& m);

// Cut data of a k-trace type at its output vertex.
//   piece_eval[i]: n × d_i, images in Λ_σ of the lattice of piece i, evaluated at
//                  the end of its output leg (leg parameter included as a column).
//   star_legs[i]:  primitive direction of leg i of the star τ_0, pointing away from v_out.
//   glued_eval:    n × d, evaluation of the glued type's lattice at v_out.
struct GluingData {
  std::size_t n = 2;
  std::vector<IntMatrix> piece_eval;
  std::vector<std::vector<Int>> star_legs;
  IntMatrix glued_eval;

  // ε_τ : Λ_σ × Z^k × ⊕ Λ_i -> Λ_σ^k, block row i = [ -I | star leg i | P_i ].
  IntMatrix epsilon() const;
};

struct SplittingReport {
  Int coker_epsilon;
  std::vector<Int> piece_k;
  Int k_tau;
  Int product_of_pieces;
  bool identity_holds = false;
};

// Returns |coker ε_τ| and checks ∏ k_i = k_τ |coker ε_τ|. Throws InfiniteCokernel
// or IdentityViolation.
SplittingReport splitting_multiplicity(const GluingData& g);

// Exact linear algebra over Q.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);
  static RatMatrix from(const IntMatrix& m);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  void append_row(const std::vector<Rational>& row);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> e_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m);
std::size_t rank(const RatMatrix& m);
// Solves m·x = b; nullopt if inconsistent. Free variables are set to zero.
std::optional<std::vector<Rational>> solve(const RatMatrix& m, const std::vector<Rational>& b);
// Basis of the rational kernel.
std::vector<std::vector<Rational>> kernel(const RatMatrix& m);
// Some x >= 0 with m·x = b (phase-one simplex, Bland's rule), or nullopt.
std::optional<std::vector<Rational>> nonneg_solution(const RatMatrix& m, const std::vector<Rational>& b);

}  // namespace theta
