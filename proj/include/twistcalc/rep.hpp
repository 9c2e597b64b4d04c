#pragma once

// Exact finite-dimensional matrix evaluation of enveloping-algebra elements
// and twist identities. Matrices carry ParamScalar entries, so every check is
// an exact polynomial-matrix identity: no truncation flag and no numerics.
//
// Exactness across the symbolic truncation boundary: factor exponents are
// held symbolically only to the working order, and the dropped tail can act
// nontrivially in a representation (in the adjoint even two copies of the
// same root vector survive as a matrix product, through the Cartan
// subalgebra). The twist and cocycle evaluators therefore never use the
// truncated exponents for structured factors: every shipped factor exposes a
// closed form built from a polynomial unipotent group element, whose matrix
// image has exact logs, exponentials and real powers (nilpotent series
// terminate), and coproduct legs are evaluated through the tensor-product
// representation. Only generic factors fall back to their exponent tensor,
// which is faithful when that tensor is a genuine polynomial.

#include <string>
#include <vector>

#include "twistcalc/pbw.hpp"
#include "twistcalc/twist.hpp"

namespace twistcalc {

// Square matrix over ParamScalar, row-sparse (columns sorted per row).
class PolyMatrix {
 public:
  using Row = std::vector<std::pair<int, ParamScalar>>;

  explicit PolyMatrix(int n) : n_(n), rows_(n) {}
  static PolyMatrix identity(int n);

  int dim() const { return n_; }
  const Row& row(int r) const { return rows_[r]; }
  // Merge v into entry (r, c); drops the entry if it cancels to zero.
  void add_at(int r, int c, const ParamScalar& v);
  ParamScalar at(int r, int c) const;

  bool is_zero() const;
  int nonzero_count() const;
  // "(r,c): value" for up to `limit` entries; for failure reports.
  std::string describe_nonzeros(int limit = 8) const;

  PolyMatrix scaled(const ParamScalar& s) const;
  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix mul(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix truncated(const PolyMatrix& m, const GradingContext& ctx);

 private:
  int n_;
  std::vector<Row> rows_;
};

// Exact product; large matrices are sharded across rows by the thread budget.
PolyMatrix mul(const PolyMatrix& a, const PolyMatrix& b);

// Kronecker product; index (i, j) -> i * b.dim() + j.
PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);

// Terminating series. Both throw arith_error when the series has not
// terminated after dim() steps (argument not nilpotent / not unipotent).
PolyMatrix mat_exp(const PolyMatrix& a);
PolyMatrix mat_log(const PolyMatrix& u);

// Entry-wise truncation by parameter grade, for comparing an exact matrix
// residual against an order-limited symbolic one.
PolyMatrix truncated(const PolyMatrix& m, const GradingContext& ctx);

// A Lie algebra homomorphism into d x d matrices, one matrix per basis
// element of the underlying LieAlgebraSpec.
struct Representation {
  std::string name;
  const LieAlgebraSpec* alg = nullptr;
  int dim = 0;
  std::vector<PolyMatrix> gen;
};

// Defining representation of the matrix-unit presentation built by build_sl:
// e_ab -> E_ab, h_ab -> (E_aa - E_bb)/2, hperp -> (E11 - 2 E22 + E33)/2.
Representation fundamental_sl(const LieAlgebraSpec& alg);

// Adjoint representation from the bracket table; works for any validated
// algebra, dimension = basis size.
Representation adjoint_rep(const LieAlgebraSpec& alg);

// Two-dimensional representation of the Borel algebra {H, E}:
// H -> diag(1/2, -1/2), E -> E12.
Representation borel2_rep(const LieAlgebraSpec& alg);

// rho([x_i, x_j]) - (rho(x_i) rho(x_j) - rho(x_j) rho(x_i)); the exact
// homomorphism defect for one basis pair.
PolyMatrix bracket_residual(const Representation& rep, int i, int j);

// First basis pair with a nonzero bracket residual, rendered; empty string
// when the homomorphism property holds exactly.
std::string homomorphism_defect(const Representation& rep);

// Evaluate a rank 1..3 element; legs map through Kronecker products, so the
// result is d^rank x d^rank.
PolyMatrix eval(const Representation& rep, const Tensor& x);

// The chain's twist F = f_p ... f_1 as a d^2 x d^2 matrix: each factor is a
// terminating matrix exponential of its evaluated exponent.
PolyMatrix twist_matrix(const Representation& rep, const TwistChain& chain);

// F12 (Delta0 (x) id)(F) - F23 (id (x) Delta0)(F) as an exact d^3 x d^3
// matrix. The coproduct is applied to each factor exponent symbolically
// (Delta0 is an algebra map, so exponentials pass through), then everything
// else happens at matrix level.
PolyMatrix cocycle_residual_in_rep(const TwistChain& chain, const Representation& rep);

// R12 R13 R23 - R23 R13 R12 for a rank-2 element R.
PolyMatrix qybe_residual_in_rep(const Tensor& R, const Representation& rep);

// R21 R - 1 evaluated in the representation.
PolyMatrix triangularity_residual_in_rep(const Tensor& R, const Representation& rep);

}  // namespace twistcalc
