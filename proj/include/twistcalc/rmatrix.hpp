#pragma once

// Classical r-matrices, the induced cobracket, and the dual Lie algebra
// carried by the first-order part of a twist. The dual bracket is read off
// the cobracket: writing delta(b_k) = sum_{i<j} d_k^{ij} b_i /\ b_j over a
// chosen primal basis, the duals satisfy [b_i^*, b_j^*] = sum_k d_k^{ij}
// b_k^*. Structural checks (abelian complement, carrier subalgebra, weight
// tags and their additivity, the ad-eigenvalue law for the Jordanian root
// dual) are reported mechanically so a preset change cannot silently break
// them.

#include <optional>
#include <tuple>

#include "twistcalc/pbw.hpp"

namespace twistcalc {

struct RMatrix {
  const LieAlgebraSpec* alg = nullptr;
  Tensor r;  // rank 2, antisymmetric, degree-(1,1) legs
};

// sum of c * (a /\ b) = c * (a (x) b - b (x) a).
RMatrix make_r(const LieAlgebraSpec& alg,
               const std::vector<std::tuple<LinComb, LinComb, ParamScalar>>& wedges);

// [r12, r13] + [r12, r23] + [r13, r23].
Tensor cybe_residual(const RMatrix& r, const GradingContext& ctx);

// delta(x) = [r, x (x) 1 + 1 (x) x] for a degree-1 rank-1 x.
Tensor cobracket(const RMatrix& r, const Tensor& x, const GradingContext& ctx);

// Primal basis used for dualization; may differ from the algebra basis by a
// polynomially invertible change (e.g. h13 -> h13 + gamma * hperp).
struct DualBasis {
  std::vector<std::string> names;
  std::vector<LinComb> elements;
};

// Identity basis with the algebra's own names.
DualBasis standard_dual_basis(const LieAlgebraSpec& alg);

// The sl(3) basis with the Cartan pair (h, hperp), h = h13 + gamma * hperp.
DualBasis sl3_dual_basis(const LieAlgebraSpec& alg);

// Antisymmetric degree-(1,1) component table over a basis: entries (i, j, c)
// with i < j meaning c * b_i /\ b_j.
struct WedgeTable {
  std::vector<std::tuple<int, int, ParamScalar>> entries;
};

// Expands an antisymmetric degree-(1,1) tensor over the basis; throws if the
// tensor has terms of other degrees or a symmetric part.
WedgeTable wedge_components(const LieAlgebraSpec& alg, const DualBasis& basis, const Tensor& t);

struct DualAlgebraResult {
  AlgebraPtr dual;                     // names are primal names with a * suffix
  DualBasis basis;                     // primal basis used
  std::vector<WedgeTable> cobrackets;  // delta of each primal basis element
};

// Builds the dual bracket table from the cobrackets of the basis elements.
// Antisymmetry holds by construction; the Jacobi identity is NOT enforced
// here (it can genuinely fail when r does not solve the CYBE), check it
// separately with jacobi_residual_dual.
DualAlgebraResult dual_structure_constants(const RMatrix& r, const DualBasis& basis,
                                           const GradingContext& ctx);

// First Jacobi failure of the dual bracket table, or "" when it is a Lie
// algebra. Zero CYBE residual of r implies an empty result.
std::string jacobi_residual_dual(const DualAlgebraResult& d);

// Structural report for the dual algebra of a Jordanian-type r-matrix.
struct DualWeightReport {
  bool applicable = false;   // r contains exactly one Cartan /\ root component
  std::vector<int> support;  // basis indices appearing in r
  std::vector<int> carrier;  // bracket closure of the support
  bool carrier_closed = false;  // re-checked closure certificate
  bool abelian_complement_ok = false;
  bool complement_ideal_ok = false;
  bool carrier_subalgebra_ok = false;
  bool additivity_ok = false;
  bool eigenvalue_ok = false;
  bool multiset_ok = false;
  // weight tag of each dual generator: a wedge component phi /\ psi of r tags
  // phi* with -weight(psi) and psi* with -weight(phi); complement duals keep
  // their own weight
  std::vector<std::vector<Rational>> tags;
  std::vector<std::string> notes;
  bool all_ok() const {
    return applicable && carrier_closed && abelian_complement_ok && complement_ideal_ok &&
           carrier_subalgebra_ok && additivity_ok && eigenvalue_ok && multiset_ok;
  }
};

DualWeightReport dual_weight_structure(const RMatrix& r, const DualAlgebraResult& d);

// Human-readable nonzero relations "[a*, b*] = ...", sorted by basis order.
std::vector<std::string> render_dual_relations(const DualAlgebraResult& d);

}  // namespace twistcalc
