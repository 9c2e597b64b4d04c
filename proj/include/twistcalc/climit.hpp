#pragma once

// Second classical limit of a twist chain. Every generator e is traded for
// eps^-1 * e over a structure-scaled copy of the algebra (brackets carry one
// power of eps) and the deformation parameter for eps * ratio. Each factor
// exponent then collapses to eps^-1 * Psi with Psi free of eps; conjugation
// stays finite because every nested bracket returns one power of eps, and
// the eps^0 part of the scaled coproduct is the limit.

#include <string>
#include <vector>

#include "twistcalc/twist.hpp"

namespace twistcalc {

struct ScaledChain {
  AlgebraPtr scaled;          // structure-scaled copy the limit lives on
  Param ratio = Param::zeta;  // fixed ratio replacing the original parameter
  std::vector<Tensor> psi;    // eps-free factor exponents, application order
  TwistChain chain;           // factors exp(eps^-1 psi_q) over `scaled`
};

// Rewrites every factor exponent of `src` over the structure-scaled copy.
// `from` is the deformation parameter of the source chain; it becomes
// eps * ratio. Throws spec_error naming the factor when an exponent does not
// collapse to eps^-1 * (eps-free); with allow_poles the offending exponent
// is kept instead so the failure shows up in the limit rows.
ScaledChain scale_chain(const TwistChain& src, Param from, Param ratio, int order,
                        bool allow_poles = false);

struct GeneratorLimit {
  std::string name;
  Tensor value;  // eps^0 part of the scaled coproduct
  Tensor poles;  // negative-eps terms, powers kept; limit exists iff empty
};

struct ClassicalLimit {
  ScaledChain scaled;
  std::vector<GeneratorLimit> rows;  // one per generator, basis order
  bool pole_free = true;
  std::string note;  // names the generators with poles when !pole_free

  const GeneratorLimit& row(const std::string& name) const;
};

ClassicalLimit classical_limit(const TwistChain& src, Param from, Param ratio, int order,
                               bool allow_poles = false);

// Cobracket read off a limit row: the antisymmetrized ratio-linear part.
Tensor limit_cobracket(const ClassicalLimit& lim, const std::string& name);

// Survival filter on an unscaled coproduct row: keeps exactly the terms
// whose parameter power equals (pbw degree - 1), renaming the parameter to
// `ratio` and the algebra to `scaled`. Matches the classical_limit row when
// the limit exists, along a route with no scaled conjugation in it.
Tensor survival_part(const Tensor& row, Param from, const LieAlgebraSpec& scaled, Param ratio);

}  // namespace twistcalc
