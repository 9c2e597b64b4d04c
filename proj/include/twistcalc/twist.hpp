#pragma once

// Twist chains and the deformed Hopf structure. A chain F = f_p ... f_1 is
// stored in application order (f_1 first). Each factor is exp of a rank-2
// exponent with positive parameter grade; Jordanian factors remember their
// sigma so later factors can dress with it.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twistcalc/pbw.hpp"

namespace twistcalc {

struct TwistFactor {
  enum class Kind { jordanian, extension, generic };
  Kind kind = Kind::generic;
  std::string label;
  Tensor exponent;        // rank 2
  UElement sigma;         // jordanian, extension: log(group)
  CartanElement h;        // set when the exponent has the shape h (x) log(group)
  int mu = -1;            // jordanian only: root index

  // Closed-form data for lossless evaluation in a finite-dimensional
  // representation. `exponent` is held to the working truncation order; the
  // fields below reconstruct it without that truncation. Recognized shapes:
  //   h nonempty and group nonzero:  exponent = h (x) log(group)
  //   ext_a >= 0:                    exponent = scale * e_a (x) e_b group^dress
  // where group is an exact polynomial (a unipotent group element, so its log
  // and real powers terminate on nilpotent matrices). Factors carrying
  // neither shape are evaluated from `exponent` directly, which is faithful
  // only when that tensor is a genuine polynomial rather than a truncated
  // series.
  UElement group;
  int ext_a = -1, ext_b = -1;
  ParamScalar dress;
  ParamScalar scale = ParamScalar(Rational(1));
};

// Jordanian factor exp(h (x) sigma), sigma = log(1 + par * e_mu). Requires
// the root weight mu(h) to be exactly 1; throws spec_error with the computed
// weight otherwise.
TwistFactor build_jordanian(const LieAlgebraSpec& alg, const CartanElement& h, int mu, Param par,
                            const GradingContext& ctx);

// Extension factor exp(par * e_a (x) e_b exp(dress * log(group))), where
// group is the polynomial unipotent of the Jordanian factor being extended
// (so dress * log(group) is the usual sigma dressing). Taking the group
// element rather than sigma keeps the factor's closed form free of
// truncation marks.
TwistFactor build_extension(const LieAlgebraSpec& alg, int a, int b, const ParamScalar& dress,
                            const UElement& group, Param par, const GradingContext& ctx);

TwistFactor build_generic(const LieAlgebraSpec& alg, const std::string& label, Tensor exponent,
                          const GradingContext& ctx);

struct TwistChain {
  const LieAlgebraSpec* alg = nullptr;
  GradingContext ctx;
  std::vector<TwistFactor> factors;  // application order: factors[0] acts first

  // The sigma of the most recent Jordanian factor, if any.
  const UElement* last_sigma() const {
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
      if (it->kind == TwistFactor::Kind::jordanian) return &it->sigma;
    return nullptr;
  }
};

// Deformed Hopf structure for a chain, with memoized coproduct images.
class TwistedHopf {
 public:
  explicit TwistedHopf(TwistChain chain);

  const TwistChain& chain() const { return chain_; }
  const LieAlgebraSpec& algebra() const { return *chain_.alg; }
  const GradingContext& context() const { return chain_.ctx; }
  const Tensor& twist() const { return F_; }
  const Tensor& twist_inverse() const { return Finv_; }

  // Delta_F(x) = F Delta0(x) F^{-1}, extended to any rank-1 element.
  Tensor coproduct(const Tensor& x) const;
  Tensor coproduct_gen(int g) const;

  // Monomial-level coproduct maps for leg application.
  const MonomialMapper& deformed_mapper() const { return *deformed_; }
  const MonomialMapper& undeformed_mapper() const { return *undeformed_; }

  // R = F_21 F^{-1}.
  Tensor universal_r() const;

 private:
  TwistChain chain_;
  Tensor F_, Finv_;
  std::unique_ptr<MonomialMapper> deformed_;
  std::unique_ptr<MonomialMapper> undeformed_;
};

// Full-chain cocycle residual F_12 (Delta0 (x) id)(F) - F_23 (id (x) Delta0)(F).
Tensor cocycle_residual(const TwistedHopf& H);

// Cocycle residual of factor q relative to the coproduct already twisted by
// the factors before it.
Tensor cocycle_residual_factor(const TwistChain& chain, int q);

// (Delta_F (x) id) Delta_F(x_g) - (id (x) Delta_F) Delta_F(x_g).
Tensor coassociativity_residual(const TwistedHopf& H, int g);

// (eps (x) id)(F) - 1 and (id (x) eps)(F) - 1.
std::pair<Tensor, Tensor> counit_residuals(const TwistedHopf& H);

// R_21 R - 1 (x) 1; zero for twists of a cocommutative structure.
Tensor triangularity_residual(const TwistedHopf& H);

}  // namespace twistcalc
