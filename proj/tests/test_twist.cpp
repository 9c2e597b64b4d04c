#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistcalc/twist.hpp"

using namespace twistcalc;

namespace {

Tensor tens(const Tensor& a, const Tensor& b, const GradingContext& ctx) {
  return mul(embed_leg(a, 2, {0}), embed_leg(b, 2, {1}), ctx);
}

}  // namespace

TEST_CASE("borel2 jordanian: coproducts, cocycle, R-matrix") {
  auto alg = build_borel2();
  GradingContext ctx = GradingContext::standard(5);
  CartanElement h = CartanElement::basis(*alg, 0);
  TwistFactor fj = build_jordanian(*alg, h, alg->index_of("E"), Param::xi, ctx);
  TwistChain chain{alg.get(), ctx, {fj}};
  TwistedHopf H(chain);

  Tensor Hgen = Tensor::gen(*alg, 0);
  Tensor Egen = Tensor::gen(*alg, 1);
  Tensor unit = Tensor::unit(*alg, 1);
  Tensor exp_msigma = exp_graded(fj.sigma.scaled(ps(-1)), ctx);
  Tensor exp_psigma = exp_graded(fj.sigma, ctx);

  // Delta_J(H) = H (x) exp(-sigma) + 1 (x) H
  CHECK(H.coproduct(Hgen) == tens(Hgen, exp_msigma, ctx) + tens(unit, Hgen, ctx));
  // Delta_J(E) = E (x) exp(sigma) + 1 (x) E
  CHECK(H.coproduct(Egen) == tens(Egen, exp_psigma, ctx) + tens(unit, Egen, ctx));
  // sigma is log-primitive
  CHECK(H.coproduct(fj.sigma) == tens(fj.sigma, unit, ctx) + tens(unit, fj.sigma, ctx));

  CHECK(cocycle_residual(H).is_zero());
  auto [cl, cr] = counit_residuals(H);
  CHECK(cl.is_zero());
  CHECK(cr.is_zero());
  for (int g = 0; g < alg->size(); ++g) CHECK(coassociativity_residual(H, g).is_zero());

  // R = exp(sigma (x) H) exp(-H (x) sigma), built here independently
  Tensor expect_r = mul(exp_graded(tens(fj.sigma, Hgen, ctx), ctx),
                        exp_graded(tens(Hgen, fj.sigma, ctx).scaled(ps(-1)), ctx), ctx);
  Tensor R = H.universal_r();
  CHECK(R == expect_r);
  CHECK(triangularity_residual(H).is_zero());

  // quantum Yang-Baxter on three legs, symbolically
  Tensor r12 = embed_leg(R, 3, {0, 1});
  Tensor r13 = embed_leg(R, 3, {0, 2});
  Tensor r23 = embed_leg(R, 3, {1, 2});
  Tensor lhs = mul(mul(r12, r13, ctx), r23, ctx);
  Tensor rhs = mul(mul(r23, r13, ctx), r12, ctx);
  CHECK(lhs == rhs);
}

TEST_CASE("jordanian weight requirement is enforced") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(3);
  // hperp gives e13 weight 0, not 1
  CartanElement bad = CartanElement::basis(*alg, 1);
  CHECK_THROWS_AS(build_jordanian(*alg, bad, alg->index_of("e13"), Param::xi, ctx), spec_error);
  // h13 alone gives weight 1 and is accepted
  CartanElement ok = CartanElement::basis(*alg, 0);
  CHECK(build_jordanian(*alg, ok, alg->index_of("e13"), Param::xi, ctx).mu ==
        alg->index_of("e13"));
}

TEST_CASE("sl3 jordanian with symbolic gamma") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  CartanElement h = CartanElement::combo(*alg, {ps(1), ps_gamma()});
  TwistFactor fj = build_jordanian(*alg, h, alg->index_of("e13"), Param::xi, ctx);
  TwistChain chain{alg.get(), ctx, {fj}};
  TwistedHopf H(chain);

  Tensor hgen = Tensor::cartan(*alg, h);
  Tensor unit = Tensor::unit(*alg, 1);
  Tensor exp_msigma = exp_graded(fj.sigma.scaled(ps(-1)), ctx);
  CHECK(H.coproduct(hgen) == tens(hgen, exp_msigma, ctx) + tens(unit, hgen, ctx));
  // e12 has weight (1 + 3 gamma)/2 under h and commutes with e13
  Tensor e12 = Tensor::gen(*alg, alg->index_of("e12"));
  Tensor dress = exp_graded(fj.sigma.scaled(ps(1, 2) + ps(3, 2) * ps_gamma()), ctx);
  CHECK(H.coproduct(e12) == tens(e12, dress, ctx) + tens(unit, e12, ctx));

  CHECK(cocycle_residual(H).is_zero());
}

TEST_CASE("extended jordanian chain satisfies the cocycle factor-wise and in full") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  CartanElement h = CartanElement::combo(*alg, {ps(1), ps_gamma()});
  TwistFactor fj = build_jordanian(*alg, h, alg->index_of("e13"), Param::xi, ctx);
  ParamScalar dress = ps(3, 2) * ps_gamma() - ps(1, 2);
  TwistFactor fe = build_extension(*alg, alg->index_of("e12"), alg->index_of("e23"), dress,
                                   fj.group, Param::xi, ctx);
  TwistChain chain{alg.get(), ctx, {fj, fe}};
  TwistedHopf H(chain);

  CHECK(cocycle_residual_factor(chain, 0).is_zero());
  CHECK(cocycle_residual_factor(chain, 1).is_zero());
  CHECK(cocycle_residual(H).is_zero());
  auto [cl, cr] = counit_residuals(H);
  CHECK(cl.is_zero());
  CHECK(cr.is_zero());

  // deformed coproduct of e12 picks up the dressed exponential
  Tensor e12 = Tensor::gen(*alg, alg->index_of("e12"));
  Tensor unit = Tensor::unit(*alg, 1);
  Tensor dressed = exp_graded(fj.sigma.scaled(dress), ctx);
  CHECK(H.coproduct(e12) == tens(e12, dressed, ctx) + tens(unit, e12, ctx));

  for (int g = 0; g < alg->size(); ++g) CHECK(coassociativity_residual(H, g).is_zero());
  CHECK(triangularity_residual(H).is_zero());
}
