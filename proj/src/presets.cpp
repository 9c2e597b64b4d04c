#include "twistcalc/presets.hpp"

namespace twistcalc {

TwistChain sl3_extended_chain(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx) {
  CartanElement h = CartanElement::combo(alg, {ps(1), ps_gamma()});
  TwistFactor fj = build_jordanian(alg, h, alg.index_of("e13"), par, ctx);
  TwistFactor fe = build_extension(alg, alg.index_of("e12"), alg.index_of("e23"),
                                   ps(3, 2) * ps_gamma() - ps(1, 2), fj.group, par, ctx);
  return TwistChain{&alg, ctx, {fj, fe}};
}

TwistChain borel_chain(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx) {
  CartanElement h = CartanElement::combo(alg, {ps(1)});
  TwistFactor fj = build_jordanian(alg, h, alg.index_of("E"), par, ctx);
  return TwistChain{&alg, ctx, {fj}};
}

}  // namespace twistcalc
