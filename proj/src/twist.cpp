#include "twistcalc/twist.hpp"

namespace twistcalc {

TwistFactor build_jordanian(const LieAlgebraSpec& alg, const CartanElement& h, int mu, Param par,
                            const GradingContext& ctx) {
  ParamScalar w = weight_of(alg, mu, h);
  if (w != ParamScalar(Rational(1)))
    throw spec_error("jordanian factor requires weight 1 for " + alg.gen_names[mu] +
                     " under the chosen Cartan element, got " + w.str());
  TwistFactor f;
  f.kind = TwistFactor::Kind::jordanian;
  f.label = "jordanian(" + alg.gen_names[mu] + ")";
  f.h = h;
  f.mu = mu;
  Tensor u = Tensor::unit(alg, 1) + Tensor::gen(alg, mu).scaled(ParamScalar::param(par));
  f.sigma = log_graded(u, ctx);
  f.group = u;
  Tensor hh = embed_leg(Tensor::cartan(alg, h), 2, {0});
  Tensor ss = embed_leg(f.sigma, 2, {1});
  f.exponent = mul(hh, ss, ctx);
  return f;
}

TwistFactor build_extension(const LieAlgebraSpec& alg, int a, int b, const ParamScalar& dress,
                            const UElement& group, Param par, const GradingContext& ctx) {
  TwistFactor f;
  f.kind = TwistFactor::Kind::extension;
  f.label = "extension(" + alg.gen_names[a] + "," + alg.gen_names[b] + ")";
  f.sigma = log_graded(group, ctx);
  Tensor right = mul(Tensor::gen(alg, b), exp_graded(f.sigma.scaled(dress), ctx), ctx);
  Tensor left = Tensor::gen(alg, a).scaled(ParamScalar::param(par));
  f.exponent = mul(embed_leg(left, 2, {0}), embed_leg(right, 2, {1}), ctx);
  f.group = group;
  f.ext_a = a;
  f.ext_b = b;
  f.dress = dress;
  f.scale = ParamScalar::param(par);
  return f;
}

TwistFactor build_generic(const LieAlgebraSpec& alg, const std::string& label, Tensor exponent,
                          const GradingContext& ctx) {
  if (exponent.rank() != 2 || exponent.algebra() != &alg)
    throw spec_error("generic twist factor needs a rank-2 exponent over the chain's algebra");
  // exp_graded will enforce positive grade; probe early for a clear error site
  exp_graded(exponent, ctx);
  TwistFactor f;
  f.kind = TwistFactor::Kind::generic;
  f.label = label;
  f.exponent = std::move(exponent);
  return f;
}

TwistedHopf::TwistedHopf(TwistChain chain) : chain_(std::move(chain)) {
  const LieAlgebraSpec& alg = *chain_.alg;
  const GradingContext& ctx = chain_.ctx;
  F_ = Tensor::unit(alg, 2);
  Finv_ = Tensor::unit(alg, 2);
  // F = f_p ... f_1 and F^{-1} = exp(-X_1) ... exp(-X_p).
  for (auto it = chain_.factors.rbegin(); it != chain_.factors.rend(); ++it)
    F_ = mul(F_, exp_graded(it->exponent, ctx), ctx);
  for (const auto& f : chain_.factors) Finv_ = mul(Finv_, exp_graded(-f.exponent, ctx), ctx);
  // Capture everything by value so the mapper stays valid if this object is
  // moved.
  deformed_ = std::make_unique<MonomialMapper>(
      alg, ctx, [&alg, ctx, F = F_, Finv = Finv_](int g) {
        Tensor d0 = coproduct0(Tensor::gen(alg, g), ctx);
        return mul(mul(F, d0, ctx), Finv, ctx);
      });
  undeformed_ = std::make_unique<MonomialMapper>(
      alg, ctx, [&alg, ctx](int g) { return coproduct0(Tensor::gen(alg, g), ctx); });
}

Tensor TwistedHopf::coproduct(const Tensor& x) const {
  if (x.rank() != 1) throw spec_error("coproduct expects a rank-1 element");
  Tensor r(chain_.alg, 2);
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    const Tensor& image = (*deformed_)(k.leg[0]);
    if (image.truncated()) r.mark_truncated();
    for (const auto& [ik, ic] : image.terms()) r.add_truncated(ik, ic * c, chain_.ctx);
  }
  return r;
}

Tensor TwistedHopf::coproduct_gen(int g) const {
  return (*deformed_)(PBWMonomial::gen(g));
}

Tensor TwistedHopf::universal_r() const {
  return mul(flip12(F_), Finv_, chain_.ctx);
}

Tensor cocycle_residual(const TwistedHopf& H) {
  const GradingContext& ctx = H.context();
  const Tensor& F = H.twist();
  Tensor lhs = mul(embed_leg(F, 3, {0, 1}),
                   apply_to_leg(F, 0, std::cref(H.undeformed_mapper()), ctx), ctx);
  Tensor rhs = mul(embed_leg(F, 3, {1, 2}),
                   apply_to_leg(F, 1, std::cref(H.undeformed_mapper()), ctx), ctx);
  return lhs - rhs;
}

Tensor cocycle_residual_factor(const TwistChain& chain, int q) {
  if (q < 0 || q >= static_cast<int>(chain.factors.size()))
    throw spec_error("cocycle_residual_factor: factor index out of range");
  TwistChain prefix = chain;
  prefix.factors.assign(chain.factors.begin(), chain.factors.begin() + q);
  TwistedHopf prev(prefix);
  const GradingContext& ctx = chain.ctx;
  Tensor G = exp_graded(chain.factors[q].exponent, ctx);
  Tensor lhs =
      mul(embed_leg(G, 3, {0, 1}), apply_to_leg(G, 0, std::cref(prev.deformed_mapper()), ctx), ctx);
  Tensor rhs =
      mul(embed_leg(G, 3, {1, 2}), apply_to_leg(G, 1, std::cref(prev.deformed_mapper()), ctx), ctx);
  return lhs - rhs;
}

Tensor coassociativity_residual(const TwistedHopf& H, int g) {
  const GradingContext& ctx = H.context();
  Tensor d = H.coproduct_gen(g);
  return apply_to_leg(d, 0, std::cref(H.deformed_mapper()), ctx) -
         apply_to_leg(d, 1, std::cref(H.deformed_mapper()), ctx);
}

std::pair<Tensor, Tensor> counit_residuals(const TwistedHopf& H) {
  Tensor unit1 = Tensor::unit(H.algebra(), 1);
  return {counit_leg(H.twist(), 0) - unit1, counit_leg(H.twist(), 1) - unit1};
}

Tensor triangularity_residual(const TwistedHopf& H) {
  Tensor R = H.universal_r();
  return mul(flip12(R), R, H.context()) - Tensor::unit(H.algebra(), 2);
}

}  // namespace twistcalc
