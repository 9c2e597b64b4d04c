#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistcalc/climit.hpp"
#include "twistcalc/presets.hpp"
#include "twistcalc/rmatrix.hpp"
#include "twistcalc/tables.hpp"

using namespace twistcalc;

namespace {

LinComb one_gen(const LieAlgebraSpec& alg, const std::string& name) {
  return {{alg.index_of(name), ps(1)}};
}

UElement hat_element(const LieAlgebraSpec& hat, const GradingContext& ctx,
                     const std::string& name) {
  if (name == "sigma")
    return log_graded(
        Tensor::unit(hat, 1) + Tensor::gen(hat, hat.index_of("e13")).scaled(ps_zeta()), ctx);
  if (name == "h")
    return Tensor::lincomb(hat, {{hat.index_of("h13"), ps(1)}, {hat.index_of("hperp"), ps_gamma()}});
  return Tensor::gen(hat, hat.index_of(name));
}

}  // namespace

TEST_CASE("factor exponents collapse to the scaled directions") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  ScaledChain sc = scale_chain(sl3_extended_chain(*alg, Param::xi, ctx), Param::xi, Param::zeta, 4);
  REQUIRE(sc.psi.size() == 2);
  const LieAlgebraSpec& hat = *sc.scaled;
  GradingContext lctx = sc.chain.ctx;

  for (const Tensor& p : sc.psi) {
    CHECK_FALSE(p.has_negative_power(Param::eps));
    CHECK(p.max_degree(Param::eps) == 0);
  }

  UElement sig = hat_element(hat, lctx, "sigma");
  Tensor psi1 = mul(embed_leg(hat_element(hat, lctx, "h"), 2, {0}), embed_leg(sig, 2, {1}), lctx);
  CHECK(sc.psi[0] == psi1);

  UElement tail = mul(Tensor::gen(hat, hat.index_of("e23")),
                      exp_graded(sig.scaled(ps_gamma() * ps(3, 2) - ps(1, 2)), lctx), lctx);
  Tensor psi2 = mul(embed_leg(Tensor::gen(hat, hat.index_of("e12")).scaled(ps_zeta()), 2, {0}),
                    embed_leg(tail, 2, {1}), lctx);
  CHECK(sc.psi[1] == psi2);
}

TEST_CASE("limit coproducts are pole-free and match the recorded rows") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  ClassicalLimit lim = classical_limit(sl3_extended_chain(*alg, Param::xi, ctx), Param::xi,
                                       Param::zeta, 4);
  CHECK(lim.pole_free);
  CHECK(lim.note.empty());

  const LieAlgebraSpec& hat = *lim.scaled.scaled;
  GradingContext lctx = lim.scaled.chain.ctx;
  TwistedHopf H(lim.scaled.chain);
  auto rows = sl3_limit_rows(hat, lctx);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    Tensor full = H.coproduct(hat_element(hat, lctx, row.name));
    CHECK_FALSE(full.has_negative_power(Param::eps));
    RowCheck rc = check_row(full.coeff_of(Param::eps, 0), row, lctx);
    INFO(row.name << " residual: " << rc.detail);
    CHECK(rc.ok);
    CHECK(rc.deviations_fired);
  }
}

TEST_CASE("limit rows agree with the survival filter on the unscaled coproducts") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  TwistChain chain = sl3_extended_chain(*alg, Param::xi, ctx);
  TwistedHopf H0(chain);
  ClassicalLimit lim = classical_limit(chain, Param::xi, Param::zeta, 4);
  const LieAlgebraSpec& hat = *lim.scaled.scaled;
  for (int g = 0; g < alg->size(); ++g) {
    INFO(alg->gen_names[g]);
    CHECK(lim.rows[g].value == survival_part(H0.coproduct_gen(g), Param::xi, hat, Param::zeta));
  }
}

TEST_CASE("limit cobracket is the classical r-matrix cobracket") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  ClassicalLimit lim = classical_limit(sl3_extended_chain(*alg, Param::xi, ctx), Param::xi,
                                       Param::zeta, 4);
  const LieAlgebraSpec& hat = *lim.scaled.scaled;

  LinComb hg = {{alg->index_of("h13"), ps(1)}, {alg->index_of("hperp"), ps_gamma()}};
  RMatrix r = make_r(*alg, {{hg, one_gen(*alg, "e13"), ps(1)},
                            {one_gen(*alg, "e12"), one_gen(*alg, "e23"), ps(1)}});
  RMatrix rj = make_r(*alg, {{hg, one_gen(*alg, "e13"), ps(1)}});

  bool jordanian_alone_differs = false;
  for (int g = 0; g < alg->size(); ++g) {
    const std::string& name = alg->gen_names[g];
    Tensor x = Tensor::gen(*alg, g);
    INFO(name);
    Tensor from_limit = limit_cobracket(lim, name);
    CHECK(from_limit == cobracket(r, x, ctx).with_algebra(hat));
    if (!(from_limit == cobracket(rj, x, ctx).with_algebra(hat))) jordanian_alone_differs = true;
  }
  CHECK(jordanian_alone_differs);
}

TEST_CASE("non-scaling factors are refused, or surfaced as poles on request") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  UElement deep = mul(Tensor::gen(*alg, alg->index_of("e23")),
                      Tensor::gen(*alg, alg->index_of("e13")), ctx);
  Tensor exponent = mul(embed_leg(Tensor::gen(*alg, alg->index_of("e12")), 2, {0}),
                        embed_leg(deep, 2, {1}), ctx)
                        .scaled(ps_xi());
  TwistChain bad{alg.get(), ctx, {build_generic(*alg, "overweight", exponent, ctx)}};

  CHECK_THROWS_AS(scale_chain(bad, Param::xi, Param::zeta, 4), spec_error);

  ClassicalLimit lim = classical_limit(bad, Param::xi, Param::zeta, 4, true);
  CHECK_FALSE(lim.pole_free);
  CHECK(lim.note.find("limit does not exist") != std::string::npos);
  bool some_pole = false;
  for (const auto& row : lim.rows)
    if (!row.poles.is_zero()) some_pole = true;
  CHECK(some_pole);
}

TEST_CASE("b(2) Jordanian limit") {
  auto alg = build_borel2();
  GradingContext ctx = GradingContext::standard(4);
  ClassicalLimit lim = classical_limit(borel_chain(*alg, Param::xi, ctx), Param::xi, Param::zeta, 4);
  CHECK(lim.pole_free);
  const LieAlgebraSpec& hat = *lim.scaled.scaled;
  GradingContext lctx = lim.scaled.chain.ctx;

  UElement sig = log_graded(
      Tensor::unit(hat, 1) + Tensor::gen(hat, hat.index_of("E")).scaled(ps_zeta()), lctx);
  Tensor want = mul(embed_leg(Tensor::gen(hat, hat.index_of("H")), 2, {0}),
                    embed_leg(exp_graded(sig.scaled(ps(-1)), lctx), 2, {1}), lctx) +
                mul(embed_leg(Tensor::unit(hat, 1), 2, {0}),
                    embed_leg(Tensor::gen(hat, hat.index_of("H")), 2, {1}), lctx);
  CHECK(lim.row("H").value == want);
}
