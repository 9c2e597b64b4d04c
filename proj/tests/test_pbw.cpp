#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "twistcalc/pbw.hpp"

using namespace twistcalc;

namespace {

Tensor from_monomap(const LieAlgebraSpec& alg, const MonoMap& mm) {
  Tensor t(&alg, 1);
  for (const auto& [m, c] : mm) {
    TKey k;
    k.leg[0] = m;
    t.add(k, c);
  }
  return t;
}

std::vector<int> random_word(std::mt19937& rng, int nbasis, int maxlen) {
  std::uniform_int_distribution<int> len(0, maxlen);
  std::uniform_int_distribution<int> gen(0, nbasis - 1);
  std::vector<int> w(len(rng));
  for (auto& g : w) g = gen(rng);
  return w;
}

}  // namespace

TEST_CASE("straightening of low-degree anchor products") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  Tensor e13 = Tensor::gen(*alg, alg->index_of("e13"));
  Tensor e21 = Tensor::gen(*alg, alg->index_of("e21"));
  Tensor e23 = Tensor::gen(*alg, alg->index_of("e23"));
  // e13 e21 reorders to e21 e13 + [e13, e21] = e21 e13 - e23
  Tensor p = mul(e13, e21, ctx);
  Tensor expect = mul(e21, e13, ctx) - e23;
  CHECK(p == expect);
  CHECK(p.str() == "- e23 + e21 e13");

  // h13 e12 = e12 h13 + (1/2) e12
  Tensor h13 = Tensor::gen(*alg, alg->index_of("h13"));
  Tensor e12 = Tensor::gen(*alg, alg->index_of("e12"));
  CHECK(mul(h13, e12, ctx) == mul(e12, h13, ctx) + e12.scaled(ps(1, 2)));
}

TEST_CASE("straightened words multiply associatively") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(8);
  std::mt19937 rng(20260815);
  for (int trial = 0; trial < 60; ++trial) {
    auto w1 = random_word(rng, alg->size(), 3);
    auto w2 = random_word(rng, alg->size(), 3);
    auto w12 = w1;
    w12.insert(w12.end(), w2.begin(), w2.end());
    Tensor a = from_monomap(*alg, straighten_word(*alg, w1));
    Tensor b = from_monomap(*alg, straighten_word(*alg, w2));
    Tensor ab = from_monomap(*alg, straighten_word(*alg, w12));
    CHECK(mul(a, b, ctx) == ab);
  }
  // three-factor associativity on tensors of rank 2
  for (int trial = 0; trial < 20; ++trial) {
    auto mk = [&] {
      Tensor t(alg.get(), 2);
      TKey k;
      for (auto& m : {0, 1}) {
        auto w = random_word(rng, alg->size(), 2);
        PBWMonomial mono;
        for (int g : w) mono = mono.bump(g);
        k.leg[m] = mono;
      }
      t.add(k, ps(1));
      return t;
    };
    Tensor x = mk(), y = mk(), z = mk();
    CHECK(mul(mul(x, y, ctx), z, ctx) == mul(x, mul(y, z, ctx), ctx));
  }
}

TEST_CASE("log of 1 + xi e13 matches the alternating series oracle") {
  auto alg = build_sl(3);
  int order = 5;
  GradingContext ctx = GradingContext::standard(order);
  Tensor u = Tensor::unit(*alg, 1) + Tensor::gen(*alg, alg->index_of("e13")).scaled(ps_xi());
  Tensor sigma = log_graded(u, ctx);
  // oracle: sum_{k>=1} (-1)^{k+1}/k xi^k e13^k, computed with plain rationals
  Tensor expect(alg.get(), 1);
  for (int k = 1; k <= order; ++k) {
    Rational coeff = Rational(k % 2 == 1 ? 1 : -1, k);
    TKey key;
    key.leg[0] = PBWMonomial::gen(alg->index_of("e13"), k);
    expect.add(key, ParamScalar(coeff) * ps_xi(k));
  }
  CHECK(sigma == expect);
  // exp inverts log exactly within the truncation order
  CHECK(exp_graded(sigma, ctx) == u);
  // and log inverts exp on a non-commutative argument
  Tensor x = Tensor::gen(*alg, alg->index_of("h13")).scaled(ps_xi()) +
             Tensor::gen(*alg, alg->index_of("e12")).scaled(ps_zeta());
  CHECK(log_graded(exp_graded(x, ctx), ctx) == x);
}

TEST_CASE("inverse matches the geometric and binomial series oracles") {
  auto alg = build_sl(3);
  int order = 4;
  GradingContext ctx = GradingContext::standard(order);
  int ie13 = alg->index_of("e13");
  Tensor u = Tensor::unit(*alg, 1) + Tensor::gen(*alg, ie13).scaled(ps_xi());
  Tensor inv = inverse_graded(u, ctx);
  Tensor geo(alg.get(), 1);
  for (int k = 0; k <= order; ++k) {
    TKey key;
    if (k) key.leg[0] = PBWMonomial::gen(ie13, k);
    geo.add(key, ParamScalar(Rational(k % 2 ? -1 : 1)) * ps_xi(k));
  }
  CHECK(inv == geo);
  Tensor prod = mul(u, inv, ctx);
  CHECK(prod == Tensor::unit(*alg, 1));
  CHECK(prod.truncated());  // the xi^{order+1} tail was dropped

  // (1 + xi e13)^{-2} against binomial coefficients C(-2, k) = (-1)^k (k+1)
  Tensor inv2 = mul(inv, inv, ctx);
  Tensor binom(alg.get(), 1);
  for (int k = 0; k <= order; ++k) {
    TKey key;
    if (k) key.leg[0] = PBWMonomial::gen(ie13, k);
    binom.add(key, ParamScalar(Rational(k % 2 ? -(k + 1) : k + 1)) * ps_xi(k));
  }
  CHECK(inv2 == binom);
}

TEST_CASE("exp is multiplicative on commuting arguments") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  Tensor a = Tensor::gen(*alg, alg->index_of("e12")).scaled(ps_xi());
  Tensor b = Tensor::gen(*alg, alg->index_of("e13")).scaled(ps_zeta());
  CHECK(exp_graded(a + b, ctx) == mul(exp_graded(a, ctx), exp_graded(b, ctx), ctx));
}

TEST_CASE("exp refuses arguments without positive parameter grade") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  CHECK_THROWS_AS(exp_graded(Tensor::gen(*alg, 0), ctx), spec_error);
  CHECK_THROWS_AS(exp_graded(Tensor::gen(*alg, 0).scaled(ps_gamma()), ctx), spec_error);
  CHECK_THROWS_AS(log_graded(Tensor::unit(*alg, 1) + Tensor::gen(*alg, 0), ctx), spec_error);
}

TEST_CASE("undeformed coproduct is an algebra map") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(6);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Tensor a = from_monomap(*alg, straighten_word(*alg, random_word(rng, alg->size(), 3)));
    Tensor b = from_monomap(*alg, straighten_word(*alg, random_word(rng, alg->size(), 3)));
    CHECK(coproduct0(mul(a, b, ctx), ctx) == mul(coproduct0(a, ctx), coproduct0(b, ctx), ctx));
  }
}

TEST_CASE("undeformed coproduct is coassociative and counital") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(6);
  MonomialMapper cop(*alg, ctx, [&](int g) { return coproduct0(Tensor::gen(*alg, g), ctx); });
  std::mt19937 rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    Tensor x = from_monomap(*alg, straighten_word(*alg, random_word(rng, alg->size(), 3)));
    Tensor d = coproduct0(x, ctx);
    CHECK(apply_to_leg(d, 0, std::cref(cop), ctx) == apply_to_leg(d, 1, std::cref(cop), ctx));
    CHECK(counit_leg(d, 0) == x);
    CHECK(counit_leg(d, 1) == x);
  }
  // counit picks out the unit coefficient
  Tensor u = Tensor::unit(*alg, 1).scaled(ps(5)) + Tensor::gen(*alg, 2);
  CHECK(counit(u) == ps(5));
}

TEST_CASE("leg surgery") {
  auto alg = build_sl(3);
  Tensor a = Tensor::gen(*alg, alg->index_of("e12"));
  Tensor b = Tensor::gen(*alg, alg->index_of("e23"));
  GradingContext ctx = GradingContext::standard(4);
  Tensor ab = mul(embed_leg(a, 2, {0}), embed_leg(b, 2, {1}), ctx);  // e12 (x) e23
  CHECK(ab.str() == "e12 (x) e23");
  CHECK(flip12(ab).str() == "e23 (x) e12");
  Tensor in3 = embed_leg(ab, 3, {0, 2});
  CHECK(in3.str() == "e12 (x) 1 (x) e23");
  CHECK(permute_legs(in3, {2, 1, 0}).str() == "e23 (x) 1 (x) e12");
  CHECK(counit_leg(in3, 1) == ab);
  CHECK(counit_leg(in3, 0).is_zero());
}

TEST_CASE("truncation is sticky and reported") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(2);
  Tensor x = Tensor::gen(*alg, alg->index_of("e13")).scaled(ps_xi());
  Tensor big = mul(mul(x, x, ctx), x, ctx);  // xi^3 > cap 2
  CHECK(big.is_zero());
  CHECK(big.truncated());
  Tensor ok = mul(x, x, ctx);
  CHECK_FALSE(ok.truncated());
}
