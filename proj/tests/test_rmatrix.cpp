#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "twistcalc/rmatrix.hpp"

using namespace twistcalc;

namespace {

LinComb one_gen(const LieAlgebraSpec& alg, const std::string& name) {
  return {{alg.index_of(name), ParamScalar(Rational(1))}};
}

// r = h /\ e13 + e12 /\ e23 with h = h13 + gamma * hperp
RMatrix sl3_r(const LieAlgebraSpec& alg) {
  LinComb h = {{alg.index_of("h13"), ps(1)}, {alg.index_of("hperp"), ps_gamma()}};
  return make_r(alg, {
                         {h, one_gen(alg, "e13"), ps(1)},
                         {one_gen(alg, "e12"), one_gen(alg, "e23"), ps(1)},
                     });
}

bool has_entry(const WedgeTable& t, int i, int j, const ParamScalar& c) {
  for (const auto& [a, b, v] : t.entries)
    if (a == i && b == j) return v == c;
  return false;
}

}  // namespace

TEST_CASE("borel r-matrix: cybe, dual relations, weight report") {
  auto alg = build_borel2();
  GradingContext ctx = GradingContext::standard(4);
  RMatrix r = make_r(*alg, {{one_gen(*alg, "H"), one_gen(*alg, "E"), ps(1)}});

  CHECK(cybe_residual(r, ctx).is_zero());

  DualAlgebraResult d = dual_structure_constants(r, standard_dual_basis(*alg), ctx);
  auto rels = render_dual_relations(d);
  REQUIRE(rels.size() == 1);
  CHECK(rels[0] == "[H*, E*] = -H*");

  DualWeightReport rep = dual_weight_structure(r, d);
  CHECK(rep.all_ok());
  REQUIRE(rep.tags.size() == 2);
  CHECK(rep.tags[0] == std::vector<Rational>{Rational(-1)});
  CHECK(rep.tags[1] == std::vector<Rational>{Rational(0)});
  CHECK(rep.carrier == std::vector<int>{0, 1});
  CHECK(rep.support == rep.carrier);
  CHECK(rep.carrier_closed);
}

TEST_CASE("rotated extended r-matrix solves cybe, factors alone may not") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);

  CHECK(cybe_residual(sl3_r(*alg), ctx).is_zero());

  // the Jordanian part alone is still a solution
  LinComb h = {{alg->index_of("h13"), ps(1)}, {alg->index_of("hperp"), ps_gamma()}};
  RMatrix rj = make_r(*alg, {{h, one_gen(*alg, "e13"), ps(1)}});
  CHECK(cybe_residual(rj, ctx).is_zero());

  // the extension part alone is not
  RMatrix re = make_r(*alg, {{one_gen(*alg, "e12"), one_gen(*alg, "e23"), ps(1)}});
  CHECK_FALSE(cybe_residual(re, ctx).is_zero());
}

TEST_CASE("cybe solutions dualize to lie algebras, the extension alone does not") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);

  CHECK(jacobi_residual_dual(dual_structure_constants(sl3_r(*alg), sl3_dual_basis(*alg), ctx))
            .empty());

  // random rational specializations of gamma
  for (Rational g : {Rational(2), Rational(-7, 3), Rational(5)}) {
    LinComb h = {{alg->index_of("h13"), ps(1)}, {alg->index_of("hperp"), ParamScalar(g)}};
    DualBasis b = standard_dual_basis(*alg);
    b.names[alg->index_of("h13")] = "h";
    b.elements[alg->index_of("h13")] = h;
    RMatrix r = make_r(*alg, {{h, one_gen(*alg, "e13"), ps(1)},
                              {one_gen(*alg, "e12"), one_gen(*alg, "e23"), ps(1)}});
    DualAlgebraResult d = dual_structure_constants(r, b, ctx);
    CHECK(jacobi_residual_dual(d).empty());
  }

  // the extension factor alone fails the CYBE, and its dual bracket table
  // fails the Jacobi identity somewhere; the construction must still run
  RMatrix re = make_r(*alg, {{one_gen(*alg, "e12"), one_gen(*alg, "e23"), ps(1)}});
  DualAlgebraResult de = dual_structure_constants(re, standard_dual_basis(*alg), ctx);
  CHECK_FALSE(jacobi_residual_dual(de).empty());
}

TEST_CASE("cobracket satisfies the 1-cocycle identity on all generator pairs") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  RMatrix r = sl3_r(*alg);
  auto d0 = [&](const Tensor& x) { return embed_leg(x, 2, {0}) + embed_leg(x, 2, {1}); };
  auto comm = [&](const Tensor& a, const Tensor& b) { return mul(a, b, ctx) - mul(b, a, ctx); };
  for (int i = 0; i < alg->size(); ++i)
    for (int j = i + 1; j < alg->size(); ++j) {
      Tensor x = Tensor::lincomb(*alg, {{i, ps(1)}});
      Tensor y = Tensor::lincomb(*alg, {{j, ps(1)}});
      Tensor xy = Tensor::lincomb(*alg, alg->bracket(i, j));
      Tensor lhs = cobracket(r, xy, ctx);
      Tensor rhs = comm(d0(x), cobracket(r, y, ctx)) - comm(d0(y), cobracket(r, x, ctx));
      CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("cobracket anchors over the rotated basis") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  RMatrix r = sl3_r(*alg);
  DualBasis basis = sl3_dual_basis(*alg);
  // basis order: e21 e31 e32 h hperp e12 e13 e23
  REQUIRE(basis.names == std::vector<std::string>{"e21", "e31", "e32", "h", "hperp", "e12",
                                                  "e13", "e23"});

  auto delta = [&](const LinComb& v) {
    return wedge_components(*alg, basis, cobracket(r, Tensor::lincomb(*alg, v), ctx));
  };

  // delta(h) = -h /\ e13 - e12 /\ e23
  WedgeTable dh = delta(basis.elements[3]);
  REQUIRE(dh.entries.size() == 2);
  CHECK(has_entry(dh, 3, 6, ps(-1)));
  CHECK(has_entry(dh, 5, 7, ps(-1)));

  // delta(e12) = -1/2 (3 gamma - 1) e13 /\ e12
  WedgeTable d12 = delta(basis.elements[5]);
  REQUIRE(d12.entries.size() == 1);
  CHECK(has_entry(d12, 5, 6, (ps(3) * ps_gamma() - ps(1)) * ps(1, 2)));

  // delta(e31) = e13 /\ e31 + e23 /\ e32 + e12 /\ e21 - 2 gamma h /\ hperp
  WedgeTable d31 = delta(basis.elements[1]);
  REQUIRE(d31.entries.size() == 4);
  CHECK(has_entry(d31, 1, 6, ps(-1)));
  CHECK(has_entry(d31, 2, 7, ps(-1)));
  CHECK(has_entry(d31, 0, 5, ps(-1)));
  CHECK(has_entry(d31, 3, 4, ps(-2) * ps_gamma()));

  // hperp and e13 are cocommutative
  CHECK(delta(basis.elements[4]).entries.empty());
  CHECK(delta(basis.elements[6]).entries.empty());
}

TEST_CASE("dual algebra of the rotated extended r-matrix") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  RMatrix r = sl3_r(*alg);
  DualAlgebraResult d = dual_structure_constants(r, sl3_dual_basis(*alg), ctx);

  const ParamScalar half3gp1 = (ps(3) * ps_gamma() + ps(1)) * ps(1, 2);
  const ParamScalar half3gm1 = (ps(3) * ps_gamma() - ps(1)) * ps(1, 2);

  // expected nonzero brackets [b_i*, b_j*], i < j in basis order
  // 0=e21 1=e31 2=e32 3=h 4=hperp 5=e12 6=e13 7=e23
  std::map<std::pair<int, int>, LinComb> expected;
  expected[{0, 5}] = {{1, ps(-1)}};           // [e21*, e12*] = -e31*
  expected[{0, 6}] = {{0, -half3gp1}};        // [e21*, e13*]
  expected[{1, 6}] = {{1, ps(-1)}};           // [e31*, e13*] = -e31*
  expected[{2, 6}] = {{2, half3gm1}};         // [e32*, e13*]
  expected[{2, 7}] = {{1, ps(-1)}};           // [e32*, e23*] = -e31*
  expected[{3, 4}] = {{1, ps(-2) * ps_gamma()}};  // [h*, hperp*] = -2 gamma e31*
  expected[{3, 6}] = {{3, ps(-1)}};           // [h*, e13*] = -h*
  expected[{4, 5}] = {{2, ps(1) + ps_gamma()}};   // [hperp*, e12*] = (1+gamma) e32*
  expected[{4, 7}] = {{0, ps(1) - ps_gamma()}};   // [hperp*, e23*] = (1-gamma) e21*
  expected[{5, 6}] = {{5, half3gm1}};         // [e12*, e13*]
  expected[{5, 7}] = {{3, ps(-1)}};           // [e12*, e23*] = -h*
  expected[{6, 7}] = {{7, half3gp1}};         // [e13*, e23*]

  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      auto it = expected.find({i, j});
      const LinComb& got = d.dual->bracket(i, j);
      if (it == expected.end()) {
        CHECK(got.empty());
      } else {
        REQUIRE(got.size() == it->second.size());
        CHECK(got[0].first == it->second[0].first);
        CHECK(got[0].second == it->second[0].second);
      }
    }

  auto rels = render_dual_relations(d);
  CHECK(rels.size() == expected.size());
  CHECK(std::find(rels.begin(), rels.end(), "[h*, e13*] = -h*") != rels.end());
  CHECK(std::find(rels.begin(), rels.end(), "[h*, hperp*] = -2*gamma*e31*") != rels.end());
  CHECK(std::find(rels.begin(), rels.end(), "[hperp*, e23*] = (1 - gamma)*e21*") != rels.end());
  CHECK(std::find(rels.begin(), rels.end(), "[e13*, e23*] = (1/2 + 3/2*gamma)*e23*") !=
        rels.end());
}

TEST_CASE("dual weight structure of the rotated extended r-matrix") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  RMatrix r = sl3_r(*alg);
  DualAlgebraResult d = dual_structure_constants(r, sl3_dual_basis(*alg), ctx);
  DualWeightReport rep = dual_weight_structure(r, d);

  for (const auto& note : rep.notes) MESSAGE(note);
  CHECK(rep.all_ok());
  CHECK(rep.carrier == std::vector<int>{3, 5, 6, 7});
  CHECK(rep.support == rep.carrier);
  CHECK(rep.carrier_closed);

  // weight vectors over (h13, hperp); the carrier duals take the weight
  // opposite to their wedge partner, the ideal keeps its own weights
  using W = std::vector<Rational>;
  const W nu12{Rational(1, 2), Rational(3, 2)};
  const W nu23{Rational(1, 2), Rational(-3, 2)};
  const W nu13{Rational(1), Rational(0)};
  auto neg = [](W w) {
    for (auto& v : w) v = -v;
    return w;
  };
  REQUIRE(rep.tags.size() == 8);
  CHECK(rep.tags[0] == neg(nu12));  // e21*
  CHECK(rep.tags[1] == neg(nu13));  // e31*
  CHECK(rep.tags[2] == neg(nu23));  // e32*
  CHECK(rep.tags[3] == neg(nu13));  // h* opposite to e13
  CHECK(rep.tags[4] == W{Rational(0), Rational(0)});  // hperp*
  CHECK(rep.tags[5] == neg(nu23));  // e12* opposite to e23
  CHECK(rep.tags[6] == W{Rational(0), Rational(0)});  // e13* opposite to h
  CHECK(rep.tags[7] == neg(nu12));  // e23* opposite to e12

  // here the carrier and ideal weight systems coincide as multisets
  std::vector<W> carrier_tags, ideal_tags;
  for (int i = 0; i < 8; ++i) {
    bool carr = std::find(rep.carrier.begin(), rep.carrier.end(), i) != rep.carrier.end();
    (carr ? carrier_tags : ideal_tags).push_back(rep.tags[i]);
  }
  std::sort(carrier_tags.begin(), carrier_tags.end());
  std::sort(ideal_tags.begin(), ideal_tags.end());
  CHECK(carrier_tags == ideal_tags);
}

TEST_CASE("wedge expansion rejects bad tensors") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  DualBasis basis = standard_dual_basis(*alg);

  Tensor h13 = Tensor::gen(*alg, alg->index_of("h13"));
  Tensor sym = mul(embed_leg(h13, 2, {0}), embed_leg(h13, 2, {1}), ctx);
  CHECK_THROWS_AS(wedge_components(*alg, basis, sym), spec_error);

  Tensor quad = mul(embed_leg(mul(h13, h13, ctx), 2, {0}),
                    embed_leg(Tensor::gen(*alg, 0), 2, {1}), ctx);
  CHECK_THROWS_AS(wedge_components(*alg, basis, quad), spec_error);
}
