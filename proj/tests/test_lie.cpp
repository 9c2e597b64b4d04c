#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "twistcalc/lie.hpp"

using namespace twistcalc;

namespace {

// Independent oracle: realize basis elements as n x n rational matrices and
// compare matrix commutators against the structure constants. Deliberately
// re-implements the matrix realization so that a convention slip in the
// library cannot cancel against itself.
struct OMat {
  int n;
  std::vector<Rational> a;
  explicit OMat(int n_) : n(n_), a(n_ * n_, Rational(0)) {}
  Rational& at(int r, int c) { return a[r * n + c]; }
  const Rational& at(int r, int c) const { return a[r * n + c]; }
  friend OMat operator*(const OMat& x, const OMat& y) {
    OMat r(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.n; ++j) {
        Rational s(0);
        for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j);
        r.at(i, j) = s;
      }
    return r;
  }
  friend OMat operator-(const OMat& x, const OMat& y) {
    OMat r(x.n);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
  }
  friend OMat operator+(const OMat& x, const OMat& y) {
    OMat r(x.n);
    for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
  }
  OMat scaled(const Rational& v) const {
    OMat r(n);
    for (size_t i = 0; i < a.size(); ++i) r.a[i] = a[i] * v;
    return r;
  }
  friend bool operator==(const OMat& x, const OMat& y) { return x.n == y.n && x.a == y.a; }
};

// Matrix realization of a generator by its conventional name: "eab" is the
// matrix unit E_ab; for n = 3, "h13" = diag(1/2, 0, -1/2) and
// "hperp" = diag(1/2, -1, 1/2); otherwise "hab" = (E_aa - E_bb)/2.
OMat realize(int n, const std::string& name) {
  OMat m(n);
  if (name == "h13" && n == 3) {
    m.at(0, 0) = Rational(1, 2);
    m.at(2, 2) = Rational(-1, 2);
    return m;
  }
  if (name == "hperp" && n == 3) {
    m.at(0, 0) = Rational(1, 2);
    m.at(1, 1) = Rational(-1);
    m.at(2, 2) = Rational(1, 2);
    return m;
  }
  REQUIRE(name.size() == 3);
  int a = name[1] - '1';
  int b = name[2] - '1';
  if (name[0] == 'e') {
    m.at(a, b) = Rational(1);
  } else {
    REQUIRE(name[0] == 'h');
    m.at(a, a) = Rational(1, 2);
    m.at(b, b) = Rational(-1, 2);
  }
  return m;
}

void check_against_matrices(const LieAlgebraSpec& alg, int n) {
  std::vector<OMat> mats;
  for (const auto& g : alg.gen_names) mats.push_back(realize(n, g));
  for (int i = 0; i < alg.size(); ++i)
    for (int j = 0; j < alg.size(); ++j) {
      OMat expect = mats[i] * mats[j] - mats[j] * mats[i];
      OMat got(n);
      for (const auto& [k, c] : alg.bracket(i, j)) {
        REQUIRE(c.is_rational());
        got = got + mats[k].scaled(c.as_rational());
      }
      CAPTURE(alg.gen_names[i]);
      CAPTURE(alg.gen_names[j]);
      CHECK(got == expect);
    }
}

ParamScalar bracket_coeff(const LieAlgebraSpec& alg, const std::string& a, const std::string& b,
                          const std::string& target) {
  int t = alg.index_of(target);
  for (const auto& [k, c] : alg.bracket(alg.index_of(a), alg.index_of(b)))
    if (k == t) return c;
  return {};
}

}  // namespace

TEST_CASE("sl(3) basis order is the fixed PBW order") {
  auto alg = build_sl(3);
  std::vector<std::string> expect = {"e21", "e31", "e32", "h13", "hperp", "e12", "e13", "e23"};
  CHECK(alg->gen_names == expect);
  CHECK(alg->cartan == std::vector<int>{3, 4});
}

TEST_CASE("sl(n) structure constants match matrix commutators") {
  check_against_matrices(*build_sl(2), 2);
  check_against_matrices(*build_sl(3), 3);
  check_against_matrices(*build_sl(4), 4);
}

TEST_CASE("jacobi holds") {
  CHECK(jacobi_residual(*build_sl(2)).empty());
  CHECK(jacobi_residual(*build_sl(3)).empty());
  CHECK(jacobi_residual(*build_sl(4)).empty());
  CHECK(jacobi_residual(*build_borel2()).empty());
}

TEST_CASE("hand-checked sl(3) brackets") {
  auto alg = build_sl(3);
  CHECK(bracket_coeff(*alg, "e12", "e21", "h13") == ps(1));
  CHECK(bracket_coeff(*alg, "e12", "e21", "hperp") == ps(1));
  CHECK(bracket_coeff(*alg, "e23", "e32", "h13") == ps(1));
  CHECK(bracket_coeff(*alg, "e23", "e32", "hperp") == ps(-1));
  CHECK(bracket_coeff(*alg, "e13", "e31", "h13") == ps(2));
  CHECK(bracket_coeff(*alg, "e13", "e31", "hperp").is_zero());
  CHECK(bracket_coeff(*alg, "e12", "e23", "e13") == ps(1));
  CHECK(bracket_coeff(*alg, "e13", "e21", "e23") == ps(-1));
  CHECK(bracket_coeff(*alg, "e13", "e32", "e12") == ps(1));
  CHECK(bracket_coeff(*alg, "e23", "e31", "e21") == ps(1));
  CHECK(bracket_coeff(*alg, "e12", "e31", "e32") == ps(-1));
  CHECK(alg->bracket(alg->index_of("e13"), alg->index_of("e12")).empty());
  CHECK(alg->bracket(alg->index_of("e13"), alg->index_of("e23")).empty());
  CHECK(alg->bracket(alg->index_of("h13"), alg->index_of("hperp")).empty());
}

TEST_CASE("weights of the distinguished Cartan family") {
  auto alg = build_sl(3);
  // h(gamma) = h13 + gamma * hperp
  CartanElement h = CartanElement::combo(*alg, {ps(1), ps_gamma()});
  CHECK(weight_of(*alg, alg->index_of("e13"), h) == ps(1));
  CHECK(weight_of(*alg, alg->index_of("e12"), h) == ps(1, 2) + ps(3, 2) * ps_gamma());
  CHECK(weight_of(*alg, alg->index_of("e23"), h) == ps(1, 2) - ps(3, 2) * ps_gamma());
  CHECK(weight_of(*alg, alg->index_of("e31"), h) == ps(-1));
  CHECK(weight_of(*alg, alg->index_of("e21"), h) == ps(-1, 2) - ps(3, 2) * ps_gamma());
  CHECK(weight_of(*alg, alg->index_of("e32"), h) == ps(-1, 2) + ps(3, 2) * ps_gamma());
  CHECK(weight_of(*alg, alg->index_of("h13"), h).is_zero());
  CHECK(weight_of(*alg, alg->index_of("hperp"), h).is_zero());
  // weights under hperp alone
  CartanElement hp = CartanElement::basis(*alg, 1);
  CHECK(weight_of(*alg, alg->index_of("e12"), hp) == ps(3, 2));
  CHECK(weight_of(*alg, alg->index_of("e23"), hp) == ps(-3, 2));
  CHECK(weight_of(*alg, alg->index_of("e13"), hp).is_zero());
}

TEST_CASE("borel2 bracket") {
  auto b2 = build_borel2();
  CHECK(b2->gen_names == std::vector<std::string>{"H", "E"});
  CHECK(bracket_coeff(*b2, "H", "E", "E") == ps(1));
  CartanElement h = CartanElement::basis(*b2, 0);
  CHECK(weight_of(*b2, 1, h) == ps(1));
}

TEST_CASE("serialization round-trips") {
  auto alg = build_sl(3);
  std::string text = serialize_algebra(*alg);
  auto back = parse_algebra(text);
  CHECK(back->name == alg->name);
  CHECK(back->gen_names == alg->gen_names);
  CHECK(back->cartan == alg->cartan);
  for (int i = 0; i < alg->size(); ++i)
    for (int j = 0; j < alg->size(); ++j) CHECK(back->bracket(i, j) == alg->bracket(i, j));
  // weights are rederived, not stored; spot check
  CartanElement h = CartanElement::basis(*back, 0);
  CHECK(weight_of(*back, back->index_of("e13"), h) == ps(1));
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_algebra("bracket a b = c"), spec_error);
  CHECK_THROWS_AS(parse_algebra("algebra x\ngenerators a b\nbracket a b = q"), spec_error);
  // a table that is not antisymmetrizable to a Lie algebra: [a,b] = a fails Jacobi trivially?
  // Jacobi needs three generators; feed a non-eigenvector cartan instead.
  CHECK_THROWS_AS(parse_algebra("algebra x\ngenerators a b\ncartan a\nbracket a b = a + b"),
                  spec_error);
}

TEST_CASE("scaled structure copy multiplies constants by eps") {
  auto alg = build_sl(3);
  auto scaled = scaled_structure_copy(*alg);
  CHECK(scaled->name == "sl3.scaled");
  ParamScalar eps = ParamScalar::param(Param::eps);
  for (int i = 0; i < alg->size(); ++i)
    for (int j = 0; j < alg->size(); ++j) {
      const LinComb& orig = alg->bracket(i, j);
      const LinComb& sc = scaled->bracket(i, j);
      REQUIRE(orig.size() == sc.size());
      for (size_t t = 0; t < orig.size(); ++t) {
        CHECK(sc[t].first == orig[t].first);
        CHECK(sc[t].second == orig[t].second * eps);
      }
    }
  CartanElement h = CartanElement::basis(*scaled, 0);
  CHECK(weight_of(*scaled, scaled->index_of("e13"), h) == eps);
}
