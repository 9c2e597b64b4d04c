#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "twistcalc/presets.hpp"
#include "twistcalc/tables.hpp"

using namespace twistcalc;

namespace {

UElement row_element(const TwistedHopf& H, const std::string& name) {
  const LieAlgebraSpec& alg = H.algebra();
  if (name == "sigma") return *H.chain().last_sigma();
  if (name == "h")
    return Tensor::lincomb(alg, {{alg.index_of("h13"), ps(1)}, {alg.index_of("hperp"), ps_gamma()}});
  return Tensor::gen(alg, alg.index_of(name));
}

}  // namespace

TEST_CASE("deformed coproduct rows for the sl(3) chain") {
  auto alg = build_sl(3);
  GradingContext ctx = GradingContext::standard(4);
  TwistedHopf H(sl3_extended_chain(*alg, Param::xi, ctx));
  auto rows = sl3_coproduct_rows(*alg, Param::xi, ctx);
  REQUIRE(rows.size() == 8);
  for (const auto& row : rows) {
    RowCheck rc = check_row(H.coproduct(row_element(H, row.name)), row, ctx);
    INFO(row.name << " residual: " << rc.detail);
    CHECK(rc.ok);
    CHECK(rc.deviations_fired);
    // only the e31 row is allowed to need corrections
    if (row.name != "e31") CHECK(row.deviations.empty());
  }
}

TEST_CASE("deformed coproduct rows for the b(2) Jordanian") {
  auto alg = build_borel2();
  GradingContext ctx = GradingContext::standard(4);
  TwistedHopf H(borel_chain(*alg, Param::xi, ctx));
  auto rows = borel_coproduct_rows(*alg, Param::xi, ctx);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    RowCheck rc = check_row(H.coproduct(row_element(H, row.name)), row, ctx);
    INFO(row.name << " residual: " << rc.detail);
    CHECK(rc.ok);
    CHECK(rc.exact);
  }
}
