#pragma once

// Ready-made twist chains for the shipped examples.

#include "twistcalc/twist.hpp"

namespace twistcalc {

// Rotated extended Jordanian chain on sl(3):
//   exp(t e12 (x) e23 e^{(3g-1)/2 sigma}) exp(h(g) (x) sigma),
// sigma = log(1 + t e13), h(g) = h13 + g hperp, t the chosen parameter slot.
TwistChain sl3_extended_chain(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx);

// Jordanian chain on b(2), sigma = log(1 + t E).
TwistChain borel_chain(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx);

}  // namespace twistcalc
