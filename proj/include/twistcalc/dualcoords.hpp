#pragma once

// The g -> g# coordinate change: apply and derive the map, rewrite the
// deformed coproduct over the #-images, scan rows for quasiprimitivity over
// the free parameter, and assemble the parabolic chains.
//
// #-expressions are held in ordinary Tensor containers over the same
// algebra: a PBW key stands for the product of #-images taken in basis
// order, so slot i reads as the i-th dual label. Coefficients are the
// divided ones; a key containing the primitive root to the a-th power
// implies an extra par^a inside the image.

#include <string>
#include <vector>

#include "twistcalc/rmatrix.hpp"
#include "twistcalc/twist.hpp"

namespace twistcalc {

struct CoordinateMap {
  const LieAlgebraSpec* alg = nullptr;
  Param par = Param::xi;
  std::vector<std::string> labels;  // "<name>#", indexed like forward
  // grade-0 lead of each image. Slot i must read "generator i plus
  // higher-index generators" so that container keys and PBW keys line up.
  std::vector<LinComb> leads;
  std::vector<UElement> forward;  // image of label i in g-coordinates
  std::vector<int> shifts;        // min par-grade of each image

  struct InverseEntry {
    Tensor expr;    // #-expression; evaluates to par^shift * generator
    int shift = 0;
  };
  std::vector<InverseEntry> inverse;  // per generator, filled by invert_map

  int shift_of(const PBWMonomial& mono) const;
  int label_index(const std::string& label) const;  // -1 if unknown
};

// Identity map on the standard basis.
CoordinateMap identity_map(const LieAlgebraSpec& alg, Param par);

// The frozen sl(3) map: images from the reference tables over the rotated
// basis (h = h13 + gamma * hperp), inverse entries computed by rewriting.
CoordinateMap sl3_map(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx);

// Builds a map from per-label images over `basis`, computing shifts and
// validating the lead layout; inverse entries are left empty.
CoordinateMap make_map(const LieAlgebraSpec& alg, Param par, const DualBasis& basis,
                       std::vector<UElement> forward, const GradingContext& ctx);

// Renders a #-expression with the map's labels.
std::string hash_str(const CoordinateMap& m, const Tensor& c);

// Product of #-images named by x's keys (basis order within each leg),
// multiplied in U(g). An empty image slot that is actually used raises the
// incomplete-map error naming the label.
Tensor apply_map(const CoordinateMap& m, const Tensor& x, const GradingContext& ctx);

struct RewriteOutcome {
  Tensor expr;  // #-expression, same rank as the input
  bool ok = true;
  std::string diagnostic;  // set when the element does not close over #-images
};

// Writes a g-coordinates element over #-images by triangular elimination:
// grade by grade, the extremal remaining term names its own preimage.
RewriteOutcome rewrite_in_dual(const CoordinateMap& m, const Tensor& x, const GradingContext& ctx);

// Computes the inverse entries of m in place and verifies the round trip;
// returns an empty string on success, else the defect rendering.
std::string invert_map(CoordinateMap& m, const GradingContext& ctx);

struct DualRow {
  std::string name;  // "<label>#"
  Tensor in_g;       // Delta_F(forward image) in U(g) (x) U(g)
  Tensor in_hash;    // the same row over #-images
};

struct DualCostructure {
  std::vector<DualRow> rows;  // basis order
  bool closed = true;
  std::string diagnostic;  // first failure, prefixed with the row name

  const DualRow& row(const std::string& name) const;
};

// Rewrites Delta_F of every #-image; a row that fails to close over the
// #-images is reported with the offending term.
DualCostructure rewrite_coproduct_in_dual(const TwistedHopf& tw, const CoordinateMap& m);

struct DeriveOptions {
  int degree_bound = 2;  // correction degree at par-grade m is bounded by degree_bound + m - 1
  int gamma_degree = 3;  // gamma-polynomial degree of the unknown coefficients
};

struct DeriveOutcome {
  CoordinateMap map;
  bool ok = true;
  std::string obstruction;  // label, grade and leftover terms on failure
};

// Derives the coordinate map over `basis` from the normal-form condition:
// the primitive-root image is fixed by making it exactly primitive, and for
// every other basis element Delta_F(e#) - e# (x) E - 1 (x) e# must contain
// no term with a bare root power on either leg, where E is an exponential
// of the root image whose rate is solved alongside. Each par-grade yields an
// exact rational linear system; ties are broken by minimal support in
// lexicographic order (free coordinates pinned to zero).
DeriveOutcome derive_dual_map(const TwistedHopf& tw, Param par, const DualBasis& basis,
                              int root, DeriveOptions opt = {});

struct ObstructionTerm {
  std::string rendering;        // q * A# (x) B#
  std::vector<Rational> roots;  // rational zeros of the gamma-coefficient
};

struct QuasiprimitiveRow {
  std::string name;
  std::vector<ObstructionTerm> obstructions;
  // gamma values killing every obstruction; empty with obstructions present
  // means the row is never quasiprimitive
  std::vector<Rational> quasiprimitive_at;
};

struct QuasiprimitiveReport {
  std::vector<QuasiprimitiveRow> rows;
  std::vector<Rational> irregular;  // union of all obstruction roots, sorted
};

// Scans the rewritten rows: obstructions are the terms keeping a row from
// the shape e# (x) (root exponential) + (root exponential) (x) e#. Rows are
// scanned in parallel under the TWISTCALC_THREADS budget.
QuasiprimitiveReport scan_quasiprimitive(const DualCostructure& table, const CoordinateMap& m,
                                         int root);

struct ParabolicTwist {
  int sign = +1;       // +1: carrier e21 at gamma = +1; -1: carrier e32 at gamma = -1
  Rational gamma;      // the fixed parameter value, equal to sign
  TwistFactor factor;  // exp(-sign * 2/3 hperp (x) log((1 + eta X) e^{2 sigma}))
  TwistChain chain;    // F_J, F_E, then the parabolic factor
};

// gamma must be +1 or -1 (the factor is a cocycle nowhere else; anything
// else is refused). eta grades the new carrier so the logarithm truncates;
// X is e21 for the plus sign and the e32 image e32 - par h(gamma) e12 for
// the minus sign, dressed with e^{2 sigma}.
ParabolicTwist build_parabolic(const LieAlgebraSpec& alg, const Rational& gamma, Param par,
                               Param eta, const GradingContext& ctx);

// Rational zeros of a gamma-polynomial given as (degree, coefficient) pairs.
std::vector<Rational> rational_roots(const std::vector<std::pair<int, Rational>>& poly);

}  // namespace twistcalc
