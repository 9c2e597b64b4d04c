#pragma once

// Finite-dimensional Lie algebra presented by structure constants on a fixed
// ordered basis. The basis order doubles as the PBW normal order for the
// enveloping algebra layer. Cartan generators are flagged so that weights
// (ad-eigenvalues of basis elements under the Cartan basis) can be read off
// the bracket table.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "twistcalc/paramscalar.hpp"

namespace twistcalc {

struct PBWCaches;  // owned lazily, defined with the enveloping-algebra layer

class spec_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A linear combination of basis elements: list of (basis index, coefficient).
using LinComb = std::vector<std::pair<int, ParamScalar>>;

struct LieAlgebraSpec {
  std::string name;
  std::vector<std::string> gen_names;
  std::vector<int> cartan;  // indices into gen_names forming the Cartan basis
  // bracket_table[i][j] = [x_i, x_j], stored for all pairs (antisymmetry is
  // validated at construction time).
  std::vector<std::vector<LinComb>> bracket_table;
  // weights[j][c] = eigenvalue of ad(cartan[c]) on x_j; zero rows for
  // non-eigenvectors (validated so that every basis element is an
  // ad-eigenvector of every Cartan generator).
  std::vector<std::vector<ParamScalar>> weights;

  int size() const { return static_cast<int>(gen_names.size()); }
  int index_of(std::string_view gen) const;     // throws spec_error if unknown
  int find(std::string_view gen) const;         // -1 if unknown
  const LinComb& bracket(int i, int j) const { return bracket_table[i][j]; }

  mutable std::shared_ptr<PBWCaches> caches;  // created on first use

  LieAlgebraSpec() = default;
  LieAlgebraSpec(const LieAlgebraSpec&) = delete;
  LieAlgebraSpec& operator=(const LieAlgebraSpec&) = delete;
};

using AlgebraPtr = std::shared_ptr<const LieAlgebraSpec>;

// An element of the Cartan subalgebra with (possibly parameter-dependent)
// coefficients over the Cartan basis, e.g. h13 + gamma*hperp.
struct CartanElement {
  std::vector<ParamScalar> coeff;  // indexed like LieAlgebraSpec::cartan

  static CartanElement basis(const LieAlgebraSpec& alg, int cartan_pos);
  static CartanElement combo(const LieAlgebraSpec& alg, const std::vector<ParamScalar>& c);
};

// Weight of basis element x_j on H = sum_c coeff[c] * cartan[c].
ParamScalar weight_of(const LieAlgebraSpec& alg, int j, const CartanElement& h);

// [x_i, x_j] extended bilinearly to linear combinations.
LinComb bracket_lin(const LieAlgebraSpec& alg, const LinComb& a, const LinComb& b);

// Exact Jacobi check over all basis triples; returns the first offending
// triple rendered as text, or an empty string if the identity holds.
std::string jacobi_residual(const LieAlgebraSpec& alg);

// sl(n) in matrix-unit conventions: basis = negative root vectors e_ab (a>b,
// lexicographic), then the Cartan basis, then positive root vectors e_ab
// (a<b, lexicographic). For n = 3 the Cartan basis is the pair
// h13 = (E11 - E33)/2, hperp = (E11 - 2 E22 + E33)/2 used by the deformation;
// otherwise it is h_{a,a+1} = (E_aa - E_{a+1,a+1})/2. Supports 2 <= n <= 9.
AlgebraPtr build_sl(int n);

// Two-dimensional Borel algebra b(2): basis {H, E} with [H, E] = E.
AlgebraPtr build_borel2();

// Copy with every structure constant multiplied by eps. This is the flat
// family underlying the classical-limit computation: bracket_hat = eps *
// bracket, so commutators die as eps -> 0 while the twist exponents stay
// finite after the parameter rescaling.
AlgebraPtr scaled_structure_copy(const LieAlgebraSpec& alg);

// Plain-text serialization of an algebra whose structure constants are
// rational (user-facing file format; round-trips through parse_algebra).
std::string serialize_algebra(const LieAlgebraSpec& alg);
AlgebraPtr parse_algebra(const std::string& text);

// Validates antisymmetry, Cartan-eigenvector structure and Jacobi; throws
// spec_error with a description if the table is not a Lie algebra.
void validate_algebra(const LieAlgebraSpec& alg);

}  // namespace twistcalc
