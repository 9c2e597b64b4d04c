#pragma once

// Coefficient ring for the engine: exact multivariate polynomials in the
// deformation parameters, over Rational. The parameter set is fixed and
// small; exponent vectors are kept sorted so that sums are merges.
//
// Negative powers are permitted for eps only (Laurent mode for the classical
// limit) and only enter through laurent_eps(), which callers must gate on the
// limit flag of their GradingContext.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "twistcalc/rational.hpp"

namespace twistcalc {

enum class Param : uint8_t { gamma = 0, xi = 1, zeta = 2, eps = 3, eta = 4 };

inline constexpr int kNumParams = 5;
inline constexpr const char* kParamNames[kNumParams] = {"gamma", "xi", "zeta", "eps", "eta"};

struct PExp {
  std::array<int16_t, kNumParams> e{};
  friend bool operator==(const PExp&, const PExp&) = default;
  friend bool operator<(const PExp& a, const PExp& b) { return a.e < b.e; }
  bool is_constant() const {
    for (int16_t v : e)
      if (v != 0) return false;
    return true;
  }
};

// Grading context: truncation order and per-parameter grade, both in half
// units so that half-integer grades stay exact. Structure constants carry
// grade 0, so straightening never changes a term's grade.
struct GradingContext {
  int cap_x2 = 8;                                  // drop terms with grade > cap
  std::array<int, kNumParams> weight_x2{0, 2, 2, 0, 2};  // gamma,xi,zeta,eps,eta
  bool laurent_eps = false;

  static GradingContext standard(int order) {
    GradingContext g;
    g.cap_x2 = 2 * order;
    return g;
  }
  static GradingContext limit(int order) {
    GradingContext g = standard(order);
    g.laurent_eps = true;
    return g;
  }
  long grade_x2(const PExp& p) const {
    long s = 0;
    for (int i = 0; i < kNumParams; ++i) s += static_cast<long>(p.e[i]) * weight_x2[i];
    return s;
  }
};

class ParamScalar {
 public:
  ParamScalar() = default;
  ParamScalar(const Rational& r) {
    if (!r.is_zero()) terms_.push_back({PExp{}, r});
  }
  ParamScalar(long long n) : ParamScalar(Rational(n)) {}

  static ParamScalar param(Param p, int power = 1);
  // eps^k with k possibly negative; the caller is responsible for only using
  // this in Laurent (limit) mode.
  static ParamScalar laurent_eps(int k);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_constant());
  }
  Rational as_rational() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw arith_error("scalar is not a plain rational: " + str());
    return terms_[0].second;
  }

  size_t term_count() const { return terms_.size(); }

  ParamScalar operator-() const;
  friend ParamScalar operator+(const ParamScalar& a, const ParamScalar& b);
  friend ParamScalar operator-(const ParamScalar& a, const ParamScalar& b);
  friend ParamScalar operator*(const ParamScalar& a, const ParamScalar& b);
  ParamScalar& operator+=(const ParamScalar& o) { return *this = *this + o; }
  ParamScalar& operator-=(const ParamScalar& o) { return *this = *this - o; }
  ParamScalar& operator*=(const ParamScalar& o) { return *this = *this * o; }
  friend bool operator==(const ParamScalar& a, const ParamScalar& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const ParamScalar& a, const ParamScalar& b) { return !(a == b); }

  ParamScalar divided_by(const Rational& r) const;

  // Substitute a parameter by a rational value or by another scalar
  // (e.g. xi -> eps * zeta for the classical limit).
  ParamScalar substitute(Param p, const Rational& value) const;
  ParamScalar substitute(Param p, const ParamScalar& value) const;

  int max_degree(Param p) const;
  int min_degree(Param p) const;  // 0 for the zero scalar

  // Coefficient of p^k, as a polynomial in the remaining parameters.
  ParamScalar coeff_of(Param p, int k) const;
  // Decomposition by powers of one parameter.
  std::map<int, ParamScalar> parts_by(Param p) const;

  // Drops terms with grade > ctx.cap_x2. Returns true if anything dropped.
  bool truncate(const GradingContext& ctx);
  long min_grade_x2(const GradingContext& ctx) const;  // 0 for zero scalar

  bool has_negative_power() const;

  const std::vector<std::pair<PExp, Rational>>& terms() const { return terms_; }

  // Canonical rendering, e.g. "1/2 - 3/2*gamma*xi^2".
  std::string str() const;

 private:
  // Sorted by PExp, no zero coefficients.
  std::vector<std::pair<PExp, Rational>> terms_;
  void prune();
  friend struct ParamScalarBuilder;
};

// Convenience constructors used all over the tests and table builders.
inline ParamScalar ps(long long n) { return ParamScalar(Rational(n)); }
inline ParamScalar ps(long long n, long long d) { return ParamScalar(Rational(n, d)); }
inline ParamScalar ps_gamma(int k = 1) { return ParamScalar::param(Param::gamma, k); }
inline ParamScalar ps_xi(int k = 1) { return ParamScalar::param(Param::xi, k); }
inline ParamScalar ps_zeta(int k = 1) { return ParamScalar::param(Param::zeta, k); }
inline ParamScalar ps_eta(int k = 1) { return ParamScalar::param(Param::eta, k); }

}  // namespace twistcalc
