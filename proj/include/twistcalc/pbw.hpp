#pragma once

// Enveloping-algebra layer: PBW-ordered monomials over a LieAlgebraSpec,
// graded tensor elements of rank 1..3, and the operations the Hopf layer
// needs (product with straightening, graded exp/log, undeformed coproduct,
// counit, leg surgery). Elements are sparse maps keyed by monomial tuples
// with ParamScalar coefficients; truncation happens at the coefficient level
// by parameter grade and sets a sticky flag.

#include <array>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "twistcalc/lie.hpp"
#include "twistcalc/paramscalar.hpp"

namespace twistcalc {

inline constexpr int kMaxGens = 32;

struct PBWMonomial {
  std::array<uint8_t, kMaxGens> exp{};

  static PBWMonomial unit() { return {}; }
  static PBWMonomial gen(int i, int power = 1) {
    PBWMonomial m;
    m.exp[i] = static_cast<uint8_t>(power);
    return m;
  }
  bool is_unit() const {
    for (uint8_t e : exp)
      if (e) return false;
    return true;
  }
  int degree() const {
    int d = 0;
    for (uint8_t e : exp) d += e;
    return d;
  }
  int top_index() const {
    for (int i = kMaxGens - 1; i >= 0; --i)
      if (exp[i]) return i;
    return -1;
  }
  PBWMonomial bump(int i) const {
    PBWMonomial m = *this;
    if (m.exp[i] == 255) throw arith_error("PBW exponent overflow");
    ++m.exp[i];
    return m;
  }
  PBWMonomial drop_top(int i) const {
    PBWMonomial m = *this;
    --m.exp[i];
    return m;
  }
  friend bool operator==(const PBWMonomial& a, const PBWMonomial& b) {
    return std::memcmp(a.exp.data(), b.exp.data(), kMaxGens) == 0;
  }
  friend bool operator<(const PBWMonomial& a, const PBWMonomial& b) { return a.exp < b.exp; }
};

struct MonoHash {
  size_t operator()(const PBWMonomial& m) const {
    size_t h = 1469598103934665603ull;
    for (uint8_t e : m.exp) {
      h ^= e;
      h *= 1099511628211ull;
    }
    return h;
  }
};

using MonoMap = std::unordered_map<PBWMonomial, ParamScalar, MonoHash>;

struct TKey {
  std::array<PBWMonomial, 3> leg{};
  friend bool operator==(const TKey& a, const TKey& b) { return a.leg == b.leg; }
  friend bool operator<(const TKey& a, const TKey& b) { return a.leg < b.leg; }
};

struct TKeyHash {
  size_t operator()(const TKey& k) const {
    MonoHash mh;
    size_t h = mh(k.leg[0]);
    h = h * 1099511628211ull ^ mh(k.leg[1]);
    h = h * 1099511628211ull ^ mh(k.leg[2]);
    return h;
  }
};

// Straightening and coproduct memo tables, one per algebra, shared across
// grading contexts (structure constants have grade zero so cached values are
// context-independent). Lookups and inserts are mutex-guarded; computation
// happens outside the lock, so a racing thread may redo work but never sees
// a partial value.
struct PBWCaches;

class Tensor {
 public:
  Tensor() = default;
  Tensor(const LieAlgebraSpec* alg, int rank) : alg_(alg), rank_(rank) {}

  static Tensor zero(const LieAlgebraSpec& alg, int rank) { return Tensor(&alg, rank); }
  static Tensor unit(const LieAlgebraSpec& alg, int rank) {
    Tensor t(&alg, rank);
    t.terms_[TKey{}] = ParamScalar(Rational(1));
    return t;
  }
  static Tensor gen(const LieAlgebraSpec& alg, int i) {
    Tensor t(&alg, 1);
    TKey k;
    k.leg[0] = PBWMonomial::gen(i);
    t.terms_[k] = ParamScalar(Rational(1));
    return t;
  }
  static Tensor lincomb(const LieAlgebraSpec& alg, const LinComb& v) {
    Tensor t(&alg, 1);
    for (const auto& [i, c] : v) {
      TKey k;
      k.leg[0] = PBWMonomial::gen(i);
      t.add(k, c);
    }
    return t;
  }
  static Tensor cartan(const LieAlgebraSpec& alg, const CartanElement& h) {
    LinComb v;
    for (size_t c = 0; c < h.coeff.size(); ++c)
      if (!h.coeff[c].is_zero()) v.push_back({alg.cartan[c], h.coeff[c]});
    return lincomb(alg, v);
  }

  const LieAlgebraSpec* algebra() const { return alg_; }
  int rank() const { return rank_; }
  bool is_zero() const { return terms_.empty(); }
  bool truncated() const { return truncated_; }
  void mark_truncated() { truncated_ = true; }
  size_t term_count() const { return terms_.size(); }
  const std::unordered_map<TKey, ParamScalar, TKeyHash>& terms() const { return terms_; }

  void add(const TKey& k, const ParamScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  // Adds with truncation against ctx; records drops in the sticky flag.
  void add_truncated(const TKey& k, ParamScalar c, const GradingContext& ctx) {
    if (c.truncate(ctx)) truncated_ = true;
    add(k, c);
  }

  Tensor operator-() const;
  friend Tensor operator+(const Tensor& a, const Tensor& b);
  friend Tensor operator-(const Tensor& a, const Tensor& b);
  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.rank_ == b.rank_ && a.terms_ == b.terms_;
  }
  Tensor scaled(const ParamScalar& s) const;

  Tensor substitute(Param p, const ParamScalar& value) const;
  std::map<int, Tensor> parts_by(Param p) const;
  Tensor coeff_of(Param p, int k) const;
  int max_degree(Param p) const;
  bool has_negative_power(Param p) const;
  int max_pbw_degree() const;

  // Reinterpret over an isomorphic algebra with identically ordered basis
  // (used to compare scaled-family output with unscaled tables).
  Tensor with_algebra(const LieAlgebraSpec& other) const;

  // Deterministic rendering; legs joined by " (x) ".
  std::string str() const;

 private:
  const LieAlgebraSpec* alg_ = nullptr;
  int rank_ = 1;
  bool truncated_ = false;
  std::unordered_map<TKey, ParamScalar, TKeyHash> terms_;
};

using UElement = Tensor;  // rank-1 elements of the enveloping algebra

// Product with PBW straightening and grade truncation.
Tensor mul(const Tensor& a, const Tensor& b, const GradingContext& ctx);

// exp of an element every coefficient term of which has grade >= 1 (throws
// otherwise; the series would not terminate under truncation).
Tensor exp_graded(const Tensor& x, const GradingContext& ctx);

// log of unit + (grade >= 1) rest; inverse of exp_graded on its domain.
Tensor log_graded(const Tensor& u, const GradingContext& ctx);

// Inverse of a unit + (grade >= 1) element via the geometric series.
Tensor inverse_graded(const Tensor& u, const GradingContext& ctx);

// Undeformed coproduct (every generator primitive), rank 1 -> rank 2.
Tensor coproduct0(const Tensor& x, const GradingContext& ctx);

// Counit: coefficient of the unit monomial tuple.
ParamScalar counit(const Tensor& x);

// Keeps only terms whose given leg is the unit monomial and removes the leg.
Tensor counit_leg(const Tensor& x, int leg);

// Places the legs of x at positions `where` (strictly increasing) inside a
// rank `target_rank` tensor, unit monomials elsewhere: embed_leg(F, 3, {0,2})
// is the usual F_13.
Tensor embed_leg(const Tensor& x, int target_rank, const std::vector<int>& where);

// Leg permutation: result leg p[i] = input leg i.
Tensor permute_legs(const Tensor& x, const std::vector<int>& p);
inline Tensor flip12(const Tensor& x) { return permute_legs(x, {1, 0}); }

// Replaces leg `leg` by the two legs of its image under an algebra map given
// on monomials (rank r -> r+1, r <= 2). `mono_image` must be the
// multiplicative extension of a generator-level map to monomials; wrap the
// map in a MonomialMapper to get that extension with memoization.
Tensor apply_to_leg(const Tensor& x, int leg,
                    const std::function<const Tensor&(const PBWMonomial&)>& mono_image,
                    const GradingContext& ctx);

// Wraps a generator-level algebra map (gen index -> rank-2 tensor) into a
// memoized monomial-level map.
class MonomialMapper {
 public:
  MonomialMapper(const LieAlgebraSpec& alg, GradingContext ctx,
                 std::function<Tensor(int)> gen_image)
      : alg_(&alg), ctx_(ctx), gen_image_(std::move(gen_image)) {}
  const Tensor& operator()(const PBWMonomial& m) const;

 private:
  const LieAlgebraSpec* alg_;
  GradingContext ctx_;
  std::function<Tensor(int)> gen_image_;
  mutable std::mutex mu_;
  mutable std::unordered_map<PBWMonomial, Tensor, MonoHash> cache_;
};

// Straightening entry points (exposed for tests).
MonoMap straighten_times_gen(const LieAlgebraSpec& alg, const PBWMonomial& m, int g);
MonoMap straighten_word(const LieAlgebraSpec& alg, const std::vector<int>& word);

std::string render_monomial(const LieAlgebraSpec& alg, const PBWMonomial& m);

}  // namespace twistcalc
