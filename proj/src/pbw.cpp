#include "twistcalc/pbw.hpp"

#include <algorithm>
#include <climits>

namespace twistcalc {

namespace {

struct MGKey {
  PBWMonomial m;
  int g = 0;
  friend bool operator==(const MGKey& a, const MGKey& b) { return a.g == b.g && a.m == b.m; }
};
struct MGHash {
  size_t operator()(const MGKey& k) const {
    return MonoHash{}(k.m) * 1099511628211ull ^ static_cast<size_t>(k.g);
  }
};
struct MMKey {
  PBWMonomial a, b;
  friend bool operator==(const MMKey& x, const MMKey& y) { return x.a == y.a && x.b == y.b; }
};
struct MMHash {
  size_t operator()(const MMKey& k) const {
    return MonoHash{}(k.a) * 1099511628211ull ^ MonoHash{}(k.b);
  }
};

GradingContext untruncated_context() {
  GradingContext ctx;
  ctx.cap_x2 = INT_MAX;
  return ctx;
}

}  // namespace

struct PBWCaches {
  std::mutex mu;
  std::unordered_map<MGKey, std::shared_ptr<const MonoMap>, MGHash> ins;
  std::unordered_map<MMKey, std::shared_ptr<const MonoMap>, MMHash> mm;
  std::unordered_map<PBWMonomial, std::shared_ptr<const Tensor>, MonoHash> cop0;
};

namespace {

PBWCaches& caches_for(const LieAlgebraSpec& alg) {
  static std::mutex create_mu;
  std::lock_guard lk(create_mu);
  if (!alg.caches) alg.caches = std::make_shared<PBWCaches>();
  return *alg.caches;
}

void mono_acc(MonoMap& into, const PBWMonomial& m, const ParamScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = into.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) into.erase(it);
  }
}

}  // namespace

// Multiplies a PBW monomial by one generator on the right and straightens.
// Recursion: with j the top index of m and m = m' x_j,
//   m x_g = (m' x_g) x_j + m' [x_j, x_g]   when j > g,
// which terminates by the (word length, inversion count) measure.
MonoMap straighten_times_gen(const LieAlgebraSpec& alg, const PBWMonomial& m, int g) {
  if (g < 0 || g >= alg.size()) throw spec_error("generator index out of range");
  int j = m.top_index();
  if (j <= g) {
    MonoMap out;
    out[m.bump(g)] = ParamScalar(Rational(1));
    return out;
  }
  PBWCaches& caches = caches_for(alg);
  MGKey key{m, g};
  {
    std::lock_guard lk(caches.mu);
    auto it = caches.ins.find(key);
    if (it != caches.ins.end()) return *it->second;
  }
  PBWMonomial mp = m.drop_top(j);
  MonoMap out;
  for (const auto& [ma, ca] : straighten_times_gen(alg, mp, g))
    for (const auto& [mb, cb] : straighten_times_gen(alg, ma, j)) mono_acc(out, mb, ca * cb);
  for (const auto& [k, ck] : alg.bracket(j, g))
    for (const auto& [mc, cc] : straighten_times_gen(alg, mp, k)) mono_acc(out, mc, ck * cc);
  {
    std::lock_guard lk(caches.mu);
    caches.ins.try_emplace(key, std::make_shared<const MonoMap>(out));
  }
  return out;
}

MonoMap straighten_word(const LieAlgebraSpec& alg, const std::vector<int>& word) {
  MonoMap cur;
  cur[PBWMonomial::unit()] = ParamScalar(Rational(1));
  for (int g : word) {
    MonoMap next;
    for (const auto& [m, c] : cur)
      for (const auto& [m2, c2] : straighten_times_gen(alg, m, g)) mono_acc(next, m2, c * c2);
    cur = std::move(next);
  }
  return cur;
}

namespace {

// Straightened product of two monomials, memoized per algebra.
std::shared_ptr<const MonoMap> mono_mul(const LieAlgebraSpec& alg, const PBWMonomial& a,
                                        const PBWMonomial& b) {
  if (b.is_unit()) {
    auto out = std::make_shared<MonoMap>();
    (*out)[a] = ParamScalar(Rational(1));
    return out;
  }
  PBWCaches& caches = caches_for(alg);
  MMKey key{a, b};
  {
    std::lock_guard lk(caches.mu);
    auto it = caches.mm.find(key);
    if (it != caches.mm.end()) return it->second;
  }
  MonoMap cur;
  cur[a] = ParamScalar(Rational(1));
  for (int g = 0; g < alg.size(); ++g)
    for (int rep = 0; rep < b.exp[g]; ++rep) {
      MonoMap next;
      for (const auto& [m, c] : cur)
        for (const auto& [m2, c2] : straighten_times_gen(alg, m, g)) mono_acc(next, m2, c * c2);
      cur = std::move(next);
    }
  auto out = std::make_shared<const MonoMap>(std::move(cur));
  {
    std::lock_guard lk(caches.mu);
    caches.mm.try_emplace(key, out);
  }
  return out;
}

void require_same(const Tensor& a, const Tensor& b) {
  if (a.algebra() != b.algebra() || a.rank() != b.rank())
    throw spec_error("tensor operands belong to different algebras or ranks");
}

}  // namespace

Tensor Tensor::operator-() const {
  Tensor r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  if (a.algebra() == nullptr) return b;
  if (b.algebra() == nullptr) return a;
  require_same(a, b);
  Tensor r = a;
  r.truncated_ = a.truncated_ || b.truncated_;
  for (const auto& [k, c] : b.terms_) r.add(k, c);
  return r;
}

Tensor operator-(const Tensor& a, const Tensor& b) { return a + (-b); }

Tensor Tensor::scaled(const ParamScalar& s) const {
  Tensor r(alg_, rank_);
  r.truncated_ = truncated_;
  if (s.is_zero()) return r;
  for (const auto& [k, c] : terms_) r.add(k, c * s);
  return r;
}

Tensor Tensor::substitute(Param p, const ParamScalar& value) const {
  Tensor r(alg_, rank_);
  r.truncated_ = truncated_;
  for (const auto& [k, c] : terms_) r.add(k, c.substitute(p, value));
  return r;
}

std::map<int, Tensor> Tensor::parts_by(Param p) const {
  std::map<int, Tensor> out;
  for (const auto& [k, c] : terms_)
    for (const auto& [deg, part] : c.parts_by(p)) {
      auto [it, inserted] = out.try_emplace(deg, Tensor(alg_, rank_));
      it->second.add(k, part);
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

Tensor Tensor::coeff_of(Param p, int k) const {
  Tensor r(alg_, rank_);
  for (const auto& [key, c] : terms_) r.add(key, c.coeff_of(p, k));
  return r;
}

int Tensor::max_degree(Param p) const {
  int m = 0;
  for (const auto& [k, c] : terms_) m = std::max(m, c.max_degree(p));
  return m;
}

bool Tensor::has_negative_power(Param p) const {
  for (const auto& [k, c] : terms_)
    if (c.min_degree(p) < 0) return true;
  return false;
}

int Tensor::max_pbw_degree() const {
  int m = 0;
  for (const auto& [k, c] : terms_)
    m = std::max(m, k.leg[0].degree() + k.leg[1].degree() + k.leg[2].degree());
  return m;
}

Tensor Tensor::with_algebra(const LieAlgebraSpec& other) const {
  if (alg_ && other.size() != alg_->size())
    throw spec_error("with_algebra requires an identically sized basis");
  Tensor r(&other, rank_);
  r.truncated_ = truncated_;
  r.terms_ = terms_;
  return r;
}

Tensor mul(const Tensor& a, const Tensor& b, const GradingContext& ctx) {
  require_same(a, b);
  const LieAlgebraSpec& alg = *a.algebra();
  Tensor r(&alg, a.rank());
  if (a.truncated() || b.truncated()) r.mark_truncated();
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms()) {
      ParamScalar base = ca * cb;
      if (base.truncate(ctx)) r.mark_truncated();
      if (base.is_zero()) continue;
      std::array<std::shared_ptr<const MonoMap>, 3> legs;
      for (int l = 0; l < a.rank(); ++l) legs[l] = mono_mul(alg, ka.leg[l], kb.leg[l]);
      // Cross product over the legs' straightened expansions.
      std::vector<std::pair<TKey, ParamScalar>> acc{{TKey{}, base}};
      for (int l = 0; l < a.rank(); ++l) {
        std::vector<std::pair<TKey, ParamScalar>> next;
        next.reserve(acc.size() * legs[l]->size());
        for (const auto& [k, c] : acc)
          for (const auto& [m, mc] : *legs[l]) {
            TKey nk = k;
            nk.leg[l] = m;
            next.push_back({nk, c * mc});
          }
        acc = std::move(next);
      }
      for (auto& [k, c] : acc) r.add_truncated(k, std::move(c), ctx);
    }
  return r;
}

namespace {

// Every coefficient term must have positive parameter grade for a graded
// series to terminate under truncation.
void require_positive_grade(const Tensor& x, const GradingContext& ctx, const char* what) {
  for (const auto& [k, c] : x.terms())
    if (c.min_grade_x2(ctx) <= 0)
      throw spec_error(std::string(what) +
                       " requires every term to carry positive parameter grade; offending term "
                       "has coefficient " +
                       c.str());
}

}  // namespace

namespace {
long series_step_bound(const GradingContext& ctx) {
  return std::min<long>(2L * ctx.cap_x2 + 2, 1000);
}
}  // namespace

Tensor exp_graded(const Tensor& x, const GradingContext& ctx) {
  if (!x.algebra()) throw spec_error("exp of an unattached tensor");
  require_positive_grade(x, ctx, "exp_graded");
  Tensor acc = Tensor::unit(*x.algebra(), x.rank());
  if (x.truncated()) acc.mark_truncated();
  Tensor pk = acc;
  for (int k = 1; k <= series_step_bound(ctx); ++k) {
    pk = mul(pk, x, ctx);
    pk = pk.scaled(ParamScalar(Rational(1, k)));
    if (pk.is_zero()) break;
    acc = acc + pk;
  }
  return acc;
}

Tensor log_graded(const Tensor& u, const GradingContext& ctx) {
  if (!u.algebra()) throw spec_error("log of an unattached tensor");
  Tensor v = u - Tensor::unit(*u.algebra(), u.rank());
  require_positive_grade(v, ctx, "log_graded");
  Tensor acc = Tensor::zero(*u.algebra(), u.rank());
  Tensor pk = Tensor::unit(*u.algebra(), u.rank());
  if (u.truncated()) acc.mark_truncated();
  for (int k = 1; k <= series_step_bound(ctx); ++k) {
    pk = mul(pk, v, ctx);
    if (pk.is_zero()) break;
    Rational sign = (k % 2 == 1) ? Rational(1, k) : Rational(-1, k);
    acc = acc + pk.scaled(ParamScalar(sign));
  }
  return acc;
}

Tensor inverse_graded(const Tensor& u, const GradingContext& ctx) {
  if (!u.algebra()) throw spec_error("inverse of an unattached tensor");
  Tensor v = u - Tensor::unit(*u.algebra(), u.rank());
  require_positive_grade(v, ctx, "inverse_graded");
  Tensor acc = Tensor::unit(*u.algebra(), u.rank());
  Tensor pk = acc;
  if (u.truncated()) acc.mark_truncated();
  for (int k = 1; k <= series_step_bound(ctx); ++k) {
    pk = mul(pk, v, ctx);
    if (pk.is_zero()) break;
    acc = acc + (k % 2 == 1 ? -pk : pk);
  }
  return acc;
}

namespace {

std::shared_ptr<const Tensor> cop0_mono(const LieAlgebraSpec& alg, const PBWMonomial& m) {
  if (m.is_unit()) return std::make_shared<const Tensor>(Tensor::unit(alg, 2));
  PBWCaches& caches = caches_for(alg);
  {
    std::lock_guard lk(caches.mu);
    auto it = caches.cop0.find(m);
    if (it != caches.cop0.end()) return it->second;
  }
  int top = m.top_index();
  auto prefix = cop0_mono(alg, m.drop_top(top));
  Tensor prim(&alg, 2);
  TKey k1;
  k1.leg[0] = PBWMonomial::gen(top);
  prim.add(k1, ParamScalar(Rational(1)));
  TKey k2;
  k2.leg[1] = PBWMonomial::gen(top);
  prim.add(k2, ParamScalar(Rational(1)));
  auto out = std::make_shared<const Tensor>(mul(*prefix, prim, untruncated_context()));
  {
    std::lock_guard lk(caches.mu);
    caches.cop0.try_emplace(m, out);
  }
  return out;
}

}  // namespace

Tensor coproduct0(const Tensor& x, const GradingContext& ctx) {
  if (x.rank() != 1) throw spec_error("coproduct0 expects a rank-1 element");
  const LieAlgebraSpec& alg = *x.algebra();
  Tensor r(&alg, 2);
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    auto image = cop0_mono(alg, k.leg[0]);
    for (const auto& [ik, ic] : image->terms()) r.add_truncated(ik, ic * c, ctx);
  }
  return r;
}

ParamScalar counit(const Tensor& x) {
  if (x.rank() != 1) throw spec_error("counit expects a rank-1 element");
  auto it = x.terms().find(TKey{});
  return it == x.terms().end() ? ParamScalar() : it->second;
}

Tensor counit_leg(const Tensor& x, int leg) {
  if (leg < 0 || leg >= x.rank()) throw spec_error("counit_leg: leg out of range");
  Tensor r(x.algebra(), x.rank() - 1);
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    if (!k.leg[leg].is_unit()) continue;
    TKey nk;
    int pos = 0;
    for (int l = 0; l < x.rank(); ++l)
      if (l != leg) nk.leg[pos++] = k.leg[l];
    r.add(nk, c);
  }
  return r;
}

Tensor embed_leg(const Tensor& x, int target_rank, const std::vector<int>& where) {
  if (static_cast<int>(where.size()) != x.rank())
    throw spec_error("embed_leg: need one target position per leg");
  for (size_t i = 0; i < where.size(); ++i) {
    if (where[i] < 0 || where[i] >= target_rank) throw spec_error("embed_leg: position out of range");
    if (i > 0 && where[i] <= where[i - 1])
      throw spec_error("embed_leg: positions must be strictly increasing");
  }
  Tensor r(x.algebra(), target_rank);
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    TKey nk;
    for (int l = 0; l < x.rank(); ++l) nk.leg[where[l]] = k.leg[l];
    r.add(nk, c);
  }
  return r;
}

Tensor permute_legs(const Tensor& x, const std::vector<int>& p) {
  if (static_cast<int>(p.size()) != x.rank()) throw spec_error("permute_legs: bad permutation size");
  Tensor r(x.algebra(), x.rank());
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    TKey nk;
    for (int l = 0; l < x.rank(); ++l) nk.leg[p[l]] = k.leg[l];
    r.add(nk, c);
  }
  return r;
}

Tensor apply_to_leg(const Tensor& x, int leg,
                    const std::function<const Tensor&(const PBWMonomial&)>& mono_image,
                    const GradingContext& ctx) {
  if (x.rank() >= 3) throw spec_error("apply_to_leg: resulting rank would exceed 3");
  if (leg < 0 || leg >= x.rank()) throw spec_error("apply_to_leg: leg out of range");
  Tensor r(x.algebra(), x.rank() + 1);
  if (x.truncated()) r.mark_truncated();
  for (const auto& [k, c] : x.terms()) {
    const Tensor& image = mono_image(k.leg[leg]);
    if (image.truncated()) r.mark_truncated();
    for (const auto& [ik, ic] : image.terms()) {
      TKey nk;
      int pos = 0;
      for (int l = 0; l < leg; ++l) nk.leg[pos++] = k.leg[l];
      nk.leg[pos++] = ik.leg[0];
      nk.leg[pos++] = ik.leg[1];
      for (int l = leg + 1; l < x.rank(); ++l) nk.leg[pos++] = k.leg[l];
      r.add_truncated(nk, c * ic, ctx);
    }
  }
  return r;
}

const Tensor& MonomialMapper::operator()(const PBWMonomial& m) const {
  {
    std::lock_guard lk(mu_);
    auto it = cache_.find(m);
    if (it != cache_.end()) return it->second;
  }
  Tensor value(alg_, 2);
  if (m.is_unit()) {
    value = Tensor::unit(*alg_, 2);
  } else {
    int top = m.top_index();
    const Tensor& prefix = (*this)(m.drop_top(top));
    value = mul(prefix, gen_image_(top), ctx_);
  }
  std::lock_guard lk(mu_);
  auto [it, inserted] = cache_.try_emplace(m, std::move(value));
  return it->second;
}

std::string render_monomial(const LieAlgebraSpec& alg, const PBWMonomial& m) {
  if (m.is_unit()) return "1";
  std::string out;
  for (int i = 0; i < alg.size(); ++i) {
    if (!m.exp[i]) continue;
    if (!out.empty()) out += " ";
    out += alg.gen_names[i];
    if (m.exp[i] > 1) out += "^" + std::to_string(m.exp[i]);
  }
  return out;
}

std::string Tensor::str() const {
  if (terms_.empty()) return "0";
  std::map<TKey, ParamScalar> sorted;
  for (const auto& [k, c] : terms_) sorted.emplace(k, c);
  std::string out;
  bool first = true;
  for (const auto& [k, c] : sorted) {
    ParamScalar coeff = c;
    bool neg = false;
    if (coeff.term_count() == 1 && coeff.terms()[0].second < Rational(0)) {
      neg = true;
      coeff = -coeff;
    }
    if (first) {
      if (neg) out += "- ";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (int l = 0; l < rank_; ++l) {
      if (l) mono += " (x) ";
      mono += render_monomial(*alg_, k.leg[l]);
    }
    bool unit_mono = true;
    for (int l = 0; l < rank_; ++l) unit_mono = unit_mono && k.leg[l].is_unit();
    std::string cs = coeff.str();
    bool needs_parens = coeff.term_count() > 1;
    if (unit_mono) {
      out += needs_parens ? "(" + cs + ")" : cs;
    } else if (coeff.term_count() == 1 && coeff.is_rational() && coeff.as_rational().is_one()) {
      out += mono;
    } else {
      out += (needs_parens ? "(" + cs + ")" : cs) + "*" + mono;
    }
  }
  return out;
}

}  // namespace twistcalc
