#include "twistcalc/paramscalar.hpp"

#include <algorithm>

namespace twistcalc {

ParamScalar ParamScalar::param(Param p, int power) {
  if (power < 0) throw arith_error("negative power outside Laurent mode");
  ParamScalar s;
  if (power == 0) return ParamScalar(Rational(1));
  PExp e;
  e.e[static_cast<int>(p)] = static_cast<int16_t>(power);
  s.terms_.push_back({e, Rational(1)});
  return s;
}

ParamScalar ParamScalar::laurent_eps(int k) {
  ParamScalar s;
  if (k == 0) return ParamScalar(Rational(1));
  PExp e;
  e.e[static_cast<int>(Param::eps)] = static_cast<int16_t>(k);
  s.terms_.push_back({e, Rational(1)});
  return s;
}

void ParamScalar::prune() {
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [](const auto& t) { return t.second.is_zero(); }),
               terms_.end());
}

ParamScalar ParamScalar::operator-() const {
  ParamScalar r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

ParamScalar operator+(const ParamScalar& a, const ParamScalar& b) {
  ParamScalar r;
  r.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (ia != a.terms_.end() && ib != b.terms_.end()) {
    if (ia->first < ib->first) {
      r.terms_.push_back(*ia++);
    } else if (ib->first < ia->first) {
      r.terms_.push_back(*ib++);
    } else {
      Rational c = ia->second + ib->second;
      if (!c.is_zero()) r.terms_.push_back({ia->first, c});
      ++ia;
      ++ib;
    }
  }
  r.terms_.insert(r.terms_.end(), ia, a.terms_.end());
  r.terms_.insert(r.terms_.end(), ib, b.terms_.end());
  return r;
}

ParamScalar operator-(const ParamScalar& a, const ParamScalar& b) { return a + (-b); }

ParamScalar operator*(const ParamScalar& a, const ParamScalar& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::map<PExp, Rational> acc;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      PExp e;
      for (int i = 0; i < kNumParams; ++i) {
        int v = ea.e[i] + eb.e[i];
        if (v > INT16_MAX || v < INT16_MIN) throw arith_error("parameter exponent overflow");
        e.e[i] = static_cast<int16_t>(v);
      }
      auto [it, inserted] = acc.try_emplace(e, ca * cb);
      if (!inserted) it->second += cb * ca;
    }
  ParamScalar r;
  r.terms_.reserve(acc.size());
  for (auto& [e, c] : acc)
    if (!c.is_zero()) r.terms_.push_back({e, c});
  return r;
}

ParamScalar ParamScalar::divided_by(const Rational& v) const {
  if (v.is_zero()) throw arith_error("scalar division by zero");
  ParamScalar r = *this;
  for (auto& t : r.terms_) t.second /= v;
  return r;
}

ParamScalar ParamScalar::substitute(Param p, const Rational& value) const {
  return substitute(p, ParamScalar(value));
}

ParamScalar ParamScalar::substitute(Param p, const ParamScalar& value) const {
  int ip = static_cast<int>(p);
  ParamScalar out;
  for (const auto& [e, c] : terms_) {
    int k = e.e[ip];
    if (k < 0) throw arith_error("cannot substitute into a negative power of " +
                                 std::string(kParamNames[ip]));
    PExp base = e;
    base.e[ip] = 0;
    ParamScalar term;
    term.terms_.push_back({base, c});
    ParamScalar vp(Rational(1));
    for (int i = 0; i < k; ++i) vp *= value;
    out += term * vp;
  }
  return out;
}

int ParamScalar::max_degree(Param p) const {
  int ip = static_cast<int>(p), m = 0;
  for (const auto& [e, c] : terms_) m = std::max(m, static_cast<int>(e.e[ip]));
  return m;
}

int ParamScalar::min_degree(Param p) const {
  if (terms_.empty()) return 0;
  int ip = static_cast<int>(p), m = INT16_MAX;
  for (const auto& [e, c] : terms_) m = std::min(m, static_cast<int>(e.e[ip]));
  return m;
}

ParamScalar ParamScalar::coeff_of(Param p, int k) const {
  int ip = static_cast<int>(p);
  ParamScalar out;
  for (const auto& [e, c] : terms_)
    if (e.e[ip] == k) {
      PExp base = e;
      base.e[ip] = 0;
      out.terms_.push_back({base, c});
    }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::map<int, ParamScalar> ParamScalar::parts_by(Param p) const {
  int ip = static_cast<int>(p);
  std::map<int, ParamScalar> out;
  for (const auto& [e, c] : terms_) {
    PExp base = e;
    base.e[ip] = 0;
    ParamScalar t;
    t.terms_.push_back({base, c});
    out[e.e[ip]] += t;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  return out;
}

bool ParamScalar::truncate(const GradingContext& ctx) {
  size_t before = terms_.size();
  terms_.erase(std::remove_if(terms_.begin(), terms_.end(),
                              [&](const auto& t) { return ctx.grade_x2(t.first) > ctx.cap_x2; }),
               terms_.end());
  return terms_.size() != before;
}

long ParamScalar::min_grade_x2(const GradingContext& ctx) const {
  if (terms_.empty()) return 0;
  long m = ctx.grade_x2(terms_[0].first);
  for (const auto& [e, c] : terms_) m = std::min(m, ctx.grade_x2(e));
  return m;
}

bool ParamScalar::has_negative_power() const {
  for (const auto& [e, c] : terms_)
    for (int16_t v : e.e)
      if (v < 0) return true;
  return false;
}

std::string ParamScalar::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational ca = c;
    bool neg = ca < Rational(0);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (neg) ca = -ca;
    std::string mono;
    for (int i = 0; i < kNumParams; ++i) {
      if (e.e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += kParamNames[i];
      if (e.e[i] != 1) mono += "^" + std::to_string(e.e[i]);
    }
    if (mono.empty()) {
      out += ca.str();
    } else if (ca.is_one()) {
      out += mono;
    } else {
      out += ca.str() + "*" + mono;
    }
    first = false;
  }
  return out;
}

}  // namespace twistcalc
