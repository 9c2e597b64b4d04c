#include "twistcalc/rep.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "twistcalc/threads.hpp"

namespace twistcalc {

namespace {

ParamScalar ps(const Rational& r) { return ParamScalar(r); }

}  // namespace

// ---------------------------------------------------------------------------
// PolyMatrix

PolyMatrix PolyMatrix::identity(int n) {
  PolyMatrix m(n);
  for (int i = 0; i < n; ++i) m.rows_[i].push_back({i, ps(Rational(1))});
  return m;
}

void PolyMatrix::add_at(int r, int c, const ParamScalar& v) {
  if (v.is_zero()) return;
  Row& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    it->second += v;
    if (it->second.is_zero()) row.erase(it);
  } else {
    row.insert(it, {c, v});
  }
}

ParamScalar PolyMatrix::at(int r, int c) const {
  const Row& row = rows_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const auto& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) return it->second;
  return ParamScalar();
}

bool PolyMatrix::is_zero() const {
  for (const Row& r : rows_)
    if (!r.empty()) return false;
  return true;
}

int PolyMatrix::nonzero_count() const {
  int n = 0;
  for (const Row& r : rows_) n += static_cast<int>(r.size());
  return n;
}

std::string PolyMatrix::describe_nonzeros(int limit) const {
  int total = nonzero_count();
  if (total == 0) return "zero";
  std::string s = std::to_string(total) + " nonzero entries:";
  int shown = 0;
  for (int r = 0; r < n_ && shown < limit; ++r)
    for (const auto& [c, v] : rows_[r]) {
      s += " (" + std::to_string(r) + "," + std::to_string(c) + "): " + v.str() + ";";
      if (++shown >= limit) break;
    }
  if (shown < total) s += " ...";
  return s;
}

PolyMatrix PolyMatrix::scaled(const ParamScalar& s) const {
  PolyMatrix out(n_);
  if (s.is_zero()) return out;
  for (int r = 0; r < n_; ++r)
    for (const auto& [c, v] : rows_[r]) {
      ParamScalar w = v * s;
      if (!w.is_zero()) out.rows_[r].push_back({c, std::move(w)});
    }
  return out;
}

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.n_ != b.n_) throw spec_error("matrix sum: dimension mismatch");
  PolyMatrix out(a.n_);
  for (int r = 0; r < a.n_; ++r) {
    const auto& ra = a.rows_[r];
    const auto& rb = b.rows_[r];
    auto ia = ra.begin();
    auto ib = rb.begin();
    auto& dst = out.rows_[r];
    while (ia != ra.end() || ib != rb.end()) {
      if (ib == rb.end() || (ia != ra.end() && ia->first < ib->first)) {
        dst.push_back(*ia++);
      } else if (ia == ra.end() || ib->first < ia->first) {
        dst.push_back(*ib++);
      } else {
        ParamScalar v = ia->second + ib->second;
        if (!v.is_zero()) dst.push_back({ia->first, std::move(v)});
        ++ia;
        ++ib;
      }
    }
  }
  return out;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
  return a + b.scaled(ps(Rational(-1)));
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
  return a.n_ == b.n_ && a.rows_ == b.rows_;
}

PolyMatrix mul(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.n_ != b.n_) throw spec_error("matrix product: dimension mismatch");
  PolyMatrix out(a.n_);
  auto work = [&](int lo, int hi) {
    std::map<int, ParamScalar> acc;
    for (int r = lo; r < hi; ++r) {
      acc.clear();
      for (const auto& [k, va] : a.rows_[r])
        for (const auto& [c, vb] : b.rows_[k]) acc[c] += va * vb;
      auto& dst = out.rows_[r];
      for (auto& [c, v] : acc)
        if (!v.is_zero()) dst.push_back({c, std::move(v)});
    }
  };
  int threads = std::min(thread_budget(), a.n_ / 64);
  if (threads <= 1) {
    work(0, a.n_);
    return out;
  }
  std::vector<std::thread> pool;
  std::mutex err_mu;
  std::exception_ptr err;
  int chunk = (a.n_ + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    int lo = t * chunk, hi = std::min(a.n_, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        work(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  return out;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix out(a.n_ * b.n_);
  for (int ra = 0; ra < a.n_; ++ra)
    for (int rb = 0; rb < b.n_; ++rb) {
      auto& dst = out.rows_[ra * b.n_ + rb];
      for (const auto& [ca, va] : a.rows_[ra])
        for (const auto& [cb, vb] : b.rows_[rb]) {
          ParamScalar v = va * vb;
          if (!v.is_zero()) dst.push_back({ca * b.n_ + cb, std::move(v)});
        }
    }
  return out;
}

PolyMatrix mat_exp(const PolyMatrix& a) {
  PolyMatrix acc = PolyMatrix::identity(a.dim());
  PolyMatrix term = a;
  for (int k = 1; !term.is_zero(); ++k) {
    if (k > a.dim())
      throw arith_error("matrix exponential does not terminate: the argument is not nilpotent");
    acc = acc + term;
    term = mul(term, a).scaled(ps(Rational(1, k + 1)));
  }
  return acc;
}

PolyMatrix mat_log(const PolyMatrix& u) {
  PolyMatrix nil = u - PolyMatrix::identity(u.dim());
  PolyMatrix acc(u.dim());
  PolyMatrix pw = nil;
  for (int k = 1; !pw.is_zero(); ++k) {
    if (k > u.dim())
      throw arith_error("matrix logarithm does not terminate: the argument is not unipotent");
    acc = acc + pw.scaled(ps(Rational(k % 2 ? 1 : -1, k)));
    pw = mul(pw, nil);
  }
  return acc;
}

PolyMatrix truncated(const PolyMatrix& m, const GradingContext& ctx) {
  PolyMatrix out(m.n_);
  for (int r = 0; r < m.n_; ++r)
    for (const auto& [c, v] : m.rows_[r]) {
      ParamScalar w = v;
      w.truncate(ctx);
      if (!w.is_zero()) out.rows_[r].push_back({c, std::move(w)});
    }
  return out;
}

// ---------------------------------------------------------------------------
// Representations

namespace {

void require_exact(const Representation& rep) {
  std::string defect = homomorphism_defect(rep);
  if (!defect.empty())
    throw spec_error(rep.name + " representation fails the bracket homomorphism: " + defect);
}

PolyMatrix matrix_unit(int d, int r, int c) {
  PolyMatrix m(d);
  m.add_at(r, c, ParamScalar(Rational(1)));
  return m;
}

}  // namespace

Representation fundamental_sl(const LieAlgebraSpec& alg) {
  int d = 0;
  auto indexed = [](const std::string& name) {
    return name.size() == 3 && (name[0] == 'e' || name[0] == 'h') &&
           std::isdigit(static_cast<unsigned char>(name[1])) &&
           std::isdigit(static_cast<unsigned char>(name[2]));
  };
  for (const std::string& name : alg.gen_names)
    if (indexed(name)) d = std::max({d, name[1] - '0', name[2] - '0'});
  if (d < 2) throw spec_error("fundamental_sl needs the matrix-unit e_ab basis");

  Representation rep;
  rep.name = "fundamental";
  rep.alg = &alg;
  rep.dim = d;
  for (const std::string& name : alg.gen_names) {
    if (name == "hperp") {
      if (d != 3) throw spec_error("fundamental_sl: hperp requires the 3 x 3 defining space");
      PolyMatrix m(d);
      m.add_at(0, 0, ps(Rational(1, 2)));
      m.add_at(1, 1, ps(Rational(-1)));
      m.add_at(2, 2, ps(Rational(1, 2)));
      rep.gen.push_back(std::move(m));
      continue;
    }
    if (!indexed(name))
      throw spec_error("fundamental_sl: unrecognized generator " + name);
    int a = name[1] - '0' - 1, b = name[2] - '0' - 1;
    if (name[0] == 'e') {
      rep.gen.push_back(matrix_unit(d, a, b));
    } else {
      PolyMatrix m(d);
      m.add_at(a, a, ps(Rational(1, 2)));
      m.add_at(b, b, ps(Rational(-1, 2)));
      rep.gen.push_back(std::move(m));
    }
  }
  require_exact(rep);
  return rep;
}

Representation adjoint_rep(const LieAlgebraSpec& alg) {
  int d = alg.size();
  Representation rep;
  rep.name = "adjoint";
  rep.alg = &alg;
  rep.dim = d;
  for (int i = 0; i < d; ++i) {
    PolyMatrix m(d);
    for (int j = 0; j < d; ++j)
      for (const auto& [k, coeff] : alg.bracket(i, j)) m.add_at(k, j, coeff);
    rep.gen.push_back(std::move(m));
  }
  require_exact(rep);
  return rep;
}

Representation borel2_rep(const LieAlgebraSpec& alg) {
  if (alg.size() != 2 || alg.gen_names[0] != "H" || alg.gen_names[1] != "E")
    throw spec_error("borel2_rep expects the two-dimensional {H, E} algebra");
  Representation rep;
  rep.name = "b2";
  rep.alg = &alg;
  rep.dim = 2;
  PolyMatrix h(2);
  h.add_at(0, 0, ps(Rational(1, 2)));
  h.add_at(1, 1, ps(Rational(-1, 2)));
  rep.gen.push_back(std::move(h));
  rep.gen.push_back(matrix_unit(2, 0, 1));
  require_exact(rep);
  return rep;
}

PolyMatrix bracket_residual(const Representation& rep, int i, int j) {
  PolyMatrix lie(rep.dim);
  for (const auto& [k, coeff] : rep.alg->bracket(i, j))
    lie = lie + rep.gen[k].scaled(coeff);
  return lie - (mul(rep.gen[i], rep.gen[j]) - mul(rep.gen[j], rep.gen[i]));
}

std::string homomorphism_defect(const Representation& rep) {
  for (int i = 0; i < rep.alg->size(); ++i)
    for (int j = i + 1; j < rep.alg->size(); ++j) {
      PolyMatrix res = bracket_residual(rep, i, j);
      if (!res.is_zero())
        return "[" + rep.alg->gen_names[i] + ", " + rep.alg->gen_names[j] +
               "]: " + res.describe_nonzeros();
    }
  return "";
}

// ---------------------------------------------------------------------------
// Evaluation

PolyMatrix eval(const Representation& rep, const Tensor& x) {
  if (x.algebra() != rep.alg)
    throw spec_error("eval: element and representation use different algebras");
  int rank = x.rank();
  int n = rep.dim;
  for (int l = 1; l < rank; ++l) n *= rep.dim;
  PolyMatrix out(n);

  std::map<PBWMonomial, PolyMatrix> memo;
  auto leg = [&](const PBWMonomial& m) -> const PolyMatrix& {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    PolyMatrix acc = PolyMatrix::identity(rep.dim);
    for (int g = 0; g < rep.alg->size(); ++g)
      for (int k = 0; k < m.exp[g]; ++k) acc = mul(acc, rep.gen[g]);
    return memo.emplace(m, std::move(acc)).first->second;
  };

  for (const auto& [key, coeff] : x.terms()) {
    PolyMatrix t = leg(key.leg[0]);
    for (int l = 1; l < rank; ++l) t = kron(t, leg(key.leg[l]));
    out = out + t.scaled(coeff);
  }
  return out;
}

namespace {

// Closed-form exponent of a structured factor, as matrices:
//   a     left leg of exponent = scale * a (x) b
//   b     right leg
//   db    Delta0(b) evaluated through the tensor-product representation
// For the Jordanian shape b = log(group); for the extension shape
// b = e_b * group^dress. Delta0 is an algebra map, so it passes through
// logs, exponentials and products, and Delta0(group) of a polynomial group
// element is again a finite polynomial. Nothing here touches a truncated
// series, which is what makes the representation checks exact: the symbolic
// exponent's truncation tail would otherwise leak into representations where
// the dropped monomials, or their coproduct splits, act nontrivially.
struct FactorMats {
  PolyMatrix a, b, db;
  ParamScalar scale;
};

bool has_closed_form(const TwistFactor& f) {
  return f.ext_a >= 0 || (!f.h.coeff.empty() && !f.group.is_zero());
}

FactorMats factor_closed_form(const Representation& rep, const TwistFactor& f,
                              const GradingContext& ctx) {
  if (f.group.truncated())
    throw spec_error("factor " + f.label +
                     " stores a truncated group element; rebuild the chain at a higher order");
  PolyMatrix u = eval(rep, f.group);
  PolyMatrix du = eval(rep, coproduct0(f.group, ctx));
  if (f.ext_a >= 0) {
    PolyMatrix idd = PolyMatrix::identity(rep.dim);
    PolyMatrix bprim = kron(rep.gen[f.ext_b], idd) + kron(idd, rep.gen[f.ext_b]);
    return {rep.gen[f.ext_a], mul(rep.gen[f.ext_b], mat_exp(mat_log(u).scaled(f.dress))),
            mul(bprim, mat_exp(mat_log(du).scaled(f.dress))), f.scale};
  }
  return {eval(rep, Tensor::cartan(*rep.alg, f.h)), mat_log(u), mat_log(du), f.scale};
}

}  // namespace

PolyMatrix twist_matrix(const Representation& rep, const TwistChain& chain) {
  PolyMatrix m = PolyMatrix::identity(rep.dim * rep.dim);
  // factors are stored in application order, so each later factor multiplies
  // from the left
  for (const TwistFactor& f : chain.factors) {
    PolyMatrix e(rep.dim * rep.dim);
    if (has_closed_form(f)) {
      FactorMats fm = factor_closed_form(rep, f, chain.ctx);
      e = kron(fm.a, fm.b).scaled(fm.scale);
    } else {
      e = eval(rep, f.exponent);
    }
    m = mul(mat_exp(e), m);
  }
  return m;
}

PolyMatrix cocycle_residual_in_rep(const TwistChain& chain, const Representation& rep) {
  if (chain.alg != rep.alg)
    throw spec_error("cocycle_residual_in_rep: chain and representation algebras differ");
  const GradingContext& ctx = chain.ctx;
  MonomialMapper und(*chain.alg, ctx, [aptr = chain.alg, ctx](int g) {
    return coproduct0(Tensor::gen(*aptr, g), ctx);
  });
  int d = rep.dim;
  int d3 = d * d * d;
  PolyMatrix idd = PolyMatrix::identity(d);
  PolyMatrix f12 = PolyMatrix::identity(d3);
  PolyMatrix d1f = f12, f23 = f12, d2f = f12;
  for (const TwistFactor& f : chain.factors) {
    PolyMatrix e12(d3), e23(d3), e1(d3), e2(d3);
    if (has_closed_form(f)) {
      // Both legs of the exponent come from the factor's closed form, and
      // the coproduct legs go through the tensor-product representation;
      // the left legs (a Cartan element or a root vector) are primitive.
      FactorMats fm = factor_closed_form(rep, f, ctx);
      PolyMatrix ab = kron(fm.a, fm.b);
      e12 = kron(ab, idd).scaled(fm.scale);
      e23 = kron(idd, ab).scaled(fm.scale);
      e1 = kron(kron(fm.a, idd) + kron(idd, fm.a), fm.b).scaled(fm.scale);
      e2 = kron(fm.a, fm.db).scaled(fm.scale);
    } else {
      // Generic factors evaluate through their exponent tensor. Delta0 is an
      // algebra map, so it passes through the exponential and only needs to
      // act on the exponent; this is faithful exactly when the exponent is a
      // genuine polynomial (grade-preserving maps lose nothing on it).
      const Tensor& t = f.exponent;
      e12 = eval(rep, embed_leg(t, 3, {0, 1}));
      e23 = eval(rep, embed_leg(t, 3, {1, 2}));
      e1 = eval(rep, apply_to_leg(t, 0, std::cref(und), ctx));
      e2 = eval(rep, apply_to_leg(t, 1, std::cref(und), ctx));
    }
    f12 = mul(mat_exp(e12), f12);
    f23 = mul(mat_exp(e23), f23);
    d1f = mul(mat_exp(e1), d1f);
    d2f = mul(mat_exp(e2), d2f);
  }
  return mul(f12, d1f) - mul(f23, d2f);
}

PolyMatrix qybe_residual_in_rep(const Tensor& R, const Representation& rep) {
  PolyMatrix r12 = eval(rep, embed_leg(R, 3, {0, 1}));
  PolyMatrix r13 = eval(rep, embed_leg(R, 3, {0, 2}));
  PolyMatrix r23 = eval(rep, embed_leg(R, 3, {1, 2}));
  return mul(mul(r12, r13), r23) - mul(mul(r23, r13), r12);
}

PolyMatrix triangularity_residual_in_rep(const Tensor& R, const Representation& rep) {
  return mul(eval(rep, flip12(R)), eval(rep, R)) -
         PolyMatrix::identity(rep.dim * rep.dim);
}

}  // namespace twistcalc
