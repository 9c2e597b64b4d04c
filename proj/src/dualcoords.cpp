#include "twistcalc/dualcoords.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "twistcalc/tables.hpp"
#include "twistcalc/threads.hpp"

namespace twistcalc {

namespace {

ParamScalar ps_par(Param p, int power = 1) { return ParamScalar::param(p, power); }

// Scaling a capped tensor by a graded parameter pushes terms above the cap;
// cut them before they reach a comparison or a residual.
Tensor trunc(const Tensor& x, const GradingContext& ctx) {
  Tensor out = Tensor::zero(*x.algebra(), x.rank());
  for (const auto& [key, coeff] : x.terms()) out.add_truncated(key, coeff, ctx);
  return out;
}

bool pure_root_power(const PBWMonomial& m, int root) {
  for (int i = 0; i < kMaxGens; ++i)
    if (i != root && m.exp[i]) return false;
  return true;
}

bool single_letter(const PBWMonomial& m, int letter) {
  return m.exp[letter] == 1 && m.degree() == 1;
}

int max_par_power(const GradingContext& ctx, Param par) {
  int w = ctx.weight_x2[static_cast<int>(par)];
  if (w <= 0) throw spec_error("coordinate parameter must carry positive grade");
  return ctx.cap_x2 / w;
}

// Memoized evaluation of #-containers: a PBW key names the product of the
// per-slot images taken in basis order.
struct MapEval {
  const CoordinateMap& m;
  const GradingContext& ctx;
  std::unordered_map<PBWMonomial, Tensor, MonoHash> legs;

  MapEval(const CoordinateMap& cm, const GradingContext& c) : m(cm), ctx(c) {}

  const Tensor& leg(const PBWMonomial& mono) {
    auto it = legs.find(mono);
    if (it != legs.end()) return it->second;
    Tensor acc = Tensor::unit(*m.alg, 1);
    for (int i = 0; i < m.alg->size(); ++i) {
      for (int k = 0; k < mono.exp[i]; ++k) {
        if (m.forward[i].is_zero())
          throw spec_error("incomplete coordinate map: no image for " + m.labels[i]);
        acc = mul(acc, m.forward[i], ctx);
      }
    }
    return legs.emplace(mono, std::move(acc)).first->second;
  }

  Tensor full(const TKey& key, int rank) {
    Tensor acc = embed_leg(leg(key.leg[0]), rank, {0});
    for (int l = 1; l < rank; ++l) acc = mul(acc, embed_leg(leg(key.leg[l]), rank, {l}), ctx);
    return acc;
  }
};

std::string render_labels(const CoordinateMap& m, const PBWMonomial& mono) {
  if (mono.is_unit()) return "1";
  std::string out;
  for (int i = 0; i < m.alg->size(); ++i) {
    if (!mono.exp[i]) continue;
    if (!out.empty()) out += " ";
    out += m.labels[i];
    if (mono.exp[i] > 1) out += "^" + std::to_string(mono.exp[i]);
  }
  return out;
}

}  // namespace

int CoordinateMap::shift_of(const PBWMonomial& mono) const {
  int s = 0;
  for (int i = 0; i < alg->size(); ++i) s += mono.exp[i] * shifts[i];
  return s;
}

int CoordinateMap::label_index(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

CoordinateMap make_map(const LieAlgebraSpec& alg, Param par, const DualBasis& basis,
                       std::vector<UElement> forward, const GradingContext&) {
  int n = alg.size();
  if (static_cast<int>(basis.elements.size()) != n ||
      static_cast<int>(forward.size()) != n)
    throw spec_error("coordinate map needs one image per generator");
  CoordinateMap m;
  m.alg = &alg;
  m.par = par;
  m.forward = std::move(forward);
  m.leads.resize(n);
  m.shifts.resize(n, 0);
  for (int i = 0; i < n; ++i) {
    m.labels.push_back(basis.names[i] + "#");
    if (m.forward[i].is_zero()) continue;  // slot left open; flagged on use
    int s = 0;
    bool first = true;
    for (const auto& [key, c] : m.forward[i].terms()) {
      int d = c.min_degree(par);
      if (first || d < s) s = d;
      first = false;
    }
    if (s < 0) throw spec_error("image of " + m.labels[i] + " has negative parameter grade");
    m.shifts[i] = s;
    Tensor head = m.forward[i].coeff_of(par, s);
    LinComb lead;
    for (const auto& [key, c] : head.terms()) {
      if (key.leg[0].degree() != 1)
        throw spec_error("lead of " + m.labels[i] + " is not linear: " + head.str());
      lead.push_back({key.leg[0].top_index(), c});
    }
    std::sort(lead.begin(), lead.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (lead.empty() || lead.front().first != i ||
        !(lead.front().second == ParamScalar(Rational(1))))
      throw spec_error("lead of " + m.labels[i] +
                       " must be the generator itself plus higher-index terms: " + head.str());
    m.leads[i] = std::move(lead);
  }
  return m;
}

CoordinateMap identity_map(const LieAlgebraSpec& alg, Param par) {
  GradingContext ctx = GradingContext::standard(1);
  std::vector<UElement> fwd;
  for (int i = 0; i < alg.size(); ++i) fwd.push_back(Tensor::gen(alg, i));
  CoordinateMap m = make_map(alg, par, standard_dual_basis(alg), std::move(fwd), ctx);
  for (int i = 0; i < alg.size(); ++i)
    m.inverse.push_back({Tensor::gen(alg, i), 0});
  return m;
}

CoordinateMap sl3_map(const LieAlgebraSpec& alg, Param par, const GradingContext& ctx) {
  DualBasis basis = sl3_dual_basis(alg);
  std::vector<UElement> fwd;
  for (int i = 0; i < alg.size(); ++i)
    fwd.push_back(sl3_dual_image(alg, basis.names[i], par, ctx));
  CoordinateMap m = make_map(alg, par, basis, std::move(fwd), ctx);
  std::string defect = invert_map(m, ctx);
  if (!defect.empty()) throw spec_error("sl3 coordinate map does not invert: " + defect);
  return m;
}

std::string hash_str(const CoordinateMap& m, const Tensor& c) {
  if (c.is_zero()) return "0";
  std::map<TKey, ParamScalar> sorted;
  for (const auto& [k, q] : c.terms()) sorted.emplace(k, q);
  std::string out;
  bool first = true;
  for (const auto& [k, q] : sorted) {
    ParamScalar coeff = q;
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
    for (int l = 0; l < c.rank(); ++l) {
      if (l) mono += " (x) ";
      mono += render_labels(m, k.leg[l]);
    }
    bool unit_mono = true;
    for (int l = 0; l < c.rank(); ++l) unit_mono = unit_mono && k.leg[l].is_unit();
    std::string cs = coeff.str();
    bool parens = coeff.term_count() > 1;
    if (unit_mono) {
      out += parens ? "(" + cs + ")" : cs;
    } else if (coeff.term_count() == 1 && coeff.is_rational() && coeff.as_rational().is_one()) {
      out += mono;
    } else {
      out += (parens ? "(" + cs + ")" : cs) + "*" + mono;
    }
  }
  return out;
}

Tensor apply_map(const CoordinateMap& m, const Tensor& x, const GradingContext& ctx) {
  MapEval ev(m, ctx);
  Tensor out = Tensor::zero(*m.alg, x.rank());
  for (const auto& [key, c] : x.terms()) {
    Tensor img = ev.full(key, x.rank()).scaled(c);
    for (const auto& [k2, c2] : img.terms()) out.add_truncated(k2, c2, ctx);
  }
  return out;
}

RewriteOutcome rewrite_in_dual(const CoordinateMap& m, const Tensor& x,
                               const GradingContext& ctx) {
  RewriteOutcome out;
  out.expr = Tensor::zero(*m.alg, x.rank());
  if (x.has_negative_power(m.par)) {
    out.ok = false;
    out.diagnostic = "negative parameter powers cannot be rewritten";
    return out;
  }
  MapEval ev(m, ctx);
  Tensor residual = trunc(x, ctx);
  int cap = max_par_power(ctx, m.par);
  int guard = 0;
  for (int k = 0; k <= cap && !residual.is_zero(); ++k) {
    // Eliminating the lex-largest key at this level only feeds keys that are
    // strictly smaller (rotated leads point at higher indices), so the level
    // empties in finitely many passes.
    while (true) {
      if (++guard > 200000) {
        out.ok = false;
        out.diagnostic = "rewrite did not terminate at level " + std::to_string(k);
        return out;
      }
      Tensor level = residual.coeff_of(m.par, k);
      if (level.is_zero()) break;
      const TKey* best = nullptr;
      for (const auto& [key, c] : level.terms())
        if (!best || *best < key) best = &key;
      int a = 0;
      for (int l = 0; l < x.rank(); ++l) a += m.shift_of(best->leg[l]);
      if (a > k) {
        out.ok = false;
        std::string mono;
        for (int l = 0; l < x.rank(); ++l) {
          if (l) mono += " (x) ";
          mono += render_monomial(*m.alg, best->leg[l]);
        }
        out.diagnostic = "term " + mono + " sits below its own image grade " +
                         std::to_string(a) + " at level " + std::to_string(k);
        return out;
      }
      ParamScalar q = level.terms().at(*best) * ps_par(m.par, k - a);
      out.expr.add(*best, q);
      residual = residual - trunc(ev.full(*best, x.rank()).scaled(q), ctx);
    }
  }
  if (!residual.is_zero()) {
    out.ok = false;
    out.diagnostic = "terms beyond the working order remain: " + residual.str();
  }
  return out;
}

std::string invert_map(CoordinateMap& m, const GradingContext& ctx) {
  m.inverse.assign(m.alg->size(), {});
  MapEval ev(m, ctx);
  for (int i = 0; i < m.alg->size(); ++i) {
    int s = m.shifts[i];
    Tensor target = Tensor::gen(*m.alg, i).scaled(ps_par(m.par, s));
    RewriteOutcome r = rewrite_in_dual(m, target, ctx);
    if (!r.ok) return m.labels[i] + ": " + r.diagnostic;
    Tensor back = apply_map(m, r.expr, ctx);
    if (!(back == target))
      return m.labels[i] + ": round trip drifts by " + (back - target).str();
    m.inverse[i] = {r.expr, s};
  }
  return "";
}

const DualRow& DualCostructure::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw spec_error("no costructure row named " + name);
}

DualCostructure rewrite_coproduct_in_dual(const TwistedHopf& tw, const CoordinateMap& m) {
  const GradingContext& ctx = tw.context();
  DualCostructure out;
  for (size_t i = 0; i < m.labels.size(); ++i) {
    DualRow row;
    row.name = m.labels[i];
    row.in_g = tw.coproduct(m.forward[i]);
    RewriteOutcome r = rewrite_in_dual(m, row.in_g, ctx);
    row.in_hash = r.expr;
    if (!r.ok && out.closed) {
      out.closed = false;
      out.diagnostic = row.name + ": " + r.diagnostic;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deriving the map from the normal-form condition.

namespace {

// Equations are indexed by (tensor key, par power, gamma power); entries and
// right-hand sides are exact rationals.
using FlatKey = std::tuple<TKey, int, int>;
using FlatMap = std::map<FlatKey, Rational>;

FlatMap flatten(const Tensor& t, Param par, bool violations_only, int root) {
  FlatMap f;
  for (const auto& [key, c] : t.terms()) {
    if (violations_only &&
        !(pure_root_power(key.leg[0], root) || pure_root_power(key.leg[1], root)))
      continue;
    for (const auto& [pe, r] : c.terms()) {
      for (int q = 0; q < kNumParams; ++q) {
        if (q == static_cast<int>(par) || q == static_cast<int>(Param::gamma)) continue;
        if (pe.e[q] != 0)
          throw spec_error(std::string("derive: unexpected parameter ") + kParamNames[q] +
                           " in a coproduct coefficient");
      }
      f[{key, pe.e[static_cast<int>(par)], pe.e[static_cast<int>(Param::gamma)]}] += r;
    }
  }
  return f;
}

// Column of a linear system: a flattened tensor shifted by a gamma power.
struct Column {
  const FlatMap* base;
  int gamma_shift;
  int restrict_level;  // -1: all levels
};

// Gauss-Jordan over the rationals, leftmost pivots, free columns pinned to
// zero. Returns the index of the first unsatisfiable equation, or -1.
int solve_rational(const std::vector<Column>& cols, const FlatMap& rhs_source,
                   std::vector<Rational>& sol) {
  // collect the equation index set
  std::set<FlatKey> eqset;
  auto fits = [](const Column& col, const FlatKey& k) {
    return col.restrict_level < 0 || std::get<1>(k) == col.restrict_level;
  };
  for (const auto& [k, v] : rhs_source) eqset.insert(k);
  for (const auto& col : cols)
    for (const auto& [k, v] : *col.base) {
      FlatKey shifted{std::get<0>(k), std::get<1>(k), std::get<2>(k) + col.gamma_shift};
      if (fits(col, k)) eqset.insert(shifted);
    }
  std::vector<FlatKey> eqs(eqset.begin(), eqset.end());
  int nr = static_cast<int>(eqs.size());
  int nc = static_cast<int>(cols.size());
  std::vector<std::vector<Rational>> a(nr, std::vector<Rational>(nc + 1, Rational(0)));
  std::vector<int> origin(nr);
  for (int r = 0; r < nr; ++r) {
    origin[r] = r;
    const auto& [key, z, g] = eqs[r];
    for (int c = 0; c < nc; ++c) {
      FlatKey lookup{key, z, g - cols[c].gamma_shift};
      if (!fits(cols[c], lookup)) continue;
      auto it = cols[c].base->find(lookup);
      if (it != cols[c].base->end()) a[r][c] = it->second;
    }
    auto it = rhs_source.find(eqs[r]);
    if (it != rhs_source.end()) a[r][nc] = -it->second;
  }
  int lead = 0;
  std::vector<int> pivot_col(nr, -1);
  for (int col = 0; col < nc && lead < nr; ++col) {
    int p = -1;
    for (int r = lead; r < nr; ++r)
      if (!a[r][col].is_zero()) {
        p = r;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[lead]);
    std::swap(origin[p], origin[lead]);
    Rational piv = a[lead][col];
    for (auto& v : a[lead]) v /= piv;
    for (int r = 0; r < nr; ++r) {
      if (r == lead || a[r][col].is_zero()) continue;
      Rational f = a[r][col];
      for (int c2 = col; c2 <= nc; ++c2) a[r][c2] -= f * a[lead][c2];
    }
    pivot_col[lead] = col;
    ++lead;
  }
  sol.assign(nc, Rational(0));
  for (int r = 0; r < nr; ++r) {
    bool zero = true;
    for (int c = 0; c < nc; ++c)
      if (!a[r][c].is_zero()) {
        zero = false;
        break;
      }
    if (zero && !a[r][nc].is_zero()) return origin[r];
  }
  for (int r = 0; r < lead; ++r)
    if (pivot_col[r] >= 0) sol[pivot_col[r]] = a[r][nc];
  return -1;
}

std::string render_flat(const LieAlgebraSpec& alg, Param par, const FlatKey& k) {
  const auto& [key, z, g] = k;
  std::string s = render_monomial(alg, key.leg[0]) + " (x) " + render_monomial(alg, key.leg[1]);
  s += std::string(" at ") + kParamNames[static_cast<int>(par)] + "^" + std::to_string(z);
  if (g) s += std::string(" gamma^") + std::to_string(g);
  return s;
}

// Ordered monomials over an arbitrary alphabet of weighted letters, with the
// requested total weight and degree within [1, maxdeg]. The exponent array is
// indexed by letter, in the alphabet's own order.
std::vector<PBWMonomial> weighted_monomials(int nletters,
                                            const std::vector<std::vector<ParamScalar>>& wt,
                                            const std::vector<ParamScalar>& target,
                                            int maxdeg) {
  std::vector<PBWMonomial> out;
  int nc = static_cast<int>(target.size());
  PBWMonomial mono;
  std::vector<ParamScalar> acc(nc);
  std::function<void(int, int)> walk = [&](int letter, int degree) {
    if (letter == nletters) {
      if (degree < 1) return;
      for (int c = 0; c < nc; ++c)
        if (!(acc[c] == target[c])) return;
      out.push_back(mono);
      return;
    }
    for (int k = 0; degree + k <= maxdeg; ++k) {
      if (k) {
        mono.exp[letter]++;
        for (int c = 0; c < nc; ++c) acc[c] += wt[letter][c];
      }
      walk(letter + 1, degree + k);
    }
    int used = mono.exp[letter];
    mono.exp[letter] = 0;
    for (int c = 0; c < nc; ++c)
      for (int k = 0; k < used; ++k) acc[c] -= wt[letter][c];
  };
  walk(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

DeriveOutcome derive_dual_map(const TwistedHopf& tw, Param par, const DualBasis& basis,
                              int root, DeriveOptions opt) {
  const LieAlgebraSpec& alg = tw.algebra();
  const GradingContext& ctx = tw.context();
  int cap = max_par_power(ctx, par);
  int n = alg.size();
  DeriveOutcome out;
  auto fail = [&](const std::string& label, const std::string& what) {
    if (out.ok) {
      out.ok = false;
      out.obstruction = label + ": " + what;
    }
  };

  int root_slot = -1;
  for (int i = 0; i < n; ++i) {
    const LinComb& el = basis.elements[i];
    if (el.size() == 1 && el[0].first == root && el[0].second == ParamScalar(Rational(1)))
      root_slot = i;
  }
  if (root_slot < 0) throw spec_error("dual basis lacks a slot for the primitive root");

  auto coproduct_of = [&](const Tensor& x) { return tw.coproduct(x); };
  auto frame_term = [&](const Tensor& x, const Tensor& e2) {
    // x (x) e2 + 1 (x) x
    return mul(embed_leg(x, 2, {0}), embed_leg(e2, 2, {1}), ctx) + embed_leg(x, 2, {1});
  };
  Tensor unit1 = Tensor::unit(alg, 1);

  // The primitive root image: lead par * root, higher pure powers solved so
  // that the deformed coproduct is exactly primitive.
  Tensor root_img = Tensor::gen(alg, root).scaled(ps_par(par));
  {
    Tensor base_t = coproduct_of(root_img) - frame_term(root_img, unit1);
    FlatMap base = flatten(base_t, par, false, root);
    std::vector<FlatMap> mats;
    std::vector<std::pair<int, int>> meaning;  // (power m, gamma j)
    for (int mdeg = 2; mdeg <= cap; ++mdeg) {
      TKey k;
      k.leg[0] = PBWMonomial::gen(root, mdeg);
      Tensor t = Tensor::zero(alg, 1);
      t.add(k, ps_par(par, mdeg));
      mats.push_back(flatten(coproduct_of(t) - frame_term(t, unit1), par, false, root));
      for (int j = 0; j <= opt.gamma_degree; ++j) meaning.push_back({mdeg, j});
    }
    std::vector<Column> cols;
    for (size_t b = 0; b < mats.size(); ++b)
      for (int j = 0; j <= opt.gamma_degree; ++j) cols.push_back({&mats[b], j, -1});
    std::vector<Rational> sol;
    int bad = solve_rational(cols, base, sol);
    if (bad >= 0) {
      fail(basis.names[root_slot] + "#", "no primitive completion");
    } else {
      for (size_t u = 0; u < cols.size(); ++u) {
        if (sol[u].is_zero()) continue;
        auto [mdeg, j] = meaning[u];
        TKey k;
        k.leg[0] = PBWMonomial::gen(root, mdeg);
        root_img.add(k, ParamScalar(sol[u]) * ps_par(Param::gamma, j) * ps_par(par, mdeg));
      }
    }
  }

  std::vector<UElement> forward(n, Tensor::zero(alg, 1));
  forward[root_slot] = root_img;

  std::vector<ParamScalar> root_weight(alg.cartan.size());
  for (size_t c = 0; c < alg.cartan.size(); ++c) root_weight[c] = alg.weights[root][c];

  // Weight of every dual-basis letter; each must be homogeneous for the
  // candidate enumeration below to make sense.
  std::vector<std::vector<ParamScalar>> letter_w(n, std::vector<ParamScalar>(alg.cartan.size()));
  for (int i = 0; i < n; ++i) {
    const LinComb& el = basis.elements[i];
    for (size_t c = 0; c < alg.cartan.size(); ++c) {
      letter_w[i][c] = alg.weights[el[0].first][c];
      for (size_t t = 1; t < el.size(); ++t)
        if (!(alg.weights[el[t].first][c] == letter_w[i][c]))
          throw spec_error("dual basis element " + basis.names[i] + "# mixes weights");
    }
  }

  for (int slot = 0; slot < n; ++slot) {
    if (slot == root_slot) continue;
    const std::string label = basis.names[slot] + "#";
    const LinComb& el = basis.elements[slot];
    Tensor lead = Tensor::lincomb(alg, el);
    forward[slot] = lead;  // identity fill; replaced on success
    const std::vector<ParamScalar>& w = letter_w[slot];

    // Correction monomials per level, written over the dual-basis letters
    // rather than the raw generators: directions the normal form leaves free
    // are then single columns, so zeroing free variables keeps the image's
    // support minimal in the basis the map is stated in. The slot's own
    // letter is excluded.
    std::vector<std::vector<PBWMonomial>> cands(cap + 1);
    std::vector<std::vector<Tensor>> cand_t(cap + 1);  // expanded letter products
    for (int m = 1; m <= cap; ++m) {
      std::vector<ParamScalar> target(alg.cartan.size());
      for (size_t c = 0; c < alg.cartan.size(); ++c)
        target[c] = w[c] + ParamScalar(Rational(m)) * root_weight[c];
      for (const PBWMonomial& mono :
           weighted_monomials(n, letter_w, target, opt.degree_bound + m - 1)) {
        if (mono == PBWMonomial::gen(slot)) continue;
        Tensor t = Tensor::unit(alg, 1);
        for (int s = 0; s < n; ++s)
          for (int k = 0; k < mono.exp[s]; ++k)
            t = mul(t, Tensor::lincomb(alg, basis.elements[s]), ctx);
        cands[m].push_back(mono);
        cand_t[m].push_back(std::move(t));
      }
    }

    // Coproduct data for every candidate, reused across both passes.
    std::map<std::pair<int, int>, Tensor> delta;  // (level, candidate index) -> Delta_F
    for (int m = 1; m <= cap; ++m)
      for (size_t ci = 0; ci < cands[m].size(); ++ci)
        delta.emplace(std::make_pair(m, static_cast<int>(ci)),
                      coproduct_of(cand_t[m][ci].scaled(ps_par(par, m))));
    Tensor delta_lead = coproduct_of(lead);

    // Pass 1: the frame rate kappa from the level-1 violation equations. At
    // that level the exponential frame enters the lead row linearly.
    ParamScalar kappa;
    {
      std::vector<FlatMap> mats;
      std::vector<Column> cols;
      FlatMap kap = flatten(
          -mul(embed_leg(lead, 2, {0}), embed_leg(root_img, 2, {1}), ctx), par, true, root);
      for (int j = 0; j <= opt.gamma_degree; ++j) cols.push_back({&kap, j, 1});
      mats.reserve(cands[1].size());
      for (size_t ci = 0; ci < cands[1].size(); ++ci) {
        Tensor t = cand_t[1][ci].scaled(ps_par(par, 1));
        mats.push_back(flatten(delta.at({1, static_cast<int>(ci)}) - frame_term(t, unit1), par,
                               true, root));
      }
      for (size_t b = 0; b < mats.size(); ++b)
        for (int j = 0; j <= opt.gamma_degree; ++j) cols.push_back({&mats[b], j, 1});
      FlatMap base;
      {
        FlatMap full = flatten(delta_lead - frame_term(lead, unit1), par, true, root);
        for (const auto& [k, v] : full)
          if (std::get<1>(k) == 1) base[k] = v;
      }
      std::vector<Rational> sol;
      int bad = solve_rational(cols, base, sol);
      if (bad >= 0) {
        fail(label, "no frame rate fits the level-1 terms");
        continue;
      }
      for (int j = 0; j <= opt.gamma_degree; ++j)
        if (!sol[j].is_zero()) kappa += ParamScalar(sol[j]) * ps_par(Param::gamma, j);
    }

    // Pass 2: with the frame frozen, all correction levels solve jointly.
    Tensor frame_exp = exp_graded(root_img.scaled(kappa), ctx);
    std::vector<FlatMap> mats;
    std::vector<std::tuple<int, int, int>> meaning;  // (level, candidate, gamma)
    std::vector<Column> cols;
    for (int m = 1; m <= cap; ++m)
      for (size_t ci = 0; ci < cands[m].size(); ++ci) {
        Tensor t = cand_t[m][ci].scaled(ps_par(par, m));
        mats.push_back(flatten(delta.at({m, static_cast<int>(ci)}) - frame_term(t, frame_exp),
                               par, true, root));
        for (int j = 0; j <= opt.gamma_degree; ++j)
          meaning.push_back({m, static_cast<int>(ci), j});
      }
    for (size_t b = 0; b < mats.size(); ++b)
      for (int j = 0; j <= opt.gamma_degree; ++j) cols.push_back({&mats[b], j, -1});
    FlatMap base = flatten(delta_lead - frame_term(lead, frame_exp), par, true, root);
    std::vector<Rational> sol;
    int bad = solve_rational(cols, base, sol);
    if (bad >= 0) {
      // recover the offending equation for the report
      std::set<FlatKey> eqset;
      for (const auto& [k, v] : base) eqset.insert(k);
      for (size_t u = 0; u < cols.size(); ++u)
        for (const auto& [k, v] : *cols[u].base)
          eqset.insert({std::get<0>(k), std::get<1>(k), std::get<2>(k) + cols[u].gamma_shift});
      std::vector<FlatKey> eqs(eqset.begin(), eqset.end());
      fail(label, "normal form obstructed at " + render_flat(alg, par, eqs[bad]));
      continue;
    }
    Tensor img = lead;
    for (size_t u = 0; u < cols.size(); ++u) {
      if (sol[u].is_zero()) continue;
      auto [m, ci, j] = meaning[u];
      img = img +
            cand_t[m][ci].scaled(ParamScalar(sol[u]) * ps_par(Param::gamma, j) * ps_par(par, m));
    }
    forward[slot] = img;
  }

  out.map = make_map(alg, par, basis, std::move(forward), ctx);
  return out;
}

// ---------------------------------------------------------------------------
// Quasiprimitivity scan.

namespace {

std::vector<Rational> sorted_unique(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Rational> intersect(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out;
  for (const auto& x : a)
    if (std::find(b.begin(), b.end(), x) != b.end()) out.push_back(x);
  return out;
}

}  // namespace

std::vector<Rational> rational_roots(const std::vector<std::pair<int, Rational>>& poly) {
  std::map<int, Rational> dense;
  for (const auto& [d, c] : poly) {
    if (d < 0) throw spec_error("rational_roots wants a polynomial, got a negative degree");
    if (!c.is_zero()) dense[d] += c;
  }
  for (auto it = dense.begin(); it != dense.end();)
    it = it->second.is_zero() ? dense.erase(it) : std::next(it);
  std::vector<Rational> roots;
  if (dense.empty()) throw spec_error("rational_roots of the zero polynomial");
  int val = dense.begin()->first;
  if (val > 0) roots.push_back(Rational(0));
  int deg = dense.rbegin()->first - val;
  if (deg == 0) return sorted_unique(std::move(roots));

  // integer coefficients low..high after dividing out the valuation
  detail::i128 l = 1;
  for (const auto& [d, c] : dense)
    l = detail::checked_mul(l / detail::gcd128(l, c.den()), c.den());
  std::vector<detail::i128> ic(deg + 1, 0);
  for (const auto& [d, c] : dense) ic[d - val] = c.num() * (l / c.den());

  auto divisors = [](detail::i128 v) {
    if (v < 0) v = -v;
    std::vector<long long> out;
    if (v > 2000000000000000LL)
      throw arith_error("root candidate coefficients out of range");
    long long n = static_cast<long long>(v);
    for (long long d = 1; d * d <= n; ++d)
      if (n % d == 0) {
        out.push_back(d);
        out.push_back(n / d);
      }
    return out;
  };
  std::vector<Rational> cands;
  for (long long p : divisors(ic[0]))
    for (long long q : divisors(ic[deg])) {
      cands.push_back(Rational(p, q));
      cands.push_back(Rational(-p, q));
    }
  std::vector<Rational> coeffs;  // high to low, as rationals
  for (int d = deg; d >= 0; --d) coeffs.push_back(Rational::from_i128(ic[d], 1));
  for (const Rational& x : sorted_unique(std::move(cands))) {
    Rational acc(0);
    for (const Rational& c : coeffs) acc = acc * x + c;
    if (acc.is_zero()) roots.push_back(x);
  }
  return sorted_unique(std::move(roots));
}

QuasiprimitiveReport scan_quasiprimitive(const DualCostructure& table, const CoordinateMap& m,
                                         int root) {
  int n = static_cast<int>(table.rows.size());
  std::vector<QuasiprimitiveRow> rows(n);
  auto scan_one = [&](int idx) {
    const DualRow& dr = table.rows[idx];
    QuasiprimitiveRow out;
    out.name = dr.name;
    int letter = m.label_index(dr.name);
    if (letter < 0) throw spec_error("scan: unknown row label " + dr.name);

    // Obstructions are grouped by the keys with the root powers stripped;
    // a gamma value silences a group only if it kills every member.
    std::map<TKey, std::vector<std::pair<TKey, ParamScalar>>> groups;
    for (const auto& [key, c] : dr.in_hash.terms()) {
      bool allowed =
          (single_letter(key.leg[0], letter) && pure_root_power(key.leg[1], root)) ||
          (single_letter(key.leg[1], letter) && pure_root_power(key.leg[0], root));
      if (allowed) continue;
      TKey stripped = key;
      stripped.leg[0].exp[root] = 0;
      stripped.leg[1].exp[root] = 0;
      groups[stripped].push_back({key, c});
    }
    bool first_group = true;
    std::vector<Rational> meet;
    for (auto& [stripped, members] : groups) {
      std::sort(members.begin(), members.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      ObstructionTerm term;
      term.rendering = "(" + members.front().second.str() + ") " +
                       render_labels(m, stripped.leg[0]) + " (x) " +
                       render_labels(m, stripped.leg[1]);
      if (members.size() > 1 || !(members.front().first == stripped))
        term.rendering += " [root-dressed]";
      bool first_coeff = true;
      std::vector<Rational> roots;
      for (const auto& [key, c] : members) {
        for (const auto& [zp, part] : c.parts_by(m.par)) {
          std::vector<std::pair<int, Rational>> poly;
          for (const auto& [pe, r] : part.terms()) {
            for (int q = 0; q < kNumParams; ++q)
              if (q != static_cast<int>(Param::gamma) && pe.e[q] != 0)
                throw spec_error(std::string("scan: unexpected parameter ") + kParamNames[q]);
            poly.push_back({pe.e[static_cast<int>(Param::gamma)], r});
          }
          auto rr = rational_roots(poly);
          roots = first_coeff ? rr : intersect(roots, rr);
          first_coeff = false;
        }
      }
      term.roots = roots;
      meet = first_group ? roots : intersect(meet, roots);
      first_group = false;
      out.obstructions.push_back(std::move(term));
    }
    out.quasiprimitive_at = groups.empty() ? std::vector<Rational>{} : sorted_unique(meet);
    rows[idx] = std::move(out);
  };

  int budget = std::min(thread_budget(), n);
  if (budget <= 1) {
    for (int i = 0; i < n; ++i) scan_one(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    for (int t = 0; t < budget; ++t)
      pool.emplace_back([&] {
        try {
          for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) scan_one(i);
        } catch (...) {
          std::lock_guard lk(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  QuasiprimitiveReport report;
  std::vector<Rational> all;
  for (auto& r : rows)
    for (const auto& t : r.obstructions) all.insert(all.end(), t.roots.begin(), t.roots.end());
  report.rows = std::move(rows);
  report.irregular = sorted_unique(std::move(all));
  return report;
}

// ---------------------------------------------------------------------------
// Parabolic chains.

ParabolicTwist build_parabolic(const LieAlgebraSpec& alg, const Rational& gamma, Param par,
                               Param eta, const GradingContext& ctx) {
  if (!(gamma == Rational(1)) && !(gamma == Rational(-1)))
    throw spec_error("the parabolic factor only closes at gamma = 1 or gamma = -1, got " +
                     gamma.str());
  int sign = gamma == Rational(1) ? +1 : -1;
  int ie12 = alg.index_of("e12"), ie23 = alg.index_of("e23"), ie13 = alg.index_of("e13");
  int ihp = alg.index_of("hperp");
  int cartan_h13 = -1, cartan_hp = -1;
  for (size_t c = 0; c < alg.cartan.size(); ++c) {
    if (alg.cartan[c] == alg.index_of("h13")) cartan_h13 = static_cast<int>(c);
    if (alg.cartan[c] == ihp) cartan_hp = static_cast<int>(c);
  }
  if (cartan_h13 < 0 || cartan_hp < 0)
    throw spec_error("parabolic chain needs the (h13, hperp) Cartan pair");

  std::vector<ParamScalar> combo(alg.cartan.size());
  combo[cartan_h13] = ParamScalar(Rational(1));
  combo[cartan_hp] = ParamScalar(gamma);
  TwistFactor fj = build_jordanian(alg, CartanElement::combo(alg, combo), ie13, par, ctx);
  ParamScalar dress = sign > 0 ? ps(1) : ps(-2);  // (3 gamma - 1) / 2 at the fixed value
  TwistFactor fe = build_extension(alg, ie12, ie23, dress, fj.group, par, ctx);

  UElement x = sign > 0 ? Tensor::gen(alg, alg.index_of("e21"))
                        : Tensor::gen(alg, alg.index_of("e32")) -
                              mul(Tensor::lincomb(alg, {{alg.index_of("h13"), ps(1)},
                                                        {ihp, ps(-1)}}),
                                  Tensor::gen(alg, ie12), ctx)
                                  .scaled(ps_par(par));
  // exp(2 sigma) = group^2 exactly; staying on the polynomial side keeps the
  // group element below free of truncation marks.
  Tensor dressed = mul(Tensor::unit(alg, 1) + x.scaled(ps_par(eta)),
                       mul(fj.group, fj.group, ctx), ctx);
  Tensor l = log_graded(dressed, ctx);
  Tensor exponent = mul(embed_leg(Tensor::gen(alg, ihp).scaled(ps(-sign * 2, 3)), 2, {0}),
                        embed_leg(l, 2, {1}), ctx);
  TwistFactor factor = build_generic(
      alg, sign > 0 ? "jordanian.parabolic.plus" : "jordanian.parabolic.minus", exponent, ctx);
  // The closing factor has the Jordanian shape h (x) log(group) with the
  // scaled hperp on the left and a polynomial group element on the right;
  // record the closed form so representation checks evaluate it losslessly.
  std::vector<ParamScalar> closing(alg.cartan.size());
  closing[cartan_hp] = ps(-sign * 2, 3);
  factor.h = CartanElement::combo(alg, closing);
  factor.group = dressed;

  ParabolicTwist out;
  out.sign = sign;
  out.gamma = gamma;
  out.factor = factor;
  out.chain = TwistChain{&alg, ctx, {fj, fe, factor}};
  return out;
}

}  // namespace twistcalc
