#include "twistcalc/rmatrix.hpp"

#include <algorithm>
#include <map>

namespace twistcalc {

namespace {

using PMat = std::vector<std::vector<ParamScalar>>;

PMat identity_pmat(int n) {
  PMat m(n, std::vector<ParamScalar>(n));
  for (int i = 0; i < n; ++i) m[i][i] = ParamScalar(Rational(1));
  return m;
}

// Gauss-Jordan inverse requiring rational pivots; sufficient for the
// unit-triangular basis changes used here and loud about anything else.
PMat invert_pmat(PMat m) {
  int n = static_cast<int>(m.size());
  PMat inv = identity_pmat(n);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (!m[row][col].is_zero() && m[row][col].is_rational()) {
        pivot = row;
        break;
      }
    if (pivot < 0)
      throw spec_error("basis change is not polynomially invertible (no rational pivot)");
    std::swap(m[pivot], m[col]);
    std::swap(inv[pivot], inv[col]);
    Rational p = m[col][col].as_rational();
    for (int j = 0; j < n; ++j) {
      m[col][j] = m[col][j].divided_by(p);
      inv[col][j] = inv[col][j].divided_by(p);
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || m[row][col].is_zero()) continue;
      ParamScalar f = m[row][col];
      for (int j = 0; j < n; ++j) {
        m[row][j] -= f * m[col][j];
        inv[row][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

Tensor lincomb_leg(const LieAlgebraSpec& alg, const LinComb& v, int rank, int leg) {
  return embed_leg(Tensor::lincomb(alg, v), rank, {leg});
}

}  // namespace

RMatrix make_r(const LieAlgebraSpec& alg,
               const std::vector<std::tuple<LinComb, LinComb, ParamScalar>>& wedges) {
  GradingContext ctx;  // degree-(1,1) products cannot truncate
  ctx.cap_x2 = INT16_MAX;
  RMatrix out;
  out.alg = &alg;
  out.r = Tensor::zero(alg, 2);
  for (const auto& [a, b, c] : wedges) {
    Tensor ab = mul(lincomb_leg(alg, a, 2, 0), lincomb_leg(alg, b, 2, 1), ctx);
    out.r = out.r + (ab - flip12(ab)).scaled(c);
  }
  return out;
}

Tensor cybe_residual(const RMatrix& r, const GradingContext& ctx) {
  Tensor r12 = embed_leg(r.r, 3, {0, 1});
  Tensor r13 = embed_leg(r.r, 3, {0, 2});
  Tensor r23 = embed_leg(r.r, 3, {1, 2});
  auto comm = [&](const Tensor& a, const Tensor& b) {
    return mul(a, b, ctx) - mul(b, a, ctx);
  };
  return comm(r12, r13) + comm(r12, r23) + comm(r13, r23);
}

Tensor cobracket(const RMatrix& r, const Tensor& x, const GradingContext& ctx) {
  if (x.rank() != 1) throw spec_error("cobracket expects a rank-1 element");
  Tensor d0 = embed_leg(x, 2, {0}) + embed_leg(x, 2, {1});
  return mul(r.r, d0, ctx) - mul(d0, r.r, ctx);
}

DualBasis standard_dual_basis(const LieAlgebraSpec& alg) {
  DualBasis b;
  for (int i = 0; i < alg.size(); ++i) {
    b.names.push_back(alg.gen_names[i]);
    b.elements.push_back({{i, ParamScalar(Rational(1))}});
  }
  return b;
}

DualBasis sl3_dual_basis(const LieAlgebraSpec& alg) {
  DualBasis b = standard_dual_basis(alg);
  int ih13 = alg.index_of("h13");
  int ihp = alg.index_of("hperp");
  b.names[ih13] = "h";
  b.elements[ih13] = {{ih13, ParamScalar(Rational(1))}, {ihp, ps_gamma()}};
  return b;
}

WedgeTable wedge_components(const LieAlgebraSpec& alg, const DualBasis& basis, const Tensor& t) {
  int n = alg.size();
  if (static_cast<int>(basis.elements.size()) != n)
    throw spec_error("dual basis must have one element per generator");
  // coefficient matrix over the algebra basis
  PMat c(n, std::vector<ParamScalar>(n));
  for (const auto& [k, coeff] : t.terms()) {
    if (k.leg[0].degree() != 1 || k.leg[1].degree() != 1)
      throw spec_error("wedge expansion needs degree-(1,1) legs, found " +
                       render_monomial(alg, k.leg[0]) + " (x) " + render_monomial(alg, k.leg[1]));
    c[k.leg[0].top_index()][k.leg[1].top_index()] += coeff;
  }
  // change of basis: with rows of M the basis elements, C = M^T D M
  PMat m(n, std::vector<ParamScalar>(n));
  for (int i = 0; i < n; ++i)
    for (const auto& [j, coeff] : basis.elements[i]) m[i][j] += coeff;
  PMat minv = invert_pmat(m);
  // C = M^T D M, so D = Minv^T C Minv
  PMat tmp(n, std::vector<ParamScalar>(n));
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < n; ++q) {
      ParamScalar s;
      for (int p = 0; p < n; ++p) s += minv[p][i] * c[p][q];
      tmp[i][q] = s;
    }
  PMat d(n, std::vector<ParamScalar>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ParamScalar s;
      for (int q = 0; q < n; ++q) s += tmp[i][q] * minv[q][j];
      d[i][j] = s;
    }
  WedgeTable out;
  for (int i = 0; i < n; ++i) {
    if (!d[i][i].is_zero())
      throw spec_error("tensor has a diagonal (symmetric) part at " + basis.names[i]);
    for (int j = i + 1; j < n; ++j) {
      if (d[i][j] + d[j][i] != ParamScalar())
        throw spec_error("tensor is not antisymmetric in the chosen basis at (" + basis.names[i] +
                         ", " + basis.names[j] + ")");
      if (!d[i][j].is_zero()) out.entries.push_back({i, j, d[i][j]});
    }
  }
  return out;
}

DualAlgebraResult dual_structure_constants(const RMatrix& r, const DualBasis& basis,
                                           const GradingContext& ctx) {
  const LieAlgebraSpec& alg = *r.alg;
  int n = alg.size();
  DualAlgebraResult out;
  out.basis = basis;
  auto dual = std::make_shared<LieAlgebraSpec>();
  dual->name = alg.name + "-dual";
  for (const auto& nm : basis.names) dual->gen_names.push_back(nm + "*");
  dual->bracket_table.assign(n, std::vector<LinComb>(n));
  for (int k = 0; k < n; ++k) {
    Tensor x = Tensor::lincomb(alg, basis.elements[k]);
    WedgeTable wt = wedge_components(alg, basis, cobracket(r, x, ctx));
    for (const auto& [i, j, c] : wt.entries) {
      dual->bracket_table[i][j].push_back({k, c});
      dual->bracket_table[j][i].push_back({k, -c});
    }
    out.cobrackets.push_back(std::move(wt));
  }
  for (auto& row : dual->bracket_table)
    for (auto& cell : row)
      std::sort(cell.begin(), cell.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
  dual->weights.assign(n, {});
  out.dual = dual;
  return out;
}

std::string jacobi_residual_dual(const DualAlgebraResult& d) { return jacobi_residual(*d.dual); }

namespace {

// Weight vector of a basis element over the primal Cartan basis; requires
// ad-homogeneity and rational weights.
std::vector<Rational> weight_vec(const LieAlgebraSpec& alg, const LinComb& v) {
  size_t nc = alg.cartan.size();
  std::vector<Rational> w(nc, Rational(0));
  bool first = true;
  for (const auto& [g, c] : v) {
    std::vector<Rational> wg(nc);
    for (size_t cc = 0; cc < nc; ++cc) {
      if (!alg.weights[g][cc].is_rational())
        throw spec_error("non-rational weight in weight_vec");
      wg[cc] = alg.weights[g][cc].as_rational();
    }
    if (first) {
      w = wg;
      first = false;
    } else if (w != wg) {
      throw spec_error("basis element is not ad-homogeneous: " + alg.gen_names[g]);
    }
  }
  return w;
}

bool is_cartan_type(const LieAlgebraSpec& alg, const LinComb& v) {
  for (const auto& [g, c] : v)
    if (std::find(alg.cartan.begin(), alg.cartan.end(), g) == alg.cartan.end()) return false;
  return !v.empty();
}

}  // namespace

DualWeightReport dual_weight_structure(const RMatrix& r, const DualAlgebraResult& d) {
  const LieAlgebraSpec& alg = *r.alg;
  const LieAlgebraSpec& dual = *d.dual;
  int n = alg.size();
  DualWeightReport rep;

  WedgeTable rw = wedge_components(alg, d.basis, r.r);
  std::vector<bool> in_carrier(n, false);
  for (const auto& [i, j, c] : rw.entries) in_carrier[i] = in_carrier[j] = true;
  for (int i = 0; i < n; ++i)
    if (in_carrier[i]) rep.support.push_back(i);

  // The carrier is the smallest bracket-closed span containing the support
  // of r.  Brackets of basis elements are taken in the primal algebra and
  // re-expressed over the basis.
  PMat m(n, std::vector<ParamScalar>(n));
  for (int i = 0; i < n; ++i)
    for (const auto& [j, coeff] : d.basis.elements[i]) m[i][j] += coeff;
  PMat minv = invert_pmat(m);
  auto basis_bracket = [&](int i, int j) {
    std::vector<ParamScalar> xg(n);
    for (const auto& [g1, c1] : d.basis.elements[i])
      for (const auto& [g2, c2] : d.basis.elements[j])
        for (const auto& [g, c] : alg.bracket(g1, g2)) xg[g] += c1 * c2 * c;
    std::vector<ParamScalar> beta(n);
    for (int k = 0; k < n; ++k)
      for (int g = 0; g < n; ++g)
        if (!xg[g].is_zero()) beta[k] += minv[g][k] * xg[g];
    return beta;
  };
  for (bool grew = true; grew;) {
    grew = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (!in_carrier[i] || !in_carrier[j]) continue;
        auto beta = basis_bracket(i, j);
        for (int k = 0; k < n; ++k)
          if (!beta[k].is_zero() && !in_carrier[k]) {
            in_carrier[k] = true;
            grew = true;
          }
      }
  }
  for (int i = 0; i < n; ++i)
    if (in_carrier[i]) rep.carrier.push_back(i);
  if (rep.carrier.size() != rep.support.size())
    rep.notes.push_back("carrier grew beyond the r-matrix support under bracket closure");
  // closure certificate: re-check that no bracket leaves the carrier
  rep.carrier_closed = true;
  for (int i : rep.carrier)
    for (int j : rep.carrier) {
      if (j <= i) continue;
      auto beta = basis_bracket(i, j);
      for (int k = 0; k < n; ++k)
        if (!beta[k].is_zero() && !in_carrier[k]) rep.carrier_closed = false;
    }
  if (!rep.carrier_closed) rep.notes.push_back("carrier is not bracket-closed");

  // locate the unique Cartan /\ root component (h, mu)
  int mu = -1;
  CartanElement h;
  int found = 0;
  for (const auto& [i, j, c] : rw.entries) {
    bool ci = is_cartan_type(alg, d.basis.elements[i]);
    bool cj = is_cartan_type(alg, d.basis.elements[j]);
    if (ci == cj) continue;
    ++found;
    const LinComb& hel = ci ? d.basis.elements[i] : d.basis.elements[j];
    mu = ci ? j : i;
    // the wedge coefficient scales h; if the root came first, h /\ mu enters
    // with the opposite sign
    ParamScalar cw = ci ? c : -c;
    std::vector<ParamScalar> coeff(alg.cartan.size());
    for (const auto& [g, cv] : hel) {
      for (size_t cc = 0; cc < alg.cartan.size(); ++cc)
        if (alg.cartan[cc] == g) coeff[cc] = cv * cw;
    }
    h = CartanElement::combo(alg, coeff);
  }
  if (found != 1) {
    rep.notes.push_back("r-matrix does not contain exactly one Cartan /\\ root component; "
                        "weight-tag checks skipped");
    return rep;
  }
  rep.applicable = true;

  // Weight tags: for each wedge component phi /\ psi of r, phi* takes the
  // weight -nu(psi) and psi* takes -nu(phi); complement duals keep their own
  // weight. Conflicting assignments make the report inapplicable.
  rep.tags.assign(n, {});
  std::vector<bool> tagged(n, false);
  for (int i = 0; i < n; ++i)
    if (!in_carrier[i]) {
      rep.tags[i] = weight_vec(alg, d.basis.elements[i]);
      tagged[i] = true;
    }
  auto assign_tag = [&](int idx, std::vector<Rational> w) {
    if (tagged[idx] && rep.tags[idx] != w) {
      rep.notes.push_back("conflicting weight tags for " + dual.gen_names[idx]);
      rep.applicable = false;
    }
    rep.tags[idx] = std::move(w);
    tagged[idx] = true;
  };
  for (const auto& [i, j, c] : rw.entries) {
    std::vector<Rational> wi = weight_vec(alg, d.basis.elements[i]);
    std::vector<Rational> wj = weight_vec(alg, d.basis.elements[j]);
    for (auto& v : wi) v = -v;
    for (auto& v : wj) v = -v;
    assign_tag(i, std::move(wj));
    assign_tag(j, std::move(wi));
  }
  for (int i = 0; i < n; ++i)
    if (!tagged[i]) {
      rep.notes.push_back("carrier element " + dual.gen_names[i] +
                          " is outside the r-matrix support and carries no weight tag");
      rep.applicable = false;
    }
  if (!rep.applicable) return rep;

  // block structure of the dual bracket table
  rep.abelian_complement_ok = true;
  rep.complement_ideal_ok = true;
  rep.carrier_subalgebra_ok = true;
  rep.additivity_ok = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      for (const auto& [k, c] : dual.bracket(i, j)) {
        if (!in_carrier[i] && !in_carrier[j]) {
          rep.abelian_complement_ok = false;
          rep.notes.push_back("complement duals fail to commute: [" + dual.gen_names[i] + ", " +
                              dual.gen_names[j] + "]");
        }
        if ((!in_carrier[i] || !in_carrier[j]) && in_carrier[k]) {
          rep.complement_ideal_ok = false;
          rep.notes.push_back("complement duals do not span an ideal at [" + dual.gen_names[i] +
                              ", " + dual.gen_names[j] + "]");
        }
        if (in_carrier[i] && in_carrier[j] && !in_carrier[k]) {
          rep.carrier_subalgebra_ok = false;
          rep.notes.push_back("carrier duals do not close at [" + dual.gen_names[i] + ", " +
                              dual.gen_names[j] + "]");
        }
        for (size_t cc = 0; cc < rep.tags[i].size(); ++cc)
          if (!(rep.tags[i][cc] + rep.tags[j][cc] == rep.tags[k][cc])) {
            rep.additivity_ok = false;
            rep.notes.push_back("weight tags are not additive at [" + dual.gen_names[i] + ", " +
                                dual.gen_names[j] + "] -> " + dual.gen_names[k]);
          }
      }
    }

  // ad-eigenvalue law for the root dual: [mu*, x*] = -<tag(x), h> x*
  rep.eigenvalue_ok = true;
  for (int x = 0; x < n; ++x) {
    ParamScalar expect;
    for (size_t cc = 0; cc < rep.tags[x].size(); ++cc)
      expect -= ParamScalar(rep.tags[x][cc]) * h.coeff[cc];
    ParamScalar got;
    for (const auto& [k, c] : dual.bracket(mu, x)) {
      if (k != x) {
        rep.eigenvalue_ok = false;
        rep.notes.push_back("ad(" + dual.gen_names[mu] + ") is not diagonal on " +
                            dual.gen_names[x]);
      } else {
        got = c;
      }
    }
    if (got != expect) {
      rep.eigenvalue_ok = false;
      rep.notes.push_back("ad(" + dual.gen_names[mu] + ") eigenvalue on " + dual.gen_names[x] +
                          " is " + got.str() + ", expected " + expect.str());
    }
  }

  // Carrier dual tags must be the negated carrier weights; complement tags
  // must be the primal weight multiset minus the carrier's.
  std::vector<std::vector<Rational>> complement_tags, carrier_tags, neg_carrier_weights;
  std::vector<std::vector<Rational>> all_weights, carrier_weights;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> w = weight_vec(alg, d.basis.elements[i]);
    all_weights.push_back(w);
    if (in_carrier[i]) {
      carrier_weights.push_back(w);
      carrier_tags.push_back(rep.tags[i]);
      for (auto& v : w) v = -v;
      neg_carrier_weights.push_back(w);
    } else {
      complement_tags.push_back(rep.tags[i]);
    }
  }
  auto sorter = [](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (b[i] < a[i]) return false;
    }
    return a.size() < b.size();
  };
  std::sort(all_weights.begin(), all_weights.end(), sorter);
  std::sort(carrier_weights.begin(), carrier_weights.end(), sorter);
  std::sort(carrier_tags.begin(), carrier_tags.end(), sorter);
  std::sort(neg_carrier_weights.begin(), neg_carrier_weights.end(), sorter);
  std::sort(complement_tags.begin(), complement_tags.end(), sorter);
  // multiset difference all_weights \ carrier_weights
  std::vector<std::vector<Rational>> diff;
  size_t ci = 0;
  for (const auto& w : all_weights) {
    if (ci < carrier_weights.size() && carrier_weights[ci] == w) {
      ++ci;
      continue;
    }
    diff.push_back(w);
  }
  rep.multiset_ok = ci == carrier_weights.size() && diff == complement_tags &&
                    carrier_tags == neg_carrier_weights;
  if (!rep.multiset_ok)
    rep.notes.push_back("dual weight multisets do not match the carrier/complement split of "
                        "the primal weight diagram");
  return rep;
}

std::vector<std::string> render_dual_relations(const DualAlgebraResult& d) {
  const LieAlgebraSpec& dual = *d.dual;
  std::vector<std::string> out;
  for (int i = 0; i < dual.size(); ++i)
    for (int j = i + 1; j < dual.size(); ++j) {
      const LinComb& v = dual.bracket(i, j);
      if (v.empty()) continue;
      std::string s = "[" + dual.gen_names[i] + ", " + dual.gen_names[j] + "] = ";
      bool first = true;
      for (const auto& [k, c] : v) {
        ParamScalar cc = c;
        bool neg = cc.term_count() == 1 && cc.terms()[0].second < Rational(0);
        if (neg) cc = -cc;
        if (first) {
          if (neg) s += "-";
        } else {
          s += neg ? " - " : " + ";
        }
        first = false;
        if (cc.term_count() > 1)
          s += "(" + cc.str() + ")*";
        else if (!(cc.is_rational() && cc.as_rational().is_one()))
          s += cc.str() + "*";
        s += dual.gen_names[k];
      }
      out.push_back(s);
    }
  return out;
}

}  // namespace twistcalc
