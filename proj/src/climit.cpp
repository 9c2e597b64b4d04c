#include "twistcalc/climit.hpp"

#include <sstream>

namespace twistcalc {

namespace {

int key_degree(const TKey& k) {
  return k.leg[0].degree() + k.leg[1].degree() + k.leg[2].degree();
}

}  // namespace

ScaledChain scale_chain(const TwistChain& src, Param from, Param ratio, int order,
                        bool allow_poles) {
  ScaledChain out;
  out.scaled = scaled_structure_copy(*src.alg);
  out.ratio = ratio;
  out.chain.alg = out.scaled.get();
  out.chain.ctx = GradingContext::limit(order);

  ParamScalar eps_ratio = ParamScalar::param(Param::eps, 1) * ParamScalar::param(ratio, 1);
  for (const auto& f : src.factors) {
    Tensor ex = f.exponent.with_algebra(*out.scaled).substitute(from, eps_ratio);
    Tensor scaled_exp = Tensor::zero(*out.scaled, ex.rank());
    for (const auto& [k, c] : ex.terms())
      scaled_exp.add(k, c * ParamScalar::laurent_eps(-key_degree(k)));

    Tensor psi = scaled_exp.scaled(ParamScalar::laurent_eps(1));
    if (psi.has_negative_power(Param::eps) || psi.max_degree(Param::eps) > 0) {
      if (!allow_poles) {
        std::ostringstream os;
        os << "factor " << f.label
           << " does not scale: exponent is not eps^-1 times an eps-free element";
        throw spec_error(os.str());
      }
    } else {
      // exact collapse: record the clean exponent and rebuild the factor
      // from it so no stray eps bookkeeping survives rounding through psi
      scaled_exp = psi.scaled(ParamScalar::laurent_eps(-1));
    }
    out.psi.push_back(psi);
    out.chain.factors.push_back(
        build_generic(*out.scaled, f.label + ".scaled", scaled_exp, out.chain.ctx));
  }
  return out;
}

const GeneratorLimit& ClassicalLimit::row(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw spec_error("no limit row named " + name);
}

ClassicalLimit classical_limit(const TwistChain& src, Param from, Param ratio, int order,
                               bool allow_poles) {
  ClassicalLimit out;
  out.scaled = scale_chain(src, from, ratio, order, allow_poles);
  TwistedHopf H(out.scaled.chain);
  const LieAlgebraSpec& hat = *out.scaled.scaled;
  std::ostringstream bad;
  for (int g = 0; g < hat.size(); ++g) {
    GeneratorLimit row;
    row.name = hat.gen_names[g];
    row.value = Tensor::zero(hat, 2);
    row.poles = Tensor::zero(hat, 2);
    for (const auto& [k, part] : H.coproduct_gen(g).parts_by(Param::eps)) {
      if (k == 0) row.value = part;
      if (k < 0) row.poles = row.poles + part.scaled(ParamScalar::laurent_eps(k));
    }
    if (!row.poles.is_zero()) {
      out.pole_free = false;
      bad << (bad.tellp() > 0 ? ", " : "") << row.name;
    }
    out.rows.push_back(std::move(row));
  }
  if (!out.pole_free) out.note = "limit does not exist: eps poles in " + bad.str();
  return out;
}

Tensor limit_cobracket(const ClassicalLimit& lim, const std::string& name) {
  Tensor lin = lim.row(name).value.coeff_of(lim.scaled.ratio, 1);
  return lin - flip12(lin);
}

Tensor survival_part(const Tensor& row, Param from, const LieAlgebraSpec& scaled, Param ratio) {
  Tensor out = Tensor::zero(scaled, row.rank());
  for (const auto& [k, c] : row.terms()) {
    int a = key_degree(k) - 1;
    if (a < 0) continue;
    ParamScalar kept = c.coeff_of(from, a);
    if (!kept.is_zero()) out.add(k, kept * ParamScalar::param(ratio, a));
  }
  return out;
}

}  // namespace twistcalc
