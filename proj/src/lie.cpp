#include "twistcalc/lie.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace twistcalc {

namespace {

// Dense rational matrices, only used locally to build structure constants
// from matrix units.
struct Mat {
  int n = 0;
  std::vector<Rational> a;
  explicit Mat(int n_) : n(n_), a(n_ * n_, Rational(0)) {}
  Rational& at(int r, int c) { return a[r * n + c]; }
  const Rational& at(int r, int c) const { return a[r * n + c]; }
};

Mat mat_comm(const Mat& x, const Mat& y) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j) {
      Rational s(0);
      for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j) - y.at(i, k) * x.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

struct BasisDesc {
  bool is_cartan = false;
  int row = 0, col = 0;  // root vector e_{row,col}, 1-indexed
  int cartan_pos = 0;    // position in the cartan list
};

}  // namespace

int LieAlgebraSpec::index_of(std::string_view gen) const {
  int i = find(gen);
  if (i < 0) throw spec_error("unknown generator '" + std::string(gen) + "' in algebra " + name);
  return i;
}

int LieAlgebraSpec::find(std::string_view gen) const {
  for (int i = 0; i < size(); ++i)
    if (gen_names[i] == gen) return i;
  return -1;
}

CartanElement CartanElement::basis(const LieAlgebraSpec& alg, int cartan_pos) {
  CartanElement h;
  h.coeff.assign(alg.cartan.size(), ParamScalar());
  h.coeff.at(cartan_pos) = ParamScalar(Rational(1));
  return h;
}

CartanElement CartanElement::combo(const LieAlgebraSpec& alg, const std::vector<ParamScalar>& c) {
  if (c.size() != alg.cartan.size())
    throw spec_error("cartan coefficient count mismatch in algebra " + alg.name);
  CartanElement h;
  h.coeff = c;
  return h;
}

ParamScalar weight_of(const LieAlgebraSpec& alg, int j, const CartanElement& h) {
  ParamScalar w;
  for (size_t c = 0; c < alg.cartan.size(); ++c) w += h.coeff[c] * alg.weights[j][c];
  return w;
}

LinComb bracket_lin(const LieAlgebraSpec& alg, const LinComb& a, const LinComb& b) {
  std::map<int, ParamScalar> acc;
  for (const auto& [i, ci] : a)
    for (const auto& [j, cj] : b)
      for (const auto& [k, ck] : alg.bracket(i, j)) acc[k] += ci * cj * ck;
  LinComb out;
  for (auto& [k, c] : acc)
    if (!c.is_zero()) out.push_back({k, c});
  return out;
}

std::string jacobi_residual(const LieAlgebraSpec& alg) {
  int n = alg.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        std::map<int, ParamScalar> acc;
        auto add = [&](int a, int b, int c) {
          LinComb ab = alg.bracket(a, b);
          LinComb x{{c, ParamScalar(Rational(1))}};
          for (const auto& [m, cm] : bracket_lin(alg, ab, x)) acc[m] += cm;
        };
        add(i, j, k);
        add(j, k, i);
        add(k, i, j);
        for (auto& [m, c] : acc)
          if (!c.is_zero())
            return "jacobi fails on (" + alg.gen_names[i] + ", " + alg.gen_names[j] + ", " +
                   alg.gen_names[k] + "): coefficient of " + alg.gen_names[m] + " is " + c.str();
      }
  return "";
}

void validate_algebra(const LieAlgebraSpec& alg) {
  int n = alg.size();
  if (static_cast<int>(alg.bracket_table.size()) != n)
    throw spec_error("bracket table has wrong row count in " + alg.name);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(alg.bracket_table[i].size()) != n)
      throw spec_error("bracket table has wrong column count in " + alg.name);
    for (int j = 0; j < n; ++j) {
      std::map<int, ParamScalar> acc;
      for (const auto& [k, c] : alg.bracket_table[i][j]) acc[k] += c;
      for (const auto& [k, c] : alg.bracket_table[j][i]) acc[k] += c;
      for (auto& [k, c] : acc)
        if (!c.is_zero())
          throw spec_error("bracket table not antisymmetric at [" + alg.gen_names[i] + ", " +
                           alg.gen_names[j] + "] in " + alg.name);
    }
  }
  for (size_t c = 0; c < alg.cartan.size(); ++c) {
    int hc = alg.cartan[c];
    for (int j = 0; j < n; ++j) {
      // [h_c, x_j] must equal weight * x_j.
      std::map<int, ParamScalar> acc;
      for (const auto& [k, cv] : alg.bracket(hc, j)) acc[k] += cv;
      acc[j] -= alg.weights[j][c];
      for (auto& [k, cv] : acc)
        if (!cv.is_zero())
          throw spec_error("generator " + alg.gen_names[j] +
                           " is not an ad-eigenvector of Cartan generator " + alg.gen_names[hc] +
                           " in " + alg.name);
    }
  }
  std::string jr = jacobi_residual(alg);
  if (!jr.empty()) throw spec_error(alg.name + ": " + jr);
}

namespace {

// Fills the weight table from the bracket table; requires the Cartan
// eigenvector property (validated afterwards).
void derive_weights(LieAlgebraSpec& alg) {
  int n = alg.size();
  alg.weights.assign(n, std::vector<ParamScalar>(alg.cartan.size()));
  for (size_t c = 0; c < alg.cartan.size(); ++c) {
    int hc = alg.cartan[c];
    for (int j = 0; j < n; ++j)
      for (const auto& [k, cv] : alg.bracket(hc, j))
        if (k == j) alg.weights[j][c] = cv;
  }
}

}  // namespace

AlgebraPtr build_sl(int n) {
  if (n < 2 || n > 9) throw spec_error("build_sl supports 2 <= n <= 9");
  std::vector<BasisDesc> basis;
  std::vector<std::string> names;
  auto root_name = [](int a, int b) {
    return "e" + std::to_string(a) + std::to_string(b);
  };
  for (int a = 2; a <= n; ++a)
    for (int b = 1; b < a; ++b) {
      basis.push_back({false, a, b, 0});
      names.push_back(root_name(a, b));
    }
  int ncartan = n - 1;
  std::vector<int> cartan;
  for (int c = 0; c < ncartan; ++c) {
    cartan.push_back(static_cast<int>(basis.size()));
    basis.push_back({true, 0, 0, c});
    if (n == 3)
      names.push_back(c == 0 ? "h13" : "hperp");
    else
      names.push_back("h" + std::to_string(c + 1) + std::to_string(c + 2));
  }
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      basis.push_back({false, a, b, 0});
      names.push_back(root_name(a, b));
    }

  int dim = static_cast<int>(basis.size());
  auto materialize = [&](const BasisDesc& d) {
    Mat m(n);
    if (!d.is_cartan) {
      m.at(d.row - 1, d.col - 1) = Rational(1);
    } else if (n == 3 && d.cartan_pos == 0) {  // h13
      m.at(0, 0) = Rational(1, 2);
      m.at(2, 2) = Rational(-1, 2);
    } else if (n == 3) {  // hperp
      m.at(0, 0) = Rational(1, 2);
      m.at(1, 1) = Rational(-1);
      m.at(2, 2) = Rational(1, 2);
    } else {  // h_{a,a+1} = (E_aa - E_{a+1,a+1})/2
      m.at(d.cartan_pos, d.cartan_pos) = Rational(1, 2);
      m.at(d.cartan_pos + 1, d.cartan_pos + 1) = Rational(-1, 2);
    }
    return m;
  };
  std::vector<Mat> mats;
  mats.reserve(dim);
  for (const auto& d : basis) mats.push_back(materialize(d));

  // Decompose a traceless matrix over the chosen basis and verify the
  // reconstruction, so a convention slip cannot pass silently.
  auto decompose = [&](const Mat& m) {
    LinComb out;
    Mat check(n);
    for (int i = 0; i < dim; ++i) {
      if (basis[i].is_cartan) continue;
      const Rational& v = m.at(basis[i].row - 1, basis[i].col - 1);
      if (v.is_zero()) continue;
      out.push_back({i, ParamScalar(v)});
      for (int r = 0; r < n; ++r)
        for (int c2 = 0; c2 < n; ++c2) check.at(r, c2) += v * mats[i].at(r, c2);
    }
    std::vector<Rational> coef(ncartan, Rational(0));
    if (n == 3) {
      coef[0] = Rational(2) * m.at(0, 0) + m.at(1, 1);  // h13
      coef[1] = -m.at(1, 1);                            // hperp
    } else {
      Rational run(0);
      for (int b = 0; b < ncartan; ++b) {
        run += m.at(b, b);
        coef[b] = Rational(2) * run;
      }
    }
    for (int c = 0; c < ncartan; ++c) {
      if (coef[c].is_zero()) continue;
      out.push_back({cartan[c], ParamScalar(coef[c])});
      for (int r = 0; r < n; ++r)
        for (int c2 = 0; c2 < n; ++c2) check.at(r, c2) += coef[c] * mats[cartan[c]].at(r, c2);
    }
    for (int r = 0; r < n; ++r)
      for (int c2 = 0; c2 < n; ++c2)
        if (!(check.at(r, c2) == m.at(r, c2)))
          throw spec_error("internal: matrix decomposition failed for sl(" + std::to_string(n) +
                           ")");
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  };

  auto alg = std::make_shared<LieAlgebraSpec>();
  alg->name = "sl" + std::to_string(n);
  alg->gen_names = names;
  alg->cartan = cartan;
  alg->bracket_table.assign(dim, std::vector<LinComb>(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      alg->bracket_table[i][j] = decompose(mat_comm(mats[i], mats[j]));
    }
  derive_weights(*alg);
  validate_algebra(*alg);
  return alg;
}

AlgebraPtr build_borel2() {
  auto alg = std::make_shared<LieAlgebraSpec>();
  alg->name = "b2";
  alg->gen_names = {"H", "E"};
  alg->cartan = {0};
  alg->bracket_table.assign(2, std::vector<LinComb>(2));
  alg->bracket_table[0][1] = {{1, ParamScalar(Rational(1))}};
  alg->bracket_table[1][0] = {{1, ParamScalar(Rational(-1))}};
  derive_weights(*alg);
  validate_algebra(*alg);
  return alg;
}

AlgebraPtr scaled_structure_copy(const LieAlgebraSpec& alg) {
  auto out = std::make_shared<LieAlgebraSpec>();
  out->name = alg.name + ".scaled";
  out->gen_names = alg.gen_names;
  out->cartan = alg.cartan;
  ParamScalar eps = ParamScalar::param(Param::eps);
  int n = alg.size();
  out->bracket_table.assign(n, std::vector<LinComb>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      LinComb scaled = alg.bracket_table[i][j];
      for (auto& [k, c] : scaled) c *= eps;
      out->bracket_table[i][j] = std::move(scaled);
    }
  derive_weights(*out);
  validate_algebra(*out);
  return out;
}

std::string serialize_algebra(const LieAlgebraSpec& alg) {
  std::ostringstream os;
  os << "algebra " << alg.name << "\n";
  os << "generators";
  for (const auto& g : alg.gen_names) os << " " << g;
  os << "\n";
  os << "cartan";
  for (int c : alg.cartan) os << " " << alg.gen_names[c];
  os << "\n";
  for (int i = 0; i < alg.size(); ++i)
    for (int j = i + 1; j < alg.size(); ++j) {
      os << "bracket " << alg.gen_names[i] << " " << alg.gen_names[j] << " =";
      if (alg.bracket_table[i][j].empty()) {
        os << " 0";
      } else {
        bool first = true;
        for (const auto& [k, c] : alg.bracket_table[i][j]) {
          if (!c.is_rational())
            throw spec_error("cannot serialize non-rational structure constants of " + alg.name);
          Rational r = c.as_rational();
          if (r < Rational(0)) {
            os << " -";
            r = -r;
          } else if (!first) {
            os << " +";
          }
          os << " ";
          if (!r.is_one()) os << r.str() << " ";
          os << alg.gen_names[k];
          first = false;
        }
      }
      os << "\n";
    }
  return os.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// Parses "c1 g1 + c2 g2 - ..." where each c is an optional rational.
LinComb parse_lincomb(const LieAlgebraSpec& alg, const std::vector<std::string>& toks,
                      size_t start, int lineno) {
  LinComb out;
  if (start < toks.size() && toks[start] == "0" && start + 1 == toks.size()) return out;
  Rational sign(1);
  Rational coeff(1);
  bool saw_sign = false;
  bool have_coeff = false;
  auto fail = [&](const std::string& why) {
    throw spec_error("algebra file line " + std::to_string(lineno) + ": " + why);
  };
  for (size_t i = start; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "+" || t == "-") {
      if (saw_sign || have_coeff) fail("unexpected sign after " + toks[i - 1]);
      sign = t == "-" ? Rational(-1) : Rational(1);
      saw_sign = true;
      continue;
    }
    bool numeric = t.find_first_not_of("0123456789/-+") == std::string::npos;
    if (numeric) {
      if (have_coeff) fail("two coefficients in a row: " + t);
      coeff = Rational::parse(t);
      have_coeff = true;
      continue;
    }
    int g = alg.find(t);
    if (g < 0) fail("unknown generator " + t);
    out.push_back({g, ParamScalar(sign * coeff)});
    sign = Rational(1);
    coeff = Rational(1);
    saw_sign = false;
    have_coeff = false;
  }
  if (saw_sign || have_coeff) fail("trailing sign or coefficient");
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

}  // namespace

AlgebraPtr parse_algebra(const std::string& text) {
  auto alg = std::make_shared<LieAlgebraSpec>();
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_generators = false;
  std::vector<std::tuple<int, int, std::vector<std::string>, int>> pending;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw spec_error("algebra file line " + std::to_string(lineno) + ": " + why);
    };
    if (toks[0] == "algebra") {
      if (toks.size() != 2) fail("expected: algebra <name>");
      alg->name = toks[1];
    } else if (toks[0] == "generators") {
      alg->gen_names.assign(toks.begin() + 1, toks.end());
      if (alg->gen_names.empty()) fail("no generators listed");
      if (alg->gen_names.size() > 32) fail("at most 32 generators supported");
      have_generators = true;
      int n = alg->size();
      alg->bracket_table.assign(n, std::vector<LinComb>(n));
    } else if (toks[0] == "cartan") {
      if (!have_generators) fail("cartan before generators");
      for (size_t i = 1; i < toks.size(); ++i) alg->cartan.push_back(alg->index_of(toks[i]));
    } else if (toks[0] == "bracket") {
      if (!have_generators) fail("bracket before generators");
      if (toks.size() < 5 || toks[3] != "=") fail("expected: bracket <a> <b> = <lin comb>");
      int i = alg->index_of(toks[1]);
      int j = alg->index_of(toks[2]);
      pending.push_back({i, j, std::vector<std::string>(toks.begin() + 4, toks.end()), lineno});
    } else {
      fail("unknown directive " + toks[0]);
    }
  }
  if (!have_generators) throw spec_error("algebra file has no generators line");
  for (const auto& [i, j, rhs_toks, ln] : pending) {
    LinComb v = parse_lincomb(*alg, rhs_toks, 0, ln);
    alg->bracket_table[i][j] = v;
    for (auto& [k, c] : v) c = -c;
    alg->bracket_table[j][i] = v;
  }
  derive_weights(*alg);
  validate_algebra(*alg);
  return alg;
}

}  // namespace twistcalc
