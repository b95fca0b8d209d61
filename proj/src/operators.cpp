#include "gw/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "gw/digest.hpp"
#include "gw/prng.hpp"

namespace gw {

namespace {

constexpr double kZeroTol = 0.0;  // exact cancellation only

bool is_abelian(const GradedLieAlgebra& alg) {
  const int d = alg.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        if (alg.c()(i, j, k) != 0.0) return false;
  return true;
}

void check_word(const PreferredGenerators& gens, const Word& w) {
  const int n = static_cast<int>(gens.indices.size());
  for (int letter : w)
    if (letter < 0 || letter >= n)
      throw std::invalid_argument("word letter out of range");
}

}  // namespace

int weighted_length(const PreferredGenerators& gens, const Word& w) {
  check_word(gens, w);
  int len = 0;
  for (int letter : w) len += gens.degrees[static_cast<std::size_t>(letter)];
  return len;
}

void ConstDiffOp::add_term(const Word& w, std::complex<double> a) {
  check_word(gens, w);
  auto it = terms.find(w);
  if (it == terms.end()) {
    if (std::abs(a) > kZeroTol) terms.emplace(w, a);
    return;
  }
  it->second += a;
  if (std::abs(it->second) <= kZeroTol) terms.erase(it);
}

int ConstDiffOp::order() const {
  int m = 0;
  for (const auto& [w, a] : terms) m = std::max(m, weighted_length(gens, w));
  return m;
}

ConstDiffOp scale(const ConstDiffOp& op, std::complex<double> c) {
  ConstDiffOp out;
  out.gens = op.gens;
  if (c == std::complex<double>(0.0, 0.0)) return out;
  for (const auto& [w, a] : op.terms) out.terms.emplace(w, c * a);
  return out;
}

ConstDiffOp add(const ConstDiffOp& a, const ConstDiffOp& b) {
  if (a.gens.indices != b.gens.indices)
    throw std::invalid_argument("operator sum over different generating sets");
  ConstDiffOp out = a;
  for (const auto& [w, c] : b.terms) out.add_term(w, c);
  return out;
}

void DiffOp::add_term(const Word& w, Coefficient c) {
  check_word(gens, w);
  terms[w] = std::move(c);
}

int DiffOp::order() const {
  int m = 0;
  for (const auto& [w, c] : terms) m = std::max(m, weighted_length(gens, w));
  return m;
}

bool DiffOp::constant_coefficients() const {
  for (const auto& [w, c] : terms)
    if (!c.constant()) return false;
  return true;
}

DiffOp lift(const ConstDiffOp& op) {
  DiffOp out;
  out.gens = op.gens;
  for (const auto& [w, a] : op.terms) {
    Coefficient c;
    c.scale = a;
    out.terms.emplace(w, std::move(c));
  }
  return out;
}

ConstDiffOp canonical_laplacian(const PreferredGenerators& gens) {
  ConstDiffOp op;
  op.gens = gens;
  const int v = gens.lcm_degree;
  for (std::size_t j = 0; j < gens.indices.size(); ++j) {
    const int vj = gens.degrees[j];
    const int power = 2 * v / vj;
    Word w(static_cast<std::size_t>(power), static_cast<int>(j));
    const double sign = (v / vj) % 2 == 0 ? -1.0 : 1.0;  // -(-1)^{v/v_j}
    op.add_term(w, sign);
  }
  return op;
}

ConstDiffOp freeze_top(const DiffOp& op, const GroupPoint& g, bool* degenerate) {
  ConstDiffOp out;
  out.gens = op.gens;
  const int m = op.order();
  bool have_top_words = false;
  for (const auto& [w, c] : op.terms) {
    if (weighted_length(op.gens, w) != m) continue;
    have_top_words = true;
    out.add_term(w, c(g));
  }
  if (degenerate) *degenerate = have_top_words && out.terms.empty();
  return out;
}

DiffOp formal_adjoint(const DiffOp& op, bool reexpand) {
  DiffOp out;
  out.gens = op.gens;
  const bool constant = op.constant_coefficients();
  for (const auto& [w, c] : op.terms) {
    Word rev(w.rbegin(), w.rend());
    Coefficient nc = c;
    const double sign = w.size() % 2 == 0 ? 1.0 : -1.0;
    nc.scale = sign * std::conj(c.scale);
    out.terms[rev] = std::move(nc);
  }
  // (M_a X^a)^+ = X^rev M_conj-a: the coefficient switches sides unless it is
  // constant; the adjoint of an adjoint-form operator is back in standard form.
  out.adjoint_form = !op.adjoint_form && !constant;
  if (reexpand && out.adjoint_form)
    throw std::invalid_argument(
        "re-expansion of a variable-coefficient adjoint needs coefficient "
        "derivatives, which are not carried");
  return out;
}

ConstDiffOp formal_adjoint(const ConstDiffOp& op) {
  ConstDiffOp out;
  out.gens = op.gens;
  for (const auto& [w, a] : op.terms) {
    Word rev(w.rbegin(), w.rend());
    const double sign = w.size() % 2 == 0 ? 1.0 : -1.0;
    out.add_term(rev, sign * std::conj(a));
  }
  return out;
}

std::complex<double> Symbol::eval(const Eigen::VectorXd& xi) const {
  if (xi.size() != d) throw std::invalid_argument("symbol argument dimension");
  std::complex<double> total = 0.0;
  for (const auto& [expo, c] : coeffs) {
    double mono = 1.0;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < expo[static_cast<std::size_t>(i)]; ++k) mono *= xi[i];
    total += c * mono;
  }
  return total;
}

void Symbol::add_term(const std::vector<int>& expo, std::complex<double> c) {
  auto it = coeffs.find(expo);
  if (it == coeffs.end()) {
    if (std::abs(c) > kZeroTol) coeffs.emplace(expo, c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) <= kZeroTol) coeffs.erase(it);
}

Symbol abelian_symbol(const GradedLieAlgebra& alg, const ConstDiffOp& op) {
  if (!is_abelian(alg))
    throw std::invalid_argument("abelian_symbol requires an abelian algebra");
  Symbol s;
  s.d = alg.dim();
  const std::complex<double> iu(0.0, 1.0);
  for (const auto& [w, a] : op.terms) {
    std::vector<int> expo(static_cast<std::size_t>(s.d), 0);
    for (int letter : w)
      expo[static_cast<std::size_t>(op.gens.indices[static_cast<std::size_t>(letter)])]++;
    s.add_term(expo, a * std::pow(iu, static_cast<double>(w.size())));
  }
  return s;
}

Symbol symbol_principal_part(const Symbol& s, const std::vector<int>& weights, int m) {
  if (static_cast<int>(weights.size()) != s.d)
    throw std::invalid_argument("weight vector dimension");
  Symbol out;
  out.d = s.d;
  for (const auto& [expo, c] : s.coeffs) {
    int deg = 0;
    for (int i = 0; i < s.d; ++i)
      deg += expo[static_cast<std::size_t>(i)] * weights[static_cast<std::size_t>(i)];
    if (deg == m) out.add_term(expo, c);
  }
  return out;
}

std::optional<int> check_homogeneity(const ConstDiffOp& op) {
  if (op.terms.empty()) return 0;
  std::optional<int> m;
  for (const auto& [w, a] : op.terms) {
    const int len = weighted_length(op.gens, w);
    if (!m) m = len;
    else if (*m != len) return std::nullopt;
  }
  return m;
}

namespace {

void reduce_word(const GradedLieAlgebra& alg, const PreferredGenerators& gens,
                 const Word& w, std::complex<double> coeff, ConstDiffOp& out) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] <= w[i + 1]) continue;
    Word swapped = w;
    std::swap(swapped[i], swapped[i + 1]);
    reduce_word(alg, gens, swapped, coeff, out);
    const int bi = gens.indices[static_cast<std::size_t>(w[i])];
    const int bj = gens.indices[static_cast<std::size_t>(w[i + 1])];
    for (int k = 0; k < alg.dim(); ++k) {
      const double ck = alg.c()(bi, bj, k);
      if (ck == 0.0) continue;
      auto pos = std::find(gens.indices.begin(), gens.indices.end(), k);
      if (pos == gens.indices.end())
        throw std::invalid_argument(
            "normal form needs the generating set closed under single brackets");
      Word shorter;
      shorter.reserve(w.size() - 1);
      shorter.insert(shorter.end(), w.begin(), w.begin() + static_cast<long>(i));
      shorter.push_back(static_cast<int>(pos - gens.indices.begin()));
      shorter.insert(shorter.end(), w.begin() + static_cast<long>(i) + 2, w.end());
      reduce_word(alg, gens, shorter, coeff * ck, out);
    }
    return;
  }
  out.add_term(w, coeff);
}

}  // namespace

ConstDiffOp normal_form(const GradedLieAlgebra& alg, const ConstDiffOp& op) {
  if (!is_abelian(alg) && alg.step() > 2)
    throw std::invalid_argument("normal form supported for abelian and step-2 only");
  ConstDiffOp out;
  out.gens = op.gens;
  for (const auto& [w, a] : op.terms) reduce_word(alg, op.gens, w, a, out);
  return out;
}

namespace {

// Push a Euclidean unit vector u onto {sum s_j^{2v/v_j} = 1} via
// s_j = sgn(u_j) |u_j|^{v_j/v}; the constraint becomes sum u_j^2 = 1.
Eigen::VectorXd push_to_anisotropic_sphere(const Eigen::VectorXd& u,
                                           const std::vector<int>& degrees, int v) {
  Eigen::VectorXd s(u.size());
  for (int j = 0; j < u.size(); ++j) {
    const double e = static_cast<double>(degrees[static_cast<std::size_t>(j)]) / v;
    s[j] = std::copysign(std::pow(std::abs(u[j]), e), u[j]);
  }
  return s;
}

RocklandReport rockland_abelian(const ConstDiffOp& op, const GradedLieAlgebra& alg) {
  const Symbol sym = abelian_symbol(alg, op);
  const int d = alg.dim();
  std::vector<int> degrees;
  for (int idx : op.gens.indices) degrees.push_back(alg.layer(idx));
  const int v = op.gens.lcm_degree;

  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    Eigen::VectorXd u(1);
    u << 1.0;
    dirs.push_back(u);
    u << -1.0;
    dirs.push_back(u);
  } else if (d == 2) {
    // endpoint grid so coordinate axes are sampled exactly
    const long n = 20000;
    for (long k = 0; k < n; ++k) {
      const double th = 2.0 * std::numbers::pi * k / n;
      Eigen::VectorXd u(2);
      u << std::cos(th), std::sin(th);
      dirs.push_back(u);
    }
  } else if (d == 3) {
    for (int axis = 0; axis < 3; ++axis)
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(3);
        u[axis] = sgn;
        dirs.push_back(u);
      }
    const long n = 200000;  // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (long k = 0; k < n; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = golden * k;
      Eigen::VectorXd u(3);
      u << r * std::cos(th), r * std::sin(th), z;
      dirs.push_back(u);
    }
  } else {
    Rng rng(424243);
    const long n = 200000;
    for (long k = 0; k < n; ++k) {
      Eigen::VectorXd u(d);
      for (int i = 0; i < d; ++i) u[i] = rng.normal();
      if (u.norm() < 1e-12) continue;
      dirs.push_back(u.normalized());
    }
  }

  RocklandReport rep;
  rep.samples = static_cast<long>(dirs.size());
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& u : dirs) {
    const Eigen::VectorXd s = push_to_anisotropic_sphere(u, degrees, v);
    lo = std::min(lo, sym.eval(s).real());
  }
  rep.lower_bound = lo;
  rep.pass = lo > 1e-9;
  return rep;
}

}  // namespace

RocklandReport rockland_check(const ConstDiffOp& op, const GradedLieAlgebra& alg,
                              RocklandMode mode) {
  switch (mode) {
    case RocklandMode::abelian:
      return rockland_abelian(op, alg);
    case RocklandMode::heisenberg:
      return detail::rockland_heisenberg(op, alg);
  }
  throw std::invalid_argument("unsupported rockland mode");
}

namespace {

std::string word_key(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(w[i]);
  }
  return s;
}

std::string gens_key(const PreferredGenerators& g) {
  std::string s = "gens:";
  for (std::size_t i = 0; i < g.indices.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(g.indices[i]);
  }
  return s;
}

}  // namespace

std::string serialize(const ConstDiffOp& op) {
  std::string s = "constdiffop|" + gens_key(op.gens);
  for (const auto& [w, a] : op.terms) {
    s += "|w:" + word_key(w) + "=" + format_double(a.real()) + "," +
         format_double(a.imag());
  }
  return s;
}

std::string serialize(const DiffOp& op) {
  std::string s = "diffop|" + gens_key(op.gens);
  s += op.adjoint_form ? "|adjoint" : "|standard";
  for (const auto& [w, c] : op.terms) {
    s += "|w:" + word_key(w) + "=" + format_double(c.scale.real()) + "," +
         format_double(c.scale.imag());
    if (!c.constant()) s += ";" + (c.label.empty() ? std::string("callable") : c.label);
  }
  return s;
}

std::string operator_digest(const ConstDiffOp& op) { return short_digest(serialize(op)); }
std::string operator_digest(const DiffOp& op) { return short_digest(serialize(op)); }

}  // namespace gw
