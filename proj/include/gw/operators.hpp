#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gw/lie_core.hpp"

namespace gw {

// A word over a preferred generating set; each letter is a 0-based position in
// the PreferredGenerators list (not a raw basis index).
using Word = std::vector<int>;

int weighted_length(const PreferredGenerators& gens, const Word& w);

// Left-invariant operator with constant complex coefficients:
//   P = sum_alpha  a_alpha X^alpha,   X^alpha = X_{a1} X_{a2} ... X_{ak}.
struct ConstDiffOp {
  PreferredGenerators gens;
  std::map<Word, std::complex<double>> terms;

  void add_term(const Word& w, std::complex<double> a);
  int order() const;  // max weighted length over nonzero terms, 0 if empty
  bool zero() const { return terms.empty(); }
};

ConstDiffOp scale(const ConstDiffOp& op, std::complex<double> c);
ConstDiffOp add(const ConstDiffOp& a, const ConstDiffOp& b);

// Scalar coefficient a(g) = scale * fn(g); an empty fn means the constant 1.
// Callable coefficients are real-valued; complex factors go through `scale`.
struct Coefficient {
  std::complex<double> scale{1.0, 0.0};
  std::function<double(const GroupPoint&)> fn;
  std::string label;  // stable name for digests when fn is set
  double support_radius = std::numeric_limits<double>::infinity();
  double sup_bound = std::numeric_limits<double>::infinity();

  std::complex<double> operator()(const GroupPoint& g) const {
    return fn ? scale * fn(g) : scale;
  }
  bool constant() const { return !fn; }
};

// Variable-coefficient operator. In standard form each term is M_a X^alpha
// (coefficient multiplies on the left); after a formal adjoint of a
// non-constant operator the terms read X^alpha M_a instead.
struct DiffOp {
  PreferredGenerators gens;
  std::map<Word, Coefficient> terms;
  bool adjoint_form = false;

  void add_term(const Word& w, Coefficient c);
  int order() const;
  bool constant_coefficients() const;
};

DiffOp lift(const ConstDiffOp& op);  // view as a DiffOp with constant terms

// Delta_G = -sum_j (-1)^{v/v_j} X_j^{2v/v_j}, v = lcm of generator degrees;
// -Delta_G is the positive operator of homogeneous order 2v.
ConstDiffOp canonical_laplacian(const PreferredGenerators& gens);

// Frozen top part at g: sum over top-weight terms of a_alpha(g) X^alpha.
// Sets *degenerate when every top coefficient vanishes at g.
ConstDiffOp freeze_top(const DiffOp& op, const GroupPoint& g,
                       bool* degenerate = nullptr);

// (M_a X^alpha)^+ = (-1)^{|alpha|} X^{reversed alpha} M_{conj a}.  With
// constant coefficients the result is re-expanded into standard form; otherwise
// it is returned in adjoint form.  Requesting re-expansion of a genuinely
// variable-coefficient operator throws (coefficient derivatives are not
// carried).
DiffOp formal_adjoint(const DiffOp& op, bool reexpand = false);
ConstDiffOp formal_adjoint(const ConstDiffOp& op);

// Polynomial in d dual variables; exponent vector -> complex coefficient.
struct Symbol {
  int d = 0;
  std::map<std::vector<int>, std::complex<double>> coeffs;

  std::complex<double> eval(const Eigen::VectorXd& xi) const;
  void add_term(const std::vector<int>& expo, std::complex<double> c);
};

// Full symbol sum_alpha i^{|alpha|} a_alpha xi^alpha, defined when the algebra
// is abelian (all brackets vanish).  Exponents live on the basis coordinates.
Symbol abelian_symbol(const GradedLieAlgebra& alg, const ConstDiffOp& op);

// Terms of anisotropic weighted degree exactly m (weights per dual variable).
Symbol symbol_principal_part(const Symbol& s, const std::vector<int>& weights, int m);

// Order m if every nonzero term has weighted length m, nullopt otherwise.
// The zero operator reports order 0.
std::optional<int> check_homogeneity(const ConstDiffOp& op);

// Rewrites words into sorted-letter normal form using the commutation rules;
// available for abelian and step <= 2 algebras whose generating set contains
// every basis element reachable by a single bracket.
ConstDiffOp normal_form(const GradedLieAlgebra& alg, const ConstDiffOp& op);

struct RocklandReport {
  double lower_bound = 0.0;
  bool pass = false;
  long samples = 0;
};

enum class RocklandMode { abelian, heisenberg };

// Positivity certificate for -op (abelian: min of Re symbol over the
// anisotropic unit sphere; heisenberg: bottom eigenvalue of truncated
// Schroedinger representations).  Positive minimum is sufficient, not a proof.
RocklandReport rockland_check(const ConstDiffOp& op, const GradedLieAlgebra& alg,
                              RocklandMode mode);

namespace detail {
RocklandReport rockland_heisenberg(const ConstDiffOp& op, const GradedLieAlgebra& alg);
}

std::string serialize(const ConstDiffOp& op);
std::string serialize(const DiffOp& op);
std::string operator_digest(const ConstDiffOp& op);
std::string operator_digest(const DiffOp& op);

}  // namespace gw
