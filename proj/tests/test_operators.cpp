#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "gw/lie_core.hpp"
#include "gw/operators.hpp"
#include "gw/prng.hpp"

using namespace gw;
using cplx = std::complex<double>;

namespace {

bool same_terms(const ConstDiffOp& a, const ConstDiffOp& b, double tol = 1e-12) {
  if (a.terms.size() != b.terms.size()) return false;
  for (const auto& [w, c] : a.terms) {
    auto it = b.terms.find(w);
    if (it == b.terms.end()) return false;
    if (std::abs(c - it->second) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("weighted length") {
  auto h = heisenberg_algebra(1);
  auto full = make_preferred_generators(h, {0, 1, 2});
  CHECK(weighted_length(full, {}) == 0);
  CHECK(weighted_length(full, {0, 1}) == 2);
  CHECK(weighted_length(full, {2}) == 2);
  CHECK(weighted_length(full, {0, 1, 2}) == 4);

  auto a = abelian_algebra({1, 2});
  auto ga = default_generators(a);
  CHECK(weighted_length(ga, {1, 1}) == 4);
  CHECK_THROWS_AS(weighted_length(ga, {5}), std::invalid_argument);
}

TEST_CASE("canonical laplacian on a trivial grading is the flat laplacian") {
  auto a = abelian_algebra({1, 1, 1});
  auto op = canonical_laplacian(default_generators(a));
  REQUIRE(op.terms.size() == 3);
  for (int j = 0; j < 3; ++j) {
    Word w{j, j};
    REQUIRE(op.terms.count(w) == 1);
    CHECK(op.terms.at(w).real() == doctest::Approx(1.0));
  }
  CHECK(op.order() == 2);
}

TEST_CASE("canonical laplacian with weights (1,2)") {
  auto a = abelian_algebra({1, 2});
  auto op = canonical_laplacian(default_generators(a));
  // Delta_G = -dx^4 + dy^2, order 2v = 4
  REQUIRE(op.terms.size() == 2);
  CHECK(op.terms.at(Word{0, 0, 0, 0}).real() == doctest::Approx(-1.0));
  CHECK(op.terms.at(Word{1, 1}).real() == doctest::Approx(1.0));
  CHECK(op.order() == 4);
  CHECK(check_homogeneity(op).value() == 4);

  auto sym = abelian_symbol(a, scale(op, -1.0));
  Eigen::VectorXd xi(2);
  xi << 1.5, -0.7;
  CHECK(sym.eval(xi).real() ==
        doctest::Approx(std::pow(1.5, 4) + 0.49).epsilon(1e-13));
  CHECK(sym.eval(xi).imag() == doctest::Approx(0.0));
}

TEST_CASE("canonical laplacian on heisenberg is the sub-laplacian") {
  auto h = heisenberg_algebra(1);
  auto op = canonical_laplacian(default_generators(h));
  // Delta_G = X^2 + Y^2, so -Delta_G is the positive sub-laplacian
  REQUIRE(op.terms.size() == 2);
  CHECK(op.terms.at(Word{0, 0}).real() == doctest::Approx(1.0));
  CHECK(op.terms.at(Word{1, 1}).real() == doctest::Approx(1.0));
  CHECK(check_homogeneity(op).value() == 2);
}

TEST_CASE("anisotropic symbol homogeneity") {
  auto a = abelian_algebra({1, 2});
  auto op = scale(canonical_laplacian(default_generators(a)), -1.0);
  auto sym = abelian_symbol(a, op);
  Rng rng(5);
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd xi(2), txi(2);
    xi << rng.uniform(-2, 2), rng.uniform(-2, 2);
    double t = rng.uniform(0.2, 3.0);
    txi << t * xi[0], t * t * xi[1];
    CHECK(sym.eval(txi).real() ==
          doctest::Approx(std::pow(t, 4) * sym.eval(xi).real()).epsilon(1e-11));
  }
}

TEST_CASE("homogeneity detection") {
  auto a = abelian_algebra({1, 2});
  auto op = canonical_laplacian(default_generators(a));
  ConstDiffOp shifted = op;
  shifted.add_term({}, 1.0);  // 1 + P
  CHECK_FALSE(check_homogeneity(shifted).has_value());
  ConstDiffOp zero;
  zero.gens = default_generators(a);
  CHECK(check_homogeneity(zero).value() == 0);
}

TEST_CASE("freeze_top picks top-weight coefficients at the base point") {
  auto line = abelian_algebra({1});
  auto gens = default_generators(line);
  DiffOp op;
  op.gens = gens;
  Coefficient a;
  a.fn = [](const GroupPoint& g) { return 2.0 + std::sin(g.coords[0]); };
  a.label = "2+sin";
  a.sup_bound = 3.0;
  op.add_term({0, 0}, a);
  Coefficient b;
  b.fn = [](const GroupPoint& g) { return std::cos(g.coords[0]); };
  b.label = "cos";
  op.add_term({0}, b);

  Eigen::VectorXd origin(1);
  origin << 0.0;
  bool degenerate = true;
  auto frozen = freeze_top(op, GroupPoint{origin}, &degenerate);
  CHECK_FALSE(degenerate);
  REQUIRE(frozen.terms.size() == 1);
  CHECK(frozen.terms.at(Word{0, 0}).real() == doctest::Approx(2.0));

  // all top coefficients vanish -> degenerate zero operator
  DiffOp bad;
  bad.gens = gens;
  Coefficient s;
  s.fn = [](const GroupPoint& g) { return std::sin(g.coords[0]); };
  bad.add_term({0, 0}, s);
  auto z = freeze_top(bad, GroupPoint{origin}, &degenerate);
  CHECK(degenerate);
  CHECK(z.zero());
}

TEST_CASE("freeze_top is the identity on homogeneous constant operators") {
  auto h = heisenberg_algebra(1);
  auto op = canonical_laplacian(default_generators(h));
  Rng rng(9);
  for (int it = 0; it < 10; ++it) {
    Eigen::VectorXd p(3);
    p << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
    auto frozen = freeze_top(lift(op), GroupPoint{p});
    CHECK(same_terms(frozen, op));
  }
}

TEST_CASE("formal adjoint basics") {
  auto line = abelian_algebra({1});
  auto gens = default_generators(line);

  ConstDiffOp d;
  d.gens = gens;
  d.add_term({0}, 1.0);  // d/dx
  auto dt = formal_adjoint(d);
  CHECK(dt.terms.at(Word{0}).real() == doctest::Approx(-1.0));

  auto a = abelian_algebra({1, 2});
  auto lap = canonical_laplacian(default_generators(a));
  CHECK(same_terms(formal_adjoint(lap), lap));  // even orders, real coeffs
}

TEST_CASE("adjoint of a variable-coefficient term switches sides") {
  auto line = abelian_algebra({1});
  DiffOp op;
  op.gens = default_generators(line);
  Coefficient a;
  a.fn = [](const GroupPoint& g) { return 1.0 + g.coords[0] * g.coords[0]; };
  a.label = "1+x^2";
  op.add_term({0}, a);

  auto adj = formal_adjoint(op);
  CHECK(adj.adjoint_form);
  CHECK(adj.terms.at(Word{0}).scale.real() == doctest::Approx(-1.0));
  CHECK_THROWS_AS(formal_adjoint(op, /*reexpand=*/true), std::invalid_argument);

  auto back = formal_adjoint(adj);
  CHECK_FALSE(back.adjoint_form);
  CHECK(back.terms.at(Word{0}).scale.real() == doctest::Approx(1.0));
}

TEST_CASE("adjoint conjugates the abelian symbol") {
  auto a = abelian_algebra({1, 2});
  auto gens = default_generators(a);
  Rng rng(21);
  for (int it = 0; it < 20; ++it) {
    ConstDiffOp op;
    op.gens = gens;
    op.add_term({0, 0}, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    op.add_term({1}, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    op.add_term({0, 1, 0}, cplx(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    auto sp = abelian_symbol(a, op);
    auto sq = abelian_symbol(a, formal_adjoint(op));
    Eigen::VectorXd xi(2);
    xi << rng.uniform(-3, 3), rng.uniform(-3, 3);
    CHECK(std::abs(sq.eval(xi) - std::conj(sp.eval(xi))) < 1e-12);
  }
}

TEST_CASE("freeze_top commutes with the formal adjoint") {
  auto line = abelian_algebra({1});
  auto gens = default_generators(line);
  DiffOp op;
  op.gens = gens;
  Coefficient a;
  a.fn = [](const GroupPoint& g) { return 2.0 + std::cos(g.coords[0]); };
  a.label = "2+cos";
  op.add_term({0, 0}, a);
  Coefficient b;
  b.fn = [](const GroupPoint& g) { return std::exp(-g.coords[0] * g.coords[0]); };
  b.label = "gauss";
  op.add_term({0}, b);

  Rng rng(33);
  for (int it = 0; it < 20; ++it) {
    Eigen::VectorXd p(1);
    p << rng.uniform(-2, 2);
    GroupPoint g{p};
    auto lhs = freeze_top(formal_adjoint(op), g);
    auto rhs = formal_adjoint(freeze_top(op, g));
    CHECK(same_terms(lhs, rhs));
  }
}

TEST_CASE("normal form on the heisenberg group") {
  auto h = heisenberg_algebra(1);
  auto full = make_preferred_generators(h, {0, 1, 2});
  ConstDiffOp yx;
  yx.gens = full;
  yx.add_term({1, 0}, 1.0);  // Y X = X Y - T
  auto nf = normal_form(h, yx);
  REQUIRE(nf.terms.size() == 2);
  CHECK(nf.terms.at(Word{0, 1}).real() == doctest::Approx(1.0));
  CHECK(nf.terms.at(Word{2}).real() == doctest::Approx(-1.0));

  // [X, Y] as operators: XY - YX = T
  ConstDiffOp comm;
  comm.gens = full;
  comm.add_term({0, 1}, 1.0);
  comm.add_term({1, 0}, -1.0);
  auto cn = normal_form(h, comm);
  REQUIRE(cn.terms.size() == 1);
  CHECK(cn.terms.at(Word{2}).real() == doctest::Approx(1.0));
}

TEST_CASE("normal form rejects missing bracket targets and deep steps") {
  auto h = heisenberg_algebra(1);
  ConstDiffOp yx;
  yx.gens = default_generators(h);  // X, Y only: T unreachable
  yx.add_term({1, 0}, 1.0);
  CHECK_THROWS_AS(normal_form(h, yx), std::invalid_argument);

  auto f = filiform_algebra(2);
  ConstDiffOp w;
  w.gens = make_preferred_generators(f, {0, 1, 2, 3});
  w.add_term({1, 0}, 1.0);
  CHECK_THROWS_AS(normal_form(f, w), std::invalid_argument);
}

TEST_CASE("rockland check on the line") {
  auto line = abelian_algebra({1});
  auto op = scale(canonical_laplacian(default_generators(line)), -1.0);  // -d^2/dx^2
  auto rep = rockland_check(op, line, RocklandMode::abelian);
  CHECK(rep.pass);
  CHECK(rep.lower_bound == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rockland check matches the sphere constraint exactly for -Delta_G") {
  auto a = abelian_algebra({1, 2});
  auto op = scale(canonical_laplacian(default_generators(a)), -1.0);
  auto rep = rockland_check(op, a, RocklandMode::abelian);
  CHECK(rep.pass);
  CHECK(rep.samples >= 10000);
  // symbol xi^4 + eta^2 coincides with the sphere constraint s1^4 + s2^2 = 1
  CHECK(rep.lower_bound == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rockland check fails for a degenerate direction") {
  auto plane = abelian_algebra({1, 1});
  ConstDiffOp op;
  op.gens = default_generators(plane);
  op.add_term({0, 0}, -1.0);  // -dx^2 on R^2, blind to the y direction
  auto rep = rockland_check(op, plane, RocklandMode::abelian);
  CHECK_FALSE(rep.pass);
  CHECK(rep.lower_bound == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("digests are deterministic and distinguish operators") {
  auto a = abelian_algebra({1, 2});
  auto p = canonical_laplacian(default_generators(a));
  auto q = scale(p, -1.0);
  CHECK(operator_digest(p).size() == 16);
  CHECK(operator_digest(p) == operator_digest(p));
  CHECK(operator_digest(p) != operator_digest(q));
}
