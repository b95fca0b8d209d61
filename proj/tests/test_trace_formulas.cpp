#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gw/errors.hpp"
#include "gw/lie_core.hpp"
#include "gw/operators.hpp"
#include "gw/prng.hpp"
#include "gw/trace_formulas.hpp"

using namespace gw;

namespace {

const double kPi = std::numbers::pi;

Symbol norm_squared(int d) {
  Symbol p;
  p.d = d;
  for (int i = 0; i < d; ++i) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(i)] = 2;
    p.add_term(e, 1.0);
  }
  return p;
}

Symbol quartic_plus_square() {  // xi^4 + eta^2
  Symbol p;
  p.d = 2;
  p.add_term({4, 0}, 1.0);
  p.add_term({0, 2}, 1.0);
  return p;
}

Symbol quadratic_form(const Eigen::MatrixXd& A) {
  const int d = static_cast<int>(A.rows());
  Symbol p;
  p.d = d;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<int> e(static_cast<std::size_t>(d), 0);
      e[static_cast<std::size_t>(i)] += 1;
      e[static_cast<std::size_t>(j)] += 1;
      p.add_term(e, A(i, j));
    }
  return p;
}

Eigen::MatrixXd random_spd(Rng& rng, int d, double shift = 0.5) {
  Eigen::MatrixXd B(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) B(i, j) = rng.uniform(-1.0, 1.0);
  return B * B.transpose() + shift * Eigen::MatrixXd::Identity(d, d);
}

}  // namespace

TEST_CASE("sphere route on the euclidean laplacian") {
  for (int d : {1, 2, 3}) {
    auto r = tau_exp_sphere(norm_squared(d), 2, d);
    CHECK(r.value ==
          doctest::Approx(std::pow(4.0 * kPi, -0.5 * d)).epsilon(1e-10));
  }
}

TEST_CASE("sphere route on the 1d quartic") {
  Symbol p;
  p.d = 1;
  p.add_term({4}, 1.0);
  auto r = tau_exp_sphere(p, 4, 1);
  CHECK(r.value == doctest::Approx(std::tgamma(0.25) / (4.0 * kPi)).epsilon(1e-12));
  auto d = tau_exp_direct(p, 1);
  CHECK(r.value == doctest::Approx(d.value).epsilon(1e-9));
}

TEST_CASE("sphere route rejects nonpositive symbols") {
  Symbol p;
  p.d = 1;
  p.add_term({2}, 1.0);
  p.add_term({0}, -2.0);  // xi^2 - 2 < 0 at the sphere points
  CHECK_THROWS_AS(tau_exp_sphere(p, 2, 1), NumericError);
}

TEST_CASE("gaussian closed form") {
  for (int d : {1, 2, 3}) {
    auto r = tau_exp_gaussian(Eigen::MatrixXd::Identity(d, d));
    CHECK(r.value ==
          doctest::Approx(std::pow(4.0 * kPi, -0.5 * d)).epsilon(1e-13));
  }
  Eigen::MatrixXd A(1, 1);
  A << 4.0;
  CHECK(tau_exp_gaussian(A).value ==
        doctest::Approx(0.5 * std::pow(4.0 * kPi, -0.5)).epsilon(1e-13));

  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3, -1
  CHECK_THROWS_AS(tau_exp_gaussian(bad), std::invalid_argument);
}

TEST_CASE("direct quadrature oracle values") {
  auto g1 = tau_exp_direct(norm_squared(1), 1);
  CHECK(g1.value == doctest::Approx(std::pow(4.0 * kPi, -0.5)).epsilon(1e-10));

  auto aniso = tau_exp_direct(quartic_plus_square(), 2);
  const double expected = 2.0 * std::tgamma(1.25) * std::sqrt(kPi) /
                          std::pow(2.0 * kPi, 2);
  CHECK(aniso.value == doctest::Approx(expected).epsilon(1e-9));

  auto g3 = tau_exp_direct(norm_squared(3), 3);
  CHECK(g3.value == doctest::Approx(std::pow(4.0 * kPi, -1.5)).epsilon(1e-8));
}

TEST_CASE("gaussian, sphere and direct routes agree on random quadratic forms") {
  Rng rng(51);
  for (int it = 0; it < 3; ++it) {
    Eigen::MatrixXd A = random_spd(rng, 2);
    auto p = quadratic_form(A);
    auto a = tau_exp_gaussian(A);
    auto b = tau_exp_sphere(p, 2, 2);
    auto c = tau_exp_direct(p, 2);
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-8));
    CHECK(c.value == doctest::Approx(a.value).epsilon(1e-8));
  }
}

TEST_CASE("trace scaling under operator dilation") {
  // order-m homogeneous P: value(cP) = c^{-d_hom/m} value(P)
  auto p = quartic_plus_square();
  Symbol p2;
  p2.d = 2;
  for (const auto& [e, c] : p.coeffs) p2.add_term(e, 2.0 * c);
  auto r1 = tau_exp_direct(p, 2);
  auto r2 = tau_exp_direct(p2, 2);
  CHECK(r2.value ==
        doctest::Approx(std::pow(2.0, -3.0 / 4.0) * r1.value).epsilon(1e-9));

  auto q = norm_squared(2);
  Symbol q3;
  q3.d = 2;
  for (const auto& [e, c] : q.coeffs) q3.add_term(e, 3.0 * c);
  CHECK(tau_exp_sphere(q3, 2, 2).value ==
        doctest::Approx(tau_exp_sphere(q, 2, 2).value / 3.0).epsilon(1e-10));
}

TEST_CASE("tau_f reduces correctly for exponential-type f") {
  TraceResult tau{0.0813890, TraceMethod::direct_quadrature, 1e-12};
  const double a = 3.0 / 4.0;  // d_hom = 3, m = 4

  auto r1 = tau_f_homogeneous([](double x) { return std::exp(-x); }, 3, 4, tau);
  CHECK(r1.value == doctest::Approx(tau.value).epsilon(1e-10));

  auto r2 = tau_f_homogeneous([](double x) { return std::exp(-2.0 * x); }, 3, 4, tau);
  CHECK(r2.value == doctest::Approx(std::pow(2.0, -a) * tau.value).epsilon(1e-10));
}

TEST_CASE("tau_f on resolvent powers matches the gamma-ratio") {
  TraceResult tau{1.0, TraceMethod::direct_quadrature, 0.0};
  const double d_hom = 1, m = 2, z = 4;
  auto r = tau_f_homogeneous(
      [&](double x) { return std::pow(1.0 + x, -z / m); }, d_hom, m, tau);
  const double expected = std::tgamma((z - d_hom) / m) / std::tgamma(z / m);
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("tau_f rejects divergent weighted integrals") {
  TraceResult tau{1.0, TraceMethod::direct_quadrature, 0.0};
  CHECK_THROWS_AS(tau_f_homogeneous([](double x) { return 1.0 / (1.0 + x); }, 2,
                                    2, tau),
                  NumericError);
}

TEST_CASE("isotropic cone measure recovers the surface of the circle") {
  auto all = [](const Eigen::VectorXd&) { return true; };
  auto r = anisotropic_sphere_measure({1, 1}, all);
  CHECK(r.value == doctest::Approx(2.0 * kPi).epsilon(0.004));
  CHECK(anisotropic_sphere_measure_quadrature({1, 1}) ==
        doctest::Approx(2.0 * kPi).epsilon(1e-10));
}

TEST_CASE("anisotropic sphere measure: monte carlo vs quadrature") {
  auto all = [](const Eigen::VectorXd&) { return true; };
  const double exact = 2.0 * std::tgamma(0.25) * std::tgamma(0.5) / std::tgamma(0.75);
  CHECK(anisotropic_sphere_measure_quadrature({1, 2}) ==
        doctest::Approx(exact).epsilon(1e-10));
  auto mc = anisotropic_sphere_measure({1, 2}, all);
  CHECK(mc.value == doctest::Approx(exact).epsilon(5e-3));
  CHECK(std::abs(mc.value - exact) < 5.0 * mc.error_estimate + 1e-3);

  // half-sphere by symmetry
  auto upper = [](const Eigen::VectorXd& s) { return s[1] > 0.0; };
  auto half = anisotropic_sphere_measure({1, 2}, upper);
  CHECK(half.value == doctest::Approx(0.5 * exact).epsilon(8e-3));
}

TEST_CASE("anisotropic trace equals the direct oracle") {
  auto r = tau_exp_aniso(quartic_plus_square(), {1, 2}, 4);
  auto d = tau_exp_direct(quartic_plus_square(), 2);
  CHECK(r.value == doctest::Approx(d.value).epsilon(1e-8));
  const double closed = 2.0 * std::tgamma(1.25) * std::sqrt(kPi) /
                        std::pow(2.0 * kPi, 2);
  CHECK(r.value == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("williamson eigenvalues") {
  CHECK(williamson_eigenvalues(Eigen::MatrixXd::Identity(2, 2)) ==
        std::vector<double>{1.0});
  auto l4 = williamson_eigenvalues(Eigen::MatrixXd::Identity(4, 4));
  REQUIRE(l4.size() == 2);
  CHECK(l4[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l4[1] == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd D(2, 2);
  D << 3.0, 0.0, 0.0, 5.0;
  auto l = williamson_eigenvalues(D);
  CHECK(l[0] == doctest::Approx(std::sqrt(15.0)).epsilon(1e-12));

  CHECK_THROWS_AS(williamson_eigenvalues(Eigen::MatrixXd::Identity(3, 3)),
                  std::invalid_argument);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(williamson_eigenvalues(neg), std::invalid_argument);
}

TEST_CASE("williamson eigenvalues are symplectic invariants") {
  Rng rng(77);
  // n = 1: random elements of SL(2, R)
  for (int it = 0; it < 10; ++it) {
    Eigen::MatrixXd A = random_spd(rng, 2);
    Eigen::MatrixXd S(2, 2);
    double a = rng.uniform(0.5, 2.0), b = rng.uniform(-1.0, 1.0), c = rng.uniform(-1.0, 1.0);
    S << a, b, c, (1.0 + b * c) / a;
    auto l1 = williamson_eigenvalues(A);
    auto l2 = williamson_eigenvalues(S.transpose() * A * S);
    CHECK(l2[0] == doctest::Approx(l1[0]).epsilon(1e-10));
  }
  // n = 2: block generators diag(M, M^{-T}) and symmetric shears
  for (int it = 0; it < 5; ++it) {
    Eigen::MatrixXd A = random_spd(rng, 4);
    Eigen::MatrixXd M = random_spd(rng, 2, 1.0);
    Eigen::MatrixXd B = random_spd(rng, 2, 0.0);
    Eigen::MatrixXd S1 = Eigen::MatrixXd::Zero(4, 4), S2 = Eigen::MatrixXd::Identity(4, 4);
    S1.block(0, 0, 2, 2) = M;
    S1.block(2, 2, 2, 2) = M.transpose().inverse();
    S2.block(0, 2, 2, 2) = B;
    Eigen::MatrixXd S = S1 * S2;
    auto l1 = williamson_eigenvalues(A);
    auto l2 = williamson_eigenvalues(S.transpose() * A * S);
    CHECK(l2[0] == doctest::Approx(l1[0]).epsilon(1e-9));
    CHECK(l2[1] == doctest::Approx(l1[1]).epsilon(1e-9));
  }
}

TEST_CASE("heisenberg trace closed forms") {
  auto r = tau_exp_heisenberg(Eigen::MatrixXd::Identity(2, 2), 1);
  CHECK(r.value == doctest::Approx(1.0 / (64.0 * kPi * kPi)).epsilon(1e-10));

  Eigen::MatrixXd D(2, 2);
  D << 1.0, 0.0, 0.0, 4.0;  // lambda = 2, integral s/sinh(2s) = pi^2/16
  CHECK(tau_exp_heisenberg(D, 1).value ==
        doctest::Approx(1.0 / (256.0 * kPi * kPi)).epsilon(1e-10));
}

TEST_CASE("heisenberg trace scaling in the matrix") {
  Rng rng(91);
  for (int n : {1, 2}) {
    Eigen::MatrixXd A = random_spd(rng, 2 * n);
    const double c = 2.5;
    auto r1 = tau_exp_heisenberg(A, n);
    auto r2 = tau_exp_heisenberg(c * A, n);
    CHECK(r2.value ==
          doctest::Approx(std::pow(c, -(n + 1.0)) * r1.value).epsilon(1e-9));
  }
}

TEST_CASE("heisenberg determinant route equals the product route") {
  Rng rng(101);
  CHECK(tau_exp_heisenberg_det(Eigen::MatrixXd::Identity(2, 2), 1).value ==
        doctest::Approx(1.0 / (64.0 * kPi * kPi)).epsilon(1e-10));
  for (int n : {1, 2}) {
    for (int it = 0; it < 3; ++it) {
      Eigen::MatrixXd A = random_spd(rng, 2 * n);
      auto prod = tau_exp_heisenberg(A, n);
      auto det = tau_exp_heisenberg_det(A, n);
      CHECK(det.value == doctest::Approx(prod.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("weyl constant for the 1d gaussian profile") {
  auto grid = box_grid({{-10.0, 10.0}}, 400);
  auto f = [](const GroupPoint& g) { return std::exp(-g.coords[0] * g.coords[0]); };
  auto tau = [](const GroupPoint&) { return std::pow(4.0 * kPi, -0.5); };
  auto w = weyl_constant(f, 2.0, 2.0, 1.0, tau, grid);
  CHECK(w.value == doctest::Approx(2.0 / kPi).epsilon(1e-10));
  CHECK(w.exponent == doctest::Approx(2.0));
  CHECK(w.inputs_digest.size() == 16);
}

TEST_CASE("weyl constant is 1-homogeneous and monotone in f") {
  auto grid = box_grid({{-6.0, 6.0}}, 200);
  auto f = [](const GroupPoint& g) { return std::exp(-std::abs(g.coords[0])); };
  auto f3 = [&](const GroupPoint& g) { return 3.0 * f(g); };
  auto tau = [](const GroupPoint& g) {
    return 0.1 + 0.05 * std::cos(g.coords[0]);
  };
  auto w1 = weyl_constant(f, 1.5, 2.0, 1.0, tau, grid);
  auto w3 = weyl_constant(f3, 1.5, 2.0, 1.0, tau, grid);
  CHECK(w3.value == doctest::Approx(3.0 * w1.value).epsilon(1e-10));
  CHECK(w1.value <= w3.value);

  auto zero = weyl_constant([](const GroupPoint&) { return 0.0; }, 1.5, 2.0, 1.0,
                            tau, grid);
  CHECK(zero.value == 0.0);

  CHECK_THROWS_AS(weyl_constant(f, 1.5, 2.0, 1.0,
                                [](const GroupPoint&) { return -1.0; }, grid),
                  NumericError);
}

TEST_CASE("weyl constant constant-coefficient reduction") {
  // gamma = m: value = ||f||_{d/m} * (tau / Gamma(d/m+1))^{m/d}
  auto grid = box_grid({{-8.0, 8.0}}, 300);
  auto f = [](const GroupPoint& g) { return std::exp(-g.coords[0] * g.coords[0] / 3.0); };
  const double tau0 = 0.2287;
  auto w = weyl_constant(f, 2.0, 2.0, 1.0, [&](const GroupPoint&) { return tau0; }, grid);
  double norm = 0.0;  // ||f||_{1/2}^{1/2} on the same grid
  for (std::size_t i = 0; i < grid.nodes.size(); ++i)
    norm += grid.weights[i] * std::sqrt(f(grid.nodes[i]));
  norm *= norm;
  const double expected = norm * std::pow(tau0 / std::tgamma(1.5), 2.0);
  CHECK(w.value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("csv row format") {
  TraceResult r{0.25, TraceMethod::sphere, 1e-9};
  auto row = trace_csv_row("R^2(1,2)", "abcdef0123456789", r);
  CHECK(row == "R^2(1,2),abcdef0123456789,sphere,0.25,1.0000000000000001e-09");
}
