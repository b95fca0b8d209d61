#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include "gw/discretize.hpp"
#include "gw/errors.hpp"
#include "gw/linalg.hpp"
#include "gw/operators.hpp"
#include "gw/prng.hpp"

using namespace gw;
using cd = std::complex<double>;

namespace {

Symbol sym_xi2() {
  Symbol s;
  s.d = 1;
  s.add_term({2}, 1.0);
  return s;
}

Coefficient bump1d(double radius, double height = 1.0) {
  Coefficient f;
  f.fn = [radius, height](const GroupPoint& g) {
    const double t = g.coords[0] / radius;
    return std::abs(t) < 1.0 ? height * std::pow(1.0 - t * t, 3) : 0.0;
  };
  f.label = "bump1d";
  f.support_radius = radius;
  f.sup_bound = height;
  return f;
}

Coefficient odd_bump1d(double radius) {
  Coefficient f;
  f.fn = [radius](const GroupPoint& g) {
    const double x = g.coords[0];
    const double t = x / radius;
    return std::abs(t) < 1.0 ? x * std::pow(1.0 - t * t, 3) : 0.0;
  };
  f.label = "odd_bump1d";
  f.support_radius = radius;
  f.sup_bound = radius;
  return f;
}

std::vector<double> gram_singular_values(const MatrixOperator& op) {
  REQUIRE(op.gram.has_value());
  Eigen::VectorXd ev = symmetric_eigenvalues(*op.gram);
  std::vector<double> sv(ev.size());
  for (long i = 0; i < ev.size(); ++i)
    sv[i] = std::sqrt(std::max(0.0, ev[ev.size() - 1 - i]));
  return sv;
}

Eigen::SparseMatrix<double> tridiag_laplacian(long n, double h) {
  std::vector<Eigen::Triplet<double>> t;
  const double d = 2.0 / (h * h), o = -1.0 / (h * h);
  for (long i = 0; i < n; ++i) {
    t.emplace_back(i, i, d);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, o);
      t.emplace_back(i + 1, i, o);
    }
  }
  Eigen::SparseMatrix<double> P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

MatrixOperator wrap_sparse(const Eigen::SparseMatrix<double>& P) {
  MatrixOperator op;
  op.size = P.rows();
  op.hermitian = true;
  op.sparse = P;
  op.action = [P](const Eigen::VectorXcd& v) { return (P * v).eval(); };
  return op;
}

MatrixOperator wrap_dense(const Eigen::MatrixXd& P) {
  MatrixOperator op;
  op.size = P.rows();
  op.hermitian = true;
  op.dense = P.cast<cd>();
  op.action = [P](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd w(v.size());
    w.real() = P * v.real();
    w.imag() = P * v.imag();
    return w;
  };
  return op;
}

Coefficient heisenberg_bump(double radius) {
  Coefficient f;
  f.fn = [radius](const GroupPoint& g) {
    auto b = [](double t) {
      return std::abs(t) < 1.0 ? std::pow(1.0 - t * t, 3) : 0.0;
    };
    return b(g.coords[0] / radius) * b(g.coords[1] / radius) *
           b(g.coords[2] / (radius * radius));
  };
  f.label = "heis_bump";
  f.support_radius = radius;
  f.sup_bound = 1.0;
  return f;
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  Grid g = make_fourier_grid({2.0}, {8});
  CHECK(g.total() == 8);
  CHECK(g.spacing(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.coordinate(0, 0) == doctest::Approx(-2.0));
  CHECK(g.coordinate(0, 7) == doctest::Approx(1.5));
  CHECK(g.cell_volume() == doctest::Approx(0.5));
  std::vector<double> fr = g.frequencies(0);
  CHECK(fr[0] == doctest::Approx(0.0));
  CHECK(fr[1] == doctest::Approx(M_PI / 2.0));
  CHECK(fr[4] == doctest::Approx(-2.0 * M_PI));  // Nyquist, negative convention
  CHECK(fr[7] == doctest::Approx(-M_PI / 2.0));

  CHECK_THROWS_AS(make_fourier_grid({2.0}, {9}), std::invalid_argument);
  CHECK_THROWS_AS(make_fourier_grid({-1.0}, {8}), std::invalid_argument);

  Grid fd = make_fd_grid({1.0, 1.0, 2.0}, 17);
  CHECK(fd.total() == 17 * 17 * 17);
  CHECK(fd.spacing(0) == doctest::Approx(2.0 / 18.0));
  CHECK(fd.coordinate(0, 0) == doctest::Approx(-1.0 + 2.0 / 18.0));
  CHECK(fd.coordinate(0, 16) == doctest::Approx(1.0 - 2.0 / 18.0));
  CHECK_THROWS_AS(fd.frequencies(0), std::invalid_argument);
}

TEST_CASE("constant f: singular values equal the multiplier exactly") {
  Grid g = make_fourier_grid({M_PI}, {32});  // frequencies are the integers
  MatrixOperator op = fourier_operator(sym_xi2(), g, 0.5, Coefficient{});
  CHECK(op.hermitian);
  CHECK(op.dense.has_value());
  CHECK(static_cast<long>(op.support.size()) == 32);

  std::vector<double> expected;
  for (double xi : g.frequencies(0))
    expected.push_back(std::pow(1.0 + xi * xi, -0.5));
  std::sort(expected.rbegin(), expected.rend());

  std::vector<double> sv = gram_singular_values(op);
  REQUIRE(sv.size() == expected.size());
  for (std::size_t i = 0; i < sv.size(); ++i)
    CHECK(sv[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(*op.dense);
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(svd.singularValues()[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("exponent zero reduces to multiplication: norm is max|f|") {
  Grid g = make_fourier_grid({M_PI}, {32});
  MatrixOperator op = fourier_operator(sym_xi2(), g, 0.0, bump1d(2.0, 0.7));
  std::vector<double> sv = gram_singular_values(op);
  CHECK(sv[0] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("action agrees with the explicit dense matrix") {
  Grid g = make_fourier_grid({M_PI}, {48});
  MatrixOperator op = fourier_operator(sym_xi2(), g, 0.7, bump1d(2.0));
  CHECK_FALSE(op.hermitian);
  REQUIRE(op.dense.has_value());

  for (long j : {0L, 7L, 23L, 41L}) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(48);
    e[j] = 1.0;
    Eigen::VectorXcd col = op.action(e);
    CHECK((col - op.dense->col(j)).cwiseAbs().maxCoeff() < 1e-10);
  }

  Rng rng(31);
  Eigen::VectorXcd v(48);
  for (long i = 0; i < 48; ++i) v[i] = cd(rng.uniform(-1, 1), rng.uniform(-1, 1));
  CHECK((op.action(v) - (*op.dense) * v).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("gram eigenvalues are the squared singular values") {
  Grid g = make_fourier_grid({M_PI}, {48});
  MatrixOperator op = fourier_operator(sym_xi2(), g, 0.7, bump1d(2.0));
  std::vector<double> sv = gram_singular_values(op);

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(*op.dense);
  const long m = static_cast<long>(op.support.size());
  for (long i = 0; i < m; ++i)
    CHECK(svd.singularValues()[i] ==
          doctest::Approx(sv[static_cast<std::size_t>(i)]).epsilon(1e-10));
  for (long i = m; i < 48; ++i) CHECK(svd.singularValues()[i] < 1e-12);
}

TEST_CASE("doubling the resolution leaves the top 200 singular values fixed") {
  const double L = 8.0 * M_PI;
  FourierOperatorOptions opts;
  opts.dense_limit = 0;
  MatrixOperator a =
      fourier_operator(sym_xi2(), make_fourier_grid({L}, {6144}), 1.0, bump1d(3.0), opts);
  MatrixOperator b =
      fourier_operator(sym_xi2(), make_fourier_grid({L}, {12288}), 1.0, bump1d(3.0), opts);
  std::vector<double> sa = gram_singular_values(a);
  std::vector<double> sb = gram_singular_values(b);
  REQUIRE(sa.size() >= 200);
  REQUIRE(sb.size() >= 200);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k)
    worst = std::max(worst, std::abs(sa[k] - sb[k]) / sb[k]);
  CHECK(worst < 1e-3);
}

TEST_CASE("f leaking outside the box is rejected") {
  Grid g = make_fourier_grid({M_PI}, {32});
  CHECK_THROWS_AS(fourier_operator(sym_xi2(), g, 1.0, bump1d(4.0)),
                  std::invalid_argument);
}

TEST_CASE("signed core carries the eigenvalues of the symmetrized operator") {
  const int n = 64;
  Grid g = make_fourier_grid({M_PI}, {n});
  std::vector<long> support;
  Eigen::MatrixXd core = fourier_signed_core(sym_xi2(), g, 1.0, odd_bump1d(2.0), &support);
  const long m = core.rows();
  REQUIRE(m == static_cast<long>(support.size()));
  REQUIRE(m < n);

  // dense oracle: (1+P)^{-1/2} M_f (1+P)^{-1/2} built from the half-power kernel
  Eigen::VectorXd mult_half(n);
  std::vector<double> fr = g.frequencies(0);
  for (int k = 0; k < n; ++k) mult_half[k] = std::pow(1.0 + fr[k] * fr[k], -0.5);
  Eigen::VectorXd r = circulant_kernel(mult_half);
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) K(i, j) = r[((i - j) % n + n) % n];
  Eigen::VectorXd fs(n);
  GroupPoint p;
  p.coords.resize(1);
  Coefficient f = odd_bump1d(2.0);
  for (int j = 0; j < n; ++j) {
    p.coords[0] = g.coordinate(0, j);
    fs[j] = f(p).real();
  }
  Eigen::MatrixXd B = K * fs.asDiagonal() * K;

  Eigen::VectorXd eb = symmetric_eigenvalues(B);
  std::vector<double> ec(core.rows(), 0.0);
  Eigen::VectorXd cc = symmetric_eigenvalues(core);
  std::vector<double> padded(cc.data(), cc.data() + cc.size());
  padded.resize(n, 0.0);
  std::sort(padded.begin(), padded.end());
  for (int i = 0; i < n; ++i)
    CHECK(eb[i] == doctest::Approx(padded[static_cast<std::size_t>(i)]).epsilon(1e-9));
  CHECK(eb[0] < -1e-4);   // genuinely sign-changing
  CHECK(eb[n - 1] > 1e-4);
}

TEST_CASE("stencil commutator reproduces the center derivative") {
  Grid g = make_fd_grid({3.0, 3.0, 9.0}, 20);
  HeisenbergStencils st = fd_heisenberg_stencils(g);
  const int n = 20;
  const long total = g.total();

  Eigen::VectorXd gxy(total), gz(total);
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const long idx = ix + static_cast<long>(n) * (iy + static_cast<long>(n) * iz);
        gxy[idx] = g.coordinate(0, ix) * g.coordinate(1, iy);
        gz[idx] = g.coordinate(2, iz);
      }

  Eigen::VectorXd cxy = st.X * (st.Y * gxy) - st.Y * (st.X * gxy);
  Eigen::VectorXd cz = st.X * (st.Y * gz) - st.Y * (st.X * gz);
  for (int iz = 2; iz < n - 2; ++iz)
    for (int iy = 2; iy < n - 2; ++iy)
      for (int ix = 2; ix < n - 2; ++ix) {
        const long idx = ix + static_cast<long>(n) * (iy + static_cast<long>(n) * iz);
        CHECK(std::abs(cxy[idx]) < 1e-9);
        CHECK(std::abs(cz[idx] - 1.0) < 1e-9);
      }
}

TEST_CASE("assembled P is symmetric and positive semidefinite") {
  Grid g = make_fd_grid({3.0, 3.0, 9.0}, 20);
  HeisenbergStencils st = fd_heisenberg_stencils(g);

  Eigen::SparseMatrix<double> diff = st.P - Eigen::SparseMatrix<double>(st.P.transpose());
  double asym = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, k); it; ++it)
      asym = std::max(asym, std::abs(it.value()));
  CHECK(asym < 1e-12);

  Rng rng(77);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::VectorXd v(g.total());
    for (long i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
    CHECK(v.dot(st.P * v) >= -1e-10 * v.squaredNorm());
  }
}

TEST_CASE("coarse or non-3D finite-difference grids are rejected") {
  CHECK_THROWS_AS(fd_heisenberg_stencils(make_fd_grid({1.0, 1.0, 1.0}, 15)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_heisenberg_stencils(make_fd_grid({1.0, 1.0}, 16)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_heisenberg_stencils(make_fourier_grid({1.0, 1.0, 1.0}, {16, 16, 16})),
                  std::invalid_argument);
}

TEST_CASE("16^3 assembly matches an independent dense construction") {
  // a slightly asymmetric box keeps the low spectrum simple
  Grid g = make_fd_grid({3.5, 4.0, 8.0}, 16);
  HeisenbergStencils st = fd_heisenberg_stencils(g);
  const int n = 16;
  const long total = g.total();

  Eigen::MatrixXd Xd = Eigen::MatrixXd::Zero(total, total);
  Eigen::MatrixXd Yd = Eigen::MatrixXd::Zero(total, total);
  const double ihx = 1.0 / (2.0 * g.spacing(0));
  const double ihy = 1.0 / (2.0 * g.spacing(1));
  const double ihz = 1.0 / (2.0 * g.spacing(2));
  auto flat = [n](int ix, int iy, int iz) {
    return static_cast<long>(ix) + n * (static_cast<long>(iy) + n * iz);
  };
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const long row = flat(ix, iy, iz);
        const double x = g.coordinate(0, ix), y = g.coordinate(1, iy);
        if (ix + 1 < n) Xd(row, flat(ix + 1, iy, iz)) += ihx;
        if (ix > 0) Xd(row, flat(ix - 1, iy, iz)) -= ihx;
        if (iz + 1 < n) Xd(row, flat(ix, iy, iz + 1)) -= 0.5 * y * ihz;
        if (iz > 0) Xd(row, flat(ix, iy, iz - 1)) += 0.5 * y * ihz;
        if (iy + 1 < n) Yd(row, flat(ix, iy + 1, iz)) += ihy;
        if (iy > 0) Yd(row, flat(ix, iy - 1, iz)) -= ihy;
        if (iz + 1 < n) Yd(row, flat(ix, iy, iz + 1)) += 0.5 * x * ihz;
        if (iz > 0) Yd(row, flat(ix, iy, iz - 1)) -= 0.5 * x * ihz;
      }

  Rng rng(91);
  double scale = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::VectorXd v(total);
    for (long i = 0; i < total; ++i) v[i] = rng.uniform(-1, 1);
    Eigen::VectorXd lhs = st.P * v;
    Eigen::VectorXd rhs = -(Xd * (Xd * v)) - (Yd * (Yd * v));
    scale = std::max(scale, lhs.cwiseAbs().maxCoeff());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, scale));
  }

  // lowest eigenvalues: dense solver vs shift-invert Lanczos on the sparse path
  Eigen::VectorXd dense_ev = symmetric_eigenvalues(Eigen::MatrixXd(st.P));
  MatrixOperator p_op = wrap_sparse(st.P);
  MatrixOperator resolvent = apply_fractional_resolvent(p_op, 1.0, 0);
  auto apply = [&](const Eigen::VectorXd& v) {
    return resolvent.action(v.cast<cd>()).real().eval();
  };
  std::vector<double> mu = lanczos_largest(apply, total, 10, 1234, 250);
  for (int i = 0; i < 10; ++i) {
    const double lam = 1.0 / mu[static_cast<std::size_t>(i)] - 1.0;
    CHECK(std::abs(lam - dense_ev[i]) < 1e-10 * (1.0 + std::abs(dense_ev[i])));
  }
}

TEST_CASE("fractional resolvent dense identities") {
  const long n = 120;
  Eigen::MatrixXd P = Eigen::MatrixXd(tridiag_laplacian(n, 0.3));
  MatrixOperator op = wrap_dense(P);

  Rng rng(5);
  Eigen::VectorXcd v(n);
  for (long i = 0; i < n; ++i) v[i] = cd(rng.uniform(-1, 1), rng.uniform(-1, 1));

  MatrixOperator r1 = apply_fractional_resolvent(op, 1.0);
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) + P;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  Eigen::VectorXcd direct(n);
  direct.real() = llt.solve(v.real().eval());
  direct.imag() = llt.solve(v.imag().eval());
  CHECK((r1.action(v) - direct).cwiseAbs().maxCoeff() < 1e-10);

  MatrixOperator rhalf = apply_fractional_resolvent(op, 0.5);
  CHECK((rhalf.action(rhalf.action(v)) - r1.action(v)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("resolvent eigenvalues are the transformed spectrum, monotone") {
  const long n = 30;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (long k = 0; k < n; ++k) P(k, k) = static_cast<double>(k);
  MatrixOperator r = apply_fractional_resolvent(wrap_dense(P), 0.8);
  REQUIRE(r.dense.has_value());
  double prev = 2.0;
  for (long k = 0; k < n; ++k) {
    const double got = (*r.dense)(k, k).real();
    CHECK(got == doctest::Approx(std::pow(1.0 + k, -0.8)).epsilon(1e-13));
    CHECK(got < prev);
    prev = got;
  }
}

TEST_CASE("indefinite operators are rejected on both paths") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(3, 3);
  D(0, 0) = 1.0;
  D(1, 1) = -5.0;
  D(2, 2) = 2.0;
  CHECK_THROWS_AS(apply_fractional_resolvent(wrap_dense(D), 0.5), NumericError);

  Eigen::SparseMatrix<double> Ds = D.sparseView();
  CHECK_THROWS_AS(apply_fractional_resolvent(wrap_sparse(Ds), 1.0, 0), NumericError);
}

TEST_CASE("iterative resolvent matches the analytic eigenpairs at 8001 unknowns") {
  const long n = 8001;
  const double h = 0.05;
  MatrixOperator op = wrap_sparse(tridiag_laplacian(n, h));
  MatrixOperator r = apply_fractional_resolvent(op, 0.5);  // n > 6000: iterative

  for (long k : {3L, 6000L}) {
    const double lam = (2.0 - 2.0 * std::cos(M_PI * k / (n + 1))) / (h * h);
    Eigen::VectorXcd v(n);
    for (long j = 0; j < n; ++j)
      v[j] = std::sin(M_PI * k * (j + 1) / (n + 1));
    v /= v.norm();
    Eigen::VectorXcd w = r.action(v);
    const double expected = std::pow(1.0 + lam, -0.5);
    CHECK((w - expected * v).norm() < 1e-8 * expected);
  }
}

TEST_CASE("iterative resolvent agrees with the dense path") {
  const long n = 300;
  Eigen::SparseMatrix<double> P = tridiag_laplacian(n, 0.05);
  MatrixOperator op = wrap_sparse(P);
  Rng rng(8);
  Eigen::VectorXcd v(n);
  for (long i = 0; i < n; ++i) v[i] = cd(rng.uniform(-1, 1), rng.uniform(-1, 1));

  for (double q : {0.5, 1.5, 2.0, 2.5}) {
    MatrixOperator dense = apply_fractional_resolvent(op, q, 6000);
    MatrixOperator iter = apply_fractional_resolvent(op, q, 0);
    Eigen::VectorXcd a = dense.action(v), b = iter.action(v);
    CHECK((a - b).norm() < 1e-8 * a.norm());
  }
}

TEST_CASE("gram core against a dense singular value decomposition") {
  const long n = 90;
  Eigen::MatrixXd P = Eigen::MatrixXd(tridiag_laplacian(n, 0.4));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  for (long j = 25; j <= 60; ++j) f[j] = std::sin(0.37 * j) + 0.2;

  std::vector<long> support;
  SUBCASE("exponent one goes through Cholesky solves") {
    Eigen::MatrixXd G = resolvent_gram_core(P, f, 1.0, &support);
    REQUIRE(static_cast<long>(support.size()) == 36);
    Eigen::MatrixXd A =
        f.asDiagonal() *
        (Eigen::MatrixXd::Identity(n, n) + P).inverse();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    Eigen::VectorXd ge = symmetric_eigenvalues(G);
    for (long i = 0; i < G.rows(); ++i) {
      const double got = std::sqrt(std::max(0.0, ge[G.rows() - 1 - i]));
      CHECK(got == doctest::Approx(svd.singularValues()[i]).epsilon(1e-10));
    }
  }

  SUBCASE("fractional exponent goes through the eigendecomposition") {
    Eigen::MatrixXd G = resolvent_gram_core(P, f, 0.75, &support);
    SymmetricEig eig = symmetric_eigendecomposition(P);
    Eigen::VectorXd d(n);
    for (long k = 0; k < n; ++k) d[k] = std::pow(1.0 + eig.values[k], -0.75);
    Eigen::MatrixXd R = eig.vectors * d.asDiagonal() * eig.vectors.transpose();
    Eigen::MatrixXd A = f.asDiagonal() * R;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
    Eigen::VectorXd ge = symmetric_eigenvalues(G);
    for (long i = 0; i < G.rows(); ++i) {
      const double got = std::sqrt(std::max(0.0, ge[G.rows() - 1 - i]));
      CHECK(got == doctest::Approx(svd.singularValues()[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("spectral divergence-form matrix: constant coefficient spectrum") {
  const int n = 16;
  Grid g = make_fourier_grid({M_PI}, {n});
  Eigen::MatrixXd P = spectral_divform_matrix([](double) { return 1.0; }, g);

  std::vector<double> expected;
  std::vector<double> fr = g.frequencies(0);
  for (int k = 0; k < n; ++k)
    expected.push_back(k == n / 2 ? 0.0 : fr[k] * fr[k]);
  std::sort(expected.begin(), expected.end());

  Eigen::VectorXd ev = symmetric_eigenvalues(P);
  for (int i = 0; i < n; ++i)
    CHECK(ev[i] == doctest::Approx(expected[static_cast<std::size_t>(i)]).epsilon(1e-9));
}

TEST_CASE("spectral divergence-form matrix: quadratic form identity") {
  const int n = 32;
  Grid g = make_fourier_grid({2.5}, {n});
  auto a = [](double x) { return 2.0 + std::sin(x); };
  Eigen::MatrixXd P = spectral_divform_matrix(a, g);
  CHECK((P - P.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(symmetric_eigenvalues(P)[0] > -1e-9);

  Rng rng(44);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1, 1);

  Eigen::VectorXcd dv = v.cast<cd>();
  fft_forward_inplace(dv);
  std::vector<double> fr = g.frequencies(0);
  for (int k = 0; k < n; ++k) dv[k] *= (k == n / 2) ? cd(0, 0) : cd(0.0, fr[k]);
  fft_inverse_inplace(dv);
  double form = 0.0;
  for (int j = 0; j < n; ++j) form += a(g.coordinate(0, j)) * std::norm(dv[j]);
  CHECK(v.dot(P * v) == doctest::Approx(form).epsilon(1e-10));
}

TEST_CASE("matrix dump and load round-trip") {
  Rng rng(3);
  Eigen::MatrixXd M(7, 5);
  for (long i = 0; i < 7; ++i)
    for (long j = 0; j < 5; ++j) M(i, j) = rng.uniform(-10, 10);
  const std::string path = "/tmp/gw_test_matrix.bin";
  dump_matrix(M, path);
  Eigen::MatrixXd back = load_matrix(path);
  REQUIRE(back.rows() == 7);
  REQUIRE(back.cols() == 5);
  CHECK((back - M).cwiseAbs().maxCoeff() == 0.0);

  std::FILE* fp = std::fopen("/tmp/gw_test_garbage.bin", "wb");
  std::fputs("not a matrix", fp);
  std::fclose(fp);
  CHECK_THROWS_AS(load_matrix("/tmp/gw_test_garbage.bin"), std::runtime_error);
}

TEST_CASE("heisenberg operator validates the coefficient support") {
  Grid g = make_fd_grid({4.0, 4.0, 8.0}, 16);
  CHECK_THROWS_AS(fd_heisenberg_operator(g, Coefficient{}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fd_heisenberg_operator(g, heisenberg_bump(2.5), {}),
                  std::invalid_argument);
}

TEST_CASE("heisenberg operator gram against a dense eigendecomposition oracle") {
  Grid g = make_fd_grid({4.0, 4.0, 8.0}, 16);
  Coefficient f = heisenberg_bump(1.4);

  FdHeisenbergOptions opts;
  opts.exponent = 1.0;
  opts.build_gram = true;
  opts.dense_crossover = 0;  // force the sparse Cholesky route
  MatrixOperator op = fd_heisenberg_operator(g, f, opts);
  REQUIRE(op.gram.has_value());
  const long m = static_cast<long>(op.support.size());
  REQUIRE(m > 50);
  REQUIRE(op.gram->rows() == m);

  HeisenbergStencils st = fd_heisenberg_stencils(g);
  SymmetricEig eig = symmetric_eigendecomposition(Eigen::MatrixXd(st.P));
  Eigen::VectorXd fs(g.total());
  {
    GroupPoint p;
    p.coords.resize(3);
    for (int iz = 0; iz < 16; ++iz)
      for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 16; ++ix) {
          p.coords[0] = g.coordinate(0, ix);
          p.coords[1] = g.coordinate(1, iy);
          p.coords[2] = g.coordinate(2, iz);
          fs[ix + 16L * (iy + 16L * iz)] = f(p).real();
        }
  }
  Eigen::MatrixXd W(m, g.total());
  for (long i = 0; i < m; ++i) W.row(i) = eig.vectors.row(op.support[i]);
  Eigen::VectorXd d(g.total());
  for (long k = 0; k < g.total(); ++k) d[k] = std::pow(1.0 + eig.values[k], -1.0);
  Eigen::MatrixXd Wd = W * d.asDiagonal();
  Eigen::MatrixXd G_oracle = Wd * Wd.transpose();
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < m; ++j)
      G_oracle(i, j) *= fs[op.support[i]] * fs[op.support[j]];

  const double scale = G_oracle.cwiseAbs().maxCoeff();
  CHECK((*op.gram - G_oracle).cwiseAbs().maxCoeff() < 1e-9 * scale);

  std::vector<double> sv = gram_singular_values(op);
  CHECK(sv[0] < 1.0);   // multiplier and |f| both bounded by one
  CHECK(sv[0] > 0.01);
}
