#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "gw/errors.hpp"
#include "gw/linalg.hpp"
#include "gw/prng.hpp"

using namespace gw;
using cd = std::complex<double>;

TEST_CASE("unitary fft pair: roundtrip, Parseval, delta") {
  const int n = 48;  // mixed radix 16*3
  Rng rng(11);
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cd(rng.normal(), rng.normal());

  Eigen::VectorXcd w = v;
  fft_forward_inplace(w);
  CHECK(std::abs(w.squaredNorm() - v.squaredNorm()) < 1e-12 * v.squaredNorm());
  fft_inverse_inplace(w);
  CHECK((w - v).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXcd delta = Eigen::VectorXcd::Zero(n);
  delta[0] = 1.0;
  fft_forward_inplace(delta);
  for (int k = 0; k < n; ++k)
    CHECK(std::abs(delta[k] - cd(1.0 / std::sqrt(double(n)), 0.0)) < 1e-13);
}

TEST_CASE("fftn equals nested one-dimensional transforms") {
  const int n0 = 6, n1 = 10;
  Rng rng(12);
  Eigen::VectorXcd v(n0 * n1);
  for (int i = 0; i < v.size(); ++i) v[i] = cd(rng.normal(), rng.normal());

  Eigen::VectorXcd a = v;
  fftn_forward_inplace(a, {n0, n1});

  // reference: transform axis 0 per row, then axis 1 per column
  Eigen::MatrixXcd M(n0, n1);
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j0 = 0; j0 < n0; ++j0) M(j0, j1) = v[j0 + n0 * j1];
  for (int j1 = 0; j1 < n1; ++j1) {
    Eigen::VectorXcd col = M.col(j1);
    fft_forward_inplace(col);
    M.col(j1) = col;
  }
  for (int j0 = 0; j0 < n0; ++j0) {
    Eigen::VectorXcd row = M.row(j0).transpose();
    fft_forward_inplace(row);
    M.row(j0) = row.transpose();
  }
  for (int j1 = 0; j1 < n1; ++j1)
    for (int j0 = 0; j0 < n0; ++j0)
      CHECK(std::abs(a[j0 + n0 * j1] - M(j0, j1)) < 1e-12);

  fftn_inverse_inplace(a, {n0, n1});
  CHECK((a - v).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("circulant kernel reproduces F* diag(m) F") {
  const int n = 16;
  Eigen::VectorXd m(n);
  for (int k = 0; k < n; ++k) {
    const int signed_k = k < n / 2 ? k : k - n;
    m[k] = 1.0 / (1.0 + signed_k * signed_k);  // even multiplier
  }
  Eigen::VectorXd r = circulant_kernel(m);

  // dense reference via unitary DFT columns
  Eigen::MatrixXcd F(n, n);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[j] = 1.0;
    fft_forward_inplace(e);
    F.col(j) = e;
  }
  Eigen::MatrixXcd K = F.adjoint() * m.asDiagonal() * F;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(std::abs(K(i, j) - cd(r[((i - j) % n + n) % n], 0.0)) < 1e-12);
}

TEST_CASE("circulant kernel rejects non-even multipliers") {
  Eigen::VectorXd m(8);
  for (int k = 0; k < 8; ++k) m[k] = k;  // m[1] != m[7]
  CHECK_THROWS_AS(circulant_kernel(m), NumericError);
}

TEST_CASE("lanczos matches dense eigenvalues on a PSD matrix with decaying spectrum") {
  const int n = 300;
  Rng rng(13);
  Eigen::MatrixXd R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(R);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d[i] = std::pow(i + 1.0, -1.5);  // resolvent-like decay
  Eigen::MatrixXd B = Q * d.asDiagonal() * Q.transpose();

  auto lz = lanczos_largest([&](const Eigen::VectorXd& x) { return B * x; }, n, 12);
  for (int i = 0; i < 12; ++i)
    CHECK(lz[i] == doctest::Approx(d[i]).epsilon(1e-9));

  CHECK_THROWS_AS(lanczos_largest([&](const Eigen::VectorXd& x) { return x; }, 4, 9),
                  std::invalid_argument);
}

TEST_CASE("lanczos handles low-rank operators via breakdown") {
  const int n = 120;
  Rng rng(14);
  Eigen::MatrixXd U(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) U(i, j) = rng.normal();
  Eigen::MatrixXd B = U * U.transpose();  // rank 3
  auto lz = lanczos_largest([&](const Eigen::VectorXd& x) { return B * x; }, n, 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B, Eigen::EigenvaluesOnly);
  for (int i = 0; i < 3; ++i)
    CHECK(lz[i] == doctest::Approx(es.eigenvalues()[n - 1 - i]).epsilon(1e-9));
}

TEST_CASE("symmetric eigendecomposition reconstructs the matrix") {
  Rng rng(512);
  const long n = 60;
  Eigen::MatrixXd A(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= i; ++j) A(i, j) = A(j, i) = rng.uniform(-1.0, 1.0);

  SymmetricEig eig = symmetric_eigendecomposition(A);
  for (long i = 0; i + 1 < n; ++i) CHECK(eig.values[i] <= eig.values[i + 1]);
  Eigen::MatrixXd rebuilt =
      eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((rebuilt - A).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((eig.vectors.transpose() * eig.vectors -
         Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd w = symmetric_eigenvalues(A);
  CHECK((w - eig.values).cwiseAbs().maxCoeff() < 1e-11);

  Eigen::MatrixXd fixed(2, 2);
  fixed << 2.0, 1.0, 1.0, 2.0;
  Eigen::VectorXd wf = symmetric_eigenvalues(fixed);
  CHECK(wf[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(wf[1] == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(symmetric_eigenvalues(Eigen::MatrixXd::Zero(2, 3)),
                  std::invalid_argument);
}
