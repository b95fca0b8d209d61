#include "gw/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <gsl/gsl_fft_complex.h>
#include <lapacke.h>

#include "gw/errors.hpp"
#include "gw/prng.hpp"

namespace gw {

namespace {

enum class FftDir { forward, inverse };

// strided GSL transform over every line of the given axis
void fft_axis(Eigen::VectorXcd& v, const std::vector<int>& dims, std::size_t axis,
              FftDir dir) {
  const int n = dims[axis];
  if (n <= 0) throw std::invalid_argument("fft: dimensions must be positive");
  long stride = 1;
  for (std::size_t a = 0; a < axis; ++a) stride *= dims[a];
  long outer = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a) outer *= dims[a];

  gsl_fft_complex_wavetable* wt = gsl_fft_complex_wavetable_alloc(n);
  gsl_fft_complex_workspace* ws = gsl_fft_complex_workspace_alloc(n);
  auto* data = reinterpret_cast<double*>(v.data());
  for (long o = 0; o < outer; ++o) {
    for (long i = 0; i < stride; ++i) {
      double* line = data + 2 * (o * stride * n + i);
      if (dir == FftDir::forward)
        gsl_fft_complex_forward(line, stride, n, wt, ws);
      else
        gsl_fft_complex_inverse(line, stride, n, wt, ws);
    }
  }
  gsl_fft_complex_workspace_free(ws);
  gsl_fft_complex_wavetable_free(wt);
}

long total_size(const std::vector<int>& dims) {
  long t = 1;
  for (int d : dims) t *= d;
  return t;
}

}  // namespace

void fft_forward_inplace(Eigen::VectorXcd& v) {
  std::vector<int> dims{static_cast<int>(v.size())};
  fft_axis(v, dims, 0, FftDir::forward);
  v /= std::sqrt(static_cast<double>(v.size()));
}

void fft_inverse_inplace(Eigen::VectorXcd& v) {
  std::vector<int> dims{static_cast<int>(v.size())};
  fft_axis(v, dims, 0, FftDir::inverse);
  v *= std::sqrt(static_cast<double>(v.size()));
}

void fftn_forward_inplace(Eigen::VectorXcd& v, const std::vector<int>& dims) {
  if (v.size() != total_size(dims))
    throw std::invalid_argument("fftn: size does not match dims");
  for (std::size_t a = 0; a < dims.size(); ++a) fft_axis(v, dims, a, FftDir::forward);
  v /= std::sqrt(static_cast<double>(v.size()));
}

void fftn_inverse_inplace(Eigen::VectorXcd& v, const std::vector<int>& dims) {
  if (v.size() != total_size(dims))
    throw std::invalid_argument("fftn: size does not match dims");
  for (std::size_t a = 0; a < dims.size(); ++a) fft_axis(v, dims, a, FftDir::inverse);
  v *= std::sqrt(static_cast<double>(v.size()));
}

Eigen::VectorXd circulant_kernel(const Eigen::VectorXd& multiplier) {
  return circulant_kernel_nd(multiplier, {static_cast<int>(multiplier.size())});
}

Eigen::VectorXd circulant_kernel_nd(const Eigen::VectorXd& multiplier,
                                    const std::vector<int>& dims) {
  if (multiplier.size() != total_size(dims))
    throw std::invalid_argument("circulant_kernel: size does not match dims");
  Eigen::VectorXcd m = multiplier.cast<std::complex<double>>();
  // plain (1/n)-normalized inverse transform: kernel r[j] = (1/n) sum m_k w^{+jk}
  for (std::size_t a = 0; a < dims.size(); ++a) fft_axis(m, dims, a, FftDir::inverse);
  const double scale = multiplier.cwiseAbs().maxCoeff();
  if (m.imag().cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw NumericError("circulant_kernel", "multiplier is not even; kernel not real");
  return m.real();
}

std::vector<double> lanczos_largest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, long n,
    long K, unsigned long seed, long max_steps) {
  if (K < 1 || K > n) throw std::invalid_argument("lanczos_largest: need 1 <= K <= n");
  if (max_steps < 0) max_steps = std::min(n, std::max(4 * K, K + 60));
  max_steps = std::min(max_steps, n);

  Rng rng(seed);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = rng.normal();
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  basis.reserve(max_steps);
  std::vector<double> alpha, beta;
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(n);
  double norm_estimate = 0.0;

  for (long j = 0; j < max_steps; ++j) {
    basis.push_back(v);
    Eigen::VectorXd w = apply(v);
    const double a = v.dot(w);
    alpha.push_back(a);
    norm_estimate = std::max(norm_estimate, std::abs(a));
    w -= a * v;
    if (j > 0) w -= beta.back() * prev;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) w -= b.dot(w) * b;
    const double nb = w.norm();
    if (j + 1 == max_steps) break;
    if (nb <= 1e-13 * std::max(1.0, norm_estimate)) break;  // invariant subspace
    beta.push_back(nb);
    prev = v;
    v = w / nb;
  }

  const long m = static_cast<long>(alpha.size());
  if (m < K)
    throw NumericError("lanczos_largest", "Krylov space collapsed below K");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (long j = 0; j < m; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  std::vector<double> out(K);
  for (long i = 0; i < K; ++i) out[i] = es.eigenvalues()[m - 1 - i];
  return out;
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("symmetric_eigenvalues: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXd work = 0.5 * (A + A.transpose());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                                         work.data(), n, w.data());
  if (info != 0)
    throw NumericError("symmetric_eigenvalues", "eigenvalue iteration failed");
  return w;
}

SymmetricEig symmetric_eigendecomposition(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("symmetric_eigendecomposition: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  SymmetricEig out;
  out.vectors = 0.5 * (A + A.transpose());
  out.values.resize(n);
  if (n == 0) return out;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         out.vectors.data(), n, out.values.data());
  if (info != 0)
    throw NumericError("symmetric_eigendecomposition", "eigenvalue iteration failed");
  return out;
}

}  // namespace gw
