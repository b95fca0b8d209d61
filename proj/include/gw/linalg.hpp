#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace gw {

// Unitary DFT pair: (F v)_k = n^{-1/2} sum_j v_j e^{-2 pi i jk/n} and its
// inverse, so F* F = I holds to machine precision.
void fft_forward_inplace(Eigen::VectorXcd& v);
void fft_inverse_inplace(Eigen::VectorXcd& v);

// Separable transforms on a flattened d-dimensional grid; axis 0 varies
// fastest in the flat index.
void fftn_forward_inplace(Eigen::VectorXcd& v, const std::vector<int>& dims);
void fftn_inverse_inplace(Eigen::VectorXcd& v, const std::vector<int>& dims);

// Kernel r of the multiplier matrix F* diag(m) F: entry (j,l) equals
// r[(j-l) mod n].  The multiplier must be even under k -> n-k so the kernel
// is real; the residual imaginary part is checked.
Eigen::VectorXd circulant_kernel(const Eigen::VectorXd& multiplier);
Eigen::VectorXd circulant_kernel_nd(const Eigen::VectorXd& multiplier,
                                    const std::vector<int>& dims);

// Largest K eigenvalues of a symmetric positive semidefinite action by Lanczos
// with full (twice-repeated Gram-Schmidt) reorthogonalization.
std::vector<double> lanczos_largest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, long n,
    long K, unsigned long seed = 987, long max_steps = -1);

// Eigenvalues of a symmetric matrix, ascending (LAPACK-backed; the input is
// symmetrized internally so only the lower triangle matters).
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& A);

// Full symmetric eigendecomposition, ascending eigenvalues with matching
// columns of the orthogonal factor.
struct SymmetricEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
SymmetricEig symmetric_eigendecomposition(const Eigen::MatrixXd& A);

}  // namespace gw
