#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gw/discretize.hpp"

namespace gw {

// Nonincreasing, nonnegative top part of a singular value sequence.
struct SingularValues {
  std::vector<double> mu;
  std::string method;  // "gram_eigen" | "dense_svd" | "lanczos"
  long count() const { return static_cast<long>(mu.size()); }
};

// Power-law fit of a singular value sequence against
//   mu(k) ~= constant * (k + 1)^(-1/exponent).
struct AsymptoticFit {
  double exponent = 0.0;
  double constant = 0.0;
  long k_min = 0;
  long k_max = 0;  // inclusive
  double std_error = 0.0;
};

// Top-K singular values of M.  Dispatch: exact compressed Gram eigenvalues
// when available, dense SVD for explicitly stored operators up to 6000
// unknowns, and a Lanczos iteration on M*M actions beyond that.
SingularValues singular_values(const MatrixOperator& M, long K);

// Fit the tail law.  With expected_exponent given, the constant is the
// 10%-trimmed mean of (k+1)^(1/p) mu(k) over the window; without it, both
// are recovered by a log-log least squares.  Window bounds of -1 select
// the default [5%, 50%] of the sequence; the window must hold at least 50
// values.  Zero singular values are discarded before fitting.
// The reported std_error combines the trimmed-mean sampling error with a
// systematic half-window drift estimate, since the compensated values
// approach their limit slowly in k and the sampling term alone would
// understate the uncertainty of a finite window.
AsymptoticFit fit_weyl(const SingularValues& sv,
                       std::optional<double> expected_exponent,
                       long k_min = -1, long k_max = -1);

// Split a Hermitian spectrum into the positive-part and negative-part
// singular value sequences (each sorted nonincreasing; zeros dropped).
std::pair<SingularValues, SingularValues> split_signed(
    const Eigen::VectorXd& eigenvalues);

}  // namespace gw
