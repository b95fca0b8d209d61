#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gw/operators.hpp"

namespace gw {

enum class GridMode { fourier_periodic, finite_difference_dirichlet };

struct Grid {
  int d = 1;
  std::vector<double> half_width;  // L per axis
  std::vector<int> points;         // per axis
  GridMode mode = GridMode::fourier_periodic;

  long total() const;
  double spacing(int axis) const;
  // fourier: x_j = -L + j h (periodic, right endpoint excluded);
  // finite difference: interior nodes x_j = -L + (j+1) h, h = 2L/(n+1)
  double coordinate(int axis, int j) const;
  double cell_volume() const;
  // lattice frequencies pi k / L in FFT index order (fourier mode only)
  std::vector<double> frequencies(int axis) const;
};

Grid make_fourier_grid(const std::vector<double>& half_width,
                       const std::vector<int>& points);
Grid make_fd_grid(const std::vector<double>& half_width, int points_per_axis);

// Discrete operator with an action and whatever explicit forms are cheap to
// carry.  `gram` is the exact nonzero-spectrum compression: a positive
// semidefinite matrix over `support` whose eigenvalues are the squared nonzero
// singular values of the operator.
struct MatrixOperator {
  long size = 0;
  bool hermitian = false;
  std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)> action;
  std::optional<Eigen::MatrixXcd> dense;
  std::optional<Eigen::SparseMatrix<double>> sparse;
  std::optional<Eigen::MatrixXd> gram;
  std::vector<long> support;
};

struct FourierOperatorOptions {
  long dense_limit = 2100;   // build the explicit matrix only up to this size
  bool build_gram = true;
};

// M_f (1 + p(xi))^{-exponent} on a periodic grid: multiplication by f in
// physical space composed with a Fourier multiplier, under the unitary DFT
// pair from linalg.  exponent is gamma/m.
MatrixOperator fourier_operator(const Symbol& p, const Grid& grid, double exponent,
                                const Coefficient& f,
                                const FourierOperatorOptions& opts = {});

// Hermitian core of the symmetrized operator (1+P)^{-e/2} M_f (1+P)^{-e/2}:
// eigenvalues equal its nonzero eigenvalues (signs preserved), enabling the
// positive/negative-part split.
Eigen::MatrixXd fourier_signed_core(const Symbol& p, const Grid& grid,
                                    double exponent, const Coefficient& f,
                                    std::vector<long>* support = nullptr);

// Left-invariant Heisenberg fields in exponential coordinates (x, y, z):
//   X = d/dx - (y/2) d/dz,  Y = d/dy + (x/2) d/dz,
// centered second-order stencils with Dirichlet truncation; P = -(X^2 + Y^2).
struct HeisenbergStencils {
  Eigen::SparseMatrix<double> X, Y, P;
};
HeisenbergStencils fd_heisenberg_stencils(const Grid& grid);

struct FdHeisenbergOptions {
  double exponent = 1.0;  // gamma/m
  bool build_gram = false;
  long dense_crossover = 6000;
};

MatrixOperator fd_heisenberg_operator(const Grid& grid, const Coefficient& f,
                                      const FdHeisenbergOptions& opts = {});

// (1 + P)^{-q} for symmetric positive semidefinite P: full eigendecomposition
// up to the crossover size, otherwise cached sparse Cholesky solves combined
// with a rational (Balakrishnan quadrature) approximation of the fractional
// part, relative accuracy ~1e-8 on the spectral interval.
MatrixOperator apply_fractional_resolvent(const MatrixOperator& P, double q,
                                          long dense_crossover = 6000);

// P = -d/dx (a(x) d/dx) assembled densely on a 1D periodic grid through the
// spectral derivative; symmetric for real a.
Eigen::MatrixXd spectral_divform_matrix(const std::function<double(double)>& a,
                                        const Grid& grid);

// Gram core for M_f (1+P)^{-exponent} with dense symmetric P (exact nonzero
// squared singular values over the support of f).
Eigen::MatrixXd resolvent_gram_core(const Eigen::MatrixXd& P_dense,
                                    const Eigen::VectorXd& f_samples,
                                    double exponent,
                                    std::vector<long>* support = nullptr);

// row-major float64 dump with a self-describing text header
void dump_matrix(const Eigen::MatrixXd& M, const std::string& path);
Eigen::MatrixXd load_matrix(const std::string& path);

}  // namespace gw
