#include "gw/discretize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "gw/errors.hpp"
#include "gw/linalg.hpp"

namespace gw {

namespace {

using cd = std::complex<double>;

void check_grid(const Grid& g) {
  if (g.d < 1 || static_cast<int>(g.half_width.size()) != g.d ||
      static_cast<int>(g.points.size()) != g.d)
    throw std::invalid_argument("grid: dimension/axis mismatch");
  for (int a = 0; a < g.d; ++a) {
    if (g.half_width[a] <= 0.0 || g.points[a] < 2)
      throw std::invalid_argument("grid: invalid box or point count");
    if (g.mode == GridMode::fourier_periodic && g.points[a] % 2 != 0)
      throw std::invalid_argument("grid: fourier mode needs an even point count");
  }
}

// flat index odometer: axis 0 varies fastest
template <typename Fn>
void for_each_multi_index(const std::vector<int>& dims, Fn&& fn) {
  std::vector<int> idx(dims.size(), 0);
  const long total = [&] {
    long t = 1;
    for (int d : dims) t *= d;
    return t;
  }();
  for (long flat = 0; flat < total; ++flat) {
    fn(flat, idx);
    for (std::size_t a = 0; a < dims.size(); ++a) {
      if (++idx[a] < dims[a]) break;
      idx[a] = 0;
    }
  }
}

Eigen::VectorXd sample_coefficient(const Coefficient& f, const Grid& grid) {
  Eigen::VectorXd out(grid.total());
  GroupPoint g;
  g.coords.resize(grid.d);
  for_each_multi_index(grid.points, [&](long flat, const std::vector<int>& idx) {
    for (int a = 0; a < grid.d; ++a) g.coords[a] = grid.coordinate(a, idx[a]);
    const cd v = f(g);
    if (std::abs(v.imag()) > 1e-14 * (1.0 + std::abs(v.real())))
      throw std::invalid_argument("sample_coefficient: coefficient must be real");
    out[flat] = v.real();
  });
  return out;
}

void check_support_inside(const Coefficient& f, const Grid& grid,
                          const std::vector<int>& weights) {
  if (!std::isfinite(f.support_radius)) return;
  for (int a = 0; a < grid.d; ++a) {
    const double extent = std::pow(f.support_radius, weights.empty() ? 1 : weights[a]);
    if (extent >= grid.half_width[a])
      throw std::invalid_argument("operator assembly: f support leaks outside the box");
  }
}

Eigen::VectorXd fourier_multiplier(const Symbol& p, const Grid& grid, double exponent) {
  std::vector<std::vector<double>> freq(grid.d);
  for (int a = 0; a < grid.d; ++a) freq[a] = grid.frequencies(a);
  Eigen::VectorXd mult(grid.total());
  Eigen::VectorXd xi(grid.d);
  for_each_multi_index(grid.points, [&](long flat, const std::vector<int>& idx) {
    for (int a = 0; a < grid.d; ++a) xi[a] = freq[a][idx[a]];
    const cd pv = p.eval(xi);
    if (std::abs(pv.imag()) > 1e-12 * (1.0 + std::abs(pv.real())))
      throw NumericError("fourier_operator", "symbol not real on the lattice");
    if (pv.real() < -1e-12)
      throw NumericError("fourier_operator", "symbol negative on the lattice");
    mult[flat] = std::pow(1.0 + std::max(0.0, pv.real()), -exponent);
  });
  return mult;
}

// kernel lookup r[(u-v) mod n] for flattened multi-indices
class CirculantKernel {
public:
  CirculantKernel(Eigen::VectorXd kernel, std::vector<int> dims)
      : r_(std::move(kernel)), dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    for (std::size_t a = 1; a < dims_.size(); ++a)
      strides_[a] = strides_[a - 1] * dims_[a - 1];
  }

  double operator()(long u, long v) const {
    long off = 0;
    for (std::size_t a = 0; a < dims_.size(); ++a) {
      const long ua = (u / strides_[a]) % dims_[a];
      const long va = (v / strides_[a]) % dims_[a];
      long d = ua - va;
      if (d < 0) d += dims_[a];
      off += d * strides_[a];
    }
    return r_[off];
  }

private:
  Eigen::VectorXd r_;
  std::vector<int> dims_;
  std::vector<long> strides_;
};

std::vector<long> nonzero_support(const Eigen::VectorXd& f) {
  std::vector<long> s;
  for (long i = 0; i < f.size(); ++i)
    if (f[i] != 0.0) s.push_back(i);
  return s;
}

}  // namespace

long Grid::total() const {
  long t = 1;
  for (int n : points) t *= n;
  return t;
}

double Grid::spacing(int axis) const {
  const double L = half_width[axis];
  const int n = points[axis];
  return mode == GridMode::fourier_periodic ? 2.0 * L / n : 2.0 * L / (n + 1);
}

double Grid::coordinate(int axis, int j) const {
  const double L = half_width[axis];
  return mode == GridMode::fourier_periodic ? -L + j * spacing(axis)
                                            : -L + (j + 1) * spacing(axis);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < d; ++a) v *= spacing(a);
  return v;
}

std::vector<double> Grid::frequencies(int axis) const {
  if (mode != GridMode::fourier_periodic)
    throw std::invalid_argument("grid: frequencies need fourier mode");
  const int n = points[axis];
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const int ks = k < n / 2 ? k : k - n;
    out[k] = M_PI * ks / half_width[axis];
  }
  return out;
}

Grid make_fourier_grid(const std::vector<double>& half_width,
                       const std::vector<int>& points) {
  Grid g;
  g.d = static_cast<int>(half_width.size());
  g.half_width = half_width;
  g.points = points;
  g.mode = GridMode::fourier_periodic;
  check_grid(g);
  return g;
}

Grid make_fd_grid(const std::vector<double>& half_width, int points_per_axis) {
  Grid g;
  g.d = static_cast<int>(half_width.size());
  g.half_width = half_width;
  g.points.assign(g.d, points_per_axis);
  g.mode = GridMode::finite_difference_dirichlet;
  check_grid(g);
  return g;
}

MatrixOperator fourier_operator(const Symbol& p, const Grid& grid, double exponent,
                                const Coefficient& f,
                                const FourierOperatorOptions& opts) {
  check_grid(grid);
  if (grid.mode != GridMode::fourier_periodic)
    throw std::invalid_argument("fourier_operator: needs a fourier grid");
  if (exponent < 0.0)
    throw std::invalid_argument("fourier_operator: exponent must be >= 0");
  check_support_inside(f, grid, {});

  const long n = grid.total();
  const Eigen::VectorXd fs = sample_coefficient(f, grid);
  const Eigen::VectorXd mult = fourier_multiplier(p, grid, exponent);
  const std::vector<int> dims = grid.points;

  MatrixOperator op;
  op.size = n;
  op.hermitian = f.constant() && std::abs(f.scale.imag()) < 1e-15;
  op.action = [fs, mult, dims](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd w = v;
    fftn_forward_inplace(w, dims);
    w.array() *= mult.cast<cd>().array();
    fftn_inverse_inplace(w, dims);
    w.array() *= fs.cast<cd>().array();
    return w;
  };
  op.support = nonzero_support(fs);

  if (n <= opts.dense_limit) {
    const CirculantKernel ker(circulant_kernel_nd(mult, dims), dims);
    Eigen::MatrixXcd A(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) A(i, j) = fs[i] * ker(i, j);
    op.dense = std::move(A);
  }
  if (opts.build_gram) {
    const Eigen::VectorXd mult2 = mult.array().square();
    const CirculantKernel ker2(circulant_kernel_nd(mult2, dims), dims);
    const long m = static_cast<long>(op.support.size());
    Eigen::MatrixXd G(m, m);
    for (long i = 0; i < m; ++i)
      for (long j = 0; j <= i; ++j) {
        const long u = op.support[i], v = op.support[j];
        G(i, j) = G(j, i) = fs[u] * ker2(u, v) * fs[v];
      }
    op.gram = std::move(G);
  }
  return op;
}

Eigen::MatrixXd fourier_signed_core(const Symbol& p, const Grid& grid,
                                    double exponent, const Coefficient& f,
                                    std::vector<long>* support) {
  check_grid(grid);
  if (grid.mode != GridMode::fourier_periodic)
    throw std::invalid_argument("fourier_signed_core: needs a fourier grid");
  check_support_inside(f, grid, {});
  const Eigen::VectorXd fs = sample_coefficient(f, grid);
  const Eigen::VectorXd mult = fourier_multiplier(p, grid, exponent);
  const CirculantKernel ker(circulant_kernel_nd(mult, grid.points), grid.points);

  const std::vector<long> S = nonzero_support(fs);
  const long m = static_cast<long>(S.size());
  Eigen::MatrixXd Z(m, m);
  Eigen::VectorXd sigma(m);
  for (long i = 0; i < m; ++i) sigma[i] = fs[S[i]] > 0.0 ? 1.0 : -1.0;
  for (long i = 0; i < m; ++i)
    for (long j = 0; j <= i; ++j) {
      const double w = std::sqrt(std::abs(fs[S[i]])) * std::sqrt(std::abs(fs[S[j]]));
      Z(i, j) = Z(j, i) = w * ker(S[i], S[j]);
    }
  // Z^{1/2} sigma Z^{1/2} is similar to sigma Z, whose nonzero eigenvalues are
  // those of the symmetrized operator (1+P)^{-e/2} M_f (1+P)^{-e/2}
  SymmetricEig es = symmetric_eigendecomposition(Z);
  Eigen::VectorXd lam = es.values.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd root = es.vectors * lam.asDiagonal() * es.vectors.transpose();
  if (support) *support = S;
  return root * sigma.asDiagonal() * root;
}

HeisenbergStencils fd_heisenberg_stencils(const Grid& grid) {
  check_grid(grid);
  if (grid.mode != GridMode::finite_difference_dirichlet || grid.d != 3)
    throw std::invalid_argument("fd_heisenberg_stencils: needs a 3D finite-difference grid");
  for (int a = 0; a < 3; ++a)
    if (grid.points[a] < 16)
      throw std::invalid_argument("fd_heisenberg_stencils: grid too coarse (< 16 points per axis)");

  const int nx = grid.points[0], ny = grid.points[1], nz = grid.points[2];
  const long n = grid.total();
  const double ihx = 1.0 / (2.0 * grid.spacing(0));
  const double ihy = 1.0 / (2.0 * grid.spacing(1));
  const double ihz = 1.0 / (2.0 * grid.spacing(2));

  auto flat = [nx, ny](int ix, int iy, int iz) {
    return static_cast<long>(ix) + nx * (static_cast<long>(iy) + ny * iz);
  };

  std::vector<Eigen::Triplet<double>> tx, ty;
  tx.reserve(4 * n);
  ty.reserve(4 * n);
  for (int iz = 0; iz < nz; ++iz)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        const long row = flat(ix, iy, iz);
        const double x = grid.coordinate(0, ix);
        const double y = grid.coordinate(1, iy);
        if (ix + 1 < nx) tx.emplace_back(row, flat(ix + 1, iy, iz), ihx);
        if (ix > 0) tx.emplace_back(row, flat(ix - 1, iy, iz), -ihx);
        if (iz + 1 < nz) tx.emplace_back(row, flat(ix, iy, iz + 1), -0.5 * y * ihz);
        if (iz > 0) tx.emplace_back(row, flat(ix, iy, iz - 1), 0.5 * y * ihz);

        if (iy + 1 < ny) ty.emplace_back(row, flat(ix, iy + 1, iz), ihy);
        if (iy > 0) ty.emplace_back(row, flat(ix, iy - 1, iz), -ihy);
        if (iz + 1 < nz) ty.emplace_back(row, flat(ix, iy, iz + 1), 0.5 * x * ihz);
        if (iz > 0) ty.emplace_back(row, flat(ix, iy, iz - 1), -0.5 * x * ihz);
      }

  HeisenbergStencils st;
  st.X.resize(n, n);
  st.Y.resize(n, n);
  st.X.setFromTriplets(tx.begin(), tx.end());
  st.Y.setFromTriplets(ty.begin(), ty.end());
  Eigen::SparseMatrix<double> XX = st.X * st.X;
  Eigen::SparseMatrix<double> YY = st.Y * st.Y;
  st.P = -(XX + YY);
  st.P.prune(0.0);
  return st;
}

MatrixOperator apply_fractional_resolvent(const MatrixOperator& P, double q,
                                          long dense_crossover) {
  if (!(q > 0.0))
    throw std::invalid_argument("apply_fractional_resolvent: exponent must be positive");

  const long n = P.size;
  const bool have_dense = P.dense.has_value();
  const bool have_sparse = P.sparse.has_value();
  if (!have_dense && !have_sparse)
    throw std::invalid_argument("apply_fractional_resolvent: P needs explicit storage");

  if (n <= dense_crossover) {
    Eigen::MatrixXd Pd;
    if (have_dense) {
      if (P.dense->imag().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("apply_fractional_resolvent: P must be real symmetric");
      Pd = P.dense->real();
    } else {
      Pd = Eigen::MatrixXd(*P.sparse);
    }
    SymmetricEig es = symmetric_eigendecomposition(Pd);
    const double top = std::max(1.0, es.values.cwiseAbs().maxCoeff());
    if (es.values[0] < -1e-9 * top)
      throw NumericError("apply_fractional_resolvent", "operator is indefinite");
    Eigen::VectorXd d(n);
    for (long i = 0; i < n; ++i)
      d[i] = std::pow(1.0 + std::max(0.0, es.values[i]), -q);
    auto R = std::make_shared<Eigen::MatrixXd>(
        es.vectors * d.asDiagonal() * es.vectors.transpose());
    MatrixOperator out;
    out.size = n;
    out.hermitian = true;
    out.action = [R](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd w(v.size());
      w.real() = *R * v.real();
      w.imag() = *R * v.imag();
      return w;
    };
    if (n <= 2100) out.dense = R->cast<cd>();
    return out;
  }

  // iterative path: integer part by repeated Cholesky solves, fractional part
  // by trapezoid quadrature of A^{-s} = sin(pi s)/pi int u^{-s} (u+A)^{-1} du
  if (!have_sparse)
    throw std::invalid_argument("apply_fractional_resolvent: large P needs sparse storage");
  using Solver = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>;
  Eigen::SparseMatrix<double> A = *P.sparse;
  Eigen::SparseMatrix<double> I(n, n);
  I.setIdentity();
  A = (A + Eigen::SparseMatrix<double>(I)).eval();

  const long q_int = static_cast<long>(std::floor(q + 1e-12));
  const double q_frac = q - static_cast<double>(q_int);

  auto base = std::make_shared<Solver>();
  base->compute(A);
  if (base->info() != Eigen::Success)
    throw NumericError("apply_fractional_resolvent", "operator is indefinite");

  struct FracNode {
    double weight;
    std::shared_ptr<Solver> solver;
  };
  auto nodes = std::make_shared<std::vector<FracNode>>();
  if (q_frac > 1e-12) {
    const double h = 0.35;
    const double pref = std::sin(M_PI * q_frac) / M_PI * h;
    // u = e^v; integrand e^{(1-s)v} (e^v + A)^{-1}; truncate both tails
    const double vmin = std::min(-40.0, -40.0 / (1.0 - q_frac));
    const double vmax = std::max(45.0, 45.0 / q_frac);
    for (double v = vmin; v <= vmax; v += h) {
      const double u = std::exp(v);
      Eigen::SparseMatrix<double> Au = (A + u * Eigen::SparseMatrix<double>(I)).eval();
      auto s = std::make_shared<Solver>();
      s->compute(Au);
      if (s->info() != Eigen::Success)
        throw NumericError("apply_fractional_resolvent", "shifted factorization failed");
      nodes->push_back({pref * std::exp((1.0 - q_frac) * v), s});
    }
  }

  MatrixOperator out;
  out.size = n;
  out.hermitian = true;
  out.action = [base, nodes, q_int, q_frac, n](const Eigen::VectorXcd& vc) {
    Eigen::VectorXd re = vc.real(), im = vc.imag();
    auto apply_real = [&](Eigen::VectorXd x) {
      if (q_frac > 1e-12) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        for (const auto& node : *nodes) acc += node.weight * node.solver->solve(x);
        x = std::move(acc);
      }
      for (long k = 0; k < q_int; ++k) {
        Eigen::VectorXd y = base->solve(x);
        x = std::move(y);
      }
      return x;
    };
    re = apply_real(re);
    im = apply_real(im);
    Eigen::VectorXcd outv(n);
    outv.real() = re;
    outv.imag() = im;
    return outv;
  };
  return out;
}

MatrixOperator fd_heisenberg_operator(const Grid& grid, const Coefficient& f,
                                      const FdHeisenbergOptions& opts) {
  HeisenbergStencils st = fd_heisenberg_stencils(grid);
  const long n = grid.total();
  // supp(f) must sit within the inner half of the box in the quasi-geometry
  // (weights 1,1,2) to keep Dirichlet boundary pollution away
  if (std::isfinite(f.support_radius)) {
    const int w[3] = {1, 1, 2};
    for (int a = 0; a < 3; ++a)
      if (std::pow(f.support_radius, w[a]) > 0.5 * grid.half_width[a])
        throw std::invalid_argument(
            "fd_heisenberg_operator: f support outside the inner half of the box");
  } else {
    throw std::invalid_argument(
        "fd_heisenberg_operator: f must declare a finite support radius");
  }
  const Eigen::VectorXd fs = sample_coefficient(f, grid);

  MatrixOperator p_op;
  p_op.size = n;
  p_op.hermitian = true;
  p_op.sparse = st.P;
  {
    const Eigen::SparseMatrix<double> Ps = st.P;
    p_op.action = [Ps](const Eigen::VectorXcd& v) { return (Ps * v).eval(); };
  }

  MatrixOperator R = apply_fractional_resolvent(p_op, opts.exponent, opts.dense_crossover);

  MatrixOperator op;
  op.size = n;
  op.hermitian = false;
  op.support = nonzero_support(fs);
  auto r_action = R.action;
  op.action = [fs, r_action](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd w = r_action(v);
    w.array() *= fs.cast<cd>().array();
    return w;
  };
  if (R.dense) {
    Eigen::MatrixXcd A = fs.cast<cd>().asDiagonal() * (*R.dense);
    op.dense = std::move(A);
  }

  if (opts.build_gram) {
    // G = M_f (1+P)^{-2e} M_f over supp(f): squared nonzero singular values
    MatrixOperator R2 = apply_fractional_resolvent(p_op, 2.0 * opts.exponent,
                                                   opts.dense_crossover);
    const long m = static_cast<long>(op.support.size());
    Eigen::MatrixXd G(m, m);
    for (long j = 0; j < m; ++j) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
      e[op.support[j]] = fs[op.support[j]];
      const Eigen::VectorXcd col = R2.action(e);
      for (long i = 0; i < m; ++i)
        G(i, j) = fs[op.support[i]] * col[op.support[i]].real();
    }
    op.gram = 0.5 * (G + G.transpose());
  }
  return op;
}

Eigen::MatrixXd spectral_divform_matrix(const std::function<double(double)>& a,
                                        const Grid& grid) {
  check_grid(grid);
  if (grid.mode != GridMode::fourier_periodic || grid.d != 1)
    throw std::invalid_argument("spectral_divform_matrix: needs a 1D fourier grid");
  const int n = grid.points[0];
  Eigen::VectorXd av(n);
  for (int j = 0; j < n; ++j) av[j] = a(grid.coordinate(0, j));

  const std::vector<double> freq = grid.frequencies(0);
  Eigen::VectorXcd dmult(n);
  for (int k = 0; k < n; ++k) dmult[k] = cd(0.0, freq[k]);
  dmult[n / 2] = 0.0;  // zero the Nyquist derivative so D stays skew-adjoint

  Eigen::MatrixXd P(n, n);
  Eigen::VectorXcd col(n);
  for (int j = 0; j < n; ++j) {
    col.setZero();
    col[j] = 1.0;
    fft_forward_inplace(col);
    col.array() *= dmult.array();
    fft_inverse_inplace(col);
    col.array() *= av.cast<cd>().array();
    fft_forward_inplace(col);
    col.array() *= dmult.array();
    fft_inverse_inplace(col);
    P.col(j) = -col.real();
  }
  return 0.5 * (P + P.transpose());
}

Eigen::MatrixXd resolvent_gram_core(const Eigen::MatrixXd& P_dense,
                                    const Eigen::VectorXd& f_samples,
                                    double exponent,
                                    std::vector<long>* support) {
  const long n = P_dense.rows();
  if (f_samples.size() != n)
    throw std::invalid_argument("resolvent_gram_core: size mismatch");
  std::vector<long> S = nonzero_support(f_samples);
  const long m = static_cast<long>(S.size());
  Eigen::MatrixXd G(m, m);

  if (std::abs(exponent - 1.0) < 1e-14) {
    Eigen::MatrixXd A = P_dense + Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
      throw NumericError("resolvent_gram_core", "1 + P is not positive definite");
    Eigen::VectorXd e(n);
    for (long j = 0; j < m; ++j) {
      e.setZero();
      e[S[j]] = f_samples[S[j]];
      const Eigen::VectorXd z = llt.solve(llt.solve(e));
      for (long i = 0; i < m; ++i) G(i, j) = f_samples[S[i]] * z[S[i]];
    }
  } else {
    SymmetricEig es = symmetric_eigendecomposition(P_dense);
    const double top = std::max(1.0, es.values.cwiseAbs().maxCoeff());
    if (es.values[0] < -1e-9 * top)
      throw NumericError("resolvent_gram_core", "operator is indefinite");
    Eigen::MatrixXd W(m, n);
    for (long i = 0; i < m; ++i) W.row(i) = es.vectors.row(S[i]);
    Eigen::VectorXd d(n);
    for (long k = 0; k < n; ++k)
      d[k] = std::pow(1.0 + std::max(0.0, es.values[k]), -exponent);
    Eigen::MatrixXd Wd = W * d.asDiagonal();
    G = Wd * Wd.transpose();
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < m; ++j) G(i, j) *= f_samples[S[i]] * f_samples[S[j]];
  }
  if (support) *support = std::move(S);
  return 0.5 * (G + G.transpose());
}

void dump_matrix(const Eigen::MatrixXd& M, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("dump_matrix: cannot open " + path);
  char header[64];
  std::snprintf(header, sizeof(header), "gwmatrix %ld %ld\n",
                static_cast<long>(M.rows()), static_cast<long>(M.cols()));
  out << header;
  for (long i = 0; i < M.rows(); ++i)
    for (long j = 0; j < M.cols(); ++j) {
      const double v = M(i, j);
      out.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_matrix: cannot open " + path);
  std::string magic;
  long rows = 0, cols = 0;
  in >> magic >> rows >> cols;
  if (magic != "gwmatrix" || rows < 0 || cols < 0)
    throw std::runtime_error("load_matrix: bad header in " + path);
  in.ignore(1);  // newline
  Eigen::MatrixXd M(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      double v = 0.0;
      in.read(reinterpret_cast<char*>(&v), sizeof(double));
      M(i, j) = v;
    }
  if (!in) throw std::runtime_error("load_matrix: truncated file " + path);
  return M;
}

}  // namespace gw
