#include "gw/representations.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gw/errors.hpp"
#include "gw/quadrature.hpp"

namespace gw {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Eigen::MatrixXcd embed_mode(const Eigen::MatrixXcd& M, int mode, int modes, int N) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int j = 0; j < modes; ++j) {
    out = kron(out, j == mode ? M : Eigen::MatrixXcd::Identity(N, N));
  }
  return out;
}

// Ascending eigenvalues of a Hermitian matrix, routed through the real solver
// when the matrix has no imaginary part.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& M) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("trace_exp_rep: matrix is not Hermitian");
  if (M.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

long retained_count(long dim, double fraction) {
  long keep = static_cast<long>(std::floor(fraction * static_cast<double>(dim)));
  return std::clamp(keep, 1L, dim);
}

struct PowerSum {
  double value = 0.0;
  double error = 0.0;
};

// Least-squares fit of log nu_l = log c + rho log(l + delta) over [lo, hi)
// for a fixed offset delta; returns the residual rms and the parameters.
struct GrowthFit {
  double rho = 0.0;
  double logc = 0.0;
  double rms = 0.0;
};

GrowthFit fit_growth(const Eigen::VectorXd& ev, long lo, long hi, double delta) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double npts = static_cast<double>(hi - lo);
  for (long l = lo; l < hi; ++l) {
    const double x = std::log(static_cast<double>(l) + delta);
    const double y = std::log(ev[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  GrowthFit fit;
  fit.rho = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  fit.logc = (sy - fit.rho * sx) / npts;
  double ss_res = 0.0;
  for (long l = lo; l < hi; ++l) {
    const double r = std::log(ev[l]) -
                     (fit.logc + fit.rho * std::log(static_cast<double>(l) + delta));
    ss_res += r * r;
  }
  fit.rms = std::sqrt(ss_res / npts);
  return fit;
}

// sum_{l<keep} nu_l^{-a} over the spectrum, extended by an Euler-Maclaurin
// tail under the shifted power-law model nu_l ~ c (l + delta)^rho fitted to
// the upper retained range; the offset makes harmonic spectra lambda(2l+1)
// exactly linear in the fit variable.  The model covers every level beyond
// keep, so the caller can hand over a spectrum computed in a larger basis.
PowerSum spectral_power_sum(const Eigen::VectorXd& ev, double a, long keep,
                            bool tail_correction) {
  const long dim = ev.size();
  if (ev[0] <= 0.0)
    throw NumericError("tau_heisenberg_plancherel",
                       "representation spectrum is not positive");
  PowerSum out;
  for (long l = 0; l < keep; ++l) out.value += std::pow(ev[l], -a);

  const long lo = std::max<long>(1, keep / 2);
  if (keep - lo < 8) {
    // truncation too small for a trustworthy growth model
    out.error = static_cast<double>(dim - keep + 1) * std::pow(ev[keep - 1], -a);
    return out;
  }
  GrowthFit best;
  double best_delta = 0.0;
  bool have = false;
  for (double delta = -0.8; delta <= 4.0 + 1e-9; delta += 0.05) {
    const GrowthFit fit = fit_growth(ev, lo, keep, delta);
    if (!have || fit.rms < best.rms) {
      best = fit;
      best_delta = delta;
      have = true;
    }
  }

  const double b = best.rho * a;  // local decay exponent of nu_l^{-a}
  if (b <= 1.0 + 1e-9)
    throw NumericError("tau_heisenberg_plancherel", "power trace does not converge");
  const double K = static_cast<double>(keep) + best_delta;
  const double ca = std::exp(-a * best.logc);
  const double tail =
      ca * (std::pow(K, 1.0 - b) / (b - 1.0) + 0.5 * std::pow(K, -b) +
            b * std::pow(K, -b - 1.0) / 12.0);
  const double model_slack = std::abs(std::expm1(3.0 * a * best.rms)) + 0.1;
  if (tail_correction) {
    out.value += tail;
    out.error = model_slack * tail + 4.0 * std::pow(ev[keep - 1], -a);
  } else {
    out.error = tail * (1.0 + model_slack);
  }
  return out;
}

}  // namespace

LadderPair ladder_matrices(int N) {
  if (N < 2) throw std::invalid_argument("ladder_matrices: need at least two levels");
  LadderPair lad;
  lad.q = Eigen::MatrixXd::Zero(N, N);
  lad.p = Eigen::MatrixXcd::Zero(N, N);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int l = 0; l + 1 < N; ++l) {
    const double r = std::sqrt(static_cast<double>(l + 1)) * inv_sqrt2;
    lad.q(l, l + 1) = r;
    lad.q(l + 1, l) = r;
    lad.p(l, l + 1) = cd(0.0, -r);
    lad.p(l + 1, l) = cd(0.0, r);
  }
  return lad;
}

RepMatrix rep_heisenberg(const ConstDiffOp& D, double s, const OscillatorBasis& basis) {
  if (s == 0.0)
    throw std::invalid_argument("rep_heisenberg: s = 0 is not an oscillator point");
  if (basis.modes < 1 || basis.levels < 2)
    throw std::invalid_argument("rep_heisenberg: invalid basis");
  const int n = basis.modes;
  const int N = basis.levels;
  for (int b : D.gens.indices)
    if (b < 0 || b > 2 * n)
      throw std::invalid_argument("rep_heisenberg: letter outside X_1..Y_n, T");

  long dim = 1;
  for (int j = 0; j < n; ++j) dim *= N;

  const LadderPair lad = ladder_matrices(N);
  const double root = std::sqrt(std::abs(s));
  const double sign = s > 0 ? 1.0 : -1.0;
  const Eigen::MatrixXcd qc = lad.q.cast<cd>();

  std::vector<Eigen::MatrixXcd> letter_mat(D.gens.indices.size());
  std::vector<bool> built(D.gens.indices.size(), false);
  auto matrix_for = [&](int letter) -> const Eigen::MatrixXcd& {
    if (!built[letter]) {
      const int b = D.gens.indices[letter];
      if (b < n)
        letter_mat[letter] = cd(0.0, root) * embed_mode(lad.p, b, n, N);
      else if (b < 2 * n)
        letter_mat[letter] = cd(0.0, sign * root) * embed_mode(qc, b - n, n, N);
      else
        letter_mat[letter] = cd(0.0, s) * Eigen::MatrixXcd::Identity(dim, dim);
      built[letter] = true;
    }
    return letter_mat[letter];
  };

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, coeff] : D.terms) {
    if (word.empty()) {
      acc += coeff * Eigen::MatrixXcd::Identity(dim, dim);
      continue;
    }
    Eigen::MatrixXcd prod = matrix_for(word[0]);
    for (std::size_t k = 1; k < word.size(); ++k) prod = prod * matrix_for(word[k]);
    acc += coeff * prod;
  }
  return {std::move(acc), s};
}

RepTrace trace_exp_rep(const RepMatrix& M) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(M.mat);
  const long dim = ev.size();
  const long keep = retained_count(dim, 0.8);
  RepTrace out;
  for (long l = 0; l < keep; ++l) out.value += std::exp(-ev[l]);
  out.error_estimate =
      static_cast<double>(dim - keep + 1) * std::exp(-ev[keep - 1]);
  return out;
}

TraceResult tau_heisenberg_plancherel(const ConstDiffOp& D, int n,
                                      const PlancherelParams& params) {
  if (n < 1) throw std::invalid_argument("tau_heisenberg_plancherel: n must be >= 1");
  OscillatorBasis basis = params.basis;
  basis.modes = n;
  const double pref = std::pow(2.0 * M_PI, -(3.0 * n + 1.0));

  const std::optional<int> m = check_homogeneity(D);
  if (params.use_homogeneity) {
    if (!m || *m <= 0 || *m % 2 != 0)
      throw std::invalid_argument(
          "tau_heisenberg_plancherel: homogeneity reduction needs a homogeneous "
          "operator of even order");
    // With pi_s(D) = |s|^{m/2} pi_{sgn s}(D), each eigenvalue nu of the unit
    // representations contributes (2/m) Gamma(a) nu^{-a}, a = (2n+2)/m.
    const double a = (2.0 * n + 2.0) / static_cast<double>(*m);
    // Diagonalise in a doubled basis but retain counts relative to the
    // requested one: ladder truncation sheds spurious eigenvalues into the
    // bulk of the sorted spectrum (around half the working dimension), and
    // the margin keeps them beyond every retained or fitted level.
    OscillatorBasis working = basis;
    working.levels = 2 * basis.levels;
    long requested_dim = 1;
    for (int j = 0; j < n; ++j) requested_dim *= basis.levels;
    const long keep = retained_count(requested_dim, params.retain_fraction);
    PowerSum total;
    for (double s : {1.0, -1.0}) {
      const RepMatrix M = rep_heisenberg(D, s, working);
      const Eigen::VectorXd ev = hermitian_eigenvalues(M.mat);
      const PowerSum ps = spectral_power_sum(ev, a, keep, params.tail_correction);
      total.value += ps.value;
      total.error += ps.error;
    }
    const double factor = pref * (2.0 / *m) * std::tgamma(a);
    return {factor * total.value, TraceMethod::heisenberg_plancherel,
            factor * total.error};
  }

  long dim = 1;
  for (int j = 0; j < n; ++j) dim *= basis.levels;
  if (dim > 1000)
    throw NumericError("tau_heisenberg_plancherel",
                       "truncation too large for the direct s-quadrature");
  double value = 0.0, err = 0.0;
  for (double sign : {1.0, -1.0}) {
    auto integrand = [&](double s) {
      const RepTrace t = trace_exp_rep(rep_heisenberg(D, sign * s, basis));
      return std::pow(s, static_cast<double>(n)) * t.value;
    };
    const QuadResult q = integrate_to_inf(integrand, 0.0, 1e-12, 1e-9);
    value += q.value;
    err += q.error;
  }
  return {pref * value, TraceMethod::heisenberg_plancherel, pref * err};
}

namespace detail {

RocklandReport rockland_heisenberg(const ConstDiffOp& op, const GradedLieAlgebra& alg) {
  if (alg.dim() % 2 == 0 || alg.step() != 2)
    throw std::invalid_argument("rockland heisenberg mode needs dimension 2n+1, step 2");
  const int n = (alg.dim() - 1) / 2;
  const OscillatorBasis basis{n, n == 1 ? 60 : (n == 2 ? 24 : 10)};
  RocklandReport rep;
  rep.lower_bound = std::numeric_limits<double>::infinity();
  for (double s : {1.0, -1.0}) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(rep_heisenberg(op, s, basis).mat);
    rep.lower_bound = std::min(rep.lower_bound, ev[0]);
    rep.samples += ev.size();
  }
  rep.pass = rep.lower_bound > 1e-9;
  return rep;
}

}  // namespace detail

}  // namespace gw
