#include "gw/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/SparseCore>

#include "gw/errors.hpp"
#include "gw/linalg.hpp"

namespace gw {

SingularValues singular_values(const MatrixOperator& M, long K) {
  if (K < 1 || K > M.size)
    throw std::invalid_argument("singular_values: K out of range");
  SingularValues out;

  if (M.gram) {
    // Exact route: the Gram block carries the squared nonzero singular values.
    Eigen::VectorXd ev = symmetric_eigenvalues(*M.gram);
    out.method = "gram_eigen";
    out.mu.assign(static_cast<std::size_t>(K), 0.0);
    const long r = ev.size();
    for (long i = 0; i < std::min(K, r); ++i)
      out.mu[static_cast<std::size_t>(i)] = std::sqrt(std::max(0.0, ev[r - 1 - i]));
    return out;
  }

  if (M.dense && M.size <= 6000) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(*M.dense);
    out.method = "dense_svd";
    out.mu.assign(svd.singularValues().data(), svd.singularValues().data() + K);
    return out;
  }

  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  if (M.sparse) {
    const Eigen::SparseMatrix<double> A = *M.sparse;
    const Eigen::SparseMatrix<double> At = A.transpose();
    apply = [A, At](const Eigen::VectorXd& v) {
      return Eigen::VectorXd(At * (A * v));
    };
  } else if (M.hermitian && M.action) {
    const auto act = M.action;
    apply = [act](const Eigen::VectorXd& v) {
      return act(act(v.cast<std::complex<double>>())).real().eval();
    };
  } else {
    throw std::invalid_argument(
        "singular_values: operator offers neither explicit storage nor a "
        "Hermitian action to iterate on");
  }
  std::vector<double> lam = lanczos_largest(apply, M.size, K, 987);
  out.method = "lanczos";
  out.mu.reserve(lam.size());
  for (double l : lam) out.mu.push_back(std::sqrt(std::max(0.0, l)));
  return out;
}

AsymptoticFit fit_weyl(const SingularValues& sv,
                       std::optional<double> expected_exponent, long k_min,
                       long k_max) {
  const long K = sv.count();
  if (k_min < 0) k_min = (K * 5) / 100;
  if (k_max < 0) k_max = K / 2;
  if (k_min < 0 || k_max >= K || k_max < k_min)
    throw std::invalid_argument("fit_weyl: window outside the sequence");
  if (k_max - k_min + 1 < 50)
    throw std::invalid_argument("fit_weyl: window holds fewer than 50 values");

  std::vector<std::pair<long, double>> pts;
  for (long k = k_min; k <= k_max; ++k) {
    const double mu = sv.mu[static_cast<std::size_t>(k)];
    if (mu > 0.0) pts.emplace_back(k, mu);
  }
  if (pts.empty())
    throw NumericError("fit_weyl",
                       "window is empty after discarding zero singular values");

  AsymptoticFit out;
  out.k_min = k_min;
  out.k_max = k_max;

  if (expected_exponent) {
    const double p = *expected_exponent;
    std::vector<double> g;
    g.reserve(pts.size());
    for (const auto& [k, mu] : pts)
      g.push_back(std::pow(static_cast<double>(k) + 1.0, 1.0 / p) * mu);
    std::vector<double> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t drop = sorted.size() / 10;
    const std::size_t lo = drop, hi = sorted.size() - drop;
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += sorted[i];
    const double count = static_cast<double>(hi - lo);
    mean /= count;
    double var = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      var += (sorted[i] - mean) * (sorted[i] - mean);
    var = count > 1 ? var / (count - 1) : 0.0;
    // The values drift systematically with k (the law is a k -> infinity
    // limit), so the sampling error alone understates the uncertainty; add a
    // half-window drift term estimated from the two halves in k-order.
    double drift = 0.0;
    if (g.size() >= 2) {
      const std::size_t half = g.size() / 2;
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t i = 0; i < half; ++i) m1 += g[i];
      for (std::size_t i = half; i < g.size(); ++i) m2 += g[i];
      m1 /= static_cast<double>(half);
      m2 /= static_cast<double>(g.size() - half);
      drift = std::abs(m2 - m1);
    }
    out.exponent = p;
    out.constant = mean;
    out.std_error = std::sqrt(var / count + drift * drift);
    return out;
  }

  // log-log least squares: log mu = intercept - (1/p) log(k+1)
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [k, mu] : pts) {
    const double x = std::log(static_cast<double>(k) + 1.0);
    const double y = std::log(mu);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double xbar = sx / n, ybar = sy / n;
  const double sxx_c = sxx - n * xbar * xbar;
  if (sxx_c <= 0.0)
    throw NumericError("fit_weyl", "degenerate abscissa in the log-log fit");
  const double slope = (sxy - n * xbar * ybar) / sxx_c;
  if (slope >= 0.0)
    throw NumericError("fit_weyl", "sequence does not decay over the window");
  const double intercept = ybar - slope * xbar;
  double ssr = 0.0;
  for (const auto& [k, mu] : pts) {
    const double x = std::log(static_cast<double>(k) + 1.0);
    const double r = std::log(mu) - (intercept + slope * x);
    ssr += r * r;
  }
  const double sigma2 = n > 2 ? ssr / (n - 2) : 0.0;
  const double se_intercept =
      std::sqrt(sigma2 * (1.0 / n + xbar * xbar / sxx_c));
  out.exponent = -1.0 / slope;
  out.constant = std::exp(intercept);
  out.std_error = out.constant * se_intercept;
  return out;
}

std::pair<SingularValues, SingularValues> split_signed(
    const Eigen::VectorXd& eigenvalues) {
  SingularValues pos, neg;
  pos.method = neg.method = "eigen_split";
  for (long i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues[i];
    if (l > 0.0)
      pos.mu.push_back(l);
    else if (l < 0.0)
      neg.mu.push_back(-l);
  }
  std::sort(pos.mu.rbegin(), pos.mu.rend());
  std::sort(neg.mu.rbegin(), neg.mu.rend());
  return {std::move(pos), std::move(neg)};
}

}  // namespace gw
