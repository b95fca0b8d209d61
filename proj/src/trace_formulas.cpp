#include "gw/trace_formulas.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "gw/digest.hpp"
#include "gw/errors.hpp"
#include "gw/prng.hpp"

namespace gw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1/(2 sinh x) without overflow or cancellation, x > 0.
double half_csch(double x) { return std::exp(-x) / (-std::expm1(-2.0 * x)); }

// x / sinh x extended by 1 at x = 0, even in x.
double x_over_sinh(double x) {
  const double a = std::abs(x);
  if (a < 1e-12) return 1.0;
  return 2.0 * a * std::exp(-a) / (-std::expm1(-2.0 * a));
}

Eigen::MatrixXd standard_symplectic(int n) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  omega.block(0, n, n, n) = Eigen::MatrixXd::Identity(n, n);
  omega.block(n, 0, n, n) = -Eigen::MatrixXd::Identity(n, n);
  return omega;
}

void require_spd(const Eigen::MatrixXd& A, const char* where) {
  if (A.rows() != A.cols()) throw std::invalid_argument(std::string(where) + ": non-square matrix");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + A.cwiseAbs().maxCoeff()))
    throw std::invalid_argument(std::string(where) + ": matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument(std::string(where) + ": matrix not positive definite");
}

}  // namespace

std::string to_string(TraceMethod m) {
  switch (m) {
    case TraceMethod::sphere: return "sphere";
    case TraceMethod::gaussian: return "gaussian";
    case TraceMethod::direct_quadrature: return "direct_quadrature";
    case TraceMethod::anisotropic: return "anisotropic";
    case TraceMethod::heisenberg_closed: return "heisenberg_closed";
    case TraceMethod::heisenberg_plancherel: return "heisenberg_plancherel";
  }
  return "unknown";
}

TraceResult tau_exp_sphere(const Symbol& p, int m, int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("tau_exp_sphere: d must be 1..3");
  const double q = static_cast<double>(d) / m;
  const double prefactor = std::tgamma(q) / (m * std::pow(kTwoPi, d));

  auto check_positive = [&](const Eigen::VectorXd& s) {
    const double val = p.eval(s).real();
    if (val <= 0.0) throw NumericError("tau_exp_sphere", "nonpositive symbol on the sphere");
    return val;
  };

  TraceResult out;
  out.method = TraceMethod::sphere;
  if (d == 1) {
    Eigen::VectorXd s(1);
    s << 1.0;
    double total = std::pow(check_positive(s), -q);
    s << -1.0;
    total += std::pow(check_positive(s), -q);
    out.value = prefactor * total;
    out.error_estimate = 1e-15 * out.value;
    return out;
  }
  if (d == 2) {
    for (int k = 0; k < 64; ++k) {
      Eigen::VectorXd s(2);
      s << std::cos(kTwoPi * k / 64), std::sin(kTwoPi * k / 64);
      check_positive(s);
    }
    auto r = integrate(
        [&](double th) {
          Eigen::VectorXd s(2);
          s << std::cos(th), std::sin(th);
          return std::pow(p.eval(s).real(), -q);
        },
        0.0, kTwoPi);
    out.value = prefactor * r.value;
    out.error_estimate = prefactor * r.error;
    return out;
  }
  for (int a = 1; a < 8; ++a)
    for (int b = 0; b < 16; ++b) {
      const double th = std::numbers::pi * a / 8, ph = kTwoPi * b / 16;
      Eigen::VectorXd s(3);
      s << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
      check_positive(s);
    }
  auto r = integrate(
      [&](double th) {
        auto inner = integrate(
            [&](double ph) {
              Eigen::VectorXd s(3);
              s << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                  std::cos(th);
              return std::pow(p.eval(s).real(), -q);
            },
            0.0, kTwoPi, 1e-13, 1e-11);
        return std::sin(th) * inner.value;
      },
      0.0, std::numbers::pi);
  out.value = prefactor * r.value;
  out.error_estimate = prefactor * r.error;
  return out;
}

TraceResult tau_exp_gaussian(const Eigen::MatrixXd& A) {
  require_spd(A, "tau_exp_gaussian");
  const int d = static_cast<int>(A.rows());
  TraceResult out;
  out.method = TraceMethod::gaussian;
  out.value = std::pow(4.0 * std::numbers::pi, -0.5 * d) /
              std::sqrt(A.determinant());
  out.error_estimate = 1e-15 * out.value;
  return out;
}

namespace {

// Nested adaptive integral of exp(-p) over R^d, filling coordinates outermost
// first.
double direct_level(const Symbol& p, Eigen::VectorXd& xi, int level, double* err) {
  const int d = p.d;
  if (level == d) return std::exp(-p.eval(xi).real());
  const double tol_scale = level == 0 ? 1.0 : 10.0;
  auto r = integrate_line(
      [&](double x) {
        Eigen::VectorXd local = xi;
        local[level] = x;
        double ignored = 0.0;
        return direct_level(p, local, level + 1, &ignored);
      },
      1e-13 * tol_scale, 1e-11 * tol_scale);
  if (err) *err += r.error;
  return r.value;
}

}  // namespace

TraceResult tau_exp_direct(const Symbol& p, int d) {
  if (d != p.d) throw std::invalid_argument("tau_exp_direct: dimension mismatch");
  if (d < 1 || d > 3) throw std::invalid_argument("tau_exp_direct: d must be 1..3");
  Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
  double err = 0.0;
  const double integral = direct_level(p, xi, 0, &err);
  TraceResult out;
  out.method = TraceMethod::direct_quadrature;
  out.value = std::pow(kTwoPi, -d) * integral;
  out.error_estimate = std::pow(kTwoPi, -d) * err;
  return out;
}

TraceResult tau_f_homogeneous(const RealFn& f, double d_hom, double m,
                              const TraceResult& tau_exp) {
  const double a = d_hom / m;
  auto r = integrate_weighted_halfline(f, a);
  const double gamma_a = std::tgamma(a);
  TraceResult out;
  out.method = tau_exp.method;
  out.value = r.value / gamma_a * tau_exp.value;
  out.error_estimate = r.error / gamma_a * tau_exp.value +
                       std::abs(r.value) / gamma_a * tau_exp.error_estimate;
  return out;
}

ConeMeasureResult anisotropic_sphere_measure(
    const std::vector<int>& v,
    const std::function<bool(const Eigen::VectorXd&)>& region, long samples,
    unsigned long seed) {
  const int d = static_cast<int>(v.size());
  if (d < 1) throw std::invalid_argument("empty weight vector");
  long vlcm = 1;
  for (int w : v) {
    if (w < 1) throw std::invalid_argument("weights must be positive");
    vlcm = std::lcm(vlcm, static_cast<long>(w));
  }
  double d_hom = 0.0;
  for (int w : v) d_hom += w;

  Rng rng(seed);
  long hits = 0;
  Eigen::VectorXd x(d), s(d);
  for (long it = 0; it < samples; ++it) {
    for (int i = 0; i < d; ++i) x[i] = rng.uniform(-1.0, 1.0);
    double rad = 0.0;
    for (int i = 0; i < d; ++i)
      rad += std::pow(std::abs(x[i]), 2.0 * vlcm / v[static_cast<std::size_t>(i)]);
    rad = std::pow(rad, 1.0 / (2.0 * vlcm));
    if (rad > 1.0 || rad < 1e-300) continue;
    for (int i = 0; i < d; ++i)
      s[i] = x[i] / std::pow(rad, static_cast<double>(v[static_cast<std::size_t>(i)]));
    if (region(s)) ++hits;
  }
  const double box = std::pow(2.0, d);
  const double frac = static_cast<double>(hits) / samples;
  ConeMeasureResult out;
  out.samples = samples;
  out.value = d_hom * box * frac;
  out.error_estimate =
      d_hom * box * std::sqrt(std::max(frac * (1.0 - frac), 1e-16) / samples);
  return out;
}

namespace {

// Exact sphere density for d = 2: (v1 v2 / v) |cos|^{v1/v - 1} |sin|^{v2/v - 1}.
double aniso_density_2d(const std::vector<int>& v, long vlcm, double th) {
  const double a = static_cast<double>(v[0]) / vlcm;
  const double b = static_cast<double>(v[1]) / vlcm;
  const double c = std::abs(std::cos(th)), s = std::abs(std::sin(th));
  return (static_cast<double>(v[0]) * v[1] / vlcm) * std::pow(c, a - 1.0) *
         std::pow(s, b - 1.0);
}

Eigen::VectorXd aniso_point_2d(const std::vector<int>& v, long vlcm, double th) {
  const double a = static_cast<double>(v[0]) / vlcm;
  const double b = static_cast<double>(v[1]) / vlcm;
  const double c = std::cos(th), s = std::sin(th);
  Eigen::VectorXd out(2);
  out << std::copysign(std::pow(std::abs(c), a), c),
      std::copysign(std::pow(std::abs(s), b), s);
  return out;
}

// Integrate g(theta) * density over the full circle, one singular quadrant at
// a time.
QuadResult aniso_circle_integral(const std::vector<int>& v, long vlcm,
                                 const std::function<double(double)>& g) {
  double total = 0.0, err = 0.0;
  for (int quad = 0; quad < 4; ++quad) {
    const double lo = 0.5 * std::numbers::pi * quad;
    const double hi = lo + 0.5 * std::numbers::pi;
    auto r = integrate_singular(
        [&](double th) { return g(th) * aniso_density_2d(v, vlcm, th); }, lo, hi);
    total += r.value;
    err += r.error;
  }
  return {total, err};
}

}  // namespace

double anisotropic_sphere_measure_quadrature(const std::vector<int>& v) {
  if (v.size() != 2)
    throw std::invalid_argument("quadrature sphere measure implemented for d=2");
  const long vlcm = std::lcm(static_cast<long>(v[0]), static_cast<long>(v[1]));
  return aniso_circle_integral(v, vlcm, [](double) { return 1.0; }).value;
}

TraceResult tau_exp_aniso(const Symbol& p, const std::vector<int>& v, int m) {
  if (v.size() != 2 || p.d != 2)
    throw std::invalid_argument("tau_exp_aniso implemented for d=2");
  const long vlcm = std::lcm(static_cast<long>(v[0]), static_cast<long>(v[1]));
  const double d_hom = v[0] + v[1];
  const double q = d_hom / m;
  for (int k = 0; k < 64; ++k) {
    const Eigen::VectorXd s = aniso_point_2d(v, vlcm, kTwoPi * k / 64);
    if (p.eval(s).real() <= 0.0)
      throw NumericError("tau_exp_aniso", "nonpositive symbol on the anisotropic sphere");
  }
  auto r = aniso_circle_integral(v, vlcm, [&](double th) {
    return std::pow(p.eval(aniso_point_2d(v, vlcm, th)).real(), -q);
  });
  TraceResult out;
  out.method = TraceMethod::anisotropic;
  const double prefactor = std::tgamma(q) / (m * std::pow(kTwoPi, 2));
  out.value = prefactor * r.value;
  out.error_estimate = prefactor * r.error;
  return out;
}

std::vector<double> williamson_eigenvalues(const Eigen::MatrixXd& A) {
  require_spd(A, "williamson_eigenvalues");
  if (A.rows() % 2 != 0)
    throw std::invalid_argument("williamson_eigenvalues: odd dimension");
  const int n = static_cast<int>(A.rows()) / 2;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXd K = root * standard_symplectic(n) * root;  // antisymmetric
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ks(K * K.transpose());
  Eigen::VectorXd sq = ks.eigenvalues();  // lambda_k^2, each twice, ascending
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(std::sqrt(std::max(0.0, sq[2 * k])));
  return out;
}

TraceResult tau_exp_heisenberg(const Eigen::MatrixXd& A, int n) {
  if (A.rows() != 2 * n) throw std::invalid_argument("tau_exp_heisenberg: A must be 2n x 2n");
  const auto lam = williamson_eigenvalues(A);
  double prod_lam = 1.0;
  for (double l : lam) prod_lam *= l;
  const double limit0 = std::pow(2.0, -n) / prod_lam;

  auto integrand = [&](double s) {
    if (s <= 0.0) return limit0;  // finite limit, not a singularity
    double val = std::pow(s, n);
    for (double l : lam) val *= half_csch(l * s);
    return val;
  };
  auto r = integrate_to_inf(integrand, 0.0);
  TraceResult out;
  out.method = TraceMethod::heisenberg_closed;
  const double prefactor = 2.0 * std::pow(kTwoPi, -(3 * n + 1));
  out.value = prefactor * r.value;
  out.error_estimate = prefactor * r.error;
  return out;
}

TraceResult tau_exp_heisenberg_det(const Eigen::MatrixXd& A, int n) {
  if (A.rows() != 2 * n) throw std::invalid_argument("tau_exp_heisenberg_det: A must be 2n x 2n");
  require_spd(A, "tau_exp_heisenberg_det");
  const std::complex<double> iu(0.0, 1.0);
  Eigen::MatrixXcd M = iu * (standard_symplectic(n) * A).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
  if (es.info() != Eigen::Success)
    throw NumericError("tau_exp_heisenberg_det", "eigensolver failed");
  std::vector<double> mu;  // real spectrum {+-lambda_k}
  for (int j = 0; j < 2 * n; ++j) mu.push_back(es.eigenvalues()[j].real());

  auto integrand = [&](double s) {
    double prod = 1.0;
    for (double m : mu) prod *= x_over_sinh(m * s);
    return std::sqrt(std::max(0.0, prod));
  };
  auto r = integrate_line(integrand);
  TraceResult out;
  out.method = TraceMethod::heisenberg_closed;
  const double prefactor = std::pow(2.0, -n) / std::sqrt(A.determinant()) *
                           std::pow(kTwoPi, -(3 * n + 1));
  out.value = prefactor * r.value;
  out.error_estimate = prefactor * r.error;
  return out;
}

QuadratureGrid box_grid(const std::vector<std::array<double, 2>>& bounds,
                        int points_per_axis) {
  const int d = static_cast<int>(bounds.size());
  if (d < 1 || d > 3) throw std::invalid_argument("box_grid: 1..3 axes");
  if (points_per_axis < 2) throw std::invalid_argument("box_grid: need >= 2 points");
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(points_per_axis));
  std::vector<std::vector<std::pair<double, double>>> axes;
  for (const auto& b : bounds) {
    std::vector<std::pair<double, double>> axis;
    for (int i = 0; i < points_per_axis; ++i) {
      double x = 0.0, w = 0.0;
      gsl_integration_glfixed_point(b[0], b[1], static_cast<std::size_t>(i), &x, &w, table);
      axis.emplace_back(x, w);
    }
    axes.push_back(std::move(axis));
  }
  gsl_integration_glfixed_table_free(table);

  QuadratureGrid grid;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Eigen::VectorXd x(d);
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      x[i] = axes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].first;
      w *= axes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].second;
    }
    grid.nodes.push_back(GroupPoint{x});
    grid.weights.push_back(w);
    int axis = d - 1;
    while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == points_per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }

  std::string key = "box_grid|" + std::to_string(points_per_axis);
  for (const auto& b : bounds)
    key += "|" + format_double(b[0]) + "," + format_double(b[1]);
  grid.digest = short_digest(key);
  return grid;
}

WeylConstant weyl_constant(const GroupFn& f, double gamma, double m, double d_hom,
                           const GroupFn& tau_field, const QuadratureGrid& grid) {
  if (gamma <= 0.0 || m <= 0.0 || d_hom <= 0.0)
    throw std::invalid_argument("weyl_constant: gamma, m, d_hom must be positive");
  double integral = 0.0;
  std::string key = "weyl|" + format_double(gamma) + "|" + format_double(m) + "|" +
                    format_double(d_hom) + "|" + grid.digest;
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double fv = f(grid.nodes[i]);
    const double tv = tau_field(grid.nodes[i]);
    if (tv <= 0.0)
      throw NumericError("weyl_constant", "nonpositive trace field sample");
    integral += grid.weights[i] * std::pow(std::abs(fv), d_hom / gamma) * tv;
    key += "|" + format_double(fv) + "," + format_double(tv);
  }
  WeylConstant out;
  out.exponent = gamma / d_hom;
  out.inputs_digest = short_digest(key);
  const double scaled = integral / std::tgamma(d_hom / m + 1.0);
  out.value = scaled > 0.0 ? std::pow(scaled, gamma / d_hom) : 0.0;
  return out;
}

std::string trace_csv_row(const std::string& group, const std::string& op_digest,
                          const TraceResult& r) {
  return group + "," + op_digest + "," + to_string(r.method) + "," +
         format_double(r.value) + "," + format_double(r.error_estimate);
}

}  // namespace gw
