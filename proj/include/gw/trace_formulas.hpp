#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gw/lie_core.hpp"
#include "gw/operators.hpp"
#include "gw/quadrature.hpp"

namespace gw {

enum class TraceMethod {
  sphere,
  gaussian,
  direct_quadrature,
  anisotropic,
  heisenberg_closed,
  heisenberg_plancherel,
};

std::string to_string(TraceMethod m);

// tau(e^{-P}) for the group von Neumann trace, by one of several routes.
struct TraceResult {
  double value = 0.0;
  TraceMethod method = TraceMethod::direct_quadrature;
  double error_estimate = 0.0;
};

/// Polar-coordinate form on R^d with trivial grading:
//   Gamma(d/m) / (m (2 pi)^d) * int_{S^{d-1}} p(s)^{-d/m} ds.
// Supported for d <= 3; p must be positive on the sphere.
TraceResult tau_exp_sphere(const Symbol& p, int m, int d);

// (4 pi)^{-d/2} det(A)^{-1/2} for P = -sum a_jk d_j d_k, A symmetric PD.
TraceResult tau_exp_gaussian(const Eigen::MatrixXd& A);

// (2 pi)^{-d} int_{R^d} e^{-p(xi)} d xi by nested adaptive quadrature; the
// oracle for every abelian closed form.  Supported for d <= 3.
TraceResult tau_exp_direct(const Symbol& p, int d);

// tau(f(P)) = (1/Gamma(a)) int_0^inf x^{a-1} f(x) dx * tau(e^{-P}), a = d_hom/m.
TraceResult tau_f_homogeneous(const RealFn& f, double d_hom, double m,
                              const TraceResult& tau_exp);

// Measure of a region of the anisotropic sphere {sum s_j^{2v/v_j} = 1} as
// d_hom times the Lebesgue volume of the cone swept by dilations t <= 1.
// Monte Carlo with a fixed seed; any dimension.
struct ConeMeasureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long samples = 0;
};
ConeMeasureResult anisotropic_sphere_measure(
    const std::vector<int>& v,
    const std::function<bool(const Eigen::VectorXd&)>& region,
    long samples = 1000000, unsigned long seed = 12345);

// Same measure of the full sphere by the exact d=2 parametrisation
// s(theta) = (sgn(c)|c|^{v1/v}, sgn(s)|s|^{v2/v}) with density
// |v1 s1 s2' - v2 s2 s1'| d theta.
double anisotropic_sphere_measure_quadrature(const std::vector<int>& v);

// Gamma(Q/m)/(m (2 pi)^d) int_{S_v} p(s)^{-Q/m} d mu_v, d = 2 only.
TraceResult tau_exp_aniso(const Symbol& p, const std::vector<int>& v, int m);

// Positive eigenvalue halves of the spectrum of i Omega A, sorted ascending.
std::vector<double> williamson_eigenvalues(const Eigen::MatrixXd& A);

// Heisenberg group H^{2n+1}, P = -sum a_jk X_j X_k with A symmetric PD:
//   (2 pi)^{-(3n+1)} * 2 int_0^inf s^n prod_k (2 sinh(lambda_k s))^{-1} ds.
// The s -> 0 limit of the integrand is the finite value 2^{-n}/prod lambda_k;
// nothing needs subtracting there.
TraceResult tau_exp_heisenberg(const Eigen::MatrixXd& A, int n);

// Same quantity by the determinant route,
//   (2 pi)^{-(3n+1)} 2^{-n} det(A)^{-1/2} int_R det(M(s)/sinh M(s))^{1/2} ds,
// M(s) = i Omega A s, evaluated through the full eigensystem of i Omega A.
TraceResult tau_exp_heisenberg_det(const Eigen::MatrixXd& A, int n);

using GroupFn = std::function<double(const GroupPoint&)>;

struct QuadratureGrid {
  std::vector<GroupPoint> nodes;
  std::vector<double> weights;
  std::string digest;
};

// Tensor Gauss-Legendre grid on a box, d <= 3 axes.
QuadratureGrid box_grid(const std::vector<std::array<double, 2>>& bounds,
                        int points_per_axis);

struct WeylConstant {
  double value = 0.0;
  double exponent = 0.0;  // gamma / d_hom
  std::string inputs_digest;
};

// ( Gamma(d_hom/m + 1)^{-1} int_G |f|^{d_hom/gamma} tau_field dg )^{gamma/d_hom}.
WeylConstant weyl_constant(const GroupFn& f, double gamma, double m, double d_hom,
                           const GroupFn& tau_field, const QuadratureGrid& grid);

// CSV row (group, operator digest, method, value, error_estimate).
std::string trace_csv_row(const std::string& group, const std::string& op_digest,
                          const TraceResult& r);

}  // namespace gw
