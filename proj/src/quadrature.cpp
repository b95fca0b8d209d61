#include "gw/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <string>

#include "gw/errors.hpp"

namespace gw {
namespace {

constexpr std::size_t kWorkspaceSize = 4000;

struct GslHandlerOff {
  GslHandlerOff() { gsl_set_error_handler_off(); }
};
const GslHandlerOff kHandlerOff;

double call_fn(double x, void* params) {
  return (*static_cast<const RealFn*>(params))(x);
}

struct Workspace {
  gsl_integration_workspace* w;
  Workspace() : w(gsl_integration_workspace_alloc(kWorkspaceSize)) {}
  ~Workspace() { gsl_integration_workspace_free(w); }
};

QuadResult check(int status, double value, double error, double abs_tol, double rel_tol,
                 const char* what) {
  if (!std::isfinite(value)) {
    throw NumericError("quadrature", std::string(what) + ": non-finite result");
  }
  // GSL may report roundoff trouble while still delivering the requested
  // accuracy; accept whenever the error estimate is usable.
  const double budget = 100.0 * (abs_tol + rel_tol * std::fabs(value));
  if (status != 0 && status != GSL_EROUND && error > budget) {
    throw NumericError("quadrature",
                       std::string(what) + ": nonconvergence, status " + std::to_string(status) +
                           ", error estimate " + std::to_string(error));
  }
  return {value, error};
}

}  // namespace

QuadResult integrate(const RealFn& f, double a, double b, double abs_tol, double rel_tol) {
  Workspace ws;
  gsl_function gf{&call_fn, const_cast<RealFn*>(&f)};
  double value = 0, error = 0;
  int status = gsl_integration_qag(&gf, a, b, abs_tol, rel_tol, kWorkspaceSize,
                                   GSL_INTEG_GAUSS31, ws.w, &value, &error);
  return check(status, value, error, abs_tol, rel_tol, "qag");
}

QuadResult integrate_singular(const RealFn& f, double a, double b, double abs_tol,
                              double rel_tol) {
  Workspace ws;
  gsl_function gf{&call_fn, const_cast<RealFn*>(&f)};
  double value = 0, error = 0;
  int status = gsl_integration_qags(&gf, a, b, abs_tol, rel_tol, kWorkspaceSize, ws.w,
                                    &value, &error);
  return check(status, value, error, abs_tol, rel_tol, "qags");
}

QuadResult integrate_to_inf(const RealFn& f, double a, double abs_tol, double rel_tol) {
  Workspace ws;
  gsl_function gf{&call_fn, const_cast<RealFn*>(&f)};
  double value = 0, error = 0;
  int status = gsl_integration_qagiu(&gf, a, abs_tol, rel_tol, kWorkspaceSize, ws.w,
                                     &value, &error);
  return check(status, value, error, abs_tol, rel_tol, "qagiu");
}

QuadResult integrate_line(const RealFn& f, double abs_tol, double rel_tol) {
  Workspace ws;
  gsl_function gf{&call_fn, const_cast<RealFn*>(&f)};
  double value = 0, error = 0;
  int status = gsl_integration_qagi(&gf, abs_tol, rel_tol, kWorkspaceSize, ws.w,
                                    &value, &error);
  return check(status, value, error, abs_tol, rel_tol, "qagi");
}

QuadResult integrate_weighted_halfline(const RealFn& f, double a, double abs_tol,
                                       double rel_tol) {
  if (!(a > 0)) throw NumericError("quadrature", "weight exponent must be positive");
  // x in (0,1]: substitute x = u^{1/a}; the weight becomes du/a exactly.
  RealFn head = [&](double u) { return f(std::pow(u, 1.0 / a)) / a; };
  QuadResult h = integrate_singular(head, 0.0, 1.0, abs_tol / 2, rel_tol);
  // tail on [1, inf): integrand as written.
  RealFn tail = [&](double x) { return std::pow(x, a - 1.0) * f(x); };
  QuadResult t = integrate_to_inf(tail, 1.0, abs_tol / 2, rel_tol);
  return {h.value + t.value, h.error + t.error};
}

}  // namespace gw
