#pragma once
#include <functional>

namespace gw {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
};

using RealFn = std::function<double(double)>;

// Adaptive Gauss-Kronrod on a finite interval [a,b].
QuadResult integrate(const RealFn& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-10);

// Same, but tolerant of integrable endpoint singularities.
QuadResult integrate_singular(const RealFn& f, double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-10);

// [a, +inf)
QuadResult integrate_to_inf(const RealFn& f, double a,
                            double abs_tol = 1e-12, double rel_tol = 1e-10);

// (-inf, +inf)
QuadResult integrate_line(const RealFn& f,
                          double abs_tol = 1e-12, double rel_tol = 1e-10);

// int_0^inf x^{a-1} f(x) dx.  The endpoint weight is removed exactly by the
// substitution x = u^{1/a} on [0,1]; the tail is integrated as written.
// Throws NumericError if the weighted integral fails to converge.
QuadResult integrate_weighted_halfline(const RealFn& f, double a,
                                       double abs_tol = 1e-12, double rel_tol = 1e-10);

}  // namespace gw
