#include "gw/residue.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gw/digest.hpp"
#include "gw/errors.hpp"
#include "gw/quadrature.hpp"

namespace gw {

namespace {

// log of the logistic function, stable on both tails
double log_sigmoid(double u) {
  return u > 0.0 ? -std::log1p(std::exp(-u)) : u - std::log1p(std::exp(u));
}

}  // namespace

double residue_closed_form(double d_hom, double m, const TraceResult& tau_exp) {
  if (d_hom <= 0.0 || m <= 0.0)
    throw std::invalid_argument("residue_closed_form: d_hom and m must be positive");
  return d_hom / std::tgamma(d_hom / m + 1.0) * tau_exp.value;
}

ResidueResult residue_via_definition(double d_hom, double m,
                                     const std::vector<double>& s,
                                     const TraceResult& tau_exp) {
  if (d_hom <= 0.0 || m <= 0.0)
    throw std::invalid_argument("residue_via_definition: d_hom and m must be positive");
  if (s.empty())
    throw std::invalid_argument("residue_via_definition: no s values configured");
  const double a = d_hom / m;
  ResidueResult out;
  out.s_values = s;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double sv : s) {
    if (!(sv > 0.0) || sv == 1.0)
      throw std::invalid_argument("residue_via_definition: s must be positive and != 1");
    const double sd = std::pow(sv, d_hom);
    const double sm = std::pow(sv, m);
    RealFn f_s = [a, sd, sm](double x) {
      return sd * std::pow(1.0 + sm * x, -a) - std::pow(1.0 + x, -a);
    };
    const TraceResult tf = tau_f_homogeneous(f_s, d_hom, m, tau_exp);
    const double r = tf.value / std::log(sv);
    out.value += r;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.value /= static_cast<double>(s.size());
  out.spread = hi - lo;
  return out;
}

FrullaniCheck frullani_check(double a, double m, double s) {
  if (a <= 0.0 || !(s > 0.0))
    throw std::invalid_argument("frullani_check: need a > 0 and s > 0");
  FrullaniCheck out;
  out.rhs = m * std::log(s);
  if (s == 1.0) {
    out.lhs = 0.0;
    out.abs_error = 0.0;
    return out;
  }
  // x = e^u turns the integrand into sigma(u + m log s)^a - sigma(u)^a
  const double shift = m * std::log(s);
  const auto integrand = [a, shift](double u) {
    return std::exp(a * log_sigmoid(u + shift)) - std::exp(a * log_sigmoid(u));
  };
  const QuadResult q = integrate_line(integrand, 1e-12, 1e-11);
  out.lhs = q.value;
  out.abs_error = std::abs(out.lhs - out.rhs);
  return out;
}

std::string residue_csv_row(const std::string& group, const std::string& op_digest,
                            double closed_form, double definition_value,
                            double spread) {
  return group + "," + op_digest + "," + format_double(closed_form) + "," +
         format_double(definition_value) + "," + format_double(spread);
}

}  // namespace gw
