#pragma once

#include <string>
#include <vector>

#include "gw/trace_formulas.hpp"

namespace gw {

struct ResidueResult {
  double value = 0.0;              // mean over the configured s values
  std::vector<double> s_values;
  double spread = 0.0;             // max pairwise deviation across s
};

// d_hom / Gamma(d_hom/m + 1) * tau(e^{-P}) for the resolvent power
// (1+P)^{-d_hom/m} of a positive homogeneous P.
double residue_closed_form(double d_hom, double m, const TraceResult& tau_exp);

inline std::vector<double> default_residue_s() { return {2.0, M_E, 10.0}; }

// (1/log s) tau(f_s(P)) with
//   f_s(x) = s^{d_hom} (1 + s^m x)^{-d_hom/m} - (1 + x)^{-d_hom/m},
// evaluated through the scalar spectral integral of a homogeneous P and
// repeated over every configured s.
ResidueResult residue_via_definition(double d_hom, double m,
                                     const std::vector<double>& s,
                                     const TraceResult& tau_exp);

struct FrullaniCheck {
  double lhs = 0.0;
  double rhs = 0.0;  // m log s
  double abs_error = 0.0;
};

// int_0^infty (g(s^m x) - g(x))/x dx with g(x) = x^a (1+x)^{-a}, computed
// after the substitution x = e^u; the identity value is m log s.
FrullaniCheck frullani_check(double a, double m, double s);

std::string residue_csv_row(const std::string& group, const std::string& op_digest,
                            double closed_form, double definition_value,
                            double spread);

}  // namespace gw
