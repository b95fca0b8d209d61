#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gw/spectra.hpp"
#include "gw/trace_formulas.hpp"

namespace gw {

// Names a full verification pipeline: a group, an operator on it, a weight
// function, the fractional power, the discretization box, and the fit window.
//
// Supported combinations (group / op / weight):
//   line         / neg_laplace      / gaussian, odd_gaussian, bump
//   line         / divform_2_sin    / gaussian
//   plane_aniso  / quartic_mixed    / gaussian
//   heisenberg   / sublaplacian     / bump
//
// weight_scales: per-axis widths s_a of the weight (gaussian exp(-sum (x_a/s_a)^2),
// bump radius s_0); empty means all ones.
struct ExperimentSpec {
  std::string group = "line";
  std::string op = "neg_laplace";
  std::string weight = "gaussian";
  double gamma = 2.0;
  std::vector<long> points = {4096};
  std::vector<double> half_widths = {16.0 * M_PI};
  std::vector<double> weight_scales = {};
  long count = 0;  // singular values to keep; 0 = everything resolvable
  long k_min = -1;
  long k_max = -1;  // fit window, inclusive; -1 = default
  unsigned seed = 1234;
};

struct WeylExperimentResult {
  SingularValues sv;
  AsymptoticFit fit;
  WeylConstant predicted;
  double relative_error = 0.0;  // |fit.constant - predicted| / predicted
  double d_hom = 0.0;
  double order = 0.0;  // homogeneous order m of the operator
};

struct SignedExperimentResult {
  SingularValues positive;
  SingularValues negative;
  AsymptoticFit fit_positive;
  AsymptoticFit fit_negative;
  double predicted_positive = 0.0;
  double predicted_negative = 0.0;
  double rel_positive = 0.0;
  double rel_negative = 0.0;  // when the prediction is 0 this holds the raw constant
};

struct ZetaRow {
  double z = 0.0;
  double trace_lattice = 0.0;    // plain lattice trace on the torus grid
  double trace_corrected = 0.0;  // lattice trace plus the beyond-Nyquist
                                 // multiplier tail restored by quadrature
  double formula = 0.0;          // Gamma-ratio times the weight integral times tau
  double rel_lattice = 0.0;
  double rel_corrected = 0.0;
};

// Discretize, extract singular values, fit the tail, and compare against the
// Gamma-normalized integral prediction.
WeylExperimentResult weyl_experiment(const ExperimentSpec& spec);

// Symmetrized sign-changing variant: eigen-split of
// (1+P)^{-g/2m} M_f (1+P)^{-g/2m} fitted against the predictions built from
// the positive and negative parts of f.
SignedExperimentResult signed_experiment(const ExperimentSpec& spec);

// Trace of M_{f^{2z}} (1+P)^{-z/m} on the discretization, against the
// Gamma-ratio formula, for each z.  1D constant-coefficient only.
std::vector<ZetaRow> zeta_trace_check(const ExperimentSpec& spec,
                                      const std::vector<double>& z_values);

}  // namespace gw
