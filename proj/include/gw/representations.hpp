#pragma once

#include <Eigen/Core>

#include "gw/operators.hpp"
#include "gw/trace_formulas.hpp"

namespace gw {

// Truncated harmonic-oscillator basis: `modes` tensor factors, Hermite levels
// 0..levels-1 in each.
struct OscillatorBasis {
  int modes = 1;
  int levels = 60;
};

struct LadderPair {
  Eigen::MatrixXd q;   // (a + a^+)/sqrt(2), real symmetric
  Eigen::MatrixXcd p;  // i (a^+ - a)/sqrt(2), imaginary antisymmetric
};

LadderPair ladder_matrices(int N);

struct RepMatrix {
  Eigen::MatrixXcd mat;
  double s = 1.0;
};

// Schroedinger representation pi_s on the truncated basis:
//   pi_s(X_j) = i sqrt|s| p_j,  pi_s(X_{n+j}) = i sgn(s) sqrt|s| q_j,
//   pi_s(T) = i s.
// Word letters of D must refer to the Heisenberg basis order X_1..X_n,
// Y_1..Y_n, T.
RepMatrix rep_heisenberg(const ConstDiffOp& D, double s, const OscillatorBasis& basis);

struct RepTrace {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Tr exp(-M) over the truncated spectrum with the top 20% discarded (ladder
// truncation corrupts the highest levels); the tail estimate comes from the
// largest retained eigenvalue.
RepTrace trace_exp_rep(const RepMatrix& M);

struct PlancherelParams {
  OscillatorBasis basis{1, 60};
  // Use pi_s(P) = |s|^{m/2} pi_{sgn s}(P) to reduce the s-integral to power
  // sums over the two unit representations; requires homogeneous even order.
  bool use_homogeneity = true;
  double retain_fraction = 0.8;
  // Extend the retained power sum by a fitted power-law Euler-Maclaurin tail.
  bool tail_correction = true;
};

// (2 pi)^{-(3n+1)} int_R |s|^n Tr(e^{-pi_s(D)}) ds; the independent
// representation-side oracle for the sinh closed forms.
TraceResult tau_heisenberg_plancherel(const ConstDiffOp& D, int n,
                                      const PlancherelParams& params = {});

}  // namespace gw
