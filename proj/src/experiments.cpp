#include "gw/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "gw/errors.hpp"
#include "gw/linalg.hpp"
#include "gw/quadrature.hpp"

namespace gw {
namespace {

double axis_scale(const ExperimentSpec& spec, std::size_t a) {
  return a < spec.weight_scales.size() ? spec.weight_scales[a] : 1.0;
}

void require_axes(const ExperimentSpec& spec, std::size_t d) {
  if (spec.points.size() != d || spec.half_widths.size() != d)
    throw std::invalid_argument(
        "experiment: points/half_widths do not match the group dimension");
}

Coefficient make_weight(const ExperimentSpec& spec, int dims) {
  Coefficient f;
  if (spec.weight == "gaussian") {
    std::vector<double> s;
    for (int a = 0; a < dims; ++a) s.push_back(axis_scale(spec, a));
    f.fn = [s, dims](const GroupPoint& g) {
      double q = 0.0;
      for (int a = 0; a < dims; ++a) {
        const double t = g.coords[a] / s[static_cast<std::size_t>(a)];
        q += t * t;
      }
      return std::exp(-q);
    };
    f.label = "gaussian";
    f.sup_bound = 1.0;
  } else if (spec.weight == "odd_gaussian") {
    if (dims != 1)
      throw std::invalid_argument("experiment: odd_gaussian is 1D only");
    const double s = axis_scale(spec, 0);
    f.fn = [s](const GroupPoint& g) {
      const double t = g.coords[0] / s;
      return t * std::exp(-t * t);
    };
    f.label = "odd_gaussian";
    f.sup_bound = std::exp(-0.5) / std::sqrt(2.0);
  } else if (spec.weight == "bump") {
    const double r = axis_scale(spec, 0);
    auto b = [](double t) {
      return std::abs(t) < 1.0 ? std::pow(1.0 - t * t, 3) : 0.0;
    };
    if (dims == 1) {
      f.fn = [r, b](const GroupPoint& g) { return b(g.coords[0] / r); };
      f.support_radius = r;
    } else if (dims == 3) {
      // quasi-homogeneous support: the central direction scales like r^2
      f.fn = [r, b](const GroupPoint& g) {
        return b(g.coords[0] / r) * b(g.coords[1] / r) *
               b(g.coords[2] / (r * r));
      };
      f.support_radius = r;
    } else {
      throw std::invalid_argument("experiment: bump weight needs 1 or 3 axes");
    }
    f.label = "bump";
    f.sup_bound = 1.0;
  } else {
    throw std::invalid_argument("experiment: unknown weight '" + spec.weight +
                                "'");
  }
  return f;
}

Eigen::VectorXd sample_on_grid(const Coefficient& f, const Grid& grid) {
  const long n = grid.total();
  Eigen::VectorXd out(n);
  GroupPoint g;
  g.coords.resize(grid.d);
  std::vector<long> idx(static_cast<std::size_t>(grid.d), 0);
  for (long flat = 0; flat < n; ++flat) {
    for (int a = 0; a < grid.d; ++a)
      g.coords[a] = grid.coordinate(a, idx[static_cast<std::size_t>(a)]);
    out[flat] = f(g).real();
    for (int a = 0; a < grid.d; ++a) {
      if (++idx[static_cast<std::size_t>(a)] < grid.points[static_cast<std::size_t>(a)])
        break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
  return out;
}

GroupFn abs_of(const Coefficient& f) {
  return [f](const GroupPoint& g) { return std::abs(f(g).real()); };
}

Symbol line_laplace_symbol() {
  Symbol p;
  p.d = 1;
  p.add_term({2}, 1.0);
  return p;
}

Symbol plane_quartic_symbol() {
  Symbol p;
  p.d = 2;
  p.add_term({4, 0}, 1.0);
  p.add_term({0, 2}, 1.0);
  return p;
}

void finish_fit(WeylExperimentResult& out, const ExperimentSpec& spec) {
  out.fit = fit_weyl(out.sv, out.d_hom / spec.gamma, spec.k_min, spec.k_max);
  out.relative_error =
      std::abs(out.fit.constant - out.predicted.value) / out.predicted.value;
}

}  // namespace

WeylExperimentResult weyl_experiment(const ExperimentSpec& spec) {
  WeylExperimentResult out;

  if (spec.group == "line") {
    require_axes(spec, 1);
    out.d_hom = 1.0;
    out.order = 2.0;
    Grid grid = make_fourier_grid({spec.half_widths[0]},
                                {static_cast<int>(spec.points[0])});
    Coefficient f = make_weight(spec, 1);

    if (spec.op == "neg_laplace") {
      FourierOperatorOptions fo;
      fo.dense_limit = 0;
      fo.build_gram = true;
      MatrixOperator op =
          fourier_operator(line_laplace_symbol(), grid, spec.gamma / 2.0, f, fo);
      const long K =
          spec.count > 0 ? spec.count : static_cast<long>(op.support.size());
      out.sv = singular_values(op, K);
    } else if (spec.op == "divform_2_sin") {
      Eigen::MatrixXd P = spectral_divform_matrix(
          [](double x) { return 2.0 + std::sin(x); }, grid);
      Eigen::VectorXd fs = sample_on_grid(f, grid);
      MatrixOperator op;
      op.size = grid.total();
      op.gram = resolvent_gram_core(P, fs, spec.gamma / 2.0, &op.support);
      const long K =
          spec.count > 0 ? spec.count : static_cast<long>(op.support.size());
      out.sv = singular_values(op, K);
    } else {
      throw std::invalid_argument("experiment: unknown line operator '" +
                                  spec.op + "'");
    }

    const double s0 = axis_scale(spec, 0);
    QuadratureGrid pgrid = box_grid({{-9.0 * s0, 9.0 * s0}}, 240);
    GroupFn tau;
    if (spec.op == "neg_laplace") {
      const double t = tau_exp_gaussian(Eigen::MatrixXd::Identity(1, 1)).value;
      tau = [t](const GroupPoint&) { return t; };
    } else {
      tau = [](const GroupPoint& g) {
        Eigen::MatrixXd A(1, 1);
        A(0, 0) = 2.0 + std::sin(g.coords[0]);
        return tau_exp_gaussian(A).value;
      };
    }
    out.predicted =
        weyl_constant(abs_of(f), spec.gamma, 2.0, 1.0, tau, pgrid);
  } else if (spec.group == "plane_aniso") {
    require_axes(spec, 2);
    if (spec.op != "quartic_mixed")
      throw std::invalid_argument("experiment: unknown plane operator '" +
                                  spec.op + "'");
    out.d_hom = 3.0;
    out.order = 4.0;
    Grid grid = make_fourier_grid({spec.half_widths[0], spec.half_widths[1]},
                                  {static_cast<int>(spec.points[0]),
                                   static_cast<int>(spec.points[1])});
    Coefficient f = make_weight(spec, 2);
    FourierOperatorOptions fo;
    fo.dense_limit = 0;
    fo.build_gram = true;
    MatrixOperator op =
        fourier_operator(plane_quartic_symbol(), grid, spec.gamma / 4.0, f, fo);
    const long K =
        spec.count > 0 ? spec.count : static_cast<long>(op.support.size());
    out.sv = singular_values(op, K);

    const double sx = axis_scale(spec, 0), sy = axis_scale(spec, 1);
    QuadratureGrid pgrid =
        box_grid({{-9.0 * sx, 9.0 * sx}, {-9.0 * sy, 9.0 * sy}}, 160);
    const double t = tau_exp_aniso(plane_quartic_symbol(), {1, 2}, 4).value;
    GroupFn tau = [t](const GroupPoint&) { return t; };
    out.predicted =
        weyl_constant(abs_of(f), spec.gamma, 4.0, 3.0, tau, pgrid);
  } else if (spec.group == "heisenberg") {
    if (spec.points.size() != 1 || spec.half_widths.size() != 3)
      throw std::invalid_argument(
          "experiment: heisenberg runs take one per-axis point count and "
          "three half-widths");
    if (spec.op != "sublaplacian")
      throw std::invalid_argument("experiment: unknown heisenberg operator '" +
                                  spec.op + "'");
    if (spec.weight != "bump")
      throw std::invalid_argument(
          "experiment: heisenberg runs need a compactly supported weight");
    out.d_hom = 4.0;
    out.order = 2.0;
    Grid grid = make_fd_grid(
        {spec.half_widths[0], spec.half_widths[1], spec.half_widths[2]},
        static_cast<int>(spec.points[0]));
    Coefficient f = make_weight(spec, 3);
    FdHeisenbergOptions ho;
    ho.exponent = spec.gamma / 2.0;
    ho.build_gram = true;
    ho.dense_crossover = 0;
    MatrixOperator op = fd_heisenberg_operator(grid, f, ho);
    const long K =
        spec.count > 0 ? spec.count : static_cast<long>(op.support.size());
    out.sv = singular_values(op, K);

    const double r = axis_scale(spec, 0);
    QuadratureGrid pgrid =
        box_grid({{-r, r}, {-r, r}, {-r * r, r * r}}, 64);
    const double t =
        tau_exp_heisenberg(Eigen::MatrixXd::Identity(2, 2), 1).value;
    GroupFn tau = [t](const GroupPoint&) { return t; };
    out.predicted =
        weyl_constant(abs_of(f), spec.gamma, 2.0, 4.0, tau, pgrid);
  } else {
    throw std::invalid_argument("experiment: unknown group '" + spec.group +
                                "'");
  }

  finish_fit(out, spec);
  return out;
}

SignedExperimentResult signed_experiment(const ExperimentSpec& spec) {
  if (spec.group != "line" || spec.op != "neg_laplace")
    throw std::invalid_argument(
        "signed experiment: only the 1D constant-coefficient pipeline is wired");
  require_axes(spec, 1);
  Grid grid = make_fourier_grid({spec.half_widths[0]},
                                {static_cast<int>(spec.points[0])});
  Coefficient f = make_weight(spec, 1);

  std::vector<long> support;
  Eigen::MatrixXd core =
      fourier_signed_core(line_laplace_symbol(), grid, spec.gamma / 2.0, f,
                          &support);
  Eigen::VectorXd ev = symmetric_eigenvalues(core);

  SignedExperimentResult out;
  std::tie(out.positive, out.negative) = split_signed(ev);

  const double p = 1.0 / spec.gamma;  // d_hom = 1
  const double s0 = axis_scale(spec, 0);
  const double t = tau_exp_gaussian(Eigen::MatrixXd::Identity(1, 1)).value;
  GroupFn tau = [t](const GroupPoint&) { return t; };
  GroupFn f_plus = [f](const GroupPoint& g) {
    return std::max(f(g).real(), 0.0);
  };
  GroupFn f_minus = [f](const GroupPoint& g) {
    return std::max(-f(g).real(), 0.0);
  };
  if (spec.weight == "odd_gaussian") {
    // one-sided prediction boxes keep the quadrature clear of the sign kink
    out.predicted_positive =
        weyl_constant(f_plus, spec.gamma, 2.0, 1.0, tau,
                      box_grid({{0.0, 9.0 * s0}}, 240))
            .value;
    out.predicted_negative =
        weyl_constant(f_minus, spec.gamma, 2.0, 1.0, tau,
                      box_grid({{-9.0 * s0, 0.0}}, 240))
            .value;
  } else {
    QuadratureGrid pg = box_grid({{-9.0 * s0, 9.0 * s0}}, 240);
    out.predicted_positive =
        weyl_constant(f_plus, spec.gamma, 2.0, 1.0, tau, pg).value;
    out.predicted_negative =
        weyl_constant(f_minus, spec.gamma, 2.0, 1.0, tau, pg).value;
  }

  auto fit_part = [&](const SingularValues& part) {
    AsymptoticFit fit;
    const long count = part.count();
    const long lo = spec.k_min < 0 ? (count * 5) / 100 : spec.k_min;
    const long hi = spec.k_max < 0 ? count / 2 : spec.k_max;
    if (hi < count && hi - lo + 1 >= 50) {
      fit = fit_weyl(part, p, lo, hi);
    } else {
      // too short to fit: fall back to the largest value as an upper bound
      fit.exponent = p;
      fit.constant = count > 0 ? part.mu[0] : 0.0;
      fit.k_min = 0;
      fit.k_max = std::max<long>(0, count - 1);
      fit.std_error = 0.0;
    }
    return fit;
  };
  out.fit_positive = fit_part(out.positive);
  out.fit_negative = fit_part(out.negative);

  auto rel = [](double fitted, double predicted) {
    return predicted > 1e-12 ? std::abs(fitted - predicted) / predicted
                             : fitted;
  };
  out.rel_positive = rel(out.fit_positive.constant, out.predicted_positive);
  out.rel_negative = rel(out.fit_negative.constant, out.predicted_negative);
  return out;
}

std::vector<ZetaRow> zeta_trace_check(const ExperimentSpec& spec,
                                      const std::vector<double>& z_values) {
  if (spec.group != "line" || spec.op != "neg_laplace" ||
      spec.weight != "gaussian")
    throw std::invalid_argument(
        "zeta check: only the 1D gaussian constant-coefficient pipeline is wired");
  require_axes(spec, 1);
  Grid grid = make_fourier_grid({spec.half_widths[0]},
                                {static_cast<int>(spec.points[0])});
  const long n = grid.total();
  const double h = grid.spacing(0);
  const double s0 = axis_scale(spec, 0);
  std::vector<double> xi = grid.frequencies(0);
  const double xi_max =
      M_PI * static_cast<double>(n) / (2.0 * spec.half_widths[0]);
  const double tau = tau_exp_gaussian(Eigen::MatrixXd::Identity(1, 1)).value;

  std::vector<ZetaRow> rows;
  for (double z : z_values) {
    if (z <= 1.0)
      throw std::invalid_argument(
          "zeta check: z must exceed the homogeneous dimension 1");
    ZetaRow row;
    row.z = z;

    double sum_g = 0.0;
    for (long j = 0; j < n; ++j) {
      const double x = grid.coordinate(0, j) / s0;
      sum_g += std::exp(-2.0 * z * x * x);
    }
    double sum_d = 0.0;
    for (double k : xi) sum_d += std::pow(1.0 + k * k, -z / 2.0);
    row.trace_lattice = sum_g * sum_d / static_cast<double>(n);

    const double tail =
        2.0 * integrate_to_inf(
                  [z](double k) { return std::pow(1.0 + k * k, -z / 2.0); },
                  xi_max)
                  .value;
    row.trace_corrected =
        row.trace_lattice + sum_g * h * tail / (2.0 * M_PI);

    const double weight_integral =
        2.0 * integrate_to_inf(
                  [z, s0](double x) {
                    const double t = x / s0;
                    return std::exp(-2.0 * z * t * t);
                  },
                  0.0)
                  .value;
    row.formula = std::tgamma((z - 1.0) / 2.0) / std::tgamma(z / 2.0) *
                  weight_integral * tau;

    row.rel_lattice = std::abs(row.trace_lattice - row.formula) / row.formula;
    row.rel_corrected =
        std::abs(row.trace_corrected - row.formula) / row.formula;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gw
