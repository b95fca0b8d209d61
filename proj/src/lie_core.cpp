#include "gw/lie_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gw {

GradedLieAlgebra::GradedLieAlgebra(std::vector<int> layers, StructureConstants c,
                                   std::vector<std::string> labels)
    : layers_(std::move(layers)), c_(std::move(c)), labels_(std::move(labels)) {
  if (layers_.empty()) throw std::invalid_argument("algebra dimension must be positive");
  if (c_.dim() != dim()) throw std::invalid_argument("structure constant dimension mismatch");
  for (int w : layers_) {
    if (w < 1) throw std::invalid_argument("layers must be positive integers");
  }
  step_ = *std::max_element(layers_.begin(), layers_.end());
  if (labels_.empty()) {
    for (int i = 0; i < dim(); ++i) labels_.push_back("e" + std::to_string(i + 1));
  }
  if (static_cast<int>(labels_.size()) != dim()) {
    throw std::invalid_argument("label count mismatch");
  }
}

Eigen::VectorXd GradedLieAlgebra::bracket(const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& v) const {
  const int d = dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < d; ++j) {
      if (v[j] == 0.0) continue;
      for (int k = 0; k < d; ++k) {
        const double cijk = c_(i, j, k);
        if (cijk != 0.0) out[k] += u[i] * v[j] * cijk;
      }
    }
  }
  return out;
}

ValidationReport validate(const GradedLieAlgebra& alg, double tol) {
  ValidationReport rep;
  const int d = alg.dim();
  const auto& c = alg.c();

  for (int i = 0; i < d && rep.antisymmetry; ++i) {
    for (int j = 0; j < d && rep.antisymmetry; ++j) {
      for (int k = 0; k < d; ++k) {
        const double r = c(i, j, k) + c(j, i, k);
        if (std::fabs(r) > tol) {
          rep.antisymmetry = false;
          rep.issues.push_back({"antisymmetry", {i, j, k}, std::fabs(r)});
          break;
        }
      }
    }
  }

  for (int i = 0; i < d && rep.jacobi; ++i) {
    for (int j = i + 1; j < d && rep.jacobi; ++j) {
      for (int k = j + 1; k < d; ++k) {
        double worst = 0.0;
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) {
            s += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          }
          worst = std::max(worst, std::fabs(s));
        }
        if (worst > tol) {
          rep.jacobi = false;
          rep.issues.push_back({"jacobi", {i, j, k}, worst});
          break;
        }
      }
    }
  }

  for (int i = 0; i < d && rep.grading; ++i) {
    for (int j = 0; j < d && rep.grading; ++j) {
      for (int k = 0; k < d; ++k) {
        if (c(i, j, k) != 0.0 && alg.layer(k) != alg.layer(i) + alg.layer(j)) {
          rep.grading = false;
          rep.issues.push_back({"grading", {i, j, k}, std::fabs(c(i, j, k))});
          break;
        }
      }
    }
  }

  // Iterated brackets of basis vectors must vanish after `step` nestings.
  {
    std::vector<Eigen::VectorXd> current;
    for (int i = 0; i < d; ++i) current.push_back(Eigen::VectorXd::Unit(d, i));
    bool violated = false;
    for (int depth = 1; depth <= alg.step() && !violated; ++depth) {
      std::vector<Eigen::VectorXd> next;
      for (int i = 0; i < d; ++i) {
        const Eigen::VectorXd ei = Eigen::VectorXd::Unit(d, i);
        for (const auto& v : current) {
          Eigen::VectorXd b = alg.bracket(ei, v);
          if (b.lpNorm<Eigen::Infinity>() > tol) {
            if (depth == alg.step()) {
              rep.nilpotency = false;
              rep.issues.push_back({"nilpotency", {depth, i, 0}, b.lpNorm<Eigen::Infinity>()});
              violated = true;
              break;
            }
            next.push_back(std::move(b));
          }
        }
        if (violated) break;
      }
      current = std::move(next);
      if (current.empty()) break;
    }
  }

  return rep;
}

int homogeneous_dimension(const GradedLieAlgebra& alg) {
  return std::accumulate(alg.layers().begin(), alg.layers().end(), 0);
}

GroupPoint dilate(const GradedLieAlgebra& alg, double t, const GroupPoint& p) {
  if (!(t > 0)) throw std::invalid_argument("dilation parameter must be positive");
  GroupPoint out = p;
  for (int i = 0; i < alg.dim(); ++i) out.coords[i] *= std::pow(t, alg.layer(i));
  return out;
}

double quasi_norm(const GradedLieAlgebra& alg, const GroupPoint& p) {
  double m = 0.0;
  for (int i = 0; i < alg.dim(); ++i) {
    m = std::max(m, std::pow(std::fabs(p.coords[i]), 1.0 / alg.layer(i)));
  }
  return m;
}

GroupPoint group_mult(const GradedLieAlgebra& alg, const GroupPoint& p, const GroupPoint& q) {
  if (alg.step() > 4) {
    throw std::invalid_argument(
        "group_mult: closed-form product implemented for nilpotency step <= 4, got step " +
        std::to_string(alg.step()));
  }
  const Eigen::VectorXd& x = p.coords;
  const Eigen::VectorXd& y = q.coords;
  Eigen::VectorXd z = x + y;
  if (alg.step() >= 2) {
    const Eigen::VectorXd xy = alg.bracket(x, y);
    z += 0.5 * xy;
    if (alg.step() >= 3) {
      const Eigen::VectorXd xxy = alg.bracket(x, xy);
      const Eigen::VectorXd yxy = alg.bracket(y, xy);
      z += (1.0 / 12.0) * xxy - (1.0 / 12.0) * yxy;
      if (alg.step() >= 4) {
        z += (-1.0 / 24.0) * alg.bracket(y, xxy);
      }
    }
  }
  return {z};
}

GroupPoint group_inverse(const GradedLieAlgebra& alg, const GroupPoint& p) {
  if (p.coords.size() != alg.dim()) throw std::invalid_argument("point dimension mismatch");
  return {-p.coords};
}

double quasi_distance(const GradedLieAlgebra& alg, const GroupPoint& p, const GroupPoint& q) {
  return quasi_norm(alg, group_mult(alg, group_inverse(alg, p), q));
}

namespace {

bool spans_whole_space(const GradedLieAlgebra& alg, const std::vector<int>& indices) {
  const int d = alg.dim();
  std::vector<Eigen::VectorXd> vecs;
  for (int i : indices) vecs.push_back(Eigen::VectorXd::Unit(d, i));
  // Grow by brackets until the span stabilizes.
  for (int round = 0; round < d; ++round) {
    const std::size_t before = vecs.size();
    std::size_t m = vecs.size();
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        Eigen::VectorXd w = alg.bracket(vecs[a], vecs[b]);
        if (w.lpNorm<Eigen::Infinity>() > 1e-13) vecs.push_back(std::move(w));
      }
    }
    Eigen::MatrixXd M(d, static_cast<int>(vecs.size()));
    for (std::size_t i = 0; i < vecs.size(); ++i) M.col(static_cast<int>(i)) = vecs[i];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() == d) return true;
    if (vecs.size() == before) return false;
  }
  return false;
}

}  // namespace

PreferredGenerators make_preferred_generators(const GradedLieAlgebra& alg,
                                              std::vector<int> indices) {
  if (indices.empty()) throw std::invalid_argument("generator set must be nonempty");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw std::invalid_argument("generator indices must be distinct");
  }
  for (int i : indices) {
    if (i < 0 || i >= alg.dim()) throw std::invalid_argument("generator index out of range");
  }
  if (!spans_whole_space(alg, indices)) {
    throw std::invalid_argument("chosen elements do not generate the algebra");
  }
  PreferredGenerators g;
  g.indices = indices;
  for (int i : indices) g.degrees.push_back(alg.layer(i));
  g.lcm_degree = 1;
  for (int v : g.degrees) g.lcm_degree = std::lcm(g.lcm_degree, v);
  return g;
}

PreferredGenerators default_generators(const GradedLieAlgebra& alg) {
  const int d = alg.dim();
  // Basis complement of the derived subalgebra [g,g].
  Eigen::MatrixXd der(d, d * d);
  int cols = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Eigen::VectorXd b =
          alg.bracket(Eigen::VectorXd::Unit(d, i), Eigen::VectorXd::Unit(d, j));
      if (b.lpNorm<Eigen::Infinity>() > 1e-13) der.col(cols++) = b;
    }
  }
  std::vector<int> chosen;
  Eigen::MatrixXd span(d, d + cols);
  span.leftCols(cols) = der.leftCols(cols);
  int used = cols;
  auto rank_of = [&](int n) {
    if (n == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span.leftCols(n));
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
  };
  int r = rank_of(used);
  for (int i = 0; i < d; ++i) {
    span.col(used) = Eigen::VectorXd::Unit(d, i);
    const int r2 = rank_of(used + 1);
    if (r2 > r) {
      chosen.push_back(i);
      ++used;
      r = r2;
    }
  }
  return make_preferred_generators(alg, chosen);
}

GradedLieAlgebra abelian_algebra(const std::vector<int>& layers) {
  return GradedLieAlgebra(layers, StructureConstants(static_cast<int>(layers.size())));
}

GradedLieAlgebra heisenberg_algebra(int n) {
  if (n < 1) throw std::invalid_argument("heisenberg_algebra: n must be >= 1");
  const int d = 2 * n + 1;
  std::vector<int> layers(d, 1);
  layers[d - 1] = 2;
  StructureConstants c(d);
  for (int j = 0; j < n; ++j) c.set_bracket(j, n + j, d - 1, 1.0);
  std::vector<std::string> labels;
  for (int j = 1; j <= n; ++j) labels.push_back("X" + std::to_string(j));
  for (int j = 1; j <= n; ++j) labels.push_back("Y" + std::to_string(j));
  labels.push_back("T");
  return GradedLieAlgebra(layers, c, labels);
}

GradedLieAlgebra filiform_algebra(int N) {
  if (N < 1) throw std::invalid_argument("filiform_algebra: N must be >= 1");
  const int d = 2 + N;
  std::vector<int> layers(d);
  layers[0] = 1;
  layers[1] = 1;
  for (int i = 1; i <= N; ++i) layers[1 + i] = i + 1;
  StructureConstants c(d);
  c.set_bracket(0, 1, 2, 1.0);                                  // [X, Y] = Z_1
  for (int i = 1; i < N; ++i) c.set_bracket(0, 1 + i, 2 + i, 1.0);  // [X, Z_i] = Z_{i+1}
  std::vector<std::string> labels = {"X", "Y"};
  for (int i = 1; i <= N; ++i) labels.push_back("Z" + std::to_string(i));
  return GradedLieAlgebra(layers, c, labels);
}

}  // namespace gw
