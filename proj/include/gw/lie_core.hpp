#pragma once
#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace gw {

// A point of the group in exponential coordinates.
struct GroupPoint {
  Eigen::VectorXd coords;
};

// Rank-3 array c[i][j][k] with [X_i, X_j] = sum_k c[i][j][k] X_k.
class StructureConstants {
public:
  StructureConstants() = default;
  explicit StructureConstants(int dim)
      : d_(dim), c_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  double operator()(int i, int j, int k) const { return c_[idx(i, j, k)]; }
  double& operator()(int i, int j, int k) { return c_[idx(i, j, k)]; }
  // Sets c[i][j][k] = v and c[j][i][k] = -v.
  void set_bracket(int i, int j, int k, double v) {
    c_[idx(i, j, k)] = v;
    c_[idx(j, i, k)] = -v;
  }
  int dim() const { return d_; }

private:
  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * d_ + j) * d_ + k;
  }
  int d_ = 0;
  std::vector<double> c_;
};

class GradedLieAlgebra {
public:
  GradedLieAlgebra(std::vector<int> layers, StructureConstants c,
                   std::vector<std::string> labels = {});

  int dim() const { return static_cast<int>(layers_.size()); }
  int layer(int i) const { return layers_[i]; }
  const std::vector<int>& layers() const { return layers_; }
  int step() const { return step_; }
  const StructureConstants& c() const { return c_; }
  const std::vector<std::string>& labels() const { return labels_; }

  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

private:
  std::vector<int> layers_;
  StructureConstants c_;
  std::vector<std::string> labels_;
  int step_ = 1;
};

struct ValidationIssue {
  std::string invariant;  // "antisymmetry" | "jacobi" | "grading" | "nilpotency"
  std::array<int, 3> index;
  double magnitude;
};

struct ValidationReport {
  bool antisymmetry = true;
  bool jacobi = true;
  bool grading = true;
  bool nilpotency = true;
  std::vector<ValidationIssue> issues;  // first violation per failed invariant
  bool ok() const { return antisymmetry && jacobi && grading && nilpotency; }
};

ValidationReport validate(const GradedLieAlgebra& alg, double tol = 1e-12);

// sum_k k * dim(V_k) = sum_i layer(i)
int homogeneous_dimension(const GradedLieAlgebra& alg);

// Anisotropic dilation: coordinate i is scaled by t^{layer(i)}. Requires t > 0.
GroupPoint dilate(const GradedLieAlgebra& alg, double t, const GroupPoint& p);

// max_i |x_i|^{1/layer(i)}; homogeneous of degree 1 under dilations.
double quasi_norm(const GradedLieAlgebra& alg, const GroupPoint& p);

// Group product in exponential coordinates (Baker-Campbell-Hausdorff, exact for
// nilpotency step <= 4; higher steps are rejected).
GroupPoint group_mult(const GradedLieAlgebra& alg, const GroupPoint& p, const GroupPoint& q);

GroupPoint group_inverse(const GradedLieAlgebra& alg, const GroupPoint& p);

// Left-invariant quasi-distance d(p,q) = ||p^{-1} q||.
double quasi_distance(const GradedLieAlgebra& alg, const GroupPoint& p, const GroupPoint& q);

// Homogeneous generating set drawn from the basis.
struct PreferredGenerators {
  std::vector<int> indices;  // basis indices
  std::vector<int> degrees;  // layer of each generator
  int lcm_degree = 1;        // v = lcm of degrees
};

// Validates that the chosen basis elements generate the algebra by iterated
// brackets; throws std::invalid_argument otherwise.
PreferredGenerators make_preferred_generators(const GradedLieAlgebra& alg,
                                              std::vector<int> indices);

// Canonical choice: a basis complement of the derived subalgebra [g,g].
PreferredGenerators default_generators(const GradedLieAlgebra& alg);

// Standard families.
GradedLieAlgebra abelian_algebra(const std::vector<int>& layers);
// h^{2n+1}: basis X_1..X_n, Y_1..Y_n, T with [X_j, Y_j] = T; layers (1,..,1,2).
GradedLieAlgebra heisenberg_algebra(int n);
// Dimension 2+N: [X,Y] = Z_1, [X, Z_i] = Z_{i+1}; layers (1, 1, 2, 3, .., N+1).
GradedLieAlgebra filiform_algebra(int N);

}  // namespace gw
