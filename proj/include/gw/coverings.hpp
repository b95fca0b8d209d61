#pragma once
#include <Eigen/Dense>

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "gw/lie_core.hpp"

namespace gw {

// Bounded region in exponential coordinates: an axis-aligned box, optionally
// intersected with a membership predicate.
struct Region {
  std::vector<std::array<double, 2>> bounds;
  std::function<bool(const Eigen::VectorXd&)> member;  // empty = whole box

  bool contains(const Eigen::VectorXd& x) const;
  int dim() const { return static_cast<int>(bounds.size()); }
};

// Uniform box lattice used for sampling-based verification. Points are
// enumerated in odometer order (last axis fastest).
struct Lattice {
  std::vector<std::array<double, 2>> bounds;
  std::vector<long> points;  // per axis, >= 2

  long total() const;
  std::vector<double> steps() const;
  Eigen::VectorXd coordinate(long flat) const;
  // Lebesgue volume of one lattice cell.
  double cell_volume() const;
};

// Ball covering of a region at a fixed radius. Haar measure (= Lebesgue in
// exponential coordinates) is rescaled by measure_constant so that the unit
// quasi-norm ball has measure exactly 1, making mu(B(x,r)) = r^delta.
struct Covering {
  std::vector<GroupPoint> centers;
  double radius = 0.0;  // ball radius around each center
  double delta = 0.0;   // homogeneous dimension of the ambient group
  double measure_constant = 1.0;
  // multiplicity_histogram[k] = number of verification sample points lying in
  // exactly k of the balls B(center, radius).
  std::vector<long> multiplicity_histogram;
  // Largest distance from a verification sample point to its nearest center.
  double coverage_radius = 0.0;

  long max_multiplicity() const;
};

// Greedy covering: scans a dense lattice of the region and keeps every point
// at distance >= eps/2 from all previously kept centers. The result is a
// maximal eps/2-separated set, so balls of radius eps cover the region; the
// histogram and coverage radius are measured on an offset verification sample.
Covering greedy_cover(const GradedLieAlgebra& alg, const Region& region, double eps);

// Largest number of dilated balls B(center, N*eps) containing any point of a
// dense sample of the region.
long dilated_multiplicity(const GradedLieAlgebra& alg, const Region& region,
                          const Covering& cov, int n_dilate);

// Index of the nearest covering center for every lattice point (ties resolved
// toward the lowest index), or -1 for lattice points outside the region.
std::vector<long> tile_assignment(const GradedLieAlgebra& alg, const Region& region,
                                  const Covering& cov, const Lattice& lat);

// Disjointly supported C^2 bumps subordinate to the Voronoi cells of a
// covering, sampled on a lattice.
struct Partition {
  int level = 0;
  std::vector<std::vector<long>> supports;  // lattice indices per bump, disjoint
  std::vector<std::vector<double>> values;  // phi at the support indices
  std::vector<double> diameter_bounds;      // quasi-diameter bound per support
  std::vector<double> cell_defects;         // rescaled measure of {phi != 1} per cell
  double defect_measure = 0.0;  // rescaled measure of {sum phi^2 != 1} in the region
  double cell_measure = 0.0;    // rescaled measure of one lattice cell
  long region_points = 0;       // lattice points inside the region

  int count() const { return static_cast<int>(supports.size()); }
};

// Builds the level-l system of bumps on the Voronoi cells of `cov`. Each bump
// rises from 0 to 1 across a thin collar of the cell boundary using the C^2
// profile 1 - (1 - s^2)^3, so supports are exactly the (mutually disjoint)
// cells and phi = 1 off the collar. Requires cov.radius <= (2/3) * 2^{-l} so
// cell diameters stay below 2^{-l}, and a lattice step of at most
// (2^{-l})^{w_a} / 8 on every axis a (w_a = dilation weight); violations throw
// std::invalid_argument.
Partition partition_functions(const GradedLieAlgebra& alg, const Region& region,
                              const Covering& cov, int level, const Lattice& lat);

// l_q norm over tiles of the tile-wise L_p norm (Riemann sums with rescaled
// cell measure `cell_measure`). `tiles` assigns each sample to a tile as
// produced by tile_assignment; negative entries are skipped. p or q may be
// +infinity (supremum); p, q <= 0 throw std::invalid_argument.
double lplq_norm(const Eigen::VectorXd& samples, double p, double q,
                 const std::vector<long>& tiles, long tile_count, double cell_measure);

// One "x_0,...,x_{n-1},radius" row per center, full round-trip precision.
std::string covering_csv(const Covering& cov);

}  // namespace gw
