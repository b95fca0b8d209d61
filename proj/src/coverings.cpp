#include "gw/coverings.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace gw {
namespace {

constexpr long kMaxSamplePoints = 50'000'000;

double box_coord_bound(const std::vector<std::array<double, 2>>& bounds) {
  double b = 0.0;
  for (const auto& ab : bounds) b = std::max({b, std::abs(ab[0]), std::abs(ab[1])});
  return b;
}

// Odometer over an axis-aligned lattice; prune with the region predicate.
template <class F>
void for_each_lattice_point(const std::vector<std::array<double, 2>>& bounds,
                            const std::vector<double>& step, double offset_frac,
                            F&& body) {
  const int n = static_cast<int>(bounds.size());
  std::vector<long> counts(static_cast<std::size_t>(n));
  long total = 1;
  for (int a = 0; a < n; ++a) {
    const double extent = bounds[static_cast<std::size_t>(a)][1] -
                          bounds[static_cast<std::size_t>(a)][0];
    const double h = step[static_cast<std::size_t>(a)];
    long m = extent <= 0 ? 1 : static_cast<long>(std::floor((extent - offset_frac * h) / h)) + 1;
    counts[static_cast<std::size_t>(a)] = std::max<long>(m, 1);
    total *= counts[static_cast<std::size_t>(a)];
    if (total > kMaxSamplePoints)
      throw std::invalid_argument("coverings: sampling lattice exceeds the point budget");
  }
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd x(n);
  for (long flat = 0; flat < total; ++flat) {
    for (int a = 0; a < n; ++a)
      x[a] = bounds[static_cast<std::size_t>(a)][0] +
             (static_cast<double>(idx[static_cast<std::size_t>(a)]) + offset_frac) *
                 step[static_cast<std::size_t>(a)];
    body(x);
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < counts[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
  }
}

// Buckets centers on a uniform coordinate grid so that all centers within
// quasi-distance r of a query point are found by scanning nearby buckets.
// Collisions and clamping only ever add spurious candidates, which the exact
// distance check filters out again.
class CenterIndex {
 public:
  CenterIndex(const GradedLieAlgebra& alg, const std::vector<std::array<double, 2>>& bounds,
              double r_ref)
      : alg_(alg), origin_(alg.dim()), coord_bound_(box_coord_bound(bounds)), reach_ref_(r_ref) {
    const int n = alg.dim();
    cross_.assign(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          cross_[static_cast<std::size_t>(k)] += std::abs(alg.c()(i, j, k));
    width_.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      origin_[a] = bounds[static_cast<std::size_t>(a)][0];
      width_[static_cast<std::size_t>(a)] = std::max(reach(a, r_ref), 1e-12);
    }
    cell_lo_.assign(static_cast<std::size_t>(n), 0);
    cell_hi_.assign(static_cast<std::size_t>(n), 0);
  }

  void insert(int id, const Eigen::VectorXd& x) {
    if (static_cast<std::size_t>(id) != points_.size())
      throw std::logic_error("CenterIndex: ids must be inserted in order");
    const auto c = cell(x);
    for (int a = 0; a < alg_.dim(); ++a) {
      if (points_.empty()) {
        cell_lo_[static_cast<std::size_t>(a)] = c[static_cast<std::size_t>(a)];
        cell_hi_[static_cast<std::size_t>(a)] = c[static_cast<std::size_t>(a)];
      } else {
        cell_lo_[static_cast<std::size_t>(a)] =
            std::min(cell_lo_[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(a)]);
        cell_hi_[static_cast<std::size_t>(a)] =
            std::max(cell_hi_[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(a)]);
      }
    }
    buckets_[key(c)].push_back(id);
    points_.push_back(x);
  }

  // Calls body(id, dist) for every stored center within quasi-distance r of x.
  template <class F>
  void for_within(const Eigen::VectorXd& x, double r, F&& body) const {
    if (points_.empty()) return;
    const int n = alg_.dim();
    std::vector<long> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n)),
        it(static_cast<std::size_t>(n));
    const auto base = cell(x);
    for (int a = 0; a < n; ++a) {
      const long span = static_cast<long>(
          std::ceil(reach(a, r) / width_[static_cast<std::size_t>(a)]));
      lo[static_cast<std::size_t>(a)] = std::max(base[static_cast<std::size_t>(a)] - span,
                                                 cell_lo_[static_cast<std::size_t>(a)]);
      hi[static_cast<std::size_t>(a)] = std::min(base[static_cast<std::size_t>(a)] + span,
                                                 cell_hi_[static_cast<std::size_t>(a)]);
      if (lo[static_cast<std::size_t>(a)] > hi[static_cast<std::size_t>(a)]) return;
      it[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    }
    GroupPoint px{x};
    while (true) {
      auto found = buckets_.find(key(it));
      if (found != buckets_.end()) {
        for (int id : found->second) {
          const double d =
              quasi_distance(alg_, px, GroupPoint{points_[static_cast<std::size_t>(id)]});
          if (d <= r) body(id, d);
        }
      }
      int a = n - 1;
      for (; a >= 0; --a) {
        if (++it[static_cast<std::size_t>(a)] <= hi[static_cast<std::size_t>(a)]) break;
        it[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
      }
      if (a < 0) break;
    }
  }

  // Nearest `want` centers (1 or 2): fills ids and distances, padding with
  // -1 / +inf. Grows the search radius until the answers are certified.
  void nearest(const Eigen::VectorXd& x, int want, long* ids, double* dists) const {
    for (int k = 0; k < want; ++k) {
      ids[k] = -1;
      dists[k] = std::numeric_limits<double>::infinity();
    }
    if (points_.empty()) return;
    const int avail = static_cast<int>(std::min<long>(want, size()));
    double r = reach_ref_;
    for (int round = 0; round < 64; ++round) {
      for (int k = 0; k < want; ++k) {
        ids[k] = -1;
        dists[k] = std::numeric_limits<double>::infinity();
      }
      for_within(x, r, [&](int id, double d) {
        for (int k = 0; k < want; ++k) {
          if (d < dists[k] || (d == dists[k] && id < ids[k])) {
            for (int m = want - 1; m > k; --m) {
              dists[m] = dists[m - 1];
              ids[m] = ids[m - 1];
            }
            dists[k] = d;
            ids[k] = id;
            break;
          }
        }
      });
      if (ids[avail - 1] >= 0 && dists[avail - 1] <= r) return;
      r *= 2.0;
    }
    throw std::logic_error("CenterIndex: nearest-neighbour search failed to converge");
  }

  long size() const { return static_cast<long>(points_.size()); }

 private:
  double reach(int axis, double r) const {
    return std::pow(r, alg_.layer(axis)) +
           0.5 * cross_[static_cast<std::size_t>(axis)] * coord_bound_ * r;
  }
  std::vector<long> cell(const Eigen::VectorXd& x) const {
    std::vector<long> c(static_cast<std::size_t>(alg_.dim()));
    for (int a = 0; a < alg_.dim(); ++a) {
      double u = std::floor((x[a] - origin_[a]) / width_[static_cast<std::size_t>(a)]);
      u = std::min(std::max(u, -1e6), 1e6);
      c[static_cast<std::size_t>(a)] = static_cast<long>(u);
    }
    return c;
  }
  long long key(const std::vector<long>& c) const {
    long long k = 0;
    for (long v : c) k = k * 2097152LL + (v + 1048576LL);
    return k;
  }

  const GradedLieAlgebra& alg_;
  Eigen::VectorXd origin_;
  double coord_bound_ = 0.0;
  double reach_ref_ = 0.0;
  std::vector<double> cross_;
  std::vector<double> width_;
  std::vector<long> cell_lo_, cell_hi_;
  std::vector<Eigen::VectorXd> points_;
  std::unordered_map<long long, std::vector<int>> buckets_;
};

std::vector<double> candidate_steps(const GradedLieAlgebra& alg, double eps) {
  std::vector<double> s(static_cast<std::size_t>(alg.dim()));
  for (int a = 0; a < alg.dim(); ++a)
    s[static_cast<std::size_t>(a)] = std::pow(eps / 4.0, alg.layer(a));
  return s;
}

}  // namespace

bool Region::contains(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != bounds.size()) return false;
  for (int a = 0; a < x.size(); ++a) {
    const auto& ab = bounds[static_cast<std::size_t>(a)];
    if (x[a] < ab[0] || x[a] > ab[1]) return false;
  }
  return !member || member(x);
}

long Lattice::total() const {
  long t = 1;
  for (long m : points) {
    if (m < 2) throw std::invalid_argument("Lattice: need at least 2 points per axis");
    t *= m;
  }
  return t;
}

std::vector<double> Lattice::steps() const {
  std::vector<double> h(points.size());
  for (std::size_t a = 0; a < points.size(); ++a)
    h[a] = (bounds[a][1] - bounds[a][0]) / static_cast<double>(points[a] - 1);
  return h;
}

Eigen::VectorXd Lattice::coordinate(long flat) const {
  const auto h = steps();
  Eigen::VectorXd x(static_cast<int>(points.size()));
  for (int a = static_cast<int>(points.size()) - 1; a >= 0; --a) {
    const long m = points[static_cast<std::size_t>(a)];
    x[a] = bounds[static_cast<std::size_t>(a)][0] +
           static_cast<double>(flat % m) * h[static_cast<std::size_t>(a)];
    flat /= m;
  }
  return x;
}

double Lattice::cell_volume() const {
  double v = 1.0;
  for (double h : steps()) v *= h;
  return v;
}

long Covering::max_multiplicity() const {
  for (long k = static_cast<long>(multiplicity_histogram.size()) - 1; k >= 0; --k)
    if (multiplicity_histogram[static_cast<std::size_t>(k)] > 0) return k;
  return 0;
}

Covering greedy_cover(const GradedLieAlgebra& alg, const Region& region, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("greedy_cover: eps must be positive");
  if (region.dim() != alg.dim())
    throw std::invalid_argument("greedy_cover: region dimension does not match the group");

  Covering cov;
  cov.radius = eps;
  cov.delta = static_cast<double>(homogeneous_dimension(alg));
  cov.measure_constant = std::pow(0.5, alg.dim());

  const auto step = candidate_steps(alg, eps);
  CenterIndex index(alg, region.bounds, eps);

  // Greedy maximal eps/2-separated subset of a dense candidate lattice. The
  // relative tolerance keeps lattice points whose separation only misses
  // eps/2 through rounding of the candidate coordinates.
  const double sep = eps / 2.0;
  for_each_lattice_point(region.bounds, step, 0.0, [&](const Eigen::VectorXd& x) {
    if (!region.contains(x)) return;
    bool blocked = false;
    index.for_within(x, sep, [&](int, double d) {
      if (d < sep * (1.0 - 1e-12)) blocked = true;
    });
    if (blocked) return;
    index.insert(static_cast<int>(index.size()), x);
    cov.centers.push_back(GroupPoint{x});
  });

  if (cov.centers.empty()) return cov;

  // Verify coverage and record the ball multiplicity on an offset sample.
  std::vector<long> hist;
  double coverage = 0.0;
  for_each_lattice_point(region.bounds, step, 0.5, [&](const Eigen::VectorXd& x) {
    if (!region.contains(x)) return;
    long count = 0;
    double best = std::numeric_limits<double>::infinity();
    index.for_within(x, eps, [&](int, double d) {
      ++count;
      best = std::min(best, d);
    });
    if (!std::isfinite(best)) {
      long id;
      index.nearest(x, 1, &id, &best);
    }
    coverage = std::max(coverage, best);
    if (static_cast<std::size_t>(count) >= hist.size()) hist.resize(static_cast<std::size_t>(count) + 1, 0);
    ++hist[static_cast<std::size_t>(count)];
  });
  cov.multiplicity_histogram = std::move(hist);
  cov.coverage_radius = coverage;
  return cov;
}

long dilated_multiplicity(const GradedLieAlgebra& alg, const Region& region,
                          const Covering& cov, int n_dilate) {
  if (n_dilate < 1) throw std::invalid_argument("dilated_multiplicity: N must be >= 1");
  if (cov.centers.empty()) return 0;
  CenterIndex index(alg, region.bounds, cov.radius);
  for (std::size_t i = 0; i < cov.centers.size(); ++i)
    index.insert(static_cast<int>(i), cov.centers[i].coords);
  const double r = static_cast<double>(n_dilate) * cov.radius;
  long worst = 0;
  const auto step = candidate_steps(alg, cov.radius);
  for_each_lattice_point(region.bounds, step, 0.37, [&](const Eigen::VectorXd& x) {
    if (!region.contains(x)) return;
    long count = 0;
    index.for_within(x, r, [&](int, double) { ++count; });
    worst = std::max(worst, count);
  });
  return worst;
}

std::vector<long> tile_assignment(const GradedLieAlgebra& alg, const Region& region,
                                  const Covering& cov, const Lattice& lat) {
  if (static_cast<int>(lat.bounds.size()) != alg.dim())
    throw std::invalid_argument("tile_assignment: lattice dimension does not match the group");
  const long total = lat.total();
  std::vector<long> tiles(static_cast<std::size_t>(total), -1);
  if (cov.centers.empty()) return tiles;
  CenterIndex index(alg, lat.bounds, cov.radius);
  for (std::size_t i = 0; i < cov.centers.size(); ++i)
    index.insert(static_cast<int>(i), cov.centers[i].coords);
  for (long flat = 0; flat < total; ++flat) {
    const Eigen::VectorXd x = lat.coordinate(flat);
    if (!region.contains(x)) continue;
    long id;
    double d;
    index.nearest(x, 1, &id, &d);
    tiles[static_cast<std::size_t>(flat)] = id;
  }
  return tiles;
}

Partition partition_functions(const GradedLieAlgebra& alg, const Region& region,
                              const Covering& cov, int level, const Lattice& lat) {
  if (level < 0) throw std::invalid_argument("partition_functions: level must be >= 0");
  const double scale = std::pow(2.0, -level);
  if (cov.radius > scale * (2.0 / 3.0) * (1.0 + 1e-12))
    throw std::invalid_argument(
        "partition_functions: covering radius too large for the requested level");
  if (static_cast<int>(lat.bounds.size()) != alg.dim())
    throw std::invalid_argument("partition_functions: lattice dimension does not match the group");
  const auto h = lat.steps();
  for (int a = 0; a < alg.dim(); ++a) {
    if (h[static_cast<std::size_t>(a)] > std::pow(scale, alg.layer(a)) / 8.0 * (1.0 + 1e-12))
      throw std::invalid_argument("partition_functions: grid too coarse for the requested level");
  }

  Partition part;
  part.level = level;
  part.cell_measure = lat.cell_volume() * cov.measure_constant;

  const int ncells = static_cast<int>(cov.centers.size());
  part.supports.resize(static_cast<std::size_t>(ncells));
  part.values.resize(static_cast<std::size_t>(ncells));
  part.cell_defects.assign(static_cast<std::size_t>(ncells), 0.0);

  CenterIndex index(alg, lat.bounds, std::max(cov.radius, 1e-12));
  for (std::size_t i = 0; i < cov.centers.size(); ++i)
    index.insert(static_cast<int>(i), cov.centers[i].coords);

  // Transition collar width, in quasi-distance units of d2 - d1. Thin enough
  // that each cell's collar stays well below the 1/(2^l N_l) budget.
  const double margin = scale * cov.radius / 8.0;

  struct BBox {
    Eigen::VectorXd lo, hi;
    double max_center_dist = 0.0;
    bool seen = false;
  };
  std::vector<BBox> boxes(static_cast<std::size_t>(ncells));

  const long total = lat.total();
  for (long flat = 0; flat < total; ++flat) {
    const Eigen::VectorXd x = lat.coordinate(flat);
    if (!region.contains(x)) continue;
    ++part.region_points;
    if (ncells == 0) {
      part.defect_measure += part.cell_measure;
      continue;
    }
    long ids[2];
    double dists[2];
    index.nearest(x, std::min(2, ncells), ids, dists);
    const double d1 = dists[0];
    const double d2 = ncells > 1 ? dists[1] : std::numeric_limits<double>::infinity();
    const double s = std::isfinite(d2) ? std::min((d2 - d1) / margin, 1.0) : 1.0;
    const double u = 1.0 - s * s;
    const double phi = s > 0.0 ? 1.0 - u * u * u : 0.0;
    if (!(phi > 0.0)) {
      part.defect_measure += part.cell_measure;  // boundary tie: in no support
      continue;
    }
    const std::size_t n = static_cast<std::size_t>(ids[0]);
    part.supports[n].push_back(flat);
    part.values[n].push_back(phi);
    if (phi < 1.0) {
      part.cell_defects[n] += part.cell_measure;
      part.defect_measure += part.cell_measure;
    }
    BBox& bb = boxes[n];
    if (!bb.seen) {
      bb.lo = x;
      bb.hi = x;
      bb.seen = true;
    } else {
      bb.lo = bb.lo.cwiseMin(x);
      bb.hi = bb.hi.cwiseMax(x);
    }
    bb.max_center_dist = std::max(bb.max_center_dist, d1);
  }

  part.diameter_bounds.assign(static_cast<std::size_t>(ncells), 0.0);
  for (int n = 0; n < ncells; ++n) {
    const BBox& bb = boxes[static_cast<std::size_t>(n)];
    if (!bb.seen) continue;
    double diam;
    if (alg.step() == 1) {
      // Exact for the max-type quasi-norm: attained at bounding-box corners.
      diam = 0.0;
      for (int a = 0; a < alg.dim(); ++a)
        diam = std::max(diam, std::pow(bb.hi[a] - bb.lo[a], 1.0 / alg.layer(a)));
    } else {
      diam = 2.0 * bb.max_center_dist;
      const auto& sup = part.supports[static_cast<std::size_t>(n)];
      if (sup.size() <= 600) {
        double exact = 0.0;
        std::vector<Eigen::VectorXd> pts;
        pts.reserve(sup.size());
        for (long flat : sup) pts.push_back(lat.coordinate(flat));
        for (std::size_t i = 0; i < pts.size(); ++i)
          for (std::size_t j = i + 1; j < pts.size(); ++j)
            exact = std::max(exact,
                             quasi_distance(alg, GroupPoint{pts[i]}, GroupPoint{pts[j]}));
        diam = std::min(diam, exact);
      }
    }
    part.diameter_bounds[static_cast<std::size_t>(n)] = diam;
  }
  return part;
}

double lplq_norm(const Eigen::VectorXd& samples, double p, double q,
                 const std::vector<long>& tiles, long tile_count, double cell_measure) {
  if (!(p > 0.0) || !(q > 0.0))
    throw std::invalid_argument("lplq_norm: p and q must be positive");
  if (static_cast<std::size_t>(samples.size()) != tiles.size())
    throw std::invalid_argument("lplq_norm: samples and tile assignment differ in length");
  if (tile_count < 0) throw std::invalid_argument("lplq_norm: negative tile count");
  if (!(cell_measure > 0.0)) throw std::invalid_argument("lplq_norm: cell measure must be positive");

  const bool p_inf = std::isinf(p);
  std::vector<double> acc(static_cast<std::size_t>(tile_count), 0.0);
  for (long j = 0; j < samples.size(); ++j) {
    const long t = tiles[static_cast<std::size_t>(j)];
    if (t < 0) continue;
    if (t >= tile_count) throw std::invalid_argument("lplq_norm: tile index out of range");
    const double v = std::abs(samples[j]);
    if (p_inf)
      acc[static_cast<std::size_t>(t)] = std::max(acc[static_cast<std::size_t>(t)], v);
    else
      acc[static_cast<std::size_t>(t)] += std::pow(v, p);
  }
  if (std::isinf(q)) {
    double best = 0.0;
    for (double a : acc)
      best = std::max(best, p_inf ? a : std::pow(a * cell_measure, 1.0 / p));
    return best;
  }
  double sum = 0.0;
  for (double a : acc) {
    const double tile_norm = p_inf ? a : std::pow(a * cell_measure, 1.0 / p);
    sum += std::pow(tile_norm, q);
  }
  return std::pow(sum, 1.0 / q);
}

std::string covering_csv(const Covering& cov) {
  std::string out;
  char buf[64];
  for (const auto& c : cov.centers) {
    for (int a = 0; a < c.coords.size(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", c.coords[a]);
      out += buf;
      out += ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", cov.radius);
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace gw
