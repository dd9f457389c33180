#pragma once

#include <cstdint>
#include <vector>

#include "largeness/measure.hpp"

namespace largeness {

// Non-empty set of points of one space, sorted and distinct.
class FiniteSubset {
 public:
  // Sorts and deduplicates; throws EmptySupport when empty, DomainError on an
  // index outside the space.
  FiniteSubset(FiniteMetricSpace space, std::vector<Index> points);

  const FiniteMetricSpace& space() const { return space_; }
  const std::vector<Index>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool operator==(const FiniteSubset& other) const {
    return space_.same_as(other.space_) && points_ == other.points_;
  }

 private:
  FiniteMetricSpace space_;
  std::vector<Index> points_;
};

// max(sup_a inf_b d, sup_b inf_a d). Throws SpaceMismatch.
double hausdorff_distance(const FiniteSubset& a, const FiniteSubset& b);

// Disjoint blocks covering the space, from a greedy epsilon-cover: each point
// joins the first center within < epsilon, so block diameters are < 2 epsilon.
struct Partition {
  FiniteMetricSpace space;
  double epsilon;
  std::vector<Index> centers;
  std::vector<std::uint32_t> block_of;      // point -> block
  std::vector<std::vector<Index>> blocks;   // sorted point lists
  std::vector<double> block_diameter;

  std::size_t block_count() const { return blocks.size(); }
  double max_block_diameter() const;
};

// Throws SizeLimit when the space has more than `limit` points.
Partition build_partition(const FiniteMetricSpace& space, double epsilon,
                          std::size_t limit = 1u << 20);

// Blocks given explicitly (for tests and files); validates disjointness and cover.
Partition partition_from_blocks(const FiniteMetricSpace& space, double epsilon,
                                std::vector<std::vector<Index>> blocks);

// m_i(A) = 1 iff A meets block i.
std::vector<std::uint8_t> occupancy_map(const FiniteSubset& subset, const Partition& partition);

// (mu(B_i))_i.
std::vector<double> measure_occupancy_map(const DiscreteMeasure& mu, const Partition& partition);

double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

// W2 bound for measures whose occupancy vectors are sigma apart in l1.
double occupancy_w2_bound(double diameter, double sigma, double epsilon);

struct OccupancyAudit {
  std::size_t pairs = 0;
  std::size_t failures = 0;
  double worst_ratio = 0.0;  // max observed / bound
  double bound = 0.0;        // fibre audit: max block diameter
};

// Pairs of subsets with equal occupancy vectors (the second drawn inside the
// blocks the first meets); checks Hausdorff <= max block diameter.
OccupancyAudit audit_subset_fibres(const Partition& partition, std::size_t pairs,
                                   std::size_t max_size, std::uint64_t seed);

// Measure pairs, half of them moved only inside blocks; checks
// W2 <= occupancy_w2_bound(diam X, l1 gap, eps) with the exact solver.
OccupancyAudit audit_measure_occupancy(const Partition& partition, std::size_t pairs,
                                       std::size_t max_support, std::uint64_t seed);

struct WassersteinCoveringBound {
  double epsilon;
  double d_prime;
  double eta;
  double scale;                   // (diam X + 1) eps
  double log_bound;               // (2 (1/eps)^{d'} + eta) log(1/eps)
  double bound;                   // exp(log_bound), may be +inf
  std::size_t blocks;             // greedy D
  double ideal_blocks;            // (1/eps)^{d'}
  std::size_t candidates;         // random measures drawn
  std::size_t observed;           // greedy W2 packing size at `scale`
  bool consistent;                // observed <= bound
};

// Upper bound on N(W2(X), (diam X + 1) eps) next to an observed greedy W2
// packing of random measures at that scale.
WassersteinCoveringBound wasserstein_covering_bound(const FiniteMetricSpace& space, double epsilon,
                                                    double d_prime, std::size_t candidates,
                                                    std::size_t max_support, std::uint64_t seed,
                                                    double eta = 1.0);

}  // namespace largeness
