#include "largeness/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "largeness/covering.hpp"
#include "largeness/errors.hpp"
#include "largeness/transport.hpp"

namespace largeness {

FiniteSubset::FiniteSubset(FiniteMetricSpace space, std::vector<Index> points)
    : space_(std::move(space)), points_(std::move(points)) {
  if (points_.empty()) throw EmptySupport("subset is empty");
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  if (points_.back() >= space_.size()) throw DomainError("subset index outside the space");
}

namespace {

double directed(const FiniteMetricSpace& X, const std::vector<Index>& from,
                const std::vector<Index>& to) {
  double worst = 0.0;
  for (Index a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (Index b : to) {
      best = std::min(best, X.distance(a, b));
      if (best <= worst) break;  // cannot raise the sup
    }
    worst = std::max(worst, best);
  }
  return worst;
}

double set_diameter(const FiniteMetricSpace& X, const std::vector<Index>& points) {
  double diam = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      diam = std::max(diam, X.distance(points[i], points[j]));
    }
  }
  return diam;
}

}  // namespace

double hausdorff_distance(const FiniteSubset& a, const FiniteSubset& b) {
  if (!a.space().same_as(b.space())) throw SpaceMismatch("subsets live in different spaces");
  const auto& X = a.space();
  return std::max(directed(X, a.points(), b.points()), directed(X, b.points(), a.points()));
}

double Partition::max_block_diameter() const {
  double m = 0.0;
  for (double d : block_diameter) m = std::max(m, d);
  return m;
}

Partition build_partition(const FiniteMetricSpace& space, double epsilon, std::size_t limit) {
  if (!(epsilon > 0.0)) throw DomainError("partition radius must be positive");
  const Index n = space.size();
  if (n > limit) throw SizeLimit("space too large to partition");
  Partition part{space, epsilon, {}, std::vector<std::uint32_t>(n), {}, {}};
  for (Index i = 0; i < n; ++i) {
    std::size_t block = part.centers.size();
    for (std::size_t c = 0; c < part.centers.size(); ++c) {
      if (space.closer_than(i, part.centers[c], epsilon)) {
        block = c;
        break;
      }
    }
    if (block == part.centers.size()) {
      part.centers.push_back(i);
      part.blocks.emplace_back();
    }
    part.block_of[i] = static_cast<std::uint32_t>(block);
    part.blocks[block].push_back(i);
  }
  for (const auto& b : part.blocks) part.block_diameter.push_back(set_diameter(space, b));
  return part;
}

Partition partition_from_blocks(const FiniteMetricSpace& space, double epsilon,
                                std::vector<std::vector<Index>> blocks) {
  const Index n = space.size();
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  Partition part{space, epsilon, {}, std::vector<std::uint32_t>(n, kUnset), {}, {}};
  for (auto& b : blocks) {
    if (b.empty()) throw DomainError("partition block is empty");
    std::sort(b.begin(), b.end());
    const auto id = static_cast<std::uint32_t>(part.blocks.size());
    for (Index p : b) {
      if (p >= n) throw DomainError("partition index outside the space");
      if (part.block_of[p] != kUnset) throw DomainError("partition blocks overlap");
      part.block_of[p] = id;
    }
    part.centers.push_back(b.front());
    part.block_diameter.push_back(set_diameter(space, b));
    part.blocks.push_back(std::move(b));
  }
  for (Index p = 0; p < n; ++p) {
    if (part.block_of[p] == kUnset) throw DomainError("partition does not cover the space");
  }
  return part;
}

std::vector<std::uint8_t> occupancy_map(const FiniteSubset& subset, const Partition& partition) {
  if (!subset.space().same_as(partition.space)) throw SpaceMismatch("partition of another space");
  std::vector<std::uint8_t> bits(partition.block_count(), 0);
  for (Index p : subset.points()) bits[partition.block_of[p]] = 1;
  return bits;
}

std::vector<double> measure_occupancy_map(const DiscreteMeasure& mu, const Partition& partition) {
  if (!mu.space().same_as(partition.space)) throw SpaceMismatch("partition of another space");
  std::vector<double> mass(partition.block_count(), 0.0);
  for (const auto& a : mu.atoms()) mass[partition.block_of[a.point]] += a.mass;
  return mass;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DomainError("vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double occupancy_w2_bound(double diameter, double sigma, double epsilon) {
  return diameter * std::sqrt(sigma) + 2.0 * epsilon;
}

namespace {

constexpr std::uint64_t kRandomMeasureDenominator = 64;

DiscreteMeasure random_lattice_measure(const FiniteMetricSpace& X, std::size_t max_support,
                                       Rng& rng) {
  const auto cap = std::min<std::size_t>({max_support, X.size(), kRandomMeasureDenominator});
  const auto support = 1 + static_cast<std::size_t>(uniform_index(rng, cap));
  std::vector<std::uint64_t> cuts;
  while (cuts.size() + 1 < support) {
    const auto c = 1 + uniform_index(rng, kRandomMeasureDenominator - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  cuts.push_back(0);
  cuts.push_back(kRandomMeasureDenominator);
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<Index, std::uint64_t>> nums;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    nums.emplace_back(uniform_index(rng, X.size()), cuts[i + 1] - cuts[i]);
  }
  return DiscreteMeasure::from_lattice(X, std::move(nums), kRandomMeasureDenominator);
}

Index random_point_in_block(const Partition& part, std::uint32_t block, Rng& rng) {
  const auto& b = part.blocks[block];
  return b[uniform_index(rng, b.size())];
}

}  // namespace

OccupancyAudit audit_subset_fibres(const Partition& partition, std::size_t pairs,
                                   std::size_t max_size, std::uint64_t seed) {
  if (max_size == 0) throw DomainError("max_size must be positive");
  const FiniteMetricSpace& X = partition.space;
  OccupancyAudit audit;
  audit.bound = partition.max_block_diameter();
  for (std::size_t i = 0; i < pairs; ++i) {
    Rng rng = derived_rng(seed, i);
    const auto size = 1 + static_cast<std::size_t>(uniform_index(rng, max_size));
    std::vector<Index> a, b;
    for (std::size_t j = 0; j < size; ++j) a.push_back(uniform_index(rng, X.size()));
    std::vector<std::uint32_t> met;
    for (Index p : a) met.push_back(partition.block_of[p]);
    std::sort(met.begin(), met.end());
    met.erase(std::unique(met.begin(), met.end()), met.end());
    for (std::uint32_t blk : met) {
      const auto extra = 1 + uniform_index(rng, 3);
      for (Index e = 0; e < extra; ++e) b.push_back(random_point_in_block(partition, blk, rng));
    }
    const FiniteSubset A(X, a), B(X, b);
    if (occupancy_map(A, partition) != occupancy_map(B, partition)) {
      throw Error("fibre construction produced different occupancy vectors");
    }
    const double h = hausdorff_distance(A, B);
    ++audit.pairs;
    if (h > audit.bound + kDistanceTolerance) ++audit.failures;
    if (audit.bound > 0.0) audit.worst_ratio = std::max(audit.worst_ratio, h / audit.bound);
  }
  return audit;
}

OccupancyAudit audit_measure_occupancy(const Partition& partition, std::size_t pairs,
                                       std::size_t max_support, std::uint64_t seed) {
  const FiniteMetricSpace& X = partition.space;
  const double diam = X.diameter();
  OccupancyAudit audit;
  for (std::size_t i = 0; i < pairs; ++i) {
    Rng rng = derived_rng(seed, i);
    const DiscreteMeasure mu = random_lattice_measure(X, max_support, rng);
    std::optional<DiscreteMeasure> nu;
    if (i % 2 == 0) {
      std::vector<std::pair<Index, std::uint64_t>> moved;
      for (std::size_t a = 0; a < mu.atoms().size(); ++a) {
        const auto blk = partition.block_of[mu.atoms()[a].point];
        moved.emplace_back(random_point_in_block(partition, blk, rng), mu.numerators()[a]);
      }
      nu.emplace(DiscreteMeasure::from_lattice(X, std::move(moved), mu.denominator()));
    } else {
      nu.emplace(random_lattice_measure(X, max_support, rng));
    }
    const double sigma =
        l1_distance(measure_occupancy_map(mu, partition), measure_occupancy_map(*nu, partition));
    const double bound = occupancy_w2_bound(diam, sigma, partition.epsilon);
    const double w = wasserstein(mu, *nu, 2.0).distance;
    ++audit.pairs;
    if (w > bound + kDistanceTolerance) ++audit.failures;
    audit.worst_ratio = std::max(audit.worst_ratio, w / bound);
    audit.bound = std::max(audit.bound, bound);
  }
  return audit;
}

WassersteinCoveringBound wasserstein_covering_bound(const FiniteMetricSpace& space, double epsilon,
                                                    double d_prime, std::size_t candidates,
                                                    std::size_t max_support, std::uint64_t seed,
                                                    double eta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  if (!(d_prime > 0.0)) throw ParameterDomain("d' must be positive");
  if (!(eta > 0.0)) throw ParameterDomain("eta must be positive");
  if (max_support == 0) throw DomainError("max_support must be positive");
  WassersteinCoveringBound out{};
  out.epsilon = epsilon;
  out.d_prime = d_prime;
  out.eta = eta;
  out.scale = (space.diameter() + 1.0) * epsilon;
  out.ideal_blocks = std::pow(1.0 / epsilon, d_prime);
  out.log_bound = (2.0 * out.ideal_blocks + eta) * std::log(1.0 / epsilon);
  out.bound = std::exp(out.log_bound);
  out.blocks = build_partition(space, epsilon).block_count();
  out.candidates = candidates;

  std::vector<DiscreteMeasure> packed;
  for (std::size_t c = 0; c < candidates; ++c) {
    Rng rng = derived_rng(seed, c);
    DiscreteMeasure mu = random_lattice_measure(space, max_support, rng);
    bool far = true;
    for (const auto& nu : packed) {
      if (wasserstein(mu, nu, 2.0).distance < out.scale) {
        far = false;
        break;
      }
    }
    if (far) packed.push_back(std::move(mu));
  }
  out.observed = packed.size();
  out.consistent = static_cast<double>(out.observed) <= out.bound;
  return out;
}

}  // namespace largeness
