#include "largeness/covering.hpp"

#include <algorithm>
#include <cmath>

#include "largeness/errors.hpp"

namespace largeness {

PackingDomain packing_domain(const FiniteMetricSpace& space, const PackingOptions& options) {
  if (space.indexable() && space.size() <= options.sample_size) return {space, false};
  return {sampled_subspace(space, options.sample_size, options.seed), true};
}

std::vector<Index> maximal_packing(const PackingDomain& domain, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("packing radius must be positive");
  const FiniteMetricSpace& X = domain.space;
  const Index n = X.size();
  std::vector<Index> centers;
  for (Index i = 0; i < n; ++i) {
    bool covered = false;
    // Recent centers are the likeliest to be close for lattice-ordered points.
    for (auto it = centers.rbegin(); it != centers.rend(); ++it) {
      if (X.closer_than(i, *it, epsilon)) {
        covered = true;
        break;
      }
    }
    if (!covered) centers.push_back(i);
  }
  return centers;
}

std::vector<Index> maximal_packing(const FiniteMetricSpace& space, double epsilon) {
  return maximal_packing(packing_domain(space), epsilon);
}

std::vector<double> geometric_grid(double first, double ratio, std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = first * std::pow(ratio, static_cast<double>(i));
  return grid;
}

CoveringProfile covering_profile(const FiniteMetricSpace& space,
                                 const std::vector<double>& epsilon_grid,
                                 const PackingOptions& options, unsigned threads) {
  if (epsilon_grid.empty()) throw DomainError("epsilon grid is empty");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0)) throw DomainError("epsilon grid must be positive");
    if (i > 0 && !(epsilon_grid[i] < epsilon_grid[i - 1])) {
      throw DomainError("epsilon grid must be strictly decreasing");
    }
  }
  const PackingDomain domain = packing_domain(space, options);
  std::vector<std::uint64_t> greedy(epsilon_grid.size());
  parallel_for(epsilon_grid.size(), threads, [&](std::size_t i) {
    greedy[i] = maximal_packing(domain, epsilon_grid[i]).size();
  });

  CoveringProfile profile;
  profile.space_label = space.label();
  profile.sample_size = domain.space.size();
  profile.sampled = domain.sampled;
  profile.seed = domain.sampled ? options.seed : 0;
  const std::size_t m = epsilon_grid.size();
  profile.entries.resize(m);
  std::uint64_t best_pack = 0;
  for (std::size_t i = 0; i < m; ++i) {
    best_pack = std::max(best_pack, greedy[i]);
    profile.entries[i] = {epsilon_grid[i], 0, best_pack, greedy[i]};
  }
  std::uint64_t best_cover = greedy[m - 1];
  for (std::size_t i = m; i-- > 0;) {
    best_cover = std::min(best_cover, greedy[i]);
    profile.entries[i].cover_upper = best_cover;
  }
  return profile;
}

SandwichReport sandwich_check(const CoveringProfile& profile) {
  SandwichReport report;
  const auto& e = profile.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (std::abs(e[j].epsilon - 2.0 * e[i].epsilon) > 1e-9 * e[j].epsilon) continue;
      SandwichRow row{e[i].epsilon, e[j].cover_upper, e[i].packing_lower, false};
      row.ok = row.cover_at_double <= row.packing;
      if (!row.ok) ++report.violations;
      report.rows.push_back(row);
    }
  }
  if (report.rows.empty()) throw GridMismatch("profile has no (eps, 2 eps) pair");
  return report;
}

}  // namespace largeness
