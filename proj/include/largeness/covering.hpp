#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "largeness/spaces.hpp"

namespace largeness {

inline constexpr std::size_t kDefaultSampleSize = 20000;
inline constexpr std::uint64_t kDefaultSampleSeed = 0x636f766572ULL;

struct PackingOptions {
  // Spaces larger than this (or not indexable) are replaced by a uniform sample.
  std::size_t sample_size = kDefaultSampleSize;
  std::uint64_t seed = kDefaultSampleSeed;
};

// Point set the greedy runs over: the space itself or a sampled subspace.
struct PackingDomain {
  FiniteMetricSpace space;
  bool sampled = false;
};

PackingDomain packing_domain(const FiniteMetricSpace& space, const PackingOptions& options = {});

// Greedy lowest-index-first packing: returned points are pairwise >= epsilon
// apart and every point of the domain lies within < epsilon of one of them.
// Indices refer to `domain.space`.
std::vector<Index> maximal_packing(const PackingDomain& domain, double epsilon);
std::vector<Index> maximal_packing(const FiniteMetricSpace& space, double epsilon);

struct CoveringEntry {
  double epsilon;
  std::uint64_t cover_upper;
  std::uint64_t packing_lower;
  // Size of the greedy packing at this epsilon.
  std::uint64_t greedy_count;
};

struct CoveringProfile {
  std::vector<CoveringEntry> entries;  // decreasing epsilon
  std::string space_label;
  std::size_t sample_size = 0;  // points the greedy ran over
  bool sampled = false;
  std::uint64_t seed = 0;
};

// One greedy packing per epsilon (in parallel). cover_upper(eps) is the
// smallest greedy count at radii <= eps, packing_lower(eps) the largest at
// radii >= eps; both are valid bounds and monotone in eps.
CoveringProfile covering_profile(const FiniteMetricSpace& space,
                                 const std::vector<double>& epsilon_grid,
                                 const PackingOptions& options = {}, unsigned threads = 1);

// Geometric grid first * ratio^i, i = 0..count-1.
std::vector<double> geometric_grid(double first, double ratio, std::size_t count);

struct SandwichRow {
  double epsilon;
  std::uint64_t cover_at_double;  // cover_upper(2 eps)
  std::uint64_t packing;          // packing_lower(eps)
  bool ok;
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  std::size_t violations = 0;
};

// Checks cover_upper(2 eps) <= packing_lower(eps) on every doubling pair.
// Throws GridMismatch when the grid has no pair (eps, 2 eps).
SandwichReport sandwich_check(const CoveringProfile& profile);

}  // namespace largeness
