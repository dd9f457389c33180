#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "largeness/spaces.hpp"
#include "largeness/transport.hpp"

namespace largeness {

// Self-map of an indexable space stored as an image table.
struct DynamicalMap {
  std::string label;
  FiniteMetricSpace space;
  std::vector<Index> image;
  bool exact = true;  // false when values were rounded to the grid

  Index operator()(Index x) const { return image[x]; }
  PointMap as_point_map() const;
};

// x -> factor x mod N on circle_space(N); exact.
DynamicalMap circle_multiplication(const FiniteMetricSpace& circle, std::uint32_t factor);
DynamicalMap identity_map(const FiniteMetricSpace& X);
// x -> nearest grid point to f(x) on grid_cube(1, .); f must map [0,1] into itself.
DynamicalMap interval_map(const FiniteMetricSpace& grid, const std::function<double(double)>& f,
                          std::string label);
// Throws DomainError on an entry outside the space.
DynamicalMap table_map(const FiniteMetricSpace& X, std::vector<Index> image, std::string label);

// d_[n](x,y) = max_{0 <= i <= n} d(phi^i x, phi^i y), orbits tabulated once.
FiniteMetricSpace bowen_metric(const DynamicalMap& phi, std::size_t n);

// Greedy maximal (n, eps)-separated set, lowest index first.
std::vector<Index> separated_set(const DynamicalMap& phi, std::size_t n, double epsilon);
std::uint64_t separated_count(const DynamicalMap& phi, std::size_t n, double epsilon);

struct DynamicsRow {
  std::size_t n;
  double epsilon;
  std::uint64_t count;
  double log_ratio;  // log(count) / n, zero at n = 0
};

struct EntropyReport {
  std::string label;
  std::vector<DynamicsRow> rows;                        // n-major
  std::vector<std::pair<double, double>> slopes;        // (eps, slope) per eps
  double estimate = 0.0;                                // slope at the smallest eps
  bool saturated = false;  // a fitted count reached the number of points
};

// Least-squares slope of log count against n over the upper half of the n
// grid, per eps. Throws DomainError unless both grids are non-empty, the n
// grid has at least two values in its upper half and eps > 0.
EntropyReport entropy_estimate(const DynamicalMap& phi, const std::vector<double>& epsilon_grid,
                               const std::vector<std::size_t>& n_grid, unsigned threads = 1);

struct MmdimOptions {
  double beta = 0.9;                  // k = floor(beta p log(1/eps) / log 2)
  std::optional<std::size_t> fixed_k; // overrides the schedule
  std::size_t direct_pairs = 0;       // tuples pairs checked with the solver
  std::size_t direct_k = 2;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct MmdimRow {
  double epsilon;
  std::size_t n;
  std::size_t k;
  double base_scale;        // k (2^k - 1)^{1/p} eps
  std::uint64_t base_count; // greedy P(phi, base_scale, n)
  double log_lower;         // k log base_count, lower bound on log P(phi_#, eps, n)
  double ratio;             // log_lower / (n log(1/eps))
};

struct MmdimReport {
  std::string label;
  double p;
  double beta;
  std::vector<MmdimRow> rows;  // eps-major
  // Direct check: images of pairs from A^k, A an (n, base_scale)-separated
  // set, are (n, eps)-separated in W_p.
  double direct_epsilon = 0.0;
  std::size_t direct_n = 0;
  std::size_t direct_checked = 0;
  std::size_t direct_failures = 0;
};

// Lower bounds on P(phi_#, eps, n) inherited from base counts through the
// power embedding; no transport problem is solved except in the direct check,
// which uses direct_k, the largest n, and the largest eps whose base set has
// at least two points.
MmdimReport mmdim_experiment(const DynamicalMap& phi, double p,
                             const std::vector<double>& epsilon_grid,
                             const std::vector<std::size_t>& n_grid,
                             const MmdimOptions& options = {});

}  // namespace largeness
