#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "largeness/measure.hpp"
#include "largeness/subsets.hpp"

namespace largeness {

using Tuple = std::vector<Index>;

struct DistortionViolation {
  Tuple x;
  Tuple y;
  double observed;  // W_p (or Hausdorff) between the images
  double bound;     // the bound it broke
  std::string kind; // "lower", "lower_sup", "upper", "homothety", "diagonal"
};

struct DistortionReport {
  std::size_t sample_count = 0;
  double empirical_m = 0.0;
  double empirical_M = 0.0;
  double theoretical_m = 0.0;
  double theoretical_M = 0.0;
  std::vector<DistortionViolation> violations;
  // Checks outside the displayed bounds (the d_inf lower bound of the power
  // embedding); kept apart so `violations` concerns m and M only.
  std::vector<DistortionViolation> secondary_violations;
};

// Pair selection for audits: every unordered pair of distinct tuples, or
// `count` seeded random pairs (pair i drawn from its own stream).
struct PairSampling {
  bool exhaustive = false;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// f(x) = alpha sum 2^{-i} delta_{x_i}, alpha = 1/(1 - 2^{-k}); exact lattice
// masses 2^{k-i} / (2^k - 1). Throws DomainError for an empty tuple or k > 62.
DiscreteMeasure dyadic_embedding(const FiniteMetricSpace& X, const Tuple& tuple);

struct PowerBounds {
  double lower;      // 1 / (k (2^k-1)^{1/p})       against d_p
  double upper;      // (2^{k-1} / (2^k-1))^{1/p}   against d_p
  double lower_sup;  // 1 / (k^{1-1/p} (2^k-1)^{1/p}) against d_inf
};
PowerBounds power_bounds(std::size_t k, double p);

double tuple_distance_p(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y, double p);
double tuple_distance_sup(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y);

// Checks both displayed bounds on every pair with the exact solver, and the
// d_inf lower bound into secondary_violations. Ratios are W_p / d_p.
DistortionReport audit_power_embedding(const FiniteMetricSpace& X, std::size_t k, double p,
                                       const PairSampling& sampling);

// Reflected binary Gray code on {0,1}^k. Word w (bit i = coordinate i) sits
// at position rank[w] and is sent to t = rank[w] / (2^k - 1), read as the
// measure t delta_0 + (1-t) delta_1 on the two-point space.
struct GrayCodeEmbedding {
  std::size_t k;
  std::vector<std::uint32_t> order;  // words in sequence
  std::vector<std::uint32_t> rank;   // inverse of order
  double value(std::uint32_t word) const;
  // Lattice measure on a two-point space (point 0 carries t).
  DiscreteMeasure measure(const FiniteMetricSpace& two_point, std::uint32_t word) const;
};

// Throws DomainError for k = 0 or k > 20.
GrayCodeEmbedding gray_code_embedding(std::size_t k);

// W_p / d_p over all pairs of words with the Hamming metric; W_p is the
// closed form |t-s|^{1/p}. empirical_m is formed from the exact rational
// minimum, so it equals 1/(2^k-1) bit for bit when that is the minimum.
DistortionReport audit_gray_code(const GrayCodeEmbedding& gray, double p = 1.0);

struct UltrametricEmbedding {
  std::size_t k;
  std::size_t depth;
  std::size_t word_bits;  // ceil(log2 k)
  FiniteMetricSpace target;
  double factor(double p) const;  // k^{-1/p} 2^{-word_bits}
  // g(x) = sum (1/k) delta_{w_i x_i}, lattice denominator k.
  DiscreteMeasure operator()(const Tuple& x) const;
};

UltrametricEmbedding ultrametric_embedding(std::size_t k, std::size_t depth);

// Relative check W_p(g x, g y) = factor d_p(x, y) within `tolerance`.
DistortionReport audit_ultrametric_embedding(const UltrametricEmbedding& g, double p,
                                             const PairSampling& sampling,
                                             double tolerance = 1e-9);

// Masses (1-beta) beta^{n-1} for n < N, the last atom takes beta^{N-1}.
DiscreteMeasure geometric_embedding(const FiniteMetricSpace& X, const Tuple& tuple, double beta);

struct GeometricConstants {
  double A;       // 1 - beta (3/2 + 1/(2 eps))
  double B;       // (beta/2)(1 - eps)
  double lambda;  // sqrt(B)
  double m;       // sqrt(A/B)
};
// Throws ParameterDomain when beta is outside (0,1/2), eps outside (0,1) or A <= 0.
GeometricConstants geometric_constants(double beta, double eps);

// d_lambda(x, y) = (sum_n lambda^{2n} d(x_n, y_n)^2)^{1/2}, n from 1.
double geometric_tuple_distance(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y,
                                double lambda);

// W_2(g x, g y) >= sqrt(A/B) d_lambda(x, y) on every pair; tuples of length N.
DistortionReport audit_geometric_embedding(const FiniteMetricSpace& X, double beta, double eps,
                                           std::size_t N, const PairSampling& sampling);

struct CubePlacement {
  std::size_t dimension = 1;
  std::vector<std::vector<double>> offsets;  // lower corners, input order
  std::vector<double> ratios;                // K c_n
  double K = 0.0;
  bool separated = false;  // strengthened separation requested
};

inline constexpr double kPackingMassBudget = 1e12;

// Axis-aligned cubes of side K c_n in [0,1]^d by recursive slab packing, K <= 1.
// In separation mode every pair of cubes is further apart than the largest
// cube diameter. Throws DomainError on non-positive c_n or d = 0,
// NotSummable when sum c_n^d is not finite or exceeds the budget.
CubePlacement cube_packing(const std::vector<double>& c, std::size_t d, bool separation = false);

struct PackingCheck {
  bool inside = false;    // every cube within [0,1]^d
  bool disjoint = false;  // closed cubes pairwise disjoint
  double min_gap = 0.0;   // smallest Euclidean distance between two cubes
  double max_diameter = 0.0;
  double volume = 0.0;    // sum (K c_n)^d
  bool separation_holds = false;  // min_gap > max_diameter
};

PackingCheck check_packing(const CubePlacement& placement);

// h(x) = sum b_n delta_{o_n + K c_n x_n} with b = a^{2d/(d+2)} normalized and
// c_n = a_n / sqrt(b_n), snapped to the nearest point of the target grid.
struct HomotheticEmbedding {
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;
  CubePlacement packing;
  FiniteMetricSpace base;    // grid_cube(d, .) holding the coordinates x_n
  FiniteMetricSpace target;  // grid_cube(d, resolution)
  std::size_t dimension;

  double K() const { return packing.K; }
  double step() const;  // target grid step
  // Target grid point of cube n holding base point x.
  Index image_point(std::size_t n, Index x) const;
  DiscreteMeasure operator()(const Tuple& x) const;
  // (sum a_n^2 |x_n - y_n|^2)^{1/2}
  double source_distance(const Tuple& x, const Tuple& y) const;
};

HomotheticEmbedding homothetic_hc_embedding(const std::vector<double>& a, std::size_t d,
                                            const FiniteMetricSpace& base,
                                            std::uint32_t resolution);

// Optimal plan is the diagonal one and W_2 = K d_a within
// relative_tolerance plus 2 step sqrt(d).
DistortionReport audit_homothetic_embedding(const HomotheticEmbedding& h,
                                            const PairSampling& sampling,
                                            double relative_tolerance = 0.02);

// x -> {h_n(x_n)} with ratios C n^{-d'}, C = K of the separated packing.
struct ClosedSubsetEmbedding {
  double d_prime;
  std::vector<double> weights;  // n^{-d'}
  CubePlacement packing;
  FiniteMetricSpace base;
  FiniteMetricSpace target;
  std::size_t dimension;

  double C() const { return packing.K; }
  double step() const;
  FiniteSubset operator()(const Tuple& x) const;
  // max_n n^{-d'} |x_n - y_n|
  double source_distance(const Tuple& x, const Tuple& y) const;
};

// Throws ParameterDomain unless d' > d.
ClosedSubsetEmbedding closed_subset_embedding(std::size_t depth, std::size_t d, double d_prime,
                                              const FiniteMetricSpace& base,
                                              std::uint32_t resolution);

// Hausdorff(H x, H y) = C d(x, y) within relative_tolerance plus 2 step sqrt(d).
DistortionReport audit_closed_subset_embedding(const ClosedSubsetEmbedding& h,
                                               const PairSampling& sampling,
                                               double relative_tolerance = 0.02);

}  // namespace largeness
