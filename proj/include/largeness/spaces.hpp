#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "largeness/common.hpp"

namespace largeness {

// Coordinates of a point. Product spaces store one base-space index per
// factor, grids store lattice coordinates per axis, ultrametric spaces store
// bits (most significant first), and single-coordinate spaces store the index.
struct PointDescriptor {
  std::vector<std::uint32_t> coords;
  bool operator==(const PointDescriptor&) const = default;
};

enum class WeightKind { Geometric, Polynomial, Explicit };

// Positive non-increasing weights a_1 >= a_2 >= ... truncated to `depth` terms.
class WeightSequence {
 public:
  static WeightSequence geometric(double lambda, std::size_t depth);
  static WeightSequence polynomial(double alpha, std::size_t depth);
  static WeightSequence explicit_list(std::vector<double> values);

  WeightKind kind() const { return kind_; }
  double parameter() const { return parameter_; }
  std::size_t depth() const { return values_.size(); }
  // 0-based: operator[](0) is a_1.
  double operator[](std::size_t n) const { return values_[n]; }
  std::span<const double> values() const { return values_; }

  // (sum_{n > depth} a_n^2)^{1/2}; zero for explicit lists.
  double tail_l2() const;
  // sup_{n > depth} a_n; zero for explicit lists.
  double tail_sup() const;

 private:
  WeightSequence(WeightKind kind, double parameter, std::vector<double> values);
  WeightKind kind_;
  double parameter_;
  std::vector<double> values_;
};

struct SpaceLimits {
  // Largest point count materialized as a dense distance matrix.
  Index explicit_budget = 4096;
  // Largest point count of an index-addressed formula space (grid, circle, ultrametric).
  Index max_points = Index{1} << 26;
};

namespace detail {

// Distance model behind a FiniteMetricSpace. Points are addressed by a
// mixed-radix index over `radices()` or directly by descriptor.
class MetricModel {
 public:
  virtual ~MetricModel() = default;

  virtual std::string kind() const = 0;
  virtual std::vector<std::uint32_t> radices() const = 0;
  virtual double descriptor_distance(const PointDescriptor& a,
                                     const PointDescriptor& b) const = 0;
  virtual double diameter() const = 0;

  virtual double index_distance(Index i, Index j) const;
  virtual bool index_closer_than(Index i, Index j, double threshold) const;
  virtual bool descriptor_closer_than(const PointDescriptor& a, const PointDescriptor& b,
                                      double threshold) const;
  virtual bool is_dense() const { return false; }
  virtual std::optional<double> tail_diameter_bound() const { return std::nullopt; }

  double cardinality() const;
  bool indexable() const;
  Index size() const;
  PointDescriptor decode(Index i) const;
  Index encode(const PointDescriptor& d) const;
  PointDescriptor sample(Rng& rng) const;

 protected:
  void init_radices();
  std::vector<std::uint32_t> radix_cache_;
  double cardinality_ = 0.0;
  bool indexable_ = false;
};

}  // namespace detail

// Immutable finite metric space; cheap to copy (shared model).
class FiniteMetricSpace {
 public:
  FiniteMetricSpace(std::shared_ptr<const detail::MetricModel> model, std::string label);

  // Number of points; throws SizeLimit when the space is too large to index.
  Index size() const { return model_->size(); }
  double cardinality() const { return model_->cardinality(); }
  bool indexable() const { return model_->indexable(); }
  std::size_t arity() const { return model_->radices().size(); }

  double distance(Index i, Index j) const { return model_->index_distance(i, j); }
  double distance(const PointDescriptor& a, const PointDescriptor& b) const {
    return model_->descriptor_distance(a, b);
  }
  // d(i,j) < threshold, possibly without computing the full distance.
  bool closer_than(Index i, Index j, double threshold) const {
    return model_->index_closer_than(i, j, threshold);
  }
  bool closer_than(const PointDescriptor& a, const PointDescriptor& b,
                   double threshold) const {
    return model_->descriptor_closer_than(a, b, threshold);
  }

  PointDescriptor descriptor(Index i) const { return model_->decode(i); }
  Index index_of(const PointDescriptor& d) const { return model_->encode(d); }
  PointDescriptor random_descriptor(Rng& rng) const { return model_->sample(rng); }

  double diameter() const { return model_->diameter(); }
  std::optional<double> tail_diameter_bound() const {
    return model_->tail_diameter_bound();
  }
  bool is_dense() const { return model_->is_dense(); }
  std::string kind() const { return model_->kind(); }
  const std::string& label() const { return label_; }

  bool same_as(const FiniteMetricSpace& other) const { return model_ == other.model_; }
  const std::shared_ptr<const detail::MetricModel>& model() const { return model_; }

 private:
  std::shared_ptr<const detail::MetricModel> model_;
  std::string label_;
};

using Matrix = std::vector<std::vector<double>>;

enum class Representation { Explicit, Implicit };

inline constexpr double kInfiniteExponent = std::numeric_limits<double>::infinity();

FiniteMetricSpace build_space(const Matrix& matrix, std::string label = "matrix");
FiniteMetricSpace grid_cube(std::size_t dimension, std::uint32_t resolution,
                            const SpaceLimits& limits = {});
FiniteMetricSpace circle_space(std::uint32_t resolution, const SpaceLimits& limits = {});
FiniteMetricSpace power_space(const FiniteMetricSpace& base, std::size_t k, double exponent,
                              Representation representation = Representation::Implicit,
                              const SpaceLimits& limits = {});
FiniteMetricSpace scale_space(const FiniteMetricSpace& base, double factor);
FiniteMetricSpace hilbert_cube(const FiniteMetricSpace& base, const WeightSequence& weights);
FiniteMetricSpace banach_cube(const FiniteMetricSpace& base, const WeightSequence& weights);
FiniteMetricSpace ultrametric_space(std::size_t depth, const SpaceLimits& limits = {});

// Subspace formed by the listed descriptors of `parent` (duplicates allowed).
FiniteMetricSpace descriptor_subspace(const FiniteMetricSpace& parent,
                                      std::vector<PointDescriptor> points);

// Uniform sample (with replacement) of `count` descriptors, fixed by `seed`.
// Point i depends only on (seed, i) and the coordinate radices.
FiniteMetricSpace sampled_subspace(const FiniteMetricSpace& parent, std::size_t count,
                                   std::uint64_t seed);

// Dense copy of an indexable space; throws SizeLimit above the budget.
FiniteMetricSpace materialize(const FiniteMetricSpace& space, const SpaceLimits& limits = {});

// Real coordinates in [0,1]^d of a grid_cube point.
std::vector<double> grid_coordinates(const FiniteMetricSpace& grid, Index i);
// Nearest grid_cube point to a location in [0,1]^d.
Index nearest_grid_point(const FiniteMetricSpace& grid, std::span<const double> location);

struct ValidationReport {
  bool exhaustive = false;
  std::uint64_t triples_checked = 0;
};

inline constexpr Index kExhaustiveValidationLimit = 512;
inline constexpr std::uint64_t kValidationTriples = 10000;
inline constexpr std::uint64_t kValidationSeed = 0x6d657472696353ULL;

// Checks the metric axioms; throws AxiomViolation with a witness on failure.
// Exhaustive up to 512 points, 10 000 seeded random triples beyond.
ValidationReport validate_metric(const FiniteMetricSpace& space, double tolerance = kDistanceTolerance);

}  // namespace largeness
