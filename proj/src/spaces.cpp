#include "largeness/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>

#include "largeness/errors.hpp"

namespace largeness {

// ---------------------------------------------------------------------------
// WeightSequence

WeightSequence::WeightSequence(WeightKind kind, double parameter, std::vector<double> values)
    : kind_(kind), parameter_(parameter), values_(std::move(values)) {}

WeightSequence WeightSequence::geometric(double lambda, std::size_t depth) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw DomainError("geometric weights need lambda in (0,1)");
  }
  if (depth == 0) throw DomainError("weight depth must be >= 1");
  std::vector<double> v(depth);
  for (std::size_t n = 0; n < depth; ++n) v[n] = std::pow(lambda, static_cast<double>(n + 1));
  return WeightSequence(WeightKind::Geometric, lambda, std::move(v));
}

WeightSequence WeightSequence::polynomial(double alpha, std::size_t depth) {
  if (!(alpha > 0.5) || !std::isfinite(alpha)) {
    throw DomainError("polynomial weights need alpha > 1/2");
  }
  if (depth == 0) throw DomainError("weight depth must be >= 1");
  std::vector<double> v(depth);
  for (std::size_t n = 0; n < depth; ++n) v[n] = std::pow(static_cast<double>(n + 1), -alpha);
  return WeightSequence(WeightKind::Polynomial, alpha, std::move(v));
}

WeightSequence WeightSequence::explicit_list(std::vector<double> values) {
  if (values.empty()) throw DomainError("weight depth must be >= 1");
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (!(values[n] > 0.0) || !std::isfinite(values[n])) {
      throw DomainError("weights must be finite and strictly positive");
    }
    if (n > 0 && values[n] > values[n - 1]) {
      throw DomainError("weights must be non-increasing");
    }
  }
  return WeightSequence(WeightKind::Explicit, 0.0, std::move(values));
}

double WeightSequence::tail_l2() const {
  const auto depth = static_cast<double>(values_.size());
  switch (kind_) {
    case WeightKind::Geometric: {
      const double l2 = parameter_ * parameter_;
      return std::sqrt(std::pow(l2, depth + 1.0) / (1.0 - l2));
    }
    case WeightKind::Polynomial: {
      // Partial sum plus the integral bound sum_{n>K} n^{-2a} <= K^{1-2a}/(2a-1).
      const double two_alpha = 2.0 * parameter_;
      const std::size_t stop = values_.size() + 100000;
      double sum = 0.0;
      for (std::size_t n = stop; n > values_.size(); --n) {
        sum += std::pow(static_cast<double>(n), -two_alpha);
      }
      sum += std::pow(static_cast<double>(stop), 1.0 - two_alpha) / (two_alpha - 1.0);
      return std::sqrt(sum);
    }
    case WeightKind::Explicit:
      return 0.0;
  }
  return 0.0;
}

double WeightSequence::tail_sup() const {
  const auto next = static_cast<double>(values_.size() + 1);
  switch (kind_) {
    case WeightKind::Geometric: return std::pow(parameter_, next);
    case WeightKind::Polynomial: return std::pow(next, -parameter_);
    case WeightKind::Explicit: return 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// MetricModel base

namespace detail {

double MetricModel::index_distance(Index i, Index j) const {
  return descriptor_distance(decode(i), decode(j));
}

bool MetricModel::index_closer_than(Index i, Index j, double threshold) const {
  return index_distance(i, j) < threshold;
}

bool MetricModel::descriptor_closer_than(const PointDescriptor& a, const PointDescriptor& b,
                                         double threshold) const {
  return descriptor_distance(a, b) < threshold;
}

void MetricModel::init_radices() {
  radix_cache_ = radices();
  cardinality_ = 1.0;
  indexable_ = true;
  Index count = 1;
  constexpr Index kIndexLimit = Index{1} << 62;
  for (auto r : radix_cache_) {
    cardinality_ *= static_cast<double>(r);
    if (r == 0 || count > kIndexLimit / r) {
      indexable_ = false;
    } else {
      count *= r;
    }
  }
}

double MetricModel::cardinality() const { return cardinality_; }
bool MetricModel::indexable() const { return indexable_; }

Index MetricModel::size() const {
  if (!indexable_) {
    std::ostringstream os;
    os << kind() << " space with " << cardinality_ << " points cannot be indexed";
    throw SizeLimit(os.str());
  }
  Index count = 1;
  for (auto r : radix_cache_) count *= r;
  return count;
}

PointDescriptor MetricModel::decode(Index i) const {
  PointDescriptor d;
  d.coords.resize(radix_cache_.size());
  for (std::size_t k = radix_cache_.size(); k-- > 0;) {
    d.coords[k] = static_cast<std::uint32_t>(i % radix_cache_[k]);
    i /= radix_cache_[k];
  }
  return d;
}

Index MetricModel::encode(const PointDescriptor& d) const {
  if (!indexable_) throw SizeLimit(kind() + " space cannot be indexed");
  if (d.coords.size() != radix_cache_.size()) {
    throw DomainError("descriptor arity does not match the space");
  }
  Index i = 0;
  for (std::size_t k = 0; k < radix_cache_.size(); ++k) {
    if (d.coords[k] >= radix_cache_[k]) throw DomainError("descriptor coordinate out of range");
    i = i * radix_cache_[k] + d.coords[k];
  }
  return i;
}

PointDescriptor MetricModel::sample(Rng& rng) const {
  PointDescriptor d;
  d.coords.resize(radix_cache_.size());
  for (std::size_t k = 0; k < radix_cache_.size(); ++k) {
    d.coords[k] = static_cast<std::uint32_t>(uniform_index(rng, radix_cache_[k]));
  }
  return d;
}

namespace {

class DenseModel final : public MetricModel {
 public:
  DenseModel(Index n, std::vector<double> d) : n_(n), d_(std::move(d)) {
    diameter_ = 0.0;
    for (double v : d_) diameter_ = std::max(diameter_, v);
    init_radices();
  }
  std::string kind() const override { return "matrix"; }
  std::vector<std::uint32_t> radices() const override {
    return {static_cast<std::uint32_t>(n_)};
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    return d_[a.coords[0] * n_ + b.coords[0]];
  }
  double index_distance(Index i, Index j) const override { return d_[i * n_ + j]; }
  bool index_closer_than(Index i, Index j, double t) const override { return d_[i * n_ + j] < t; }
  double diameter() const override { return diameter_; }
  bool is_dense() const override { return true; }

 private:
  Index n_;
  std::vector<double> d_;
  double diameter_;
};

class GridModel final : public MetricModel {
 public:
  GridModel(std::size_t dim, std::uint32_t res) : dim_(dim), res_(res) { init_radices(); }
  std::string kind() const override { return "grid"; }
  std::vector<std::uint32_t> radices() const override {
    return std::vector<std::uint32_t>(dim_, res_);
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double diff = static_cast<double>(a.coords[k]) - static_cast<double>(b.coords[k]);
      s += diff * diff;
    }
    return std::sqrt(s) / static_cast<double>(res_ - 1);
  }
  double index_distance(Index i, Index j) const override {
    if (dim_ == 1) {
      const Index diff = i > j ? i - j : j - i;
      return static_cast<double>(diff) / static_cast<double>(res_ - 1);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      const double diff = static_cast<double>(i % res_) - static_cast<double>(j % res_);
      s += diff * diff;
      i /= res_;
      j /= res_;
    }
    return std::sqrt(s) / static_cast<double>(res_ - 1);
  }
  double diameter() const override { return std::sqrt(static_cast<double>(dim_)); }
  std::size_t dimension() const { return dim_; }
  std::uint32_t resolution() const { return res_; }

 private:
  std::size_t dim_;
  std::uint32_t res_;
};

class CircleModel final : public MetricModel {
 public:
  explicit CircleModel(std::uint32_t res) : res_(res) { init_radices(); }
  std::string kind() const override { return "circle"; }
  std::vector<std::uint32_t> radices() const override { return {res_}; }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    return index_distance(a.coords[0], b.coords[0]);
  }
  double index_distance(Index i, Index j) const override {
    const Index diff = i > j ? i - j : j - i;
    const Index arc = std::min<Index>(diff, res_ - diff);
    return static_cast<double>(arc) / static_cast<double>(res_);
  }
  bool index_closer_than(Index i, Index j, double t) const override {
    return index_distance(i, j) < t;
  }
  double diameter() const override {
    return static_cast<double>(res_ / 2) / static_cast<double>(res_);
  }

 private:
  std::uint32_t res_;
};

class UltrametricModel final : public MetricModel {
 public:
  explicit UltrametricModel(std::size_t depth) : depth_(depth) { init_radices(); }
  std::string kind() const override { return "ultrametric"; }
  std::vector<std::uint32_t> radices() const override {
    return std::vector<std::uint32_t>(depth_, 2);
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    for (std::size_t k = 0; k < depth_; ++k) {
      if (a.coords[k] != b.coords[k]) return std::ldexp(1.0, -static_cast<int>(k + 1));
    }
    return 0.0;
  }
  double index_distance(Index i, Index j) const override {
    const Index x = i ^ j;
    if (x == 0) return 0.0;
    // Bit position (from the least significant end) of the first difference.
    const int msb = 63 - std::countl_zero(x);
    const int first = static_cast<int>(depth_) - msb;  // 1-based from the most significant bit
    return std::ldexp(1.0, -first);
  }
  double diameter() const override { return 0.5; }

 private:
  std::size_t depth_;
};

enum class Combine { Lp, Sup, WeightedL2, WeightedSup };

class ProductModel final : public MetricModel {
 public:
  ProductModel(std::shared_ptr<const MetricModel> base, std::size_t k, Combine combine,
               double exponent, std::vector<double> weights, std::optional<double> tail,
               std::string kind)
      : base_(std::move(base)),
        k_(k),
        combine_(combine),
        exponent_(exponent),
        weights_(std::move(weights)),
        tail_(tail),
        kind_(std::move(kind)) {
    init_radices();
  }
  std::string kind() const override { return kind_; }
  std::vector<std::uint32_t> radices() const override {
    return std::vector<std::uint32_t>(k_, static_cast<std::uint32_t>(base_->size()));
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    double acc = 0.0;
    for (std::size_t n = 0; n < k_; ++n) {
      const double d = base_->index_distance(a.coords[n], b.coords[n]);
      switch (combine_) {
        case Combine::Lp: acc += std::pow(d, exponent_); break;
        case Combine::Sup: acc = std::max(acc, d); break;
        case Combine::WeightedL2: acc += weights_[n] * weights_[n] * d * d; break;
        case Combine::WeightedSup: acc = std::max(acc, weights_[n] * d); break;
      }
    }
    switch (combine_) {
      case Combine::Lp: return std::pow(acc, 1.0 / exponent_);
      case Combine::WeightedL2: return std::sqrt(acc);
      default: return acc;
    }
  }
  bool descriptor_closer_than(const PointDescriptor& a, const PointDescriptor& b,
                              double threshold) const override {
    if (threshold <= 0.0) return false;
    const double limit = combine_ == Combine::Lp ? std::pow(threshold, exponent_)
                         : combine_ == Combine::WeightedL2 ? threshold * threshold
                                                           : threshold;
    double acc = 0.0;
    for (std::size_t n = 0; n < k_; ++n) {
      const double d = base_->index_distance(a.coords[n], b.coords[n]);
      switch (combine_) {
        case Combine::Lp: acc += std::pow(d, exponent_); break;
        case Combine::Sup: acc = std::max(acc, d); break;
        case Combine::WeightedL2: acc += weights_[n] * weights_[n] * d * d; break;
        case Combine::WeightedSup: acc = std::max(acc, weights_[n] * d); break;
      }
      if (acc >= limit) return descriptor_distance(a, b) < threshold;
    }
    return descriptor_distance(a, b) < threshold;
  }
  double diameter() const override {
    const double diam = base_->diameter();
    switch (combine_) {
      case Combine::Lp: return diam * std::pow(static_cast<double>(k_), 1.0 / exponent_);
      case Combine::Sup: return diam;
      case Combine::WeightedL2: {
        double s = 0.0;
        for (double w : weights_) s += w * w;
        return diam * std::sqrt(s);
      }
      case Combine::WeightedSup: return diam * weights_.front();
    }
    return diam;
  }
  std::optional<double> tail_diameter_bound() const override { return tail_; }

 private:
  std::shared_ptr<const MetricModel> base_;
  std::size_t k_;
  Combine combine_;
  double exponent_;
  std::vector<double> weights_;
  std::optional<double> tail_;
  std::string kind_;
};

class ScaledModel final : public MetricModel {
 public:
  ScaledModel(std::shared_ptr<const MetricModel> base, double factor)
      : base_(std::move(base)), factor_(factor) {
    init_radices();
  }
  std::string kind() const override { return base_->kind(); }
  std::vector<std::uint32_t> radices() const override { return base_->radices(); }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    return factor_ * base_->descriptor_distance(a, b);
  }
  double index_distance(Index i, Index j) const override {
    return factor_ * base_->index_distance(i, j);
  }
  double diameter() const override { return factor_ * base_->diameter(); }
  std::optional<double> tail_diameter_bound() const override {
    auto t = base_->tail_diameter_bound();
    if (t) return factor_ * *t;
    return t;
  }

 private:
  std::shared_ptr<const MetricModel> base_;
  double factor_;
};

class SubspaceModel final : public MetricModel {
 public:
  SubspaceModel(std::shared_ptr<const MetricModel> parent, std::vector<PointDescriptor> points)
      : parent_(std::move(parent)), points_(std::move(points)) {
    init_radices();
  }
  std::string kind() const override { return "subspace(" + parent_->kind() + ")"; }
  std::vector<std::uint32_t> radices() const override {
    return {static_cast<std::uint32_t>(points_.size())};
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    return index_distance(a.coords[0], b.coords[0]);
  }
  double index_distance(Index i, Index j) const override {
    return parent_->descriptor_distance(points_[i], points_[j]);
  }
  bool index_closer_than(Index i, Index j, double t) const override {
    return parent_->descriptor_closer_than(points_[i], points_[j], t);
  }
  double diameter() const override {
    std::call_once(diameter_once_, [this] {
      double m = 0.0;
      for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
          m = std::max(m, parent_->descriptor_distance(points_[i], points_[j]));
        }
      }
      diameter_ = m;
    });
    return diameter_;
  }

 private:
  std::shared_ptr<const MetricModel> parent_;
  std::vector<PointDescriptor> points_;
  mutable std::once_flag diameter_once_;
  mutable double diameter_ = 0.0;
};

void check_limit(double count, Index limit, const std::string& what) {
  if (count > static_cast<double>(limit)) {
    std::ostringstream os;
    os << what << " has " << count << " points, above the point limit " << limit;
    throw SizeLimit(os.str());
  }
}

std::shared_ptr<const MetricModel> base_for_product(const FiniteMetricSpace& base) {
  if (!base.indexable() || base.cardinality() > 4294967295.0) {
    throw SizeLimit("product factor too large to address");
  }
  return base.model();
}

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// FiniteMetricSpace and constructors

FiniteMetricSpace::FiniteMetricSpace(std::shared_ptr<const detail::MetricModel> model,
                                     std::string label)
    : model_(std::move(model)), label_(std::move(label)) {}

FiniteMetricSpace build_space(const Matrix& matrix, std::string label) {
  const std::size_t n = matrix.size();
  if (n == 0) throw DomainError("distance matrix is empty");
  std::vector<double> flat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw DomainError("distance matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) throw AxiomViolation(Axiom::Finite, {i, j, i}, 0.0);
      flat[i * n + j] = v;
    }
  }
  FiniteMetricSpace space(std::make_shared<detail::DenseModel>(n, std::move(flat)),
                          std::move(label));
  validate_metric(space);
  return space;
}

FiniteMetricSpace grid_cube(std::size_t dimension, std::uint32_t resolution,
                            const SpaceLimits& limits) {
  if (dimension < 1) throw DomainError("grid dimension must be >= 1");
  if (resolution < 2) throw DomainError("grid resolution must be >= 2");
  detail::check_limit(std::pow(static_cast<double>(resolution), static_cast<double>(dimension)),
                      limits.max_points, "grid_cube");
  std::ostringstream label;
  label << "grid(d=" << dimension << ",res=" << resolution << ")";
  return FiniteMetricSpace(std::make_shared<detail::GridModel>(dimension, resolution),
                           label.str());
}

FiniteMetricSpace circle_space(std::uint32_t resolution, const SpaceLimits& limits) {
  if (resolution < 3) throw DomainError("circle resolution must be >= 3");
  detail::check_limit(resolution, limits.max_points, "circle_space");
  return FiniteMetricSpace(std::make_shared<detail::CircleModel>(resolution),
                           "circle(res=" + std::to_string(resolution) + ")");
}

FiniteMetricSpace power_space(const FiniteMetricSpace& base, std::size_t k, double exponent,
                              Representation representation, const SpaceLimits& limits) {
  if (k < 1) throw DomainError("power k must be >= 1");
  if (!(exponent >= 1.0)) throw DomainError("power exponent must be in [1, inf]");
  const bool sup = std::isinf(exponent);
  auto model = std::make_shared<detail::ProductModel>(
      detail::base_for_product(base), k, sup ? detail::Combine::Sup : detail::Combine::Lp,
      exponent, std::vector<double>{}, std::nullopt, "power");
  std::ostringstream label;
  label << base.label() << "^" << k << "(p=" << (sup ? std::string("inf") : std::to_string(exponent))
        << ")";
  FiniteMetricSpace space(std::move(model), label.str());
  if (representation == Representation::Explicit) return materialize(space, limits);
  return space;
}

FiniteMetricSpace scale_space(const FiniteMetricSpace& base, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("scale factor must be > 0");
  std::ostringstream label;
  label << base.label() << "*" << factor;
  return FiniteMetricSpace(std::make_shared<detail::ScaledModel>(base.model(), factor),
                           label.str());
}

FiniteMetricSpace hilbert_cube(const FiniteMetricSpace& base, const WeightSequence& weights) {
  const std::vector<double> w(weights.values().begin(), weights.values().end());
  const double tail = base.diameter() * weights.tail_l2();
  auto model = std::make_shared<detail::ProductModel>(detail::base_for_product(base),
                                                      weights.depth(),
                                                      detail::Combine::WeightedL2, 2.0, w,
                                                      tail, "hilbert_cube");
  return FiniteMetricSpace(std::move(model), "HC(" + base.label() + ",depth=" +
                                                 std::to_string(weights.depth()) + ")");
}

FiniteMetricSpace banach_cube(const FiniteMetricSpace& base, const WeightSequence& weights) {
  const std::vector<double> w(weights.values().begin(), weights.values().end());
  const double tail = base.diameter() * weights.tail_sup();
  auto model = std::make_shared<detail::ProductModel>(detail::base_for_product(base),
                                                      weights.depth(),
                                                      detail::Combine::WeightedSup, 1.0, w,
                                                      tail, "banach_cube");
  return FiniteMetricSpace(std::move(model), "BC(" + base.label() + ",depth=" +
                                                 std::to_string(weights.depth()) + ")");
}

FiniteMetricSpace ultrametric_space(std::size_t depth, const SpaceLimits& limits) {
  if (depth < 1) throw DomainError("ultrametric depth must be >= 1");
  if (depth > 62) throw SizeLimit("ultrametric depth above 62");
  detail::check_limit(std::ldexp(1.0, static_cast<int>(depth)), limits.max_points,
                      "ultrametric_space");
  return FiniteMetricSpace(std::make_shared<detail::UltrametricModel>(depth),
                           "ultrametric(depth=" + std::to_string(depth) + ")");
}

FiniteMetricSpace descriptor_subspace(const FiniteMetricSpace& parent,
                                      std::vector<PointDescriptor> points) {
  if (points.empty()) throw DomainError("subspace needs at least one point");
  const std::size_t n = points.size();
  return FiniteMetricSpace(std::make_shared<detail::SubspaceModel>(parent.model(),
                                                                   std::move(points)),
                           parent.label() + "[" + std::to_string(n) + " pts]");
}

FiniteMetricSpace sampled_subspace(const FiniteMetricSpace& parent, std::size_t count,
                                   std::uint64_t seed) {
  // One stream per point: samples of two products over the same base agree
  // on their common leading coordinates.
  std::vector<PointDescriptor> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = derived_rng(seed, i);
    points.push_back(parent.random_descriptor(rng));
  }
  return descriptor_subspace(parent, std::move(points));
}

FiniteMetricSpace materialize(const FiniteMetricSpace& space, const SpaceLimits& limits) {
  detail::check_limit(space.cardinality(), limits.explicit_budget, "explicit " + space.kind());
  const Index n = space.size();
  std::vector<double> flat(n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) flat[i * n + j] = space.distance(i, j);
  }
  return FiniteMetricSpace(std::make_shared<detail::DenseModel>(n, std::move(flat)),
                           space.label());
}

std::vector<double> grid_coordinates(const FiniteMetricSpace& grid, Index i) {
  const auto* model = dynamic_cast<const detail::GridModel*>(grid.model().get());
  if (model == nullptr) throw SpaceMismatch("not a grid_cube space");
  const PointDescriptor d = grid.descriptor(i);
  std::vector<double> x(d.coords.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = static_cast<double>(d.coords[k]) / static_cast<double>(model->resolution() - 1);
  }
  return x;
}

Index nearest_grid_point(const FiniteMetricSpace& grid, std::span<const double> location) {
  const auto* model = dynamic_cast<const detail::GridModel*>(grid.model().get());
  if (model == nullptr) throw SpaceMismatch("not a grid_cube space");
  if (location.size() != model->dimension()) throw DomainError("location arity mismatch");
  PointDescriptor d;
  d.coords.resize(location.size());
  const double steps = static_cast<double>(model->resolution() - 1);
  for (std::size_t k = 0; k < location.size(); ++k) {
    const double c = std::clamp(location[k], 0.0, 1.0) * steps;
    d.coords[k] = static_cast<std::uint32_t>(std::lround(c));
  }
  return grid.index_of(d);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct TripleChecker {
  double tol;

  template <class Dist>
  void pair(Dist&& d, Index i, Index j) const {
    const double dij = d(i, j);
    if (!std::isfinite(dij)) throw AxiomViolation(Axiom::Finite, {i, j, i}, 0.0);
    if (dij < -tol) throw AxiomViolation(Axiom::NonNegative, {i, j, i}, -dij);
    const double dji = d(j, i);
    if (std::abs(dij - dji) > tol) {
      throw AxiomViolation(Axiom::Symmetry, {i, j, i}, std::abs(dij - dji));
    }
  }

  template <class Dist>
  void triangle(Dist&& d, Index i, Index j, Index k) const {
    const double gap = d(i, j) - d(i, k) - d(k, j);
    if (gap > tol) throw AxiomViolation(Axiom::Triangle, {i, j, k}, gap);
  }
};

}  // namespace

ValidationReport validate_metric(const FiniteMetricSpace& space, double tolerance) {
  TripleChecker check{tolerance};
  ValidationReport report;
  if (space.indexable() && space.size() <= kExhaustiveValidationLimit) {
    const Index n = space.size();
    std::vector<double> d(n * n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) d[i * n + j] = space.distance(i, j);
    }
    auto dist = [&](Index i, Index j) { return d[i * n + j]; };
    for (Index i = 0; i < n; ++i) {
      if (std::abs(dist(i, i)) > tolerance) {
        throw AxiomViolation(Axiom::Diagonal, {i, i, i}, std::abs(dist(i, i)));
      }
    }
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) check.pair(dist, i, j);
    }
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        for (Index k = 0; k < n; ++k) check.triangle(dist, i, j, k);
      }
    }
    report.exhaustive = true;
    report.triples_checked = n * n * n;
    return report;
  }

  Rng rng(kValidationSeed);
  std::vector<PointDescriptor> pts(3);
  for (std::uint64_t t = 0; t < kValidationTriples; ++t) {
    for (auto& p : pts) p = space.random_descriptor(rng);
    auto dist = [&](Index a, Index b) { return space.distance(pts[a], pts[b]); };
    const double self = dist(0, 0);
    if (std::abs(self) > tolerance) throw AxiomViolation(Axiom::Diagonal, {0, 0, 0}, self);
    check.pair(dist, 0, 1);
    check.pair(dist, 1, 2);
    check.pair(dist, 0, 2);
    check.triangle(dist, 0, 1, 2);
    check.triangle(dist, 0, 2, 1);
    check.triangle(dist, 1, 2, 0);
  }
  report.exhaustive = false;
  report.triples_checked = kValidationTriples;
  return report;
}

}  // namespace largeness
