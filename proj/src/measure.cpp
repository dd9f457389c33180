#include "largeness/measure.hpp"

#include <algorithm>
#include <cmath>

#include "largeness/errors.hpp"

namespace largeness {

DiscreteMeasure::DiscreteMeasure(FiniteMetricSpace space, std::vector<Atom> atoms)
    : space_(std::move(space)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw EmptySupport("measure has no atoms");
  for (const auto& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw DomainError("atom masses must be finite and positive");
    }
  }
  finalize();
}

void DiscreteMeasure::finalize() {
  const bool lattice = denominator_.has_value();
  std::vector<std::size_t> order(atoms_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms_[a].point < atoms_[b].point; });
  std::vector<Atom> merged;
  std::vector<std::uint64_t> nums;
  for (std::size_t idx : order) {
    const Atom& a = atoms_[idx];
    if (a.point >= space_.cardinality()) throw DomainError("atom outside the space");
    if (!merged.empty() && merged.back().point == a.point) {
      merged.back().mass += a.mass;
      if (lattice) nums.back() += numerators_[idx];
    } else {
      merged.push_back(a);
      if (lattice) nums.push_back(numerators_[idx]);
    }
  }
  atoms_ = std::move(merged);
  if (lattice) {
    numerators_ = std::move(nums);
    const auto den = static_cast<double>(*denominator_);
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      atoms_[i].mass = static_cast<double>(numerators_[i]) / den;
      sum += numerators_[i];
    }
    total_ = static_cast<double>(sum) / den;
  } else {
    total_ = 0.0;
    for (const auto& a : atoms_) total_ += a.mass;
  }
}

DiscreteMeasure DiscreteMeasure::from_lattice(
    FiniteMetricSpace space, std::vector<std::pair<Index, std::uint64_t>> numerators,
    std::uint64_t denominator) {
  if (denominator == 0) throw DomainError("lattice denominator must be positive");
  DiscreteMeasure m;
  m.space_ = std::move(space);
  m.denominator_ = denominator;
  for (const auto& [point, num] : numerators) {
    if (num == 0) continue;
    m.atoms_.push_back({point, 0.0});
    m.numerators_.push_back(num);
  }
  if (m.atoms_.empty()) throw EmptySupport("measure has no atoms");
  m.finalize();
  return m;
}

bool DiscreteMeasure::is_probability(double tolerance) const {
  return std::abs(total_ - 1.0) <= tolerance;
}

double DiscreteMeasure::mass_at(Index point) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), point,
                             [](const Atom& a, Index p) { return a.point < p; });
  return it != atoms_.end() && it->point == point ? it->mass : 0.0;
}

bool DiscreteMeasure::operator==(const DiscreteMeasure& other) const {
  return space_.same_as(other.space_) && atoms_ == other.atoms_;
}

DiscreteMeasure dirac(const FiniteMetricSpace& space, Index point, double mass) {
  return DiscreteMeasure(space, {{point, mass}});
}

DiscreteMeasure uniform_measure(const FiniteMetricSpace& space, const std::vector<Index>& points) {
  std::vector<std::pair<Index, std::uint64_t>> nums;
  nums.reserve(points.size());
  for (Index p : points) nums.emplace_back(p, 1);
  return DiscreteMeasure::from_lattice(space, std::move(nums), points.size());
}

}  // namespace largeness
