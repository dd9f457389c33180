#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "largeness/spaces.hpp"

namespace largeness {

struct Atom {
  Index point;
  double mass;
  bool operator==(const Atom&) const = default;
};

// Finitely supported measure on the indexed points of a space. Atoms are kept
// sorted by point index with distinct points and strictly positive masses.
//
// A measure may also carry an exact lattice form: integer numerators over a
// common denominator. Masses are then the correctly rounded quotients, so two
// lattice measures built along different routes compare equal atom by atom.
class DiscreteMeasure {
 public:
  // Duplicate points are merged by summing. Throws DomainError on a
  // non-positive or non-finite mass, EmptySupport on an empty atom list.
  DiscreteMeasure(FiniteMetricSpace space, std::vector<Atom> atoms);

  static DiscreteMeasure from_lattice(FiniteMetricSpace space,
                                      std::vector<std::pair<Index, std::uint64_t>> numerators,
                                      std::uint64_t denominator);

  const FiniteMetricSpace& space() const { return space_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  double total_mass() const { return total_; }
  bool is_probability(double tolerance = 1e-12) const;
  double mass_at(Index point) const;

  bool has_lattice() const { return denominator_.has_value(); }
  std::uint64_t denominator() const { return denominator_.value_or(0); }
  // Numerators aligned with atoms(); empty without a lattice form.
  const std::vector<std::uint64_t>& numerators() const { return numerators_; }

  // Same space, same points, bitwise-equal masses.
  bool operator==(const DiscreteMeasure& other) const;

 private:
  DiscreteMeasure() = default;
  void finalize();

  FiniteMetricSpace space_{nullptr, ""};
  std::vector<Atom> atoms_;
  double total_ = 0.0;
  std::optional<std::uint64_t> denominator_;
  std::vector<std::uint64_t> numerators_;
};

DiscreteMeasure dirac(const FiniteMetricSpace& space, Index point, double mass = 1.0);

// Uniform probability on the listed points (duplicates add weight).
DiscreteMeasure uniform_measure(const FiniteMetricSpace& space, const std::vector<Index>& points);

}  // namespace largeness
