#pragma once

#include <functional>
#include <vector>

#include "largeness/measure.hpp"

namespace largeness {

struct PlanEdge {
  Index source;
  Index target;
  double mass;
};

// Sparse coupling between two measures on one space. Edges may be loops
// (source == target) for mass that stays in place.
class TransportPlan {
 public:
  TransportPlan(DiscreteMeasure source, DiscreteMeasure target, double p,
                std::vector<PlanEdge> edges);

  const DiscreteMeasure& source() const { return source_; }
  const DiscreteMeasure& target() const { return target_; }
  double p() const { return p_; }
  const std::vector<PlanEdge>& edges() const { return edges_; }

  // Sum of mass * d^p.
  double cost() const;
  double distance() const;
  // Largest atom-wise deviation of the plan marginals from source/target.
  double marginal_error() const;

 private:
  DiscreteMeasure source_;
  DiscreteMeasure target_;
  double p_;
  std::vector<PlanEdge> edges_;
};

struct TransportResult {
  double distance;
  TransportPlan plan;
};

// Exact W_p by the transportation simplex on the support bipartite graph,
// followed by a forest pass. Throws MassMismatch, EmptySupport, SpaceMismatch,
// DomainError (p outside [1, inf)), SolverError.
TransportResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p);

// W_p by optimal assignment between the r-atomizations of mu and nu.
// Throws NotMultiple when a mass is not an integer multiple of r.
double assignment_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double r);

struct GraphEdge {
  Index from;
  Index to;
  double mass;
};

// Graph form of a plan: vertices are the union of both supports, edges the
// off-diagonal support of the plan, m0/m1 the marginals per vertex.
struct LabelledGraph {
  std::vector<Index> vertices;  // sorted
  std::vector<GraphEdge> edges;
  std::vector<double> m0;       // aligned with vertices
  std::vector<double> m1;

  std::size_t vertex_position(Index v) const;
  // Mass invariance and the in/out capacity conditions, within tolerance.
  bool admissible(double tolerance = 1e-9) const;
  // No cycle when edges are read as undirected.
  bool is_forest() const;
  // Some directed cycle exists.
  bool has_oriented_cycle() const;
};

LabelledGraph plan_graph(const TransportPlan& plan);

struct ForestResult {
  TransportPlan plan;
  // Graph of the output plan is acyclic (undirected).
  bool forest = false;
  // Coupling (source atoms x target atoms, loops included) is acyclic.
  bool coupling_forest = false;
  std::size_t cancellations = 0;
  // Cycles left because every cancellation direction either raises the cost
  // or runs out of stationary mass at a pass-through vertex.
  std::size_t blocked_cycles = 0;
  // Set when cancellation left a cycle and the input was optimal: the optimal
  // face was walked for an acyclic vertex. A complete walk that found none
  // proves no optimal plan has an acyclic graph.
  bool face_searched = false;
  bool face_search_complete = false;
};

inline constexpr std::size_t kFaceSearchCap = 20000;

// Cycle cancellation: moves mass around cycles in the direction that does not
// raise the cost until a removed edge breaks each cycle.
ForestResult canonicalize_with_report(const TransportPlan& plan);
TransportPlan canonicalize_to_forest(const TransportPlan& plan);

struct MonotonicityVerdict {
  bool pass = true;
  // Violating support pairs (x_i, y_i) in cycle order.
  std::vector<std::pair<Index, Index>> witness;
  // sum c(x_i, y_i) - sum c(x_i, y_{i+1}) for the witness.
  double gap = 0.0;
  std::uint64_t cycles_checked = 0;
};

// Checks c(x_0,y_0)+...+c(x_k,y_k) <= c(x_0,y_1)+...+c(x_k,y_0) over ordered
// tuples of distinct support pairs of length 2..max_cycle_len. Reports the
// largest violation. Throws SizeLimit above 2e6 tuples.
MonotonicityVerdict check_cyclical_monotonicity(const TransportPlan& plan,
                                                std::size_t max_cycle_len,
                                                double tolerance = kDistanceTolerance);

using PointMap = std::function<Index(Index)>;

// Image measure phi_# mu on the same space; keeps the lattice form.
DiscreteMeasure pushforward(const PointMap& phi, const DiscreteMeasure& mu);

}  // namespace largeness
