#include "largeness/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "largeness/errors.hpp"

namespace largeness {

namespace {

double ground_cost(const FiniteMetricSpace& space, Index x, Index y, double p) {
  if (x == y) return 0.0;
  const double d = space.distance(x, y);
  return p == 1.0 ? d : p == 2.0 ? d * d : std::pow(d, p);
}

void check_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw DomainError("transport exponent must lie in [1, inf)");
  }
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

// Edge indices on the tree path from `from` to `to`; adjacency holds
// (neighbour, edge) pairs of an acyclic graph.
std::vector<std::size_t> tree_path(
    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adjacency,
    std::size_t from, std::size_t to) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> via(adjacency.size(), kNone);
  std::vector<std::size_t> prev(adjacency.size(), kNone);
  std::vector<char> seen(adjacency.size(), 0);
  std::queue<std::size_t> queue;
  queue.push(from);
  seen[from] = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop();
    if (u == to) break;
    for (auto [w, e] : adjacency[u]) {
      if (seen[w]) continue;
      seen[w] = 1;
      via[w] = e;
      prev[w] = u;
      queue.push(w);
    }
  }
  std::vector<std::size_t> path;
  if (!seen[to]) return path;
  for (std::size_t v = to; v != from; v = prev[v]) path.push_back(via[v]);
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Transportation simplex

class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<double> supply, std::vector<double> demand,
                        std::vector<double> cost)
      : m_(supply.size()), n_(demand.size()), a_(std::move(supply)), b_(std::move(demand)),
        c_(std::move(cost)) {
    double cmax = 0.0;
    for (double v : c_) cmax = std::max(cmax, v);
    tolerance_ = 1e-11 * std::max(1.0, cmax);
  }

  // Flow per cell (row-major), zero outside the final basis.
  std::vector<double> solve() {
    initial_basis();
    const std::size_t cap = 100 * m_ * n_ + 10000;
    std::size_t degenerate_streak = 0;
    bool bland = false;
    for (std::size_t iter = 0; iter < cap; ++iter) {
      compute_potentials();
      const std::size_t entering = choose_entering(bland);
      if (entering == kNone) return extract();
      const double theta = pivot(entering);
      if (theta > 0.0) {
        degenerate_streak = 0;
      } else if (++degenerate_streak > 2 * (m_ + n_) + 50) {
        bland = true;
      }
    }
    throw SolverError("transportation simplex exceeded its iteration cap");
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  void initial_basis() {
    flow_.assign(m_ * n_, 0.0);
    in_basis_.assign(m_ * n_, 0);
    basis_.clear();
    std::size_t i = 0, j = 0;
    double ra = a_[0], rb = b_[0];
    for (;;) {
      const double x = std::max(0.0, std::min(ra, rb));
      add_basic(i * n_ + j, x);
      ra -= x;
      rb -= x;
      if (i == m_ - 1 && j == n_ - 1) break;
      if (j == n_ - 1 || (i < m_ - 1 && ra <= rb)) {
        ++i;
        ra = a_[i];
      } else {
        ++j;
        rb = b_[j];
      }
    }
  }

  void add_basic(std::size_t cell, double x) {
    flow_[cell] = x;
    in_basis_[cell] = 1;
    basis_.push_back(cell);
  }

  void build_adjacency() {
    adjacency_.assign(m_ + n_, {});
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      const std::size_t cell = basis_[k];
      const std::size_t r = cell / n_, c = m_ + cell % n_;
      adjacency_[r].emplace_back(c, k);
      adjacency_[c].emplace_back(r, k);
    }
  }

  void compute_potentials() {
    build_adjacency();
    potential_.assign(m_ + n_, 0.0);
    std::vector<char> seen(m_ + n_, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto [w, k] : adjacency_[u]) {
        if (seen[w]) continue;
        seen[w] = 1;
        // u_i + v_j = c_ij
        potential_[w] = c_[basis_[k]] - potential_[u];
        stack.push_back(w);
      }
    }
  }

  std::size_t choose_entering(bool bland) const {
    std::size_t best = kNone;
    double best_value = -tolerance_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        const std::size_t cell = i * n_ + j;
        if (in_basis_[cell]) continue;
        const double reduced = c_[cell] - potential_[i] - potential_[m_ + j];
        if (reduced < best_value) {
          best = cell;
          if (bland) return best;
          best_value = reduced;
        }
      }
    }
    return best;
  }

  double pivot(std::size_t entering) {
    const std::size_t row = entering / n_, col = m_ + entering % n_;
    // Path from the column node back to the row node closes the cycle.
    const auto path = tree_path(adjacency_, col, row);
    if (path.empty()) throw SolverError("basis tree is disconnected");
    std::size_t leave = kNone;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < path.size(); s += 2) {
      const std::size_t cell = basis_[path[s]];
      if (leave == kNone || flow_[cell] < theta ||
          (flow_[cell] == theta && cell < basis_[leave])) {
        theta = flow_[cell];
        leave = path[s];
      }
    }
    theta = std::max(0.0, theta);
    for (std::size_t s = 0; s < path.size(); ++s) {
      const std::size_t cell = basis_[path[s]];
      flow_[cell] += (s % 2 == 0) ? -theta : theta;
      if (flow_[cell] < 0.0) flow_[cell] = 0.0;
    }
    const std::size_t leaving_cell = basis_[leave];
    flow_[leaving_cell] = 0.0;
    in_basis_[leaving_cell] = 0;
    basis_[leave] = entering;
    in_basis_[entering] = 1;
    flow_[entering] = theta;
    return theta;
  }

  std::vector<double> extract() const {
    std::vector<double> out(m_ * n_, 0.0);
    for (std::size_t cell : basis_) out[cell] = flow_[cell];
    return out;
  }

 public:
  // Valid after solve(): optimal basis cells and dual potentials (rows, then columns).
  const std::vector<std::size_t>& basis() const { return basis_; }
  const std::vector<double>& potentials() const { return potential_; }
  double tolerance() const { return tolerance_; }

 private:

  std::size_t m_, n_;
  std::vector<double> a_, b_, c_;
  double tolerance_;
  std::vector<double> flow_;
  std::vector<char> in_basis_;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency_;
  std::vector<double> potential_;
};

// ---------------------------------------------------------------------------
// Cycle cancellation

struct Entry {
  Index s;
  Index t;
  double mass;
  double cost;
};

double cost_tolerance(const std::vector<Entry>& entries) {
  double scale = 0.0;
  for (const auto& e : entries) scale = std::max(scale, e.cost);
  return 1e-12 * std::max(1.0, scale);
}

void drop_empty(std::vector<Entry>& entries) {
  entries.erase(std::remove_if(entries.begin(), entries.end(),
                               [](const Entry& e) { return !(e.mass > 0.0); }),
                entries.end());
}

// Applies +t along `plus`, -t along `minus`, zeroing the limiting edge exactly.
void shift(std::vector<Entry>& entries, const std::vector<std::size_t>& plus,
           const std::vector<std::size_t>& minus, double t, std::size_t limiting) {
  for (std::size_t e : plus) entries[e].mass += t;
  for (std::size_t e : minus) entries[e].mass -= t;
  entries[limiting].mass = 0.0;
}

// One cancellation on the coupling graph (source copies vs target copies).
bool cancel_coupling_cycle(std::vector<Entry>& entries, std::size_t& cancellations) {
  std::map<Index, std::size_t> src, dst;
  for (const auto& e : entries) {
    src.emplace(e.s, src.size());
  }
  for (const auto& e : entries) {
    dst.emplace(e.t, src.size() + dst.size());
  }
  const std::size_t nodes = src.size() + dst.size();
  UnionFind uf(nodes);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(nodes);
  const double tol = cost_tolerance(entries);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::size_t u = src[entries[k].s], v = dst[entries[k].t];
    if (uf.unite(u, v)) {
      adjacency[u].emplace_back(v, k);
      adjacency[v].emplace_back(u, k);
      continue;
    }
    // Cycle: edge k (u -> v) then the tree path v -> u. Signs alternate.
    const auto path = tree_path(adjacency, v, u);
    std::vector<std::size_t> plus{k}, minus;
    for (std::size_t s = 0; s < path.size(); ++s) (s % 2 == 0 ? minus : plus).push_back(path[s]);
    double delta = 0.0;
    for (std::size_t e : plus) delta += entries[e].cost;
    for (std::size_t e : minus) delta -= entries[e].cost;
    if (delta > tol) std::swap(plus, minus);
    std::size_t limiting = minus.front();
    for (std::size_t e : minus) {
      if (entries[e].mass < entries[limiting].mass) limiting = e;
    }
    shift(entries, plus, minus, entries[limiting].mass, limiting);
    drop_empty(entries);
    ++cancellations;
    return true;
  }
  return false;
}

// One cancellation on the point graph (loops excluded, undirected). Returns
// true after a cancellation; `blocked` counts cycles that cannot be cancelled.
bool cancel_point_cycle(std::vector<Entry>& entries, std::size_t& cancellations,
                        std::size_t& blocked) {
  blocked = 0;
  std::map<Index, std::size_t> vertex;
  std::map<Index, std::size_t> loop;  // point -> entry index of its loop
  for (std::size_t k = 0; k < entries.size(); ++k) {
    vertex.emplace(entries[k].s, vertex.size());
    vertex.emplace(entries[k].t, vertex.size());
    if (entries[k].s == entries[k].t) loop[entries[k].s] = k;
  }
  const double tol = cost_tolerance(entries);
  UnionFind uf(vertex.size());
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(vertex.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].s == entries[k].t) continue;
    const std::size_t a = vertex[entries[k].s], b = vertex[entries[k].t];
    if (uf.unite(a, b)) {
      adjacency[a].emplace_back(b, k);
      adjacency[b].emplace_back(a, k);
      continue;
    }
    // Traverse edge k from its source a to b, then the tree path b -> a.
    std::vector<std::size_t> cycle{k};
    for (std::size_t e : tree_path(adjacency, b, a)) cycle.push_back(e);
    std::vector<char> forward(cycle.size());
    std::vector<Index> at(cycle.size());  // vertex the traversal leaves by cycle[i]
    Index here = entries[k].s;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const Entry& e = entries[cycle[i]];
      forward[i] = e.s == here;
      at[i] = here;
      here = forward[i] ? e.t : e.s;
    }
    double unit = 0.0;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      unit += (forward[i] ? 1.0 : -1.0) * entries[cycle[i]].cost;
    }
    struct Option {
      double sigma;
      double delta;
    };
    std::vector<Option> options{{1.0, unit}, {-1.0, -unit}};
    std::stable_sort(options.begin(), options.end(),
                     [](const Option& x, const Option& y) { return x.delta < y.delta; });
    bool applied = false;
    for (const auto& opt : options) {
      if (opt.delta > tol) continue;
      std::vector<std::size_t> plus, minus;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        ((forward[i] ? 1.0 : -1.0) * opt.sigma > 0 ? plus : minus).push_back(cycle[i]);
      }
      std::size_t limiting = minus.front();
      for (std::size_t e : minus) {
        if (entries[e].mass < entries[limiting].mass) limiting = e;
      }
      const double t = entries[limiting].mass;
      // Stationary mass change at each vertex: -sigma*t at forward pass-through,
      // +sigma*t at backward pass-through.
      std::vector<std::pair<Index, double>> loop_change;
      bool feasible = true;
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        const std::size_t prev = (i + cycle.size() - 1) % cycle.size();
        double change = 0.0;
        if (forward[prev] && forward[i]) change = -opt.sigma * t;
        if (!forward[prev] && !forward[i]) change = opt.sigma * t;
        if (change == 0.0) continue;
        const Index v = at[i];
        const auto it = loop.find(v);
        const double current = it == loop.end() ? 0.0 : entries[it->second].mass;
        if (current + change < 0.0) {
          feasible = false;
          break;
        }
        loop_change.emplace_back(v, change);
      }
      if (!feasible) continue;
      shift(entries, plus, minus, t, limiting);
      for (auto [v, change] : loop_change) {
        const auto it = loop.find(v);
        if (it == loop.end()) {
          entries.push_back({v, v, change, 0.0});
        } else {
          double& m = entries[it->second].mass;
          m = (m + change <= 0.0) ? 0.0 : m + change;
        }
      }
      applied = true;
      break;
    }
    if (applied) {
      drop_empty(entries);
      ++cancellations;
      return true;
    }
    ++blocked;
  }
  return false;
}


// Flows on a spanning-tree basis of the m x n transportation problem, by
// repeatedly settling a cell at a leaf row or column.
std::vector<double> basis_flows(std::size_t m, std::size_t n, const std::vector<double>& supply,
                                const std::vector<double>& demand,
                                const std::vector<std::size_t>& basis) {
  std::vector<double> ra = supply, rb = demand;
  std::vector<double> flow(basis.size(), 0.0);
  std::vector<std::size_t> degree(m + n, 0);
  std::vector<std::vector<std::size_t>> incident(m + n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const std::size_t r = basis[k] / n, c = m + basis[k] % n;
    ++degree[r];
    ++degree[c];
    incident[r].push_back(k);
    incident[c].push_back(k);
  }
  std::vector<char> done(basis.size(), 0);
  std::vector<std::size_t> leaves;
  for (std::size_t v = 0; v < m + n; ++v) {
    if (degree[v] == 1) leaves.push_back(v);
  }
  while (!leaves.empty()) {
    const std::size_t v = leaves.back();
    leaves.pop_back();
    if (degree[v] != 1) continue;
    std::size_t k = 0;
    for (std::size_t e : incident[v]) {
      if (!done[e]) k = e;
    }
    const std::size_t r = basis[k] / n, c = basis[k] % n;
    flow[k] = v < m ? ra[r] : rb[c];
    ra[r] -= flow[k];
    rb[c] -= flow[k];
    done[k] = 1;
    for (std::size_t w : {r, m + c}) {
      if (--degree[w] == 1) leaves.push_back(w);
    }
  }
  return flow;
}

struct FaceSearch {
  bool found = false;
  bool complete = false;
  std::vector<std::pair<std::size_t, double>> cells;  // positive cells of the vertex
};

// Breadth-first walk over bases of the optimal face (cells with zero reduced
// cost), looking for a vertex whose point graph is acyclic.
FaceSearch search_optimal_face(const std::vector<Index>& rows, const std::vector<Index>& cols,
                               const std::vector<double>& supply,
                               const std::vector<double>& demand, const std::vector<double>& cost,
                               const std::vector<std::size_t>& start,
                               const std::vector<double>& potentials, double tolerance,
                               std::size_t cap) {
  const std::size_t m = rows.size(), n = cols.size();
  std::vector<char> zero(m * n, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      zero[i * n + j] =
          std::abs(cost[i * n + j] - potentials[i] - potentials[m + j]) <= 100.0 * tolerance;
    }
  }
  std::map<Index, std::size_t> id;
  for (Index r : rows) id.emplace(r, id.size());
  for (Index c : cols) id.emplace(c, id.size());
  const double floor = 1e-14;

  FaceSearch result;
  std::set<std::vector<std::size_t>> seen;
  std::queue<std::vector<std::size_t>> queue;
  auto sorted = start;
  std::sort(sorted.begin(), sorted.end());
  seen.insert(sorted);
  queue.push(sorted);
  while (!queue.empty()) {
    const auto basis = queue.front();
    queue.pop();
    const auto flow = basis_flows(m, n, supply, demand, basis);
    UnionFind uf(id.size());
    bool acyclic = true;
    for (std::size_t k = 0; k < basis.size() && acyclic; ++k) {
      const Index s = rows[basis[k] / n], t = cols[basis[k] % n];
      if (flow[k] > floor && s != t) acyclic = uf.unite(id[s], id[t]);
    }
    if (acyclic) {
      result.found = true;
      for (std::size_t k = 0; k < basis.size(); ++k) {
        if (flow[k] > floor) result.cells.emplace_back(basis[k], flow[k]);
      }
      return result;
    }
    // Neighbouring bases by pivots on zero-reduced-cost cells.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(m + n);
    std::vector<char> in_basis(m * n, 0);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      in_basis[basis[k]] = 1;
      adjacency[basis[k] / n].emplace_back(m + basis[k] % n, k);
      adjacency[m + basis[k] % n].emplace_back(basis[k] / n, k);
    }
    for (std::size_t cell = 0; cell < m * n; ++cell) {
      if (!zero[cell] || in_basis[cell]) continue;
      const auto path = tree_path(adjacency, m + cell % n, cell / n);
      double theta = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < path.size(); s += 2) theta = std::min(theta, flow[path[s]]);
      for (std::size_t s = 0; s < path.size(); s += 2) {
        if (flow[path[s]] > theta + floor) continue;
        auto next = basis;
        next[path[s]] = cell;
        std::sort(next.begin(), next.end());
        if (seen.insert(next).second) {
          if (seen.size() > cap) return result;
          queue.push(std::move(next));
        }
      }
    }
  }
  result.complete = true;
  return result;
}

std::vector<Entry> merged_entries(const TransportPlan& plan) {
  std::map<std::pair<Index, Index>, double> cells;
  for (const auto& e : plan.edges()) cells[{e.source, e.target}] += e.mass;
  std::vector<Entry> entries;
  entries.reserve(cells.size());
  const auto& space = plan.source().space();
  for (const auto& [key, mass] : cells) {
    if (!(mass > 0.0)) continue;
    entries.push_back({key.first, key.second, mass, ground_cost(space, key.first, key.second, plan.p())});
  }
  return entries;
}

std::vector<PlanEdge> to_edges(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    return std::tie(x.s, x.t) < std::tie(y.s, y.t);
  });
  std::vector<PlanEdge> edges;
  edges.reserve(entries.size());
  for (const auto& e : entries) edges.push_back({e.s, e.t, e.mass});
  return edges;
}

}  // namespace

// ---------------------------------------------------------------------------
// TransportPlan

TransportPlan::TransportPlan(DiscreteMeasure source, DiscreteMeasure target, double p,
                             std::vector<PlanEdge> edges)
    : source_(std::move(source)), target_(std::move(target)), p_(p), edges_(std::move(edges)) {
  check_exponent(p_);
  for (const auto& e : edges_) {
    if (!(e.mass > 0.0) || !std::isfinite(e.mass)) {
      throw DomainError("plan edge masses must be finite and positive");
    }
  }
}

double TransportPlan::cost() const {
  double total = 0.0;
  for (const auto& e : edges_) total += e.mass * ground_cost(source_.space(), e.source, e.target, p_);
  return total;
}

double TransportPlan::distance() const { return std::pow(cost(), 1.0 / p_); }

double TransportPlan::marginal_error() const {
  std::map<Index, double> out, in;
  for (const auto& a : source_.atoms()) out[a.point] += a.mass;
  for (const auto& a : target_.atoms()) in[a.point] += a.mass;
  for (const auto& e : edges_) {
    out[e.source] -= e.mass;
    in[e.target] -= e.mass;
  }
  double worst = 0.0;
  for (const auto& [_, v] : out) worst = std::max(worst, std::abs(v));
  for (const auto& [_, v] : in) worst = std::max(worst, std::abs(v));
  return worst;
}

// ---------------------------------------------------------------------------
// Solver and oracle

TransportResult wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p) {
  check_exponent(p);
  if (!mu.space().same_as(nu.space())) throw SpaceMismatch("measures live on different spaces");
  if (std::abs(mu.total_mass() - nu.total_mass()) > 1e-12) {
    std::ostringstream os;
    os << "total masses differ: " << mu.total_mass() << " vs " << nu.total_mass();
    throw MassMismatch(os.str());
  }
  std::vector<Atom> src, dst;
  for (const auto& a : mu.atoms()) if (a.mass >= kMassFloor) src.push_back(a);
  for (const auto& a : nu.atoms()) if (a.mass >= kMassFloor) dst.push_back(a);
  if (src.empty() || dst.empty()) throw EmptySupport("measure has no atom above the mass floor");

  std::vector<double> supply, demand, cost(src.size() * dst.size());
  for (const auto& a : src) supply.push_back(a.mass);
  for (const auto& a : dst) demand.push_back(a.mass);
  const auto& space = mu.space();
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j) {
      cost[i * dst.size() + j] = ground_cost(space, src[i].point, dst[j].point, p);
    }
  }
  const auto flow = TransportationSimplex(supply, demand, cost).solve();
  const double floor = 1e-14 * std::max(1.0, mu.total_mass());
  std::vector<PlanEdge> edges;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j) {
      const double x = flow[i * dst.size() + j];
      if (x > floor) edges.push_back({src[i].point, dst[j].point, x});
    }
  }
  TransportPlan plan = canonicalize_to_forest(TransportPlan(mu, nu, p, std::move(edges)));
  const double distance = plan.distance();
  return {distance, std::move(plan)};
}

double assignment_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p, double r) {
  check_exponent(p);
  if (!(r > 0.0)) throw DomainError("mass unit must be positive");
  if (!mu.space().same_as(nu.space())) throw SpaceMismatch("measures live on different spaces");
  auto atomize = [r](const DiscreteMeasure& m) {
    std::vector<Index> units;
    for (const auto& a : m.atoms()) {
      const double count = std::round(a.mass / r);
      if (std::abs(a.mass - count * r) > 1e-12) {
        std::ostringstream os;
        os << "mass " << a.mass << " is not an integer multiple of " << r;
        throw NotMultiple(os.str());
      }
      if (count > 4096.0) throw SizeLimit("too many unit atoms for the assignment oracle");
      for (int c = 0; c < static_cast<int>(count); ++c) units.push_back(a.point);
    }
    return units;
  };
  const auto xs = atomize(mu), ys = atomize(nu);
  if (xs.size() != ys.size()) throw MassMismatch("atomizations have different sizes");
  const std::size_t n = xs.size();
  if (n == 0) throw EmptySupport("no unit atoms");

  // Hungarian method with potentials, 1-based rows/columns.
  std::vector<double> cost((n + 1) * (n + 1), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cost[(i + 1) * (n + 1) + j + 1] = ground_cost(mu.space(), xs[i], ys[j], p);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 * (n + 1) + j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) total += cost[match[j] * (n + 1) + j];
  return std::pow(r * total, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Graphs

std::size_t LabelledGraph::vertex_position(Index v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) throw DomainError("vertex not in graph");
  return static_cast<std::size_t>(it - vertices.begin());
}

bool LabelledGraph::admissible(double tolerance) const {
  const double s0 = std::accumulate(m0.begin(), m0.end(), 0.0);
  const double s1 = std::accumulate(m1.begin(), m1.end(), 0.0);
  if (std::abs(s0 - s1) > tolerance) return false;
  std::vector<double> in(vertices.size(), 0.0), out(vertices.size(), 0.0);
  for (const auto& e : edges) {
    if (!(e.mass > 0.0) || e.from == e.to) return false;
    out[vertex_position(e.from)] += e.mass;
    in[vertex_position(e.to)] += e.mass;
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    if (std::abs(m0[v] + in[v] - out[v] - m1[v]) > tolerance) return false;
    if (in[v] > m1[v] + tolerance || out[v] > m0[v] + tolerance) return false;
  }
  return true;
}

bool LabelledGraph::is_forest() const {
  UnionFind uf(vertices.size());
  for (const auto& e : edges) {
    if (!uf.unite(vertex_position(e.from), vertex_position(e.to))) return false;
  }
  return true;
}

bool LabelledGraph::has_oriented_cycle() const {
  std::vector<std::vector<std::size_t>> out(vertices.size());
  for (const auto& e : edges) out[vertex_position(e.from)].push_back(vertex_position(e.to));
  std::vector<int> state(vertices.size(), 0);
  for (std::size_t root = 0; root < vertices.size(); ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next < out[u].size()) {
        const std::size_t w = out[u][next++];
        if (state[w] == 1) return true;
        if (state[w] == 0) {
          state[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        state[u] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

LabelledGraph plan_graph(const TransportPlan& plan) {
  LabelledGraph g;
  for (const auto& a : plan.source().atoms()) g.vertices.push_back(a.point);
  for (const auto& a : plan.target().atoms()) g.vertices.push_back(a.point);
  for (const auto& e : plan.edges()) {
    g.vertices.push_back(e.source);
    g.vertices.push_back(e.target);
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  g.m0.assign(g.vertices.size(), 0.0);
  g.m1.assign(g.vertices.size(), 0.0);
  for (const auto& a : plan.source().atoms()) g.m0[g.vertex_position(a.point)] += a.mass;
  for (const auto& a : plan.target().atoms()) g.m1[g.vertex_position(a.point)] += a.mass;
  for (const auto& e : plan.edges()) {
    if (e.source != e.target) g.edges.push_back({e.source, e.target, e.mass});
  }
  return g;
}

namespace {

// Local cancellation left a cycle. When the plan is optimal, walk the optimal
// face for an acyclic vertex; a complete walk without one certifies that no
// optimal plan has an acyclic graph.
void search_face_for_forest(ForestResult& result) {
  const TransportPlan& plan = result.plan;
  std::vector<Index> rows, cols;
  std::vector<double> supply, demand;
  for (const auto& a : plan.source().atoms()) {
    if (a.mass >= kMassFloor) {
      rows.push_back(a.point);
      supply.push_back(a.mass);
    }
  }
  for (const auto& a : plan.target().atoms()) {
    if (a.mass >= kMassFloor) {
      cols.push_back(a.point);
      demand.push_back(a.mass);
    }
  }
  const auto& space = plan.source().space();
  std::vector<double> cost(rows.size() * cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost[i * cols.size() + j] = ground_cost(space, rows[i], cols[j], plan.p());
    }
  }
  TransportationSimplex simplex(supply, demand, cost);
  const auto flow = simplex.solve();
  double optimum = 0.0;
  for (std::size_t c = 0; c < flow.size(); ++c) optimum += flow[c] * cost[c];
  const double current = plan.cost();
  if (current > optimum + 1e-9 * std::max(1.0, optimum)) return;
  result.face_searched = true;
  const auto found = search_optimal_face(rows, cols, supply, demand, cost, simplex.basis(),
                                         simplex.potentials(), simplex.tolerance(),
                                         kFaceSearchCap);
  result.face_search_complete = found.complete;
  if (!found.found) return;
  std::vector<PlanEdge> edges;
  for (auto [cell, mass] : found.cells) {
    edges.push_back({rows[cell / cols.size()], cols[cell % cols.size()], mass});
  }
  std::sort(edges.begin(), edges.end(), [](const PlanEdge& x, const PlanEdge& y) {
    return std::tie(x.source, x.target) < std::tie(y.source, y.target);
  });
  result.plan = TransportPlan(plan.source(), plan.target(), plan.p(), std::move(edges));
  result.forest = plan_graph(result.plan).is_forest();
  result.blocked_cycles = 0;
}

}  // namespace

ForestResult canonicalize_with_report(const TransportPlan& plan) {
  auto entries = merged_entries(plan);
  std::size_t cancellations = 0, blocked = 0;
  for (;;) {
    while (cancel_coupling_cycle(entries, cancellations)) {
    }
    if (!cancel_point_cycle(entries, cancellations, blocked)) break;
  }
  TransportPlan out(plan.source(), plan.target(), plan.p(), to_edges(std::move(entries)));
  ForestResult result{std::move(out)};
  result.forest = plan_graph(result.plan).is_forest();
  result.coupling_forest = true;
  result.cancellations = cancellations;
  result.blocked_cycles = blocked;
  if (!result.forest) search_face_for_forest(result);
  return result;
}

TransportPlan canonicalize_to_forest(const TransportPlan& plan) {
  return canonicalize_with_report(plan).plan;
}

// ---------------------------------------------------------------------------
// Cyclical monotonicity

MonotonicityVerdict check_cyclical_monotonicity(const TransportPlan& plan,
                                                std::size_t max_cycle_len, double tolerance) {
  if (max_cycle_len < 2) throw DomainError("cycle length must be at least 2");
  const auto& edges = plan.edges();
  const std::size_t n = edges.size();
  // Tuples with the smallest position first, one per rotation class.
  double count = 0.0;
  for (std::size_t len = 2; len <= std::min(max_cycle_len, n); ++len) {
    double perms = 1.0;
    for (std::size_t i = 0; i < len; ++i) perms *= static_cast<double>(n - i);
    count += perms / static_cast<double>(len);
  }
  if (count > 2e6) throw SizeLimit("too many support tuples for cyclical monotonicity");

  const auto& space = plan.source().space();
  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c[i * n + j] = ground_cost(space, edges[i].source, edges[j].target, plan.p());
    }
  }
  MonotonicityVerdict verdict;
  std::vector<std::size_t> tuple;
  std::vector<char> used(n, 0);
  double worst = tolerance;
  auto evaluate = [&] {
    ++verdict.cycles_checked;
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      lhs += c[tuple[i] * n + tuple[i]];
      rhs += c[tuple[i] * n + tuple[(i + 1) % tuple.size()]];
    }
    const double gap = lhs - rhs;
    if (gap > worst) {
      worst = gap;
      verdict.pass = false;
      verdict.gap = gap;
      verdict.witness.clear();
      for (std::size_t k : tuple) verdict.witness.emplace_back(edges[k].source, edges[k].target);
    }
  };
  std::function<void()> extend = [&] {
    if (tuple.size() >= 2) evaluate();
    if (tuple.size() == max_cycle_len) return;
    for (std::size_t k = tuple.front() + 1; k < n; ++k) {
      if (used[k]) continue;
      used[k] = 1;
      tuple.push_back(k);
      extend();
      tuple.pop_back();
      used[k] = 0;
    }
  };
  for (std::size_t first = 0; first < n; ++first) {
    tuple = {first};
    used[first] = 1;
    extend();
    used[first] = 0;
  }
  return verdict;
}

DiscreteMeasure pushforward(const PointMap& phi, const DiscreteMeasure& mu) {
  const double limit = mu.space().cardinality();
  auto image = [&](Index x) {
    const Index y = phi(x);
    if (static_cast<double>(y) >= limit) throw DomainError("point map leaves the space");
    return y;
  };
  if (mu.has_lattice()) {
    std::vector<std::pair<Index, std::uint64_t>> nums;
    for (std::size_t i = 0; i < mu.atoms().size(); ++i) {
      nums.emplace_back(image(mu.atoms()[i].point), mu.numerators()[i]);
    }
    return DiscreteMeasure::from_lattice(mu.space(), std::move(nums), mu.denominator());
  }
  std::vector<Atom> atoms;
  for (const auto& a : mu.atoms()) atoms.push_back({image(a.point), a.mass});
  return DiscreteMeasure(mu.space(), std::move(atoms));
}

}  // namespace largeness
