#include "largeness/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "largeness/covering.hpp"
#include "largeness/embeddings.hpp"
#include "largeness/errors.hpp"

namespace largeness {

PointMap DynamicalMap::as_point_map() const {
  auto table = std::make_shared<const std::vector<Index>>(image);
  return [table](Index x) { return table->at(x); };
}

DynamicalMap circle_multiplication(const FiniteMetricSpace& circle, std::uint32_t factor) {
  if (circle.kind() != "circle") throw DomainError("multiplication maps act on circle spaces");
  if (factor == 0) throw DomainError("multiplication factor must be positive");
  const Index n = circle.size();
  std::vector<Index> image(n);
  for (Index x = 0; x < n; ++x) image[x] = (x * factor) % n;
  return {"times" + std::to_string(factor), circle, std::move(image), true};
}

DynamicalMap identity_map(const FiniteMetricSpace& X) {
  std::vector<Index> image(X.size());
  for (Index x = 0; x < image.size(); ++x) image[x] = x;
  return {"identity", X, std::move(image), true};
}

DynamicalMap interval_map(const FiniteMetricSpace& grid, const std::function<double(double)>& f,
                          std::string label) {
  if (grid.kind() != "grid" || grid.arity() != 1) throw DomainError("interval maps act on 1-D grids");
  const Index n = grid.size();
  std::vector<Index> image(n);
  bool exact = true;
  for (Index x = 0; x < n; ++x) {
    const double t = grid_coordinates(grid, x)[0];
    const double v = f(t);
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("interval map leaves [0,1]");
    const double loc[1] = {v};
    image[x] = nearest_grid_point(grid, loc);
    if (std::abs(grid_coordinates(grid, image[x])[0] - v) > 1e-12) exact = false;
  }
  return {std::move(label), grid, std::move(image), exact};
}

DynamicalMap table_map(const FiniteMetricSpace& X, std::vector<Index> image, std::string label) {
  if (image.size() != X.size()) throw DomainError("map table size differs from the space");
  for (Index v : image) {
    if (v >= X.size()) throw DomainError("map table entry outside the space");
  }
  return {std::move(label), X, std::move(image), true};
}

namespace {

class BowenModel final : public detail::MetricModel {
 public:
  BowenModel(FiniteMetricSpace base, std::vector<std::vector<Index>> orbits)
      : base_(std::move(base)), orbits_(std::move(orbits)) {
    init_radices();
  }
  std::string kind() const override { return "bowen"; }
  std::vector<std::uint32_t> radices() const override {
    return {static_cast<std::uint32_t>(base_.size())};
  }
  double descriptor_distance(const PointDescriptor& a, const PointDescriptor& b) const override {
    return index_distance(a.coords[0], b.coords[0]);
  }
  double index_distance(Index i, Index j) const override {
    double d = 0.0;
    for (const auto& level : orbits_) d = std::max(d, base_.distance(level[i], level[j]));
    return d;
  }
  bool index_closer_than(Index i, Index j, double t) const override {
    for (const auto& level : orbits_) {
      if (!base_.closer_than(level[i], level[j], t)) return false;
    }
    return true;
  }
  double diameter() const override { return base_.diameter(); }

 private:
  FiniteMetricSpace base_;
  std::vector<std::vector<Index>> orbits_;  // orbits_[i][x] = phi^i(x)
};

}  // namespace

FiniteMetricSpace bowen_metric(const DynamicalMap& phi, std::size_t n) {
  if (phi.image.size() != phi.space.size()) throw DomainError("map table size differs from the space");
  std::vector<std::vector<Index>> orbits(n + 1);
  orbits[0].resize(phi.image.size());
  for (Index x = 0; x < orbits[0].size(); ++x) orbits[0][x] = x;
  for (std::size_t i = 1; i <= n; ++i) {
    orbits[i].resize(phi.image.size());
    for (Index x = 0; x < orbits[i].size(); ++x) orbits[i][x] = phi.image[orbits[i - 1][x]];
  }
  auto model = std::make_shared<BowenModel>(phi.space, std::move(orbits));
  return FiniteMetricSpace(std::move(model),
                           "bowen(" + phi.label + ",n=" + std::to_string(n) + ")");
}

std::vector<Index> separated_set(const DynamicalMap& phi, std::size_t n, double epsilon) {
  const FiniteMetricSpace bowen = bowen_metric(phi, n);
  return maximal_packing(PackingDomain{bowen, false}, epsilon);
}

std::uint64_t separated_count(const DynamicalMap& phi, std::size_t n, double epsilon) {
  return separated_set(phi, n, epsilon).size();
}

EntropyReport entropy_estimate(const DynamicalMap& phi, const std::vector<double>& epsilon_grid,
                               const std::vector<std::size_t>& n_grid, unsigned threads) {
  if (epsilon_grid.empty() || n_grid.empty()) throw DomainError("entropy grids must be non-empty");
  for (double e : epsilon_grid) {
    if (!(e > 0.0)) throw DomainError("epsilon must be positive");
  }
  std::vector<std::size_t> ns = n_grid;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const std::size_t first_fit = ns.size() / 2;
  if (ns.size() - first_fit < 2) throw DomainError("n grid needs two values in its upper half");

  const std::size_t E = epsilon_grid.size();
  std::vector<DynamicsRow> rows(ns.size() * E);
  parallel_for(rows.size(), threads, [&](std::size_t r) {
    const std::size_t n = ns[r / E];
    const double eps = epsilon_grid[r % E];
    const std::uint64_t count = separated_count(phi, n, eps);
    rows[r] = {n, eps, count, n == 0 ? 0.0 : std::log(static_cast<double>(count)) / n};
  });

  EntropyReport report;
  report.label = phi.label;
  const Index points = phi.space.size();
  std::size_t smallest = 0;
  for (std::size_t e = 0; e < E; ++e) {
    if (epsilon_grid[e] < epsilon_grid[smallest]) smallest = e;
    std::vector<double> xs, ys;
    for (std::size_t i = first_fit; i < ns.size(); ++i) {
      const auto& row = rows[i * E + e];
      xs.push_back(static_cast<double>(row.n));
      ys.push_back(std::log(static_cast<double>(row.count)));
      if (row.count >= points) report.saturated = true;
    }
    report.slopes.emplace_back(epsilon_grid[e], fit_line(xs, ys).slope);
  }
  report.estimate = report.slopes[smallest].second;
  report.rows = std::move(rows);
  return report;
}

namespace {

std::size_t schedule_k(double beta, double p, double eps) {
  const double k = std::floor(beta * p * std::log(1.0 / eps) / std::log(2.0));
  return static_cast<std::size_t>(std::max(1.0, k));
}

double base_scale(std::size_t k, double p, double eps) {
  return static_cast<double>(k) * std::pow(std::ldexp(1.0, static_cast<int>(k)) - 1.0, 1.0 / p) * eps;
}

}  // namespace

MmdimReport mmdim_experiment(const DynamicalMap& phi, double p,
                             const std::vector<double>& epsilon_grid,
                             const std::vector<std::size_t>& n_grid,
                             const MmdimOptions& options) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent must lie in [1, inf)");
  if (!(options.beta > 0.0 && options.beta < 1.0)) throw ParameterDomain("beta must lie in (0,1)");
  if (epsilon_grid.empty() || n_grid.empty()) throw DomainError("grids must be non-empty");
  for (double e : epsilon_grid) {
    if (!(e > 0.0 && e < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  }
  for (std::size_t n : n_grid) {
    if (n == 0) throw DomainError("n grid must be positive");
  }
  if (options.fixed_k && (*options.fixed_k == 0 || *options.fixed_k > 30)) {
    throw DomainError("k must lie in [1, 30]");
  }

  MmdimReport report;
  report.label = phi.label;
  report.p = p;
  report.beta = options.beta;
  const std::size_t N = n_grid.size();
  report.rows.resize(epsilon_grid.size() * N);
  parallel_for(report.rows.size(), options.threads, [&](std::size_t r) {
    const double eps = epsilon_grid[r / N];
    const std::size_t n = n_grid[r % N];
    const std::size_t k = options.fixed_k ? *options.fixed_k
                                          : std::min<std::size_t>(30, schedule_k(options.beta, p, eps));
    const double scale = base_scale(k, p, eps);
    const std::uint64_t count = separated_count(phi, n, scale);
    const double log_lower = static_cast<double>(k) * std::log(static_cast<double>(count));
    report.rows[r] = {eps, n, k, scale, count, log_lower,
                      log_lower / (static_cast<double>(n) * std::log(1.0 / eps))};
  });

  if (options.direct_pairs == 0) return report;
  const std::size_t k = options.direct_k;
  if (k == 0 || k > 3) throw DomainError("direct check supports 1 <= k <= 3");
  const std::size_t n = *std::max_element(n_grid.begin(), n_grid.end());
  std::vector<double> eps_sorted = epsilon_grid;
  std::sort(eps_sorted.rbegin(), eps_sorted.rend());
  std::vector<Index> A;
  for (double eps : eps_sorted) {
    A = separated_set(phi, n, base_scale(k, p, eps));
    if (A.size() >= 2) {
      report.direct_epsilon = eps;
      break;
    }
  }
  if (A.size() < 2) return report;
  report.direct_n = n;
  const double eps = report.direct_epsilon;
  const std::size_t pairs = options.direct_pairs;
  std::vector<std::uint8_t> failed(pairs, 0);
  parallel_for(pairs, options.threads, [&](std::size_t i) {
    Rng rng = derived_rng(options.seed, i);
    Tuple x(k), y(k);
    do {
      for (std::size_t j = 0; j < k; ++j) {
        x[j] = A[uniform_index(rng, A.size())];
        y[j] = A[uniform_index(rng, A.size())];
      }
    } while (x == y);
    double best = 0.0;
    for (std::size_t step = 0; step <= n && best < eps; ++step) {
      best = std::max(best, wasserstein(dyadic_embedding(phi.space, x),
                                        dyadic_embedding(phi.space, y), p).distance);
      for (std::size_t j = 0; j < k; ++j) {
        x[j] = phi.image[x[j]];
        y[j] = phi.image[y[j]];
      }
    }
    failed[i] = best < eps - 1e-12;
  });
  report.direct_checked = pairs;
  report.direct_failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  return report;
}

}  // namespace largeness
