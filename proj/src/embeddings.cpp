#include "largeness/embeddings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "largeness/errors.hpp"
#include "largeness/transport.hpp"

namespace largeness {

namespace {

constexpr double kAuditTolerance = 1e-9;
constexpr std::uint64_t kExhaustivePairLimit = 20'000'000;

struct PairOutcome {
  std::optional<double> ratio;
  std::vector<DistortionViolation> violations;
  std::vector<DistortionViolation> secondary;
};

using PairCheck = std::function<PairOutcome(const Tuple&, const Tuple&)>;

Tuple decode_tuple(std::uint64_t code, std::uint64_t base, std::size_t k) {
  Tuple t(k);
  for (std::size_t i = 0; i < k; ++i) {
    t[i] = code % base;
    code /= base;
  }
  return t;
}

Tuple random_tuple(Rng& rng, std::uint64_t base, std::size_t k) {
  Tuple t(k);
  for (auto& v : t) v = uniform_index(rng, base);
  return t;
}

// Runs `check` on the selected pairs and folds the outcomes in pair order.
DistortionReport run_pairs(std::uint64_t base, std::size_t k, const PairSampling& sampling,
                           const PairCheck& check) {
  if (base == 0 || k == 0) throw DomainError("audit needs a non-empty tuple space");
  std::vector<std::pair<Tuple, Tuple>> pairs;
  if (sampling.exhaustive) {
    const double tuples = std::pow(static_cast<double>(base), static_cast<double>(k));
    if (tuples * (tuples - 1) / 2 > static_cast<double>(kExhaustivePairLimit)) {
      throw SizeLimit("too many pairs for an exhaustive audit");
    }
    const auto n = static_cast<std::uint64_t>(tuples);
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = a + 1; b < n; ++b) {
        pairs.emplace_back(decode_tuple(a, base, k), decode_tuple(b, base, k));
      }
    }
  } else {
    const bool single = base == 1;
    for (std::size_t i = 0; i < sampling.count; ++i) {
      Rng rng = derived_rng(sampling.seed, i);
      Tuple x = random_tuple(rng, base, k);
      Tuple y = random_tuple(rng, base, k);
      while (!single && y == x) y = random_tuple(rng, base, k);
      pairs.emplace_back(std::move(x), std::move(y));
    }
  }
  std::vector<PairOutcome> outcomes(pairs.size());
  parallel_for(pairs.size(), sampling.threads,
               [&](std::size_t i) { outcomes[i] = check(pairs[i].first, pairs[i].second); });

  DistortionReport report;
  report.sample_count = pairs.size();
  bool any = false;
  for (auto& o : outcomes) {
    if (o.ratio) {
      report.empirical_m = any ? std::min(report.empirical_m, *o.ratio) : *o.ratio;
      report.empirical_M = any ? std::max(report.empirical_M, *o.ratio) : *o.ratio;
      any = true;
    }
    for (auto& v : o.violations) report.violations.push_back(std::move(v));
    for (auto& v : o.secondary) report.secondary_violations.push_back(std::move(v));
  }
  return report;
}

std::uint64_t mersenne(std::size_t k) { return (std::uint64_t{1} << k) - 1; }

}  // namespace

DiscreteMeasure dyadic_embedding(const FiniteMetricSpace& X, const Tuple& tuple) {
  const std::size_t k = tuple.size();
  if (k == 0) throw DomainError("dyadic embedding needs k >= 1");
  if (k > 62) throw DomainError("dyadic embedding supports k <= 62");
  std::vector<std::pair<Index, std::uint64_t>> nums;
  for (std::size_t i = 0; i < k; ++i) nums.emplace_back(tuple[i], std::uint64_t{1} << (k - 1 - i));
  return DiscreteMeasure::from_lattice(X, std::move(nums), mersenne(k));
}

PowerBounds power_bounds(std::size_t k, double p) {
  const double kk = static_cast<double>(k);
  const double m = static_cast<double>(mersenne(k));
  return {1.0 / (kk * std::pow(m, 1.0 / p)),
          std::pow(std::ldexp(1.0, static_cast<int>(k) - 1) / m, 1.0 / p),
          1.0 / (std::pow(kk, 1.0 - 1.0 / p) * std::pow(m, 1.0 / p))};
}

double tuple_distance_p(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(X.distance(x[i], y[i]), p);
  return std::pow(s, 1.0 / p);
}

double tuple_distance_sup(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s = std::max(s, X.distance(x[i], y[i]));
  return s;
}

DistortionReport audit_power_embedding(const FiniteMetricSpace& X, std::size_t k, double p,
                                       const PairSampling& sampling) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent must lie in [1, inf)");
  const PowerBounds bounds = power_bounds(k, p);
  auto check = [&](const Tuple& x, const Tuple& y) {
    PairOutcome out;
    const double dp = tuple_distance_p(X, x, y, p);
    const double dinf = tuple_distance_sup(X, x, y);
    const double w = wasserstein(dyadic_embedding(X, x), dyadic_embedding(X, y), p).distance;
    if (dp > 0.0) out.ratio = w / dp;
    if (w < bounds.lower * dp - kAuditTolerance) {
      out.violations.push_back({x, y, w, bounds.lower * dp, "lower"});
    }
    if (w > bounds.upper * dp + kAuditTolerance) {
      out.violations.push_back({x, y, w, bounds.upper * dp, "upper"});
    }
    if (w < bounds.lower_sup * dinf - kAuditTolerance) {
      out.secondary.push_back({x, y, w, bounds.lower_sup * dinf, "lower_sup"});
    }
    return out;
  };
  DistortionReport report = run_pairs(X.size(), k, sampling, check);
  report.theoretical_m = bounds.lower;
  report.theoretical_M = bounds.upper;
  return report;
}

double GrayCodeEmbedding::value(std::uint32_t word) const {
  return static_cast<double>(rank.at(word)) / static_cast<double>(mersenne(k));
}

DiscreteMeasure GrayCodeEmbedding::measure(const FiniteMetricSpace& two_point,
                                           std::uint32_t word) const {
  if (two_point.size() != 2) throw DomainError("Gray code measures live on a two-point space");
  const std::uint64_t r = rank.at(word);
  return DiscreteMeasure::from_lattice(two_point, {{0, r}, {1, mersenne(k) - r}}, mersenne(k));
}

GrayCodeEmbedding gray_code_embedding(std::size_t k) {
  if (k == 0 || k > 20) throw DomainError("Gray code needs 1 <= k <= 20");
  const std::uint32_t n = std::uint32_t{1} << k;
  GrayCodeEmbedding g{k, std::vector<std::uint32_t>(n), std::vector<std::uint32_t>(n)};
  for (std::uint32_t i = 0; i < n; ++i) {
    g.order[i] = i ^ (i >> 1);
    g.rank[g.order[i]] = i;
  }
  return g;
}

DistortionReport audit_gray_code(const GrayCodeEmbedding& gray, double p) {
  if (gray.k > 12) throw SizeLimit("exhaustive Gray code audit supports k <= 12");
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent must lie in [1, inf)");
  const std::uint32_t n = std::uint32_t{1} << gray.k;
  const std::uint64_t span = mersenne(gray.k);
  // ratio^p = |rank gap| / (span * hamming); extremes kept as exact fractions.
  std::uint64_t min_num = 0, min_den = 1, max_num = 0, max_den = 1;
  bool any = false;
  DistortionReport report;
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) {
      const std::uint64_t h = static_cast<std::uint64_t>(std::popcount(a ^ b));
      const std::uint64_t ra = gray.rank[a], rb = gray.rank[b];
      const std::uint64_t gap = ra > rb ? ra - rb : rb - ra;
      ++report.sample_count;
      if (!any || gap * min_den < min_num * h) min_num = gap, min_den = h;
      if (!any || gap * max_den > max_num * h) max_num = gap, max_den = h;
      any = true;
      if (gap < h) {
        report.violations.push_back({{a}, {b}, std::pow(double(gap) / double(span), 1.0 / p),
                                     std::pow(double(h) / double(span), 1.0 / p), "lower"});
      }
      if (gap > span * h) {
        report.violations.push_back({{a}, {b}, std::pow(double(gap) / double(span), 1.0 / p),
                                     std::pow(double(h), 1.0 / p), "upper"});
      }
    }
  }
  auto ratio = [&](std::uint64_t num, std::uint64_t den) {
    const double r = static_cast<double>(num) / (static_cast<double>(den) * static_cast<double>(span));
    return p == 1.0 ? r : std::pow(r, 1.0 / p);
  };
  if (any) {
    report.empirical_m = ratio(min_num, min_den);
    report.empirical_M = ratio(max_num, max_den);
  }
  report.theoretical_m = p == 1.0 ? 1.0 / static_cast<double>(span)
                                  : std::pow(static_cast<double>(span), -1.0 / p);
  report.theoretical_M = 1.0;
  return report;
}

double UltrametricEmbedding::factor(double p) const {
  return std::pow(static_cast<double>(k), -1.0 / p) * std::ldexp(1.0, -static_cast<int>(word_bits));
}

DiscreteMeasure UltrametricEmbedding::operator()(const Tuple& x) const {
  if (x.size() != k) throw DomainError("tuple length differs from k");
  std::vector<std::pair<Index, std::uint64_t>> nums;
  for (std::size_t i = 0; i < k; ++i) {
    if (x[i] >> depth) throw DomainError("tuple entry outside the ultrametric space");
    nums.emplace_back((static_cast<Index>(i) << depth) | x[i], 1);
  }
  return DiscreteMeasure::from_lattice(target, std::move(nums), k);
}

UltrametricEmbedding ultrametric_embedding(std::size_t k, std::size_t depth) {
  if (k == 0) throw DomainError("ultrametric embedding needs k >= 1");
  if (depth == 0) throw DomainError("ultrametric embedding needs depth >= 1");
  const std::size_t bits = k == 1 ? 0 : static_cast<std::size_t>(std::bit_width(k - 1));
  return {k, depth, bits, ultrametric_space(depth + bits)};
}

DistortionReport audit_ultrametric_embedding(const UltrametricEmbedding& g, double p,
                                             const PairSampling& sampling, double tolerance) {
  const FiniteMetricSpace X = ultrametric_space(g.depth);
  const double f = g.factor(p);
  auto check = [&](const Tuple& x, const Tuple& y) {
    PairOutcome out;
    const double dp = tuple_distance_p(X, x, y, p);
    const double w = wasserstein(g(x), g(y), p).distance;
    if (dp > 0.0) out.ratio = w / dp;
    if (std::abs(w - f * dp) > tolerance) out.violations.push_back({x, y, w, f * dp, "homothety"});
    return out;
  };
  DistortionReport report = run_pairs(X.size(), g.k, sampling, check);
  report.theoretical_m = report.theoretical_M = f;
  return report;
}

DiscreteMeasure geometric_embedding(const FiniteMetricSpace& X, const Tuple& tuple, double beta) {
  if (tuple.empty()) throw DomainError("geometric embedding needs N >= 1");
  if (!(beta > 0.0 && beta < 0.5)) throw ParameterDomain("beta must lie in (0, 1/2)");
  std::vector<Atom> atoms;
  double w = 1.0;  // beta^{n-1}
  for (std::size_t n = 0; n < tuple.size(); ++n) {
    const bool last = n + 1 == tuple.size();
    atoms.push_back({tuple[n], last ? w : (1.0 - beta) * w});
    w *= beta;
  }
  return DiscreteMeasure(X, std::move(atoms));
}

GeometricConstants geometric_constants(double beta, double eps) {
  if (!(beta > 0.0 && beta < 0.5)) throw ParameterDomain("beta must lie in (0, 1/2)");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterDomain("epsilon must lie in (0, 1)");
  const double A = 1.0 - beta * (1.5 + 1.0 / (2.0 * eps));
  if (!(A > 0.0)) throw ParameterDomain("A = 1 - beta(3/2 + 1/(2 eps)) must be positive");
  const double B = 0.5 * beta * (1.0 - eps);
  return {A, B, std::sqrt(B), std::sqrt(A / B)};
}

double geometric_tuple_distance(const FiniteMetricSpace& X, const Tuple& x, const Tuple& y,
                                double lambda) {
  double s = 0.0, w = 1.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    w *= lambda * lambda;
    const double d = X.distance(x[n], y[n]);
    s += w * d * d;
  }
  return std::sqrt(s);
}

DistortionReport audit_geometric_embedding(const FiniteMetricSpace& X, double beta, double eps,
                                           std::size_t N, const PairSampling& sampling) {
  const GeometricConstants gc = geometric_constants(beta, eps);
  auto check = [&](const Tuple& x, const Tuple& y) {
    PairOutcome out;
    const double dl = geometric_tuple_distance(X, x, y, gc.lambda);
    const double w =
        wasserstein(geometric_embedding(X, x, beta), geometric_embedding(X, y, beta), 2.0).distance;
    if (dl > 0.0) out.ratio = w / dl;
    if (w < gc.m * dl - kAuditTolerance) out.violations.push_back({x, y, w, gc.m * dl, "lower"});
    return out;
  };
  DistortionReport report = run_pairs(X.size(), N, sampling, check);
  report.theoretical_m = gc.m;
  report.theoretical_M = std::numeric_limits<double>::infinity();
  return report;
}

namespace {

struct SlabPacker {
  std::size_t d;
  const std::vector<double>& side;  // padded, non-increasing
  std::vector<std::vector<double>> pos;
  std::size_t next = 0;

  // Fills the box [origin, origin + S] in axes 0..m-1.
  void fill(std::size_t m, double S, std::vector<double> origin) {
    const double cap = S * (1.0 + 1e-12);
    if (m == 1) {
      double x = 0.0;
      while (next < side.size() && x + side[next] <= cap) {
        pos[next] = origin;
        pos[next][0] += x;
        x += side[next++];
      }
      return;
    }
    double y = 0.0;
    while (next < side.size() && y + side[next] <= cap) {
      const double h = side[next];
      std::vector<double> row = origin;
      row[m - 1] += y;
      fill(m - 1, S, row);
      y += h;
    }
  }

  // Unbounded along the last axis; returns the largest extent.
  double run(double S) {
    pos.assign(side.size(), std::vector<double>(d, 0.0));
    next = 0;
    double y = 0.0;
    if (d == 1) {
      for (; next < side.size(); ++next) {
        pos[next][0] = y;
        y += side[next];
      }
    } else {
      while (next < side.size()) {
        const double h = side[next];
        std::vector<double> origin(d, 0.0);
        origin[d - 1] = y;
        fill(d - 1, S, origin);
        y += h;
      }
    }
    double extent = 0.0;
    for (std::size_t n = 0; n < side.size(); ++n) {
      for (std::size_t a = 0; a < d; ++a) extent = std::max(extent, pos[n][a] + side[n]);
    }
    return extent;
  }
};

}  // namespace

CubePlacement cube_packing(const std::vector<double>& c, std::size_t d, bool separation) {
  if (d == 0) throw DomainError("cube packing needs d >= 1");
  if (c.empty()) throw DomainError("cube packing needs at least one cube");
  double mass = 0.0;
  for (double v : c) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("cube sizes must be positive");
    mass += std::pow(v, static_cast<double>(d));
  }
  if (!std::isfinite(mass) || mass > kPackingMassBudget) {
    throw NotSummable("sum of c_n^d exceeds the packing budget");
  }
  const double cmax = *std::max_element(c.begin(), c.end());
  const double cmin = *std::min_element(c.begin(), c.end());
  const double pad = separation ? std::sqrt(static_cast<double>(d)) * cmax * (1.0 + 1e-6)
                                : 1e-6 * cmin;

  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return c[a] > c[b]; });
  std::vector<double> side(c.size());
  double volume = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    side[i] = c[order[i]] + pad;
    volume += std::pow(side[i], static_cast<double>(d));
  }

  SlabPacker packer{d, side, {}, 0};
  double best_extent = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best;
  const double limit =
      4.0 * std::max(side.front(), std::pow(volume, 1.0 / static_cast<double>(d)));
  for (int j = 0;; ++j) {
    const double S = side.front() * std::pow(2.0, j / 4.0);
    if (S > limit && j > 0) break;
    const double extent = packer.run(S);
    if (extent < best_extent) {
      best_extent = extent;
      best = packer.pos;
    }
    if (d == 1) break;
  }

  CubePlacement out;
  out.dimension = d;
  out.separated = separation;
  out.K = std::min(1.0, 1.0 / best_extent);
  out.offsets.resize(c.size());
  out.ratios.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto& o = out.offsets[order[i]];
    o = best[i];
    for (double& v : o) v *= out.K;
    out.ratios[order[i]] = out.K * c[order[i]];
  }
  return out;
}

PackingCheck check_packing(const CubePlacement& placement) {
  const std::size_t d = placement.dimension;
  const std::size_t n = placement.ratios.size();
  PackingCheck check;
  check.inside = true;
  check.disjoint = true;
  check.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = placement.ratios[i];
    check.max_diameter = std::max(check.max_diameter, r * std::sqrt(static_cast<double>(d)));
    check.volume += std::pow(r, static_cast<double>(d));
    for (std::size_t a = 0; a < d; ++a) {
      const double lo = placement.offsets[i][a];
      if (lo < 0.0 || lo + r > 1.0 + 1e-12) check.inside = false;
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      bool apart = false;
      double gap2 = 0.0;
      for (std::size_t a = 0; a < d; ++a) {
        const double li = placement.offsets[i][a], hi = li + r;
        const double lj = placement.offsets[j][a], hj = lj + placement.ratios[j];
        if (hi < lj || hj < li) apart = true;
        const double g = std::max({0.0, lj - hi, li - hj});
        gap2 += g * g;
      }
      if (!apart) check.disjoint = false;
      check.min_gap = std::min(check.min_gap, std::sqrt(gap2));
    }
  }
  check.separation_holds = check.disjoint && check.min_gap > check.max_diameter;
  return check;
}

namespace {

Index snap(const FiniteMetricSpace& target, const std::vector<double>& offset, double ratio,
           const std::vector<double>& x) {
  std::vector<double> loc(offset.size());
  for (std::size_t a = 0; a < loc.size(); ++a) loc[a] = std::clamp(offset[a] + ratio * x[a], 0.0, 1.0);
  return nearest_grid_point(target, loc);
}

double grid_step(std::uint32_t resolution) { return 1.0 / static_cast<double>(resolution - 1); }

std::uint32_t grid_resolution(const FiniteMetricSpace& grid, std::size_t d) {
  return static_cast<std::uint32_t>(std::llround(std::pow(static_cast<double>(grid.size()),
                                                          1.0 / static_cast<double>(d))));
}

}  // namespace

double HomotheticEmbedding::step() const { return grid_step(grid_resolution(target, dimension)); }

Index HomotheticEmbedding::image_point(std::size_t n, Index x) const {
  return snap(target, packing.offsets.at(n), packing.ratios.at(n), grid_coordinates(base, x));
}

DiscreteMeasure HomotheticEmbedding::operator()(const Tuple& x) const {
  if (x.size() != a.size()) throw DomainError("tuple length differs from the depth");
  std::vector<Atom> atoms;
  for (std::size_t n = 0; n < x.size(); ++n) atoms.push_back({image_point(n, x[n]), b[n]});
  return DiscreteMeasure(target, std::move(atoms));
}

double HomotheticEmbedding::source_distance(const Tuple& x, const Tuple& y) const {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const double d = base.distance(x[n], y[n]);
    s += a[n] * a[n] * d * d;
  }
  return std::sqrt(s);
}

HomotheticEmbedding homothetic_hc_embedding(const std::vector<double>& a, std::size_t d,
                                            const FiniteMetricSpace& base,
                                            std::uint32_t resolution) {
  if (a.empty()) throw DomainError("homothetic embedding needs depth >= 1");
  if (base.kind() != "grid" || base.arity() != d) throw DomainError("base must be a grid cube of dimension d");
  const double q = 2.0 * static_cast<double>(d) / (static_cast<double>(d) + 2.0);
  std::vector<double> b(a.size()), c(a.size());
  double total = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (!(a[n] > 0.0)) throw DomainError("weights must be positive");
    b[n] = std::pow(a[n], q);
    total += b[n];
  }
  if (!std::isfinite(total)) throw NotSummable("sum a_n^{2d/(d+2)} is not finite");
  for (std::size_t n = 0; n < a.size(); ++n) {
    b[n] /= total;
    c[n] = a[n] / std::sqrt(b[n]);
  }
  CubePlacement packing = cube_packing(c, d, true);
  return {a, b, c, std::move(packing), base, grid_cube(d, resolution), d};
}

DistortionReport audit_homothetic_embedding(const HomotheticEmbedding& h,
                                            const PairSampling& sampling,
                                            double relative_tolerance) {
  const double slack = 2.0 * h.step() * std::sqrt(static_cast<double>(h.dimension));
  auto check = [&](const Tuple& x, const Tuple& y) {
    PairOutcome out;
    const DiscreteMeasure mu = h(x), nu = h(y);
    std::map<Index, std::size_t> cube;
    for (std::size_t n = 0; n < x.size(); ++n) {
      cube[h.image_point(n, x[n])] = n;
      cube[h.image_point(n, y[n])] = n;
    }
    const TransportResult res = wasserstein(mu, nu, 2.0);
    for (const auto& e : res.plan.edges()) {
      if (cube.at(e.source) != cube.at(e.target)) {
        out.violations.push_back({x, y, res.distance, 0.0, "diagonal"});
        break;
      }
    }
    const double expected = h.K() * h.source_distance(x, y);
    const double dist = h.source_distance(x, y);
    if (dist > 0.0) out.ratio = res.distance / dist;
    if (std::abs(res.distance - expected) > relative_tolerance * expected + slack) {
      out.violations.push_back({x, y, res.distance, expected, "homothety"});
    }
    return out;
  };
  DistortionReport report = run_pairs(h.base.size(), h.a.size(), sampling, check);
  report.theoretical_m = report.theoretical_M = h.K();
  return report;
}

double ClosedSubsetEmbedding::step() const { return grid_step(grid_resolution(target, dimension)); }

FiniteSubset ClosedSubsetEmbedding::operator()(const Tuple& x) const {
  if (x.size() != weights.size()) throw DomainError("tuple length differs from the depth");
  std::vector<Index> points;
  for (std::size_t n = 0; n < x.size(); ++n) {
    points.push_back(
        snap(target, packing.offsets[n], packing.ratios[n], grid_coordinates(base, x[n])));
  }
  return FiniteSubset(target, std::move(points));
}

double ClosedSubsetEmbedding::source_distance(const Tuple& x, const Tuple& y) const {
  double s = 0.0;
  for (std::size_t n = 0; n < weights.size(); ++n) s = std::max(s, weights[n] * base.distance(x[n], y[n]));
  return s;
}

ClosedSubsetEmbedding closed_subset_embedding(std::size_t depth, std::size_t d, double d_prime,
                                              const FiniteMetricSpace& base,
                                              std::uint32_t resolution) {
  if (depth == 0) throw DomainError("closed subset embedding needs depth >= 1");
  if (!(d_prime > static_cast<double>(d))) throw ParameterDomain("closed subset embedding needs d' > d");
  if (base.kind() != "grid" || base.arity() != d) throw DomainError("base must be a grid cube of dimension d");
  std::vector<double> w(depth);
  for (std::size_t n = 0; n < depth; ++n) w[n] = std::pow(static_cast<double>(n + 1), -d_prime);
  CubePlacement packing = cube_packing(w, d, true);
  return {d_prime, std::move(w), std::move(packing), base, grid_cube(d, resolution), d};
}

DistortionReport audit_closed_subset_embedding(const ClosedSubsetEmbedding& h,
                                               const PairSampling& sampling,
                                               double relative_tolerance) {
  const double slack = 2.0 * h.step() * std::sqrt(static_cast<double>(h.dimension));
  auto check = [&](const Tuple& x, const Tuple& y) {
    PairOutcome out;
    const double observed = hausdorff_distance(h(x), h(y));
    const double dist = h.source_distance(x, y);
    const double expected = h.C() * dist;
    if (dist > 0.0) out.ratio = observed / dist;
    if (std::abs(observed - expected) > relative_tolerance * expected + slack) {
      out.violations.push_back({x, y, observed, expected, "homothety"});
    }
    return out;
  };
  DistortionReport report = run_pairs(h.base.size(), h.weights.size(), sampling, check);
  report.theoretical_m = report.theoretical_M = h.C();
  return report;
}

}  // namespace largeness
