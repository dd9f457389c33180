#include <doctest.h>

#include <cmath>

#include "largeness/errors.hpp"
#include "largeness/transport.hpp"
#include "oracles.hpp"

using namespace largeness;

namespace {

FiniteMetricSpace two_point() { return build_space({{0, 1}, {1, 0}}, "two-point"); }

bool lattice_edges(const TransportPlan& plan, double unit) {
  for (const auto& e : plan.edges()) {
    const double k = e.mass / unit;
    if (std::abs(k - std::round(k)) > 1e-9) return false;
  }
  return true;
}

double max_marginal_gap(const TransportPlan& a, const TransportPlan& b) {
  // atom-by-atom marginals of two plans over the same measures
  std::map<Index, double> out_a, out_b, in_a, in_b;
  for (const auto& e : a.edges()) {
    out_a[e.source] += e.mass;
    in_a[e.target] += e.mass;
  }
  for (const auto& e : b.edges()) {
    out_b[e.source] += e.mass;
    in_b[e.target] += e.mass;
  }
  double gap = 0.0;
  for (const auto& atom : a.source().atoms()) gap = std::max(gap, std::abs(out_a[atom.point] - out_b[atom.point]));
  for (const auto& atom : a.target().atoms()) gap = std::max(gap, std::abs(in_a[atom.point] - in_b[atom.point]));
  return gap;
}

}  // namespace

TEST_CASE("Dirac masses") {
  const auto X = grid_cube(2, 6);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Index x = uniform_index(rng, X.size()), y = uniform_index(rng, X.size());
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(wasserstein(dirac(X, x), dirac(X, y), p).distance == doctest::Approx(X.distance(x, y)));
    }
    CHECK(assignment_oracle(dirac(X, x), dirac(X, y), 2.0, 1.0) == doctest::Approx(X.distance(x, y)));
  }
}

TEST_CASE("measures on two points form a segment") {
  const auto T = two_point();
  for (std::uint64_t a = 0; a <= 16; ++a) {
    for (std::uint64_t b = 0; b <= 16; ++b) {
      auto m = [&](std::uint64_t k) {
        std::vector<std::pair<Index, std::uint64_t>> nums;
        if (k > 0) nums.emplace_back(0, k);
        if (k < 16) nums.emplace_back(1, 16 - k);
        return DiscreteMeasure::from_lattice(T, nums, 16);
      };
      const double expected = std::abs(static_cast<double>(a) - static_cast<double>(b)) / 16.0;
      CHECK(wasserstein(m(a), m(b), 1.0).distance == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("assignment oracle") {
  const auto T = two_point();
  const auto mu = DiscreteMeasure::from_lattice(T, {{0, 2}, {1, 1}}, 3);
  const auto nu = DiscreteMeasure::from_lattice(T, {{0, 1}, {1, 2}}, 3);
  CHECK(assignment_oracle(mu, nu, 1.0, 1.0 / 3.0) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(assignment_oracle(mu, nu, 1.0, 0.3), NotMultiple);
}

TEST_CASE("solver against independent references") {
  SUBCASE("matching enumeration") {
    const auto X = circle_space(12);
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
      const double p = t % 2 ? 2.0 : 1.0;
      const auto mu = oracle::random_lattice(X, rng, 5, 8);
      const auto nu = oracle::random_lattice(X, rng, 5, 8);
      const double w = wasserstein(mu, nu, p).distance;
      CHECK(w == doctest::Approx(oracle::permutation_wasserstein(mu, nu, p, 1.0 / 8)).epsilon(1e-12));
      CHECK(w == doctest::Approx(assignment_oracle(mu, nu, p, 1.0 / 8)).epsilon(1e-12));
    }
  }
  SUBCASE("quantile functions on the line") {
    const auto I = grid_cube(1, 41);
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
      std::vector<Atom> a, b;
      const auto na = 1 + uniform_index(rng, 10), nb = 1 + uniform_index(rng, 10);
      for (Index i = 0; i < na; ++i) a.push_back({uniform_index(rng, I.size()), 0.05 + uniform01(rng)});
      for (Index i = 0; i < nb; ++i) b.push_back({uniform_index(rng, I.size()), 0.05 + uniform01(rng)});
      double sa = 0, sb = 0;
      for (auto& x : a) sa += x.mass;
      for (auto& x : b) sb += x.mass;
      for (auto& x : a) x.mass /= sa;
      for (auto& x : b) x.mass *= 1.0 / sb;
      // renormalize so both totals agree bitwise
      DiscreteMeasure mu(I, a);
      std::vector<Atom> b2 = b;
      b2.back().mass += mu.total_mass() - DiscreteMeasure(I, b).total_mass();
      DiscreteMeasure nu(I, b2);
      const double p = 1.0 + static_cast<double>(t % 3);
      const auto pos = [&](Index i) { return static_cast<double>(i) / 40.0; };
      CHECK(wasserstein(mu, nu, p).distance ==
            doctest::Approx(oracle::quantile_wasserstein(mu, nu, p, pos)).epsilon(1e-9));
    }
  }
}

TEST_CASE("Wasserstein distance is a metric") {
  const auto X = grid_cube(2, 5);
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const double p = 1.0 + (t % 3) * 0.5;
    const auto a = oracle::random_lattice(X, rng, 6, 12);
    const auto b = oracle::random_lattice(X, rng, 6, 12);
    const auto c = oracle::random_lattice(X, rng, 6, 12);
    const double ab = wasserstein(a, b, p).distance, ba = wasserstein(b, a, p).distance;
    const double bc = wasserstein(b, c, p).distance, ac = wasserstein(a, c, p).distance;
    CHECK(std::abs(ab - ba) <= 1e-8);
    CHECK(ac <= ab + bc + 1e-8);
    CHECK(wasserstein(a, a, p).distance <= 1e-12);
  }
}

TEST_CASE("transport input errors") {
  const auto X = grid_cube(1, 5);
  CHECK_THROWS_AS(wasserstein(dirac(X, 0), dirac(X, 1, 0.5), 1.0), MassMismatch);
  CHECK_THROWS_AS(wasserstein(dirac(X, 0), dirac(grid_cube(1, 5), 1), 1.0), SpaceMismatch);
  CHECK_THROWS_AS(wasserstein(dirac(X, 0), dirac(X, 1), 0.5), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure(X, {}), EmptySupport);
}

TEST_CASE("plan graphs") {
  const auto X = grid_cube(1, 5);
  const auto stay = wasserstein(dirac(X, 2), dirac(X, 2), 1.0).plan;
  CHECK(plan_graph(stay).edges.empty());
  const auto move = wasserstein(dirac(X, 1), dirac(X, 3), 1.0).plan;
  CHECK(plan_graph(move).edges.size() == 1);

  Rng rng(8);
  const auto Y = grid_cube(2, 4);
  for (int t = 0; t < 200; ++t) {
    const auto res = wasserstein(oracle::random_lattice(Y, rng, 6, 16), oracle::random_lattice(Y, rng, 6, 16),
                                 1.0 + t % 2);
    CHECK(plan_graph(res.plan).admissible());
  }
}

TEST_CASE("forest canonicalization") {
  SUBCASE("forest input is unchanged") {
    const auto X = grid_cube(1, 5);
    const auto mu = DiscreteMeasure::from_lattice(X, {{0, 1}, {1, 1}}, 2);
    const auto nu = DiscreteMeasure::from_lattice(X, {{3, 1}, {4, 1}}, 2);
    const auto plan = wasserstein(mu, nu, 2.0).plan;
    const auto out = canonicalize_to_forest(plan);
    CHECK(out.edges().size() == plan.edges().size());
    CHECK(out.cost() == doctest::Approx(plan.cost()));
  }
  SUBCASE("square with equal costs") {
    // sources 0,1 and targets 2,3, all cross distances 1
    const auto X = build_space({{0, 2, 1, 1}, {2, 0, 1, 1}, {1, 1, 0, 2}, {1, 1, 2, 0}});
    const auto mu = DiscreteMeasure::from_lattice(X, {{0, 1}, {1, 1}}, 2);
    const auto nu = DiscreteMeasure::from_lattice(X, {{2, 1}, {3, 1}}, 2);
    const TransportPlan full(mu, nu, 1.0, {{0, 2, 0.25}, {0, 3, 0.25}, {1, 2, 0.25}, {1, 3, 0.25}});
    CHECK_FALSE(plan_graph(full).is_forest());
    const auto out = canonicalize_to_forest(full);
    CHECK(plan_graph(out).is_forest());
    CHECK(out.edges().size() <= 3);
    CHECK(out.cost() == doctest::Approx(full.cost()));
  }
  SUBCASE("random optimal plans at p = 1") {
    const auto X = grid_cube(2, 5);
    Rng rng(31);
    for (int t = 0; t < 150; ++t) {
      const auto plan = wasserstein(oracle::random_lattice(X, rng, 8, 16), oracle::random_lattice(X, rng, 8, 16), 1.0).plan;
      const auto out = canonicalize_with_report(plan);
      CHECK(out.forest);
      CHECK(plan_graph(out.plan).is_forest());
      CHECK(out.plan.cost() <= plan.cost() + 1e-9);
      CHECK(std::abs(out.plan.cost() - plan.cost()) <= 1e-9);
      CHECK(max_marginal_gap(plan, out.plan) <= 1e-12);
      CHECK(lattice_edges(out.plan, 1.0 / 16));
    }
  }
  SUBCASE("three-point line instance without an acyclic optimum at p = 2") {
    const auto L = grid_cube(1, 3);
    const auto mu = DiscreteMeasure::from_lattice(L, {{0, 2}, {1, 1}}, 3);
    const auto nu = DiscreteMeasure::from_lattice(L, {{1, 1}, {2, 2}}, 3);
    const auto plan = wasserstein(mu, nu, 2.0).plan;
    CHECK_FALSE(oracle::acyclic_optimum_exists(mu, nu, 2.0, plan.cost()));
    const auto out = canonicalize_with_report(plan);
    CHECK_FALSE(out.forest);
    CHECK(out.face_search_complete);
    CHECK(std::abs(out.plan.cost() - plan.cost()) <= 1e-12);
    CHECK(max_marginal_gap(plan, out.plan) <= 1e-12);
  }
  SUBCASE("forest verdict agrees with basis enumeration at p = 2") {
    const auto X = grid_cube(2, 3);
    Rng rng(41);
    int without = 0;
    for (int t = 0; t < 300; ++t) {
      const auto mu = oracle::random_lattice(X, rng, 4, 12);
      const auto nu = oracle::random_lattice(X, rng, 4, 12);
      const auto plan = wasserstein(mu, nu, 2.0).plan;
      const auto out = canonicalize_with_report(plan);
      const bool exists = oracle::acyclic_optimum_exists(mu, nu, 2.0, plan.cost());
      CHECK(out.forest == exists);
      if (out.forest) CHECK(lattice_edges(out.plan, 1.0 / 12));
      CHECK(std::abs(out.plan.cost() - plan.cost()) <= 1e-9);
      without += !exists;
    }
    MESSAGE("instances without an acyclic optimal plan: " << without << " / 300");
  }
}

TEST_CASE("cyclical monotonicity") {
  SUBCASE("crossing plan on unit-spaced points") {
    const auto X = build_space({{0, 1}, {1, 0}});
    const auto mu = DiscreteMeasure::from_lattice(X, {{0, 1}, {1, 1}}, 2);
    const TransportPlan crossing(mu, mu, 2.0, {{0, 1, 0.5}, {1, 0, 0.5}});
    const auto v = check_cyclical_monotonicity(crossing, 4);
    CHECK_FALSE(v.pass);
    CHECK(v.gap == doctest::Approx(2.0));
    CHECK(v.witness.size() == 2);
  }
  SUBCASE("single edge") {
    const auto X = grid_cube(1, 4);
    const auto v = check_cyclical_monotonicity(wasserstein(dirac(X, 0), dirac(X, 3), 2.0).plan, 4);
    CHECK(v.pass);
  }
  SUBCASE("solver output") {
    const auto X = circle_space(20);
    Rng rng(77);
    for (int t = 0; t < 200; ++t) {
      const auto plan = wasserstein(oracle::random_lattice(X, rng, 6, 16), oracle::random_lattice(X, rng, 6, 16),
                                    1.0 + t % 2).plan;
      CHECK(check_cyclical_monotonicity(plan, 4).pass);
    }
  }
}

TEST_CASE("push-forward") {
  const auto C = circle_space(8);
  Rng rng(2);
  const auto mu = oracle::random_lattice(C, rng, 5, 16);
  CHECK(pushforward([](Index i) { return i; }, mu) == mu);
  const auto collapsed = pushforward([](Index) { return Index{4}; }, mu);
  REQUIRE(collapsed.support_size() == 1);
  CHECK(collapsed.atoms()[0].point == 4);
  CHECK(collapsed.total_mass() == doctest::Approx(1.0));
  const auto doubled = pushforward([](Index i) { return (2 * i) % 8; }, dirac(C, 3));
  CHECK(doubled == dirac(C, 6));
}
