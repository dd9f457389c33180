#include <doctest.h>

#include <cmath>

#include "largeness/dynamics.hpp"
#include "largeness/errors.hpp"
#include "oracles.hpp"

using namespace largeness;

namespace {

// Orbit distance computed by iterating the map directly.
double orbit_distance(const DynamicalMap& phi, std::size_t n, Index x, Index y) {
  double d = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    d = std::max(d, phi.space.distance(x, y));
    x = phi(x);
    y = phi(y);
  }
  return d;
}

}  // namespace

TEST_CASE("Bowen metric") {
  const auto C = circle_space(16);
  const auto dbl = circle_multiplication(C, 2);
  CHECK(bowen_metric(dbl, 1).distance(0, 1) == doctest::Approx(1.0 / 8.0));
  CHECK(bowen_metric(dbl, 3).distance(0, 1) == doctest::Approx(0.5));

  SUBCASE("n = 0 is the base metric") {
    const auto B = bowen_metric(dbl, 0);
    for (Index x = 0; x < 16; ++x)
      for (Index y = 0; y < 16; ++y) CHECK(B.distance(x, y) == C.distance(x, y));
  }
  SUBCASE("identity leaves the metric unchanged") {
    const auto B = bowen_metric(identity_map(C), 5);
    for (Index x = 0; x < 16; ++x)
      for (Index y = 0; y < 16; ++y) CHECK(B.distance(x, y) == C.distance(x, y));
  }
  SUBCASE("agrees with iterated orbits and grows with n") {
    const auto tri = circle_multiplication(circle_space(27), 3);
    for (std::size_t n = 0; n <= 4; ++n) {
      const auto B = bowen_metric(tri, n);
      const auto next = bowen_metric(tri, n + 1);
      for (Index x = 0; x < 27; ++x) {
        for (Index y = 0; y < 27; ++y) {
          CHECK(B.distance(x, y) == orbit_distance(tri, n, x, y));
          CHECK(B.distance(x, y) <= next.distance(x, y));
        }
      }
    }
  }
}

TEST_CASE("maps") {
  const auto G = grid_cube(1, 11);
  const auto tent = interval_map(G, [](double x) { return 1.0 - std::abs(2.0 * x - 1.0); }, "tent");
  CHECK(tent(0) == 0);
  CHECK(tent(5) == 10);
  CHECK(tent(10) == 0);
  CHECK(circle_multiplication(circle_space(10), 3)(7) == 1);
  CHECK_THROWS_AS(table_map(G, {0, 1, 11}, "bad"), DomainError);
}

TEST_CASE("separated sets") {
  const auto dbl = circle_multiplication(circle_space(32), 2);
  SUBCASE("separated and maximal") {
    for (std::size_t n : {0, 1, 2, 3}) {
      for (double eps : {0.3, 0.2, 0.1}) {
        const auto S = separated_set(dbl, n, eps);
        CHECK(S.size() == separated_count(dbl, n, eps));
        for (std::size_t a = 0; a < S.size(); ++a)
          for (std::size_t b = a + 1; b < S.size(); ++b) CHECK(orbit_distance(dbl, n, S[a], S[b]) >= eps);
        for (Index x = 0; x < 32; ++x) {
          bool near = false;
          for (Index s : S) near = near || orbit_distance(dbl, n, x, s) < eps;
          CHECK(near);
        }
      }
    }
  }
  SUBCASE("never above the exact maximum") {
    for (std::size_t n : {0, 1, 2}) {
      for (double eps : {0.25, 0.15, 0.1}) {
        const auto exact = oracle::exact_max_packing(bowen_metric(dbl, n), eps);
        const auto greedy = separated_count(dbl, n, eps);
        CHECK(greedy <= exact);
        CHECK(2 * greedy >= exact);
      }
    }
  }
  SUBCASE("monotone") {
    for (std::size_t n = 0; n < 5; ++n) {
      CHECK(separated_count(dbl, n + 1, 0.2) >= separated_count(dbl, n, 0.2));
      CHECK(separated_count(dbl, n, 0.1) >= separated_count(dbl, n, 0.2));
    }
  }
  SUBCASE("doubling roughly doubles the count") {
    const auto big = circle_multiplication(circle_space(1u << 12), 2);
    for (std::size_t n = 2; n < 7; ++n) {
      const double ratio = static_cast<double>(separated_count(big, n + 1, 0.125)) /
                           static_cast<double>(separated_count(big, n, 0.125));
      CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
    }
  }
}

TEST_CASE("entropy estimates") {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 9; ++n) ns.push_back(n);
  SUBCASE("doubling") {
    const auto r = entropy_estimate(circle_multiplication(circle_space(1u << 13), 2), {0.45, 0.35, 0.25}, ns);
    CHECK(r.estimate == doctest::Approx(std::log(2.0)).epsilon(0.15));
    CHECK(r.rows.size() == 27);
    CHECK_FALSE(r.saturated);
    for (const auto& [eps, slope] : r.slopes) CHECK(slope == doctest::Approx(std::log(2.0)).epsilon(0.15));
  }
  SUBCASE("tripling") {
    const std::vector<std::size_t> short_ns{1, 2, 3, 4, 5, 6};
    const auto r = entropy_estimate(circle_multiplication(circle_space(6561), 3), {0.45, 0.35, 0.25}, short_ns);
    CHECK(r.estimate == doctest::Approx(std::log(3.0)).epsilon(0.15));
  }
  SUBCASE("identity") {
    const auto r = entropy_estimate(identity_map(circle_space(1024)), {0.3, 0.1}, ns);
    CHECK(r.estimate == 0.0);
  }
  SUBCASE("saturation is flagged") {
    const auto r = entropy_estimate(circle_multiplication(circle_space(64), 2), {0.1}, ns);
    CHECK(r.saturated);
  }
  SUBCASE("bad grids") {
    const auto phi = identity_map(circle_space(16));
    CHECK_THROWS_AS(entropy_estimate(phi, {}, ns), DomainError);
    CHECK_THROWS_AS(entropy_estimate(phi, {0.1}, {3}), DomainError);
    CHECK_THROWS_AS(entropy_estimate(phi, {-0.1}, ns), DomainError);
  }
}

TEST_CASE("measure dynamics lower bounds") {
  const std::vector<double> eps{0.02, 0.01, 0.005};
  const std::vector<std::size_t> ns{1, 2, 3};
  SUBCASE("identity: counts do not grow with n") {
    MmdimOptions opts;
    opts.fixed_k = 1;
    const auto r = mmdim_experiment(identity_map(circle_space(256)), 1.0, eps, ns, opts);
    for (const auto& row : r.rows) {
      CHECK(row.base_count == separated_count(identity_map(circle_space(256)), 0, row.epsilon));
      CHECK(row.ratio * static_cast<double>(row.n) ==
            doctest::Approx(std::log(static_cast<double>(row.base_count)) / std::log(1.0 / row.epsilon)));
    }
  }
  SUBCASE("rows follow the schedule") {
    const auto r = mmdim_experiment(circle_multiplication(circle_space(4096), 2), 1.0, eps, ns);
    REQUIRE(r.rows.size() == eps.size() * ns.size());
    for (const auto& row : r.rows) {
      const auto k = static_cast<std::size_t>(std::floor(0.9 * std::log(1.0 / row.epsilon) / std::log(2.0)));
      CHECK(row.k == std::max<std::size_t>(k, 1));
      const double scale = static_cast<double>(row.k) * (std::ldexp(1.0, static_cast<int>(row.k)) - 1.0) * row.epsilon;
      CHECK(row.base_scale == doctest::Approx(scale));
      CHECK(row.log_lower == doctest::Approx(row.k * std::log(static_cast<double>(row.base_count))));
    }
  }
  SUBCASE("direct check passes") {
    MmdimOptions opts;
    opts.fixed_k = 2;
    opts.direct_pairs = 60;
    opts.seed = 3;
    const auto r = mmdim_experiment(circle_multiplication(circle_space(512), 2), 2.0, {0.05, 0.02}, {1, 2}, opts);
    CHECK(r.direct_checked > 0);
    CHECK(r.direct_failures == 0);
  }
}
