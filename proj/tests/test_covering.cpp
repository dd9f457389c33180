#include <doctest.h>

#include <cmath>

#include "largeness/covering.hpp"
#include "largeness/errors.hpp"
#include "oracles.hpp"

using namespace largeness;

namespace {

FiniteMetricSpace random_space(std::size_t n, std::uint64_t seed) {
  // points of the unit square, Euclidean distances
  Rng rng(seed);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& [x, y] : pts) {
    x = uniform01(rng);
    y = uniform01(rng);
  }
  Matrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  return build_space(m, "random");
}

CoveringProfile exact_profile(const FiniteMetricSpace& X, const std::vector<double>& grid) {
  CoveringProfile p;
  p.space_label = X.label();
  p.sample_size = X.size();
  for (double e : grid) {
    p.entries.push_back({e, oracle::exact_min_cover(X, e), oracle::exact_max_packing(X, e),
                         oracle::exact_min_cover(X, e)});
  }
  return p;
}

}  // namespace

TEST_CASE("greedy packing") {
  const auto T = build_space({{0, 1}, {1, 0}});
  CHECK(maximal_packing(T, 0.5).size() == 2);
  CHECK(maximal_packing(T, 1.5).size() == 1);

  const auto I = grid_cube(1, 101);
  const auto pts = maximal_packing(I, 0.1);
  CHECK(pts.size() >= 6);
  CHECK(pts.size() <= 11);

  SUBCASE("separated and covering") {
    const auto X = random_space(150, 3);
    for (double eps : {0.05, 0.1, 0.3}) {
      const auto centres = maximal_packing(X, eps);
      for (std::size_t a = 0; a < centres.size(); ++a)
        for (std::size_t b = a + 1; b < centres.size(); ++b) CHECK(X.distance(centres[a], centres[b]) >= eps);
      for (Index x = 0; x < X.size(); ++x) {
        bool covered = false;
        for (Index c : centres) covered = covered || X.distance(x, c) < eps;
        CHECK(covered);
      }
    }
  }
  SUBCASE("invalid radius") { CHECK_THROWS_AS(maximal_packing(I, 0.0), DomainError); }
}

TEST_CASE("covering profiles") {
  SUBCASE("interval within factor 4 of 1/eps") {
    const auto I = grid_cube(1, 1001);
    const auto p = covering_profile(I, geometric_grid(0.5, 0.5, 8));
    for (const auto& e : p.entries) {
      CHECK(e.cover_upper <= 4.0 / e.epsilon);
      CHECK(e.cover_upper >= 0.25 / e.epsilon);
      CHECK(e.cover_upper >= static_cast<std::uint64_t>(std::ceil(1.0 / (2.0 * e.epsilon))));
    }
  }
  SUBCASE("two-point space") {
    const auto T = build_space({{0, 1}, {1, 0}});
    const auto p = covering_profile(T, {2.0, 1.5, 1.0, 0.5, 0.1});
    CHECK(p.entries[0].cover_upper == 1);
    CHECK(p.entries[1].cover_upper == 1);
    CHECK(p.entries[2].cover_upper == 2);
    CHECK(p.entries[3].cover_upper == 2);
    CHECK(p.entries[4].cover_upper == 2);
  }
  SUBCASE("ultrametric cylinders") {
    const auto U = ultrametric_space(8);
    std::vector<double> grid;
    for (int j = 1; j <= 8; ++j) grid.push_back(std::ldexp(1.0, -j));
    const auto p = covering_profile(U, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(p.entries[j].cover_upper == (std::uint64_t{1} << (j + 1)));
      CHECK(p.entries[j].packing_lower == (std::uint64_t{1} << (j + 1)));
    }
    const auto small = ultrametric_space(5);
    for (int j = 1; j <= 5; ++j) {
      CHECK(oracle::exact_min_cover(small, std::ldexp(1.0, -j)) == (std::size_t{1} << j));
    }
  }
  SUBCASE("bounds against exact counts") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
      const auto X = random_space(14 + 2 * seed, seed);
      const auto grid = geometric_grid(0.8, 0.7, 8);
      const auto p = covering_profile(X, grid);
      for (const auto& e : p.entries) {
        CHECK(e.cover_upper >= oracle::exact_min_cover(X, e.epsilon));
        CHECK(e.packing_lower <= oracle::exact_max_packing(X, e.epsilon));
      }
    }
  }
  SUBCASE("monotone in epsilon and sorted") {
    const auto X = random_space(200, 9);
    CHECK_THROWS_AS(covering_profile(X, {0.05, 0.4, 0.1}), DomainError);
    const auto p = covering_profile(X, {0.4, 0.3, 0.2, 0.1, 0.05});
    for (std::size_t i = 1; i < p.entries.size(); ++i) {
      CHECK(p.entries[i].epsilon < p.entries[i - 1].epsilon);
      CHECK(p.entries[i].cover_upper >= p.entries[i - 1].cover_upper);
      CHECK(p.entries[i].packing_lower >= p.entries[i - 1].packing_lower);
    }
  }
  SUBCASE("thread count does not change the result") {
    const auto X = grid_cube(2, 40);
    const auto grid = geometric_grid(0.5, 0.6, 6);
    const auto a = covering_profile(X, grid, {}, 1);
    const auto b = covering_profile(X, grid, {}, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(a.entries[i].cover_upper == b.entries[i].cover_upper);
      CHECK(a.entries[i].packing_lower == b.entries[i].packing_lower);
    }
  }
  SUBCASE("large spaces are sampled") {
    const auto H = hilbert_cube(grid_cube(1, 101), WeightSequence::geometric(0.5, 8));
    PackingOptions opts;
    opts.sample_size = 500;
    const auto p = covering_profile(H, {0.3, 0.1}, opts);
    CHECK(p.sampled);
    CHECK(p.sample_size == 500);
  }
}

TEST_CASE("sandwich check") {
  const std::vector<double> grid{0.8, 0.4, 0.2, 0.1, 0.05};
  SUBCASE("exact profiles are consistent") {
    for (std::uint64_t seed : {11, 12, 13}) {
      const auto X = random_space(20, seed);
      CHECK(sandwich_check(exact_profile(X, grid)).violations == 0);
    }
  }
  SUBCASE("random 32-point space") {
    const auto X = random_space(32, 21);
    const auto report = sandwich_check(covering_profile(X, grid));
    CHECK(report.violations == 0);
    CHECK(report.rows.size() == 4);
  }
  SUBCASE("single point") {
    const auto P = build_space({{0}});
    const auto p = covering_profile(P, grid);
    for (const auto& e : p.entries) CHECK(e.cover_upper == 1);
    CHECK(sandwich_check(p).violations == 0);
  }
  SUBCASE("no doubling pair") {
    const auto X = random_space(10, 1);
    CHECK_THROWS_AS(sandwich_check(covering_profile(X, {0.3, 0.2})), GridMismatch);
  }
}
