#include <doctest.h>

#include <cmath>

#include "largeness/covering.hpp"
#include "largeness/errors.hpp"
#include "largeness/measure.hpp"
#include "largeness/scales.hpp"

using namespace largeness;

TEST_CASE("gauge evaluation") {
  CHECK(scale_eval(Scale(Family::P, 1.0), 0.1) == doctest::Approx(std::exp(-10.0)));
  CHECK(scale_eval(Scale(Family::D, 2.0), 0.5) == doctest::Approx(0.25));
  for (double r : {0.01, 0.1, 0.3, 0.9}) {
    for (double s : {0.5, 1.0, 2.5}) {
      CHECK(scale_eval(Scale(Family::ISigma, s, 1.0), r) == doctest::Approx(scale_eval(Scale(Family::D, s), r)));
    }
  }
  CHECK_THROWS_AS(Scale(Family::D, -1.0), ParameterDomain);
}

TEST_CASE("gauges are monotone in r and s") {
  const std::vector<double> rs = geometric_grid(0.9, 0.8, 30);
  for (Family f : {Family::D, Family::I, Family::ISigma, Family::P}) {
    for (double s : {1.0, 1.5, 2.0, 3.0}) {
      const Scale lo(f, s, 2.0), hi(f, s * 1.5, 2.0);
      for (std::size_t i = 1; i < rs.size(); ++i) {
        // rs decreasing
        CHECK(log_scale_eval(lo, rs[i]) <= log_scale_eval(lo, rs[i - 1]) + 1e-12);
      }
      for (double r : rs) {
        if (f == Family::I && r > std::exp(-1.0)) continue;
        CHECK(log_scale_eval(hi, r) <= log_scale_eval(lo, r) + 1e-12);
      }
    }
  }
  // (log 1/r)^s shrinks with s once log 1/r < 1
  CHECK(log_scale_eval(Scale(Family::I, 2.0), 0.5) > log_scale_eval(Scale(Family::I, 1.0), 0.5));
}

TEST_CASE("separation audit") {
  const auto grid = geometric_grid(0.4, 0.7, 40);
  SUBCASE("power law") {
    const auto rep = separation_audit(Family::D, 1.0, 2.0, 2.0, grid);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) CHECK(row.ratio == doctest::Approx(4.0 * row.r));
  }
  SUBCASE("exponential family") {
    const auto rep = separation_audit(Family::P, 1.0, 2.0, 1.0, grid);
    CHECK(rep.pass);
    for (const auto& row : rep.rows) {
      const double expected = 1.0 / row.r - 1.0 / (row.r * row.r);
      if (expected > -700.0) {
        CHECK(std::log(row.ratio) == doctest::Approx(expected).epsilon(1e-9));
      } else {
        CHECK(row.ratio < 1e-300);
      }
    }
  }
  SUBCASE("exp(-s/r) is not a scale") {
    const double s = 1.0;
    const LogGauge g = [](double sv, double r) { return -sv / r; };
    const auto rep = separation_audit(g, s, 2.0 * s, 2.0, grid);
    CHECK_FALSE(rep.pass);
    for (const auto& row : rep.rows) CHECK(row.ratio == doctest::Approx(1.0));
  }
}

TEST_CASE("critical parameter estimates") {
  SUBCASE("interval") {
    const auto p = covering_profile(grid_cube(1, 10000), geometric_grid(0.1, 0.7, 14));
    const auto est = mcrit_estimate(p, Family::D);
    CHECK(est.point_estimate >= 0.9);
    CHECK(est.point_estimate <= 1.1);
    const auto same = mcrit_estimate(p, Family::ISigma, 1.0);
    CHECK(std::abs(same.point_estimate - est.point_estimate) <= 1e-12);
    for (std::size_t i = 0; i < est.per_epsilon.size(); ++i)
      CHECK(std::abs(same.per_epsilon[i].second - est.per_epsilon[i].second) <= 1e-12);
  }
  SUBCASE("square") {
    const auto p = covering_profile(grid_cube(2, 1000), geometric_grid(0.1, 0.7, 6));
    const auto est = mcrit_estimate(p, Family::D);
    CHECK(est.point_estimate == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("too few entries") {
    const auto p = covering_profile(grid_cube(1, 3), {0.9});
    CHECK_THROWS_AS(mcrit_estimate(p, Family::D), InsufficientData);
  }
  SUBCASE("flat profile") {
    CoveringProfile p;
    for (double e : {0.4, 0.3, 0.2, 0.1, 0.05}) p.entries.push_back({e, 5, 5, 5});
    CHECK_THROWS_AS(mcrit_estimate(p, Family::D), DegenerateProfile);
  }
}

TEST_CASE("Frostman audit") {
  const auto r_grid = geometric_grid(0.5, 0.8, 21);  // down to about 0.0058
  SUBCASE("uniform measure on the interval") {
    const auto I = grid_cube(1, 1001);
    std::vector<double> rs;
    for (double r : r_grid)
      if (r >= 1e-2) rs.push_back(r);
    const auto rep = frostman_audit_uniform(I, Scale(Family::D, 1.0), rs, 200, 5);
    CHECK(rep.c_hat <= 3.0);
    CHECK(rep.c_hat >= 1.0);
  }
  SUBCASE("Dirac mass diverges") {
    const auto I = grid_cube(1, 101);
    const auto rep = frostman_audit(dirac(I, 50), Scale(Family::D, 1.0), {0.1, 0.01, 0.001}, 1, 5);
    CHECK(rep.c_hat == doctest::Approx(1000.0));
  }
  SUBCASE("uniform measure on cylinders") {
    for (std::size_t depth : {6, 10, 12}) {
      const auto U = ultrametric_space(depth);
      std::vector<double> rs;
      for (std::size_t j = 1; j <= depth; ++j) rs.push_back(std::ldexp(1.0, -static_cast<int>(j)));
      const auto rep = frostman_audit_uniform(U, Scale(Family::D, 1.0), rs, 64, 3);
      CHECK(rep.c_hat <= 2.0);
    }
  }
  SUBCASE("product measure on a truncated Hilbert cube") {
    const auto H = hilbert_cube(grid_cube(1, 11), WeightSequence::geometric(0.5, 6));
    const auto rep = frostman_audit_uniform(H, Scale(Family::ISigma, 0.5, 2.0), geometric_grid(0.3, 0.7, 8), 50, 7);
    CHECK(std::isfinite(rep.c_hat));
    CHECK(rep.c_hat < 50.0);
  }
}
