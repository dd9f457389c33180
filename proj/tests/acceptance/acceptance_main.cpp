// One line per acceptance criterion; exit status 1 if any line fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "largeness/covering.hpp"
#include "largeness/dynamics.hpp"
#include "largeness/embeddings.hpp"
#include "largeness/scales.hpp"
#include "largeness/subsets.hpp"
#include "largeness/transport.hpp"
#include "oracles.hpp"

using namespace largeness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    o.pass = false;
    o.detail += "; over time budget";
  }
  if (!o.pass) ++failures;
  std::ostringstream line;
  line.precision(4);
  line << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << "; " << secs << " s)";
  std::cout << line.str() << std::endl;
}

std::string str(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

Tuple random_tuple(Rng& rng, Index n, std::size_t k) {
  Tuple t(k);
  for (auto& x : t) x = uniform_index(rng, n);
  return t;
}

Outcome solver_vs_oracle() {
  const auto X = grid_cube(2, 6);
  Rng rng(101);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const double p = 1.0 + t % 2;
    const auto mu = oracle::random_lattice(X, rng, 8, 16);
    const auto nu = oracle::random_lattice(X, rng, 8, 16);
    worst = std::max(worst, std::abs(wasserstein(mu, nu, p).distance - assignment_oracle(mu, nu, p, 1.0 / 16)));
  }
  return {worst <= 1e-9, "200 instances, max deviation " + str(worst)};
}

Outcome power_audit() {
  const auto two = build_space({{0, 1}, {1, 0}}, "two-point");
  std::size_t pairs = 0, bad = 0;
  for (std::size_t k = 1; k <= 4; ++k) {
    for (double p : {1.0, 2.0}) {
      const auto r = audit_power_embedding(two, k, p, {true, 0, 0, 1});
      pairs += r.sample_count;
      bad += r.violations.size();
    }
  }
  const auto C = circle_space(64);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (double p : {1.0, 2.0}) {
      const auto r = audit_power_embedding(C, k, p, {false, 500, 200 + k, 1});
      pairs += r.sample_count;
      bad += r.violations.size();
    }
  }
  return {bad == 0, std::to_string(pairs) + " pairs, " + std::to_string(bad) + " violations"};
}

Outcome intertwining() {
  const auto C = circle_space(64);
  const auto dbl = circle_multiplication(C, 2);
  Rng rng(303);
  std::size_t mismatched = 0;
  for (int t = 0; t < 100; ++t) {
    const Tuple x = random_tuple(rng, C.size(), 1 + t % 5);
    Tuple fx = x;
    for (auto& v : fx) v = dbl(v);
    if (!(dyadic_embedding(C, fx) == pushforward(dbl.as_point_map(), dyadic_embedding(C, x)))) ++mismatched;
  }
  return {mismatched == 0, "100 tuples, " + std::to_string(mismatched) + " mismatches"};
}

Outcome gray_constants() {
  bool ok = true;
  double worst_M = 0.0;
  for (std::size_t k = 2; k <= 10; ++k) {
    const auto r = audit_gray_code(gray_code_embedding(k));
    ok = ok && r.empirical_m == 1.0 / static_cast<double>((1u << k) - 1) && r.empirical_M <= 1.0;
    worst_M = std::max(worst_M, r.empirical_M);
  }
  return {ok, "k = 2..10, m exact: " + std::string(ok ? "yes" : "no") + ", max M " + str(worst_M)};
}

Outcome ultrametric() {
  double worst = 0.0;
  std::size_t pairs = 0, bad = 0;
  for (std::size_t k : {2, 3, 4}) {
    for (double p : {1.0, 2.0}) {
      const auto g = ultrametric_embedding(k, 6);
      const auto r = audit_ultrametric_embedding(g, p, {false, 200, 500 + k, 1});
      pairs += r.sample_count;
      bad += r.violations.size();
      worst = std::max({worst, std::abs(r.empirical_m - g.factor(p)), std::abs(r.empirical_M - g.factor(p))});
    }
  }
  return {bad == 0 && worst <= 1e-9,
          std::to_string(pairs) + " pairs, max deviation of W_p/d_p from the factor " + str(worst)};
}

bool lattice_edges(const TransportPlan& plan, double unit) {
  for (const auto& e : plan.edges()) {
    const double k = e.mass / unit;
    if (std::abs(k - std::round(k)) > 1e-9) return false;
  }
  return true;
}

Outcome forests() {
  const auto X = grid_cube(2, 4);
  Rng rng(606);
  std::size_t cyclic[3] = {0, 0, 0}, off_lattice = 0, certified = 0;
  double marginal = 0.0, drift = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int p = 1 + t % 2;
    const auto plan = wasserstein(oracle::random_lattice(X, rng, 8, 16), oracle::random_lattice(X, rng, 8, 16), p).plan;
    const auto out = canonicalize_with_report(plan);
    if (!plan_graph(out.plan).is_forest()) {
      ++cyclic[p];
      certified += out.face_search_complete;
    }
    else if (!lattice_edges(out.plan, 1.0 / 16)) ++off_lattice;
    marginal = std::max(marginal, out.plan.marginal_error());
    drift = std::max(drift, std::abs(out.plan.cost() - plan.cost()));
  }
  const bool ok = cyclic[1] + cyclic[2] == 0 && off_lattice == 0 && marginal <= 1e-12 && drift <= 1e-9;
  return {ok, "200 plans, cyclic outputs p=1: " + std::to_string(cyclic[1]) + ", p=2: " + std::to_string(cyclic[2]) +
                  " (" + std::to_string(certified) + " proven to have no acyclic optimal plan)" +
                  ", off-lattice " + std::to_string(off_lattice) + ", marginal error " + str(marginal) +
                  ", cost drift " + str(drift)};
}

Outcome monotonicity() {
  const auto X = circle_space(24);
  Rng rng(707);
  std::size_t failed = 0;
  for (int t = 0; t < 500; ++t) {
    const auto plan = wasserstein(oracle::random_lattice(X, rng, 6, 16), oracle::random_lattice(X, rng, 6, 16),
                                  1.0 + t % 2).plan;
    if (!check_cyclical_monotonicity(plan, 4).pass) ++failed;
  }
  const auto L = build_space({{0, 1}, {1, 0}}, "unit pair");
  const auto mu = DiscreteMeasure::from_lattice(L, {{0, 1}, {1, 1}}, 2);
  const auto v = check_cyclical_monotonicity(TransportPlan(mu, mu, 2.0, {{0, 1, 0.5}, {1, 0, 0.5}}), 4);
  const bool crossing_ok = !v.pass && std::abs(v.gap - 2.0) <= 1e-12;
  return {failed == 0 && crossing_ok,
          "500 solver plans, " + std::to_string(failed) + " failures; crossing plan gap " + str(v.gap)};
}

Outcome entropy() {
  const std::vector<double> eps{0.45, 0.35, 0.25};
  std::vector<std::size_t> n2, n3;
  for (std::size_t n = 1; n <= 11; ++n) n2.push_back(n);
  for (std::size_t n = 1; n <= 7; ++n) n3.push_back(n);
  const double h2 = entropy_estimate(circle_multiplication(circle_space(1u << 14), 2), eps, n2).estimate;
  const double h3 = entropy_estimate(circle_multiplication(circle_space(19683), 3), eps, n3).estimate;
  const double h1 = entropy_estimate(identity_map(circle_space(1u << 14)), eps, n2).estimate;
  const bool ok = std::abs(h2 / std::log(2.0) - 1) <= 0.15 && std::abs(h3 / std::log(3.0) - 1) <= 0.15 && h1 < 0.01;
  return {ok, "x2 " + str(h2) + " (log 2 = " + str(std::log(2.0)) + "), x3 " + str(h3) + " (log 3 = " +
                  str(std::log(3.0)) + "), identity " + str(h1)};
}

Outcome hc_trend() {
  const auto I = grid_cube(1, 1025);
  const auto grid = geometric_grid(0.12, 0.9, 16);
  const double target = 1.0 / (2.0 * std::log(2.0));
  std::vector<double> est;
  for (std::size_t depth : {4, 6, 8}) {
    const auto H = hilbert_cube(I, WeightSequence::geometric(0.5, depth));
    est.push_back(mcrit_estimate(covering_profile(H, grid), Family::ISigma, 2.0).point_estimate);
  }
  const bool monotone = std::abs(est[1] - target) <= std::abs(est[0] - target) &&
                        std::abs(est[2] - target) <= std::abs(est[1] - target);
  const bool ok = monotone && std::abs(est[2] / target - 1) <= 0.25;
  return {ok, "HC depths 4/6/8: " + str(est[0]) + " " + str(est[1]) + " " + str(est[2]) + ", target " + str(target)};
}

Outcome bc_trend() {
  const auto B = banach_cube(grid_cube(1, 1025), WeightSequence::polynomial(2.0, 8));
  const double e = mcrit_estimate(covering_profile(B, geometric_grid(0.12, 0.9, 16)), Family::P, 1.0).point_estimate;
  return {std::abs(e / 0.5 - 1) <= 0.30, "BC depth 8: " + str(e) + ", target 0.5"};
}

Outcome critical_trends() {
  auto timed = [](const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = f();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 300) o = {false, o.detail + " over 300 s"};
    return o;
  };
  const Outcome hc = timed(hc_trend), bc = timed(bc_trend);
  return {hc.pass && bc.pass, hc.detail + "; " + bc.detail};
}

Outcome occupancy() {
  const double eps = 0.15;
  const auto P = build_partition(grid_cube(2, 20), eps);
  const auto fibres = audit_subset_fibres(P, 200, 8, 1001);
  const auto measures = audit_measure_occupancy(P, 100, 6, 1002);
  const bool ok = fibres.failures == 0 && fibres.bound <= 2 * eps && measures.failures == 0;
  return {ok, "subset pairs " + std::to_string(fibres.pairs) + " failures " + std::to_string(fibres.failures) +
                  " (block diameter " + str(fibres.bound) + " vs 2 eps " + str(2 * eps) + "); measure pairs " +
                  std::to_string(measures.pairs) + " failures " + std::to_string(measures.failures)};
}

Outcome packing() {
  std::size_t overlaps = 0, short_gaps = 0, runs = 0;
  for (std::size_t d : {1, 2}) {
    for (int family = 0; family < 2; ++family) {
      std::vector<double> c;
      for (int n = 1; n <= 10; ++n) c.push_back(family == 0 ? std::ldexp(1.0, -n) : 1.0 / (n * n));
      for (bool sep : {false, true}) {
        const auto P = cube_packing(c, d, sep);
        ++runs;
        double max_diam = 0.0, min_gap = INFINITY;
        for (std::size_t i = 0; i < c.size(); ++i) {
          max_diam = std::max(max_diam, P.ratios[i] * std::sqrt(static_cast<double>(d)));
          for (std::size_t j = i + 1; j < c.size(); ++j) {
            double gap2 = 0.0;
            bool apart = false;
            for (std::size_t a = 0; a < d; ++a) {
              const double lo1 = P.offsets[i][a], hi1 = lo1 + P.ratios[i];
              const double lo2 = P.offsets[j][a], hi2 = lo2 + P.ratios[j];
              apart = apart || hi1 < lo2 || hi2 < lo1;
              const double g = std::max({0.0, lo2 - hi1, lo1 - hi2});
              gap2 += g * g;
            }
            if (!apart) ++overlaps;
            min_gap = std::min(min_gap, std::sqrt(gap2));
          }
        }
        if (sep && min_gap < max_diam) ++short_gaps;
      }
    }
  }
  return {overlaps == 0 && short_gaps == 0, std::to_string(runs) + " placements, " + std::to_string(overlaps) +
                                                " overlapping pairs, " + std::to_string(short_gaps) +
                                                " separated placements with a short gap"};
}

Outcome homothetic() {
  std::vector<double> a;
  for (int n = 1; n <= 4; ++n) a.push_back(1.0 / (n * n));
  const auto h = homothetic_hc_embedding(a, 1, grid_cube(1, 17), 200);
  const auto r = audit_homothetic_embedding(h, {false, 100, 1212, 1});
  std::size_t diagonal = 0;
  for (const auto& v : r.violations) diagonal += v.kind == "diagonal";
  return {r.violations.empty(), "100 pairs, K " + str(h.K()) + ", non-diagonal plans " + std::to_string(diagonal) +
                                    ", homothety violations " + std::to_string(r.violations.size() - diagonal)};
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(LARGENESS_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "largeness_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::string> suite = {
      R"(space --spec '{"kind":"grid","dimension":2,"resolution":20}')",
      R"(cover --spec '{"kind":"hilbert_cube","base":{"kind":"grid","dimension":1,"resolution":101},"weights":{"kind":"geometric","lambda":0.5,"depth":6}}' --sample-size 2000)",
      R"(crit --spec '{"kind":"grid","dimension":1,"resolution":1025}' --family D)",
      R"(embed --kind power --k 3 --p 2 --pairs 300 --spec '{"kind":"circle","resolution":64}')",
      R"(embed --kind hc --depth 4 --pairs 50)",
      R"(dyn --spec '{"kind":"circle","resolution":4096}' --map times2 --n-max 6 --eps 0.3)",
      R"(subsets --spec '{"kind":"grid","dimension":2,"resolution":12}' --epsilon 0.2 --candidates 300)",
  };
  std::size_t files = 0, differing = 0, errors = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    for (const char* run : {"a", "b"}) {
      const auto dir = root / run / std::to_string(i);
      const int code = run_cli("--seed 4242 --threads 2 --out " + dir.string() + " " + suite[i]);
      if (code != 0 && code != 5) ++errors;
    }
    const auto a = root / "a" / std::to_string(i);
    if (!fs::exists(a)) continue;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const auto b = root / "b" / std::to_string(i) / entry.path().filename();
      if (!fs::exists(b) || slurp(entry.path()) != slurp(b)) ++differing;
    }
  }
  return {errors == 0 && files > 0 && differing == 0, std::to_string(suite.size()) + " subcommands, " +
                                                          std::to_string(files) + " files compared, " +
                                                          std::to_string(differing) + " differ, " +
                                                          std::to_string(errors) + " failed runs"};
}

}  // namespace

int main() {
  criterion(1, 10, solver_vs_oracle);
  criterion(2, 60, power_audit);
  criterion(3, 0, intertwining);
  criterion(4, 0, gray_constants);
  criterion(5, 0, ultrametric);
  criterion(6, 0, forests);
  criterion(7, 0, monotonicity);
  criterion(8, 120, entropy);
  criterion(9, 600, critical_trends);
  criterion(10, 0, occupancy);
  criterion(11, 0, packing);
  criterion(12, 0, homothetic);
  criterion(13, 0, determinism);
  return failures == 0 ? 0 : 1;
}
