#include "largeness/scales.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "largeness/errors.hpp"

namespace largeness {

const char* family_name(Family family) {
  switch (family) {
    case Family::D: return "D";
    case Family::I: return "I";
    case Family::ISigma: return "I_sigma";
    case Family::P: return "P";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "D") return Family::D;
  if (name == "I") return Family::I;
  if (name == "I_sigma" || name == "Isigma" || name == "I_s") return Family::ISigma;
  if (name == "P") return Family::P;
  throw DomainError("unknown scale family '" + name + "'");
}

Scale::Scale(Family family, double s, double sigma) : family_(family), s_(s), sigma_(sigma) {
  if (!std::isfinite(s) || !std::isfinite(sigma)) throw ParameterDomain("scale parameters must be finite");
  switch (family) {
    case Family::I:
      if (!(s >= 1.0)) throw ParameterDomain("family I needs s >= 1");
      break;
    case Family::ISigma:
      if (!(sigma >= 1.0)) throw ParameterDomain("family I_sigma needs sigma >= 1");
      [[fallthrough]];
    default:
      if (!(s > 0.0)) throw ParameterDomain("scale parameter must be positive");
  }
}

double log_scale_eval(const Scale& scale, double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("scale argument must lie in (0,1)");
  const double L = std::log(1.0 / r);
  switch (scale.family()) {
    case Family::D: return -scale.s() * L;
    case Family::I: return -std::pow(L, scale.s());
    case Family::ISigma: return -scale.s() * std::pow(L, scale.sigma());
    case Family::P: return -std::pow(1.0 / r, scale.s());
  }
  return 0.0;
}

double scale_eval(const Scale& scale, double r) {
  if (scale.family() == Family::D) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("scale argument must lie in (0,1)");
    return std::pow(r, scale.s());
  }
  return std::exp(log_scale_eval(scale, r));
}

SeparationReport separation_audit(const LogGauge& log_gauge, double s, double t, double C,
                                  const std::vector<double>& r_grid, double threshold) {
  if (!(t > s)) throw ParameterDomain("separation audit needs t > s");
  if (!(C >= 1.0)) throw ParameterDomain("separation audit needs C >= 1");
  SeparationReport report;
  report.threshold = threshold;
  for (double r : r_grid) {
    if (!(r > 0.0) || !(C * r < 1.0)) continue;
    report.rows.push_back({r, std::exp(log_gauge(t, C * r) - log_gauge(s, r))});
  }
  if (report.rows.empty()) return report;
  report.below_threshold = report.rows.back().ratio < threshold;
  report.eventually_decreasing = true;
  for (std::size_t i = report.rows.size() / 2 + 1; i < report.rows.size(); ++i) {
    if (report.rows[i].ratio > report.rows[i - 1].ratio * (1.0 + 1e-12)) {
      report.eventually_decreasing = false;
    }
  }
  report.pass = report.below_threshold && report.eventually_decreasing;
  return report;
}

SeparationReport separation_audit(Family family, double s, double t, double C,
                                  const std::vector<double>& r_grid, double sigma,
                                  double threshold) {
  Scale(family, s, sigma);
  Scale(family, t, sigma);
  LogGauge gauge = [family, sigma](double param, double r) {
    return log_scale_eval(Scale(family, param, sigma), r);
  };
  return separation_audit(gauge, s, t, C, r_grid, threshold);
}

CritEstimate mcrit_estimate(const CoveringProfile& profile, Family family, double sigma,
                            CountFlavor flavor) {
  if (family == Family::ISigma && !(sigma >= 1.0)) throw ParameterDomain("sigma must be >= 1");
  CritEstimate est;
  est.family = family;
  est.sigma = family == Family::ISigma ? sigma : 1.0;
  std::size_t informative = 0;
  for (const auto& e : profile.entries) {
    const auto n = flavor == CountFlavor::CoverUpper ? e.cover_upper : e.packing_lower;
    if (n >= 2) ++informative;
  }
  if (informative < 4) throw InsufficientData("profile needs at least 4 entries with N >= 2");

  std::vector<double> xs, ys;
  std::vector<std::uint64_t> counts;
  const bool loglog = family == Family::I || family == Family::P;
  for (const auto& e : profile.entries) {
    const double n = static_cast<double>(flavor == CountFlavor::CoverUpper ? e.cover_upper
                                                                           : e.packing_lower);
    const double eps = e.epsilon;
    const double L = std::log(1.0 / eps);
    const bool ok = loglog ? (n >= 3.0 && eps <= std::exp(-1.0) && (family == Family::P || L > 1.0))
                           : (n >= 2.0 && eps < 1.0);
    if (!ok) {
      ++est.dropped;
      continue;
    }
    double s = 0.0;
    switch (family) {
      case Family::D: s = std::log(n) / L; break;
      case Family::I: s = std::log(std::log(n)) / std::log(L); break;
      case Family::ISigma: s = std::log(n) / std::pow(L, est.sigma); break;
      case Family::P: s = std::log(std::log(n)) / L; break;
    }
    est.per_epsilon.emplace_back(eps, s);
    xs.push_back(1.0 / L);
    ys.push_back(s);
    counts.push_back(static_cast<std::uint64_t>(n));
  }
  if (xs.size() < 2) throw InsufficientData("fewer than 2 entries inside the inversion domain");
  if (std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); })) {
    throw DegenerateProfile("covering counts are constant over the grid");
  }
  const LineFit fit = fit_line(xs, ys);
  est.slope = fit.slope;
  est.residual = fit.rms_residual;
  const auto [lo, hi] = std::minmax_element(ys.begin(), ys.end());
  est.point_estimate = fit.intercept;
  if (fit.intercept < *lo || fit.intercept > *hi) {
    est.point_estimate = std::clamp(fit.intercept, *lo, *hi);
    est.clamped = true;
  }
  return est;
}

namespace {

std::vector<std::size_t> choose_centers(std::size_t available, std::size_t wanted,
                                        std::uint64_t seed) {
  std::vector<std::size_t> all(available);
  for (std::size_t i = 0; i < available; ++i) all[i] = i;
  if (wanted >= available) return all;
  Rng rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(wanted);
  std::sort(all.begin(), all.end());
  return all;
}

// Ball masses for every radius from sorted (distance, weight) pairs.
void accumulate_rows(std::vector<std::pair<double, double>>& dist_mass, const Scale& scale,
                     const std::vector<double>& r_grid, std::vector<double>& worst) {
  std::sort(dist_mass.begin(), dist_mass.end());
  std::vector<std::size_t> order(r_grid.size());
  for (std::size_t k = 0; k < r_grid.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r_grid[a] < r_grid[b]; });
  double mass = 0.0;
  std::size_t pos = 0;
  for (std::size_t k : order) {
    while (pos < dist_mass.size() && dist_mass[pos].first <= r_grid[k] + kDistanceTolerance) {
      mass += dist_mass[pos++].second;
    }
    worst[k] = std::max(worst[k], mass / scale_eval(scale, r_grid[k]));
  }
}

FrostmanReport finish(const std::vector<double>& r_grid, const std::vector<double>& worst,
                      std::size_t centers) {
  FrostmanReport report;
  report.centers = centers;
  for (std::size_t k = 0; k < r_grid.size(); ++k) {
    report.rows.push_back({r_grid[k], worst[k]});
    report.c_hat = std::max(report.c_hat, worst[k]);
  }
  return report;
}

}  // namespace

FrostmanReport frostman_audit(const DiscreteMeasure& mu, const Scale& scale,
                              const std::vector<double>& r_grid, std::size_t center_sample,
                              std::uint64_t seed) {
  for (double r : r_grid) scale_eval(scale, r);
  const auto& atoms = mu.atoms();
  const auto& X = mu.space();
  const auto centers = choose_centers(atoms.size(), std::max<std::size_t>(1, center_sample), seed);
  std::vector<double> worst(r_grid.size(), 0.0);
  std::vector<std::pair<double, double>> dist_mass(atoms.size());
  for (std::size_t c : centers) {
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      dist_mass[a] = {X.distance(atoms[c].point, atoms[a].point), atoms[a].mass};
    }
    accumulate_rows(dist_mass, scale, r_grid, worst);
  }
  return finish(r_grid, worst, centers.size());
}

FrostmanReport frostman_audit_uniform(const FiniteMetricSpace& X, const Scale& scale,
                                      const std::vector<double>& r_grid,
                                      std::size_t center_sample, std::uint64_t seed,
                                      std::size_t exact_limit, std::size_t mc_points) {
  for (double r : r_grid) scale_eval(scale, r);
  const bool exact = X.indexable() && X.size() <= exact_limit;
  Rng rng = derived_rng(seed, 1);
  std::vector<PointDescriptor> points;
  if (exact) {
    for (Index i = 0; i < X.size(); ++i) points.push_back(X.descriptor(i));
  } else {
    for (std::size_t i = 0; i < mc_points; ++i) points.push_back(X.random_descriptor(rng));
  }
  const double weight = 1.0 / static_cast<double>(points.size());
  const auto centers = choose_centers(points.size(), std::max<std::size_t>(1, center_sample), seed);
  std::vector<double> worst(r_grid.size(), 0.0);
  std::vector<std::pair<double, double>> dist_mass(points.size());
  for (std::size_t c : centers) {
    for (std::size_t a = 0; a < points.size(); ++a) {
      dist_mass[a] = {X.distance(points[c], points[a]), weight};
    }
    accumulate_rows(dist_mass, scale, r_grid, worst);
  }
  FrostmanReport report = finish(r_grid, worst, centers.size());
  report.monte_carlo = !exact;
  return report;
}

}  // namespace largeness
