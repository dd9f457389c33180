#pragma once

#include <functional>
#include <string>
#include <vector>

#include "largeness/covering.hpp"
#include "largeness/measure.hpp"

namespace largeness {

// D: r^s, I: exp(-(log 1/r)^s), ISigma: exp(-s (log 1/r)^sigma), P: exp(-(1/r)^s).
enum class Family { D, I, ISigma, P };

const char* family_name(Family family);
Family parse_family(const std::string& name);  // "D", "I", "I_sigma", "P"

class Scale {
 public:
  // Throws ParameterDomain when s or sigma lies outside the family interval.
  Scale(Family family, double s, double sigma = 1.0);

  Family family() const { return family_; }
  double s() const { return s_; }
  double sigma() const { return sigma_; }

 private:
  Family family_;
  double s_;
  double sigma_;
};

// f_s(r); throws DomainError for r outside (0,1).
double scale_eval(const Scale& scale, double r);
// log f_s(r), finite where f_s underflows.
double log_scale_eval(const Scale& scale, double r);

struct SeparationRow {
  double r;
  double ratio;  // f_t(C r) / f_s(r)
};

struct SeparationReport {
  std::vector<SeparationRow> rows;  // grid points with C r < 1
  double threshold = 1e-3;
  bool below_threshold = false;
  bool eventually_decreasing = false;
  bool pass = false;
};

// log-gauge as a function of (parameter, r).
using LogGauge = std::function<double(double, double)>;

// Ratios f_t(C r)/f_s(r) over the grid. Passes when the last ratio is below
// the threshold and the second half of the ratios is non-increasing.
SeparationReport separation_audit(const LogGauge& log_gauge, double s, double t, double C,
                                  const std::vector<double>& r_grid, double threshold = 1e-3);
SeparationReport separation_audit(Family family, double s, double t, double C,
                                  const std::vector<double>& r_grid, double sigma = 1.0,
                                  double threshold = 1e-3);

enum class CountFlavor { CoverUpper, PackingLower };

struct CritEstimate {
  Family family;
  double sigma = 1.0;
  double point_estimate = 0.0;
  std::vector<std::pair<double, double>> per_epsilon;  // (eps, s(eps)), decreasing eps
  double residual = 0.0;      // rms of the linear fit
  double slope = 0.0;         // d s / d (1/log(1/eps))
  std::size_t dropped = 0;    // entries outside the inversion domain
  bool clamped = false;       // extrapolation pulled back into the per-eps range
};

// Solves N(eps) f_s(eps) = 1 for s at each eps and extrapolates linearly in
// 1/log(1/eps) to 0. Throws InsufficientData (fewer than 4 entries with N >= 2,
// or fewer than 2 usable after the domain filter) and DegenerateProfile.
CritEstimate mcrit_estimate(const CoveringProfile& profile, Family family, double sigma = 1.0,
                            CountFlavor flavor = CountFlavor::CoverUpper);

struct FrostmanRow {
  double r;
  double worst_ratio;  // max over centers of mu(B(x,r)) / f_s(r)
};

struct FrostmanReport {
  double c_hat = 0.0;
  std::vector<FrostmanRow> rows;
  std::size_t centers = 0;
  bool monte_carlo = false;
};

// max over sampled centers x and radii r of mu(B(x,r))/f_s(r), closed balls.
// Centers are drawn from the support of mu.
FrostmanReport frostman_audit(const DiscreteMeasure& mu, const Scale& scale,
                              const std::vector<double>& r_grid, std::size_t center_sample,
                              std::uint64_t seed);

// Same for the uniform measure on X: exact when X has at most `exact_limit`
// points, otherwise ball masses are Monte Carlo estimates from `mc_points`
// uniform descriptors.
FrostmanReport frostman_audit_uniform(const FiniteMetricSpace& X, const Scale& scale,
                                      const std::vector<double>& r_grid,
                                      std::size_t center_sample, std::uint64_t seed,
                                      std::size_t exact_limit = 200000,
                                      std::size_t mc_points = 20000);

}  // namespace largeness
