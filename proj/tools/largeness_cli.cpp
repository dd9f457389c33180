#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "largeness/covering.hpp"
#include "largeness/dynamics.hpp"
#include "largeness/embeddings.hpp"
#include "largeness/errors.hpp"
#include "largeness/io.hpp"
#include "largeness/scales.hpp"
#include "largeness/spaces.hpp"
#include "largeness/subsets.hpp"
#include "largeness/transport.hpp"
#include "space_spec.hpp"

namespace {

using nlohmann::json;
using namespace largeness;

constexpr int kExitUsage = 1;
constexpr int kExitAxiom = 2;
constexpr int kExitData = 3;
constexpr int kExitMass = 4;
constexpr int kExitViolation = 5;

// Violations beyond this many are counted but not listed.
constexpr std::size_t kListedViolations = 100;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned threads = 1;
  Index point_budget = SpaceLimits{}.explicit_budget;
  std::string config;
};

struct EpsilonOptions {
  std::vector<double> values;
  double first = 0.5;
  double ratio = 0.5;
  std::size_t count = 8;

  void attach(CLI::App* app) {
    app->add_option("--eps", values, "explicit epsilon grid");
    app->add_option("--eps-first", first, "largest epsilon of the geometric grid");
    app->add_option("--eps-ratio", ratio, "ratio of the geometric grid");
    app->add_option("--eps-count", count, "length of the geometric grid");
  }
  std::vector<double> grid() const {
    return values.empty() ? geometric_grid(first, ratio, count) : values;
  }
};

// Files are collected and written together once the command succeeded.
class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string content) {
    files_.emplace_back((std::filesystem::path(dir_) / name).string(), std::move(content));
  }
  void commit() const {
    for (const auto& [path, content] : files_) write_file_atomic(path, content);
  }

 private:
  std::string dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json null_if_infinite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

SpaceLimits limits_of(const Globals& g) {
  SpaceLimits limits;
  limits.explicit_budget = g.point_budget;
  return limits;
}

FiniteMetricSpace space_argument(const std::string& spec, const Globals& g) {
  if (spec.empty()) throw UsageError("--spec is required");
  return cli::build_space_from_json(cli::load_json_argument(spec), limits_of(g));
}

json space_summary(const FiniteMetricSpace& X) {
  json s;
  s["kind"] = X.kind();
  s["label"] = X.label();
  s["cardinality"] = X.cardinality();
  s["diameter"] = X.diameter();
  const auto tail = X.tail_diameter_bound();
  s["tail_diameter_bound"] = tail ? json(*tail) : json(nullptr);
  return s;
}

json profile_json(const CoveringProfile& profile) {
  json rows = json::array();
  for (const auto& e : profile.entries) {
    rows.push_back({{"epsilon", e.epsilon},
                    {"cover_upper", e.cover_upper},
                    {"packing_lower", e.packing_lower}});
  }
  return {{"space", profile.space_label},
          {"sample_size", profile.sample_size},
          {"sampled", profile.sampled},
          {"rows", rows}};
}

json violations_json(const std::vector<DistortionViolation>& list) {
  json out = json::array();
  for (std::size_t i = 0; i < list.size() && i < kListedViolations; ++i) {
    const auto& v = list[i];
    out.push_back({{"x", v.x}, {"y", v.y}, {"observed", v.observed}, {"bound", v.bound}, {"kind", v.kind}});
  }
  return out;
}

json report_json(const DistortionReport& r) {
  return {{"sample_count", r.sample_count},
          {"m_emp", r.empirical_m},
          {"M_emp", null_if_infinite(r.empirical_M)},
          {"m_theory", r.theoretical_m},
          {"M_theory", null_if_infinite(r.theoretical_M)},
          {"violation_count", r.violations.size()},
          {"violations", violations_json(r.violations)},
          {"secondary_violation_count", r.secondary_violations.size()},
          {"secondary_violations", violations_json(r.secondary_violations)}};
}

// ---------------------------------------------------------------- config

std::vector<std::string> config_strings(const json& v) {
  if (v.is_string()) return {v.get<std::string>()};
  if (v.is_boolean()) return {v.get<bool>() ? "true" : "false"};
  if (v.is_number()) return {v.dump()};
  if (v.is_object()) return {v.dump()};
  if (v.is_array()) {
    std::vector<std::string> out;
    for (const auto& e : v) {
      const auto s = config_strings(e);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  throw UsageError("unsupported config value " + v.dump());
}

void apply_config_object(CLI::App* app, const json& obj, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (app->get_subcommand_no_throw(key) != nullptr) continue;  // handled by the caller
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = app->get_option_no_throw("--" + name);
    if (opt == nullptr || name == "config") {
      throw UsageError("unknown config field '" + key + "'" + where);
    }
    if (opt->count() > 0) continue;  // flags win
    opt->add_result(config_strings(value));
    opt->run_callback();
  }
}

void apply_config(CLI::App& app, const std::string& path) {
  const json cfg = json::parse(read_file(path));
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");
  apply_config_object(&app, cfg, "");
  for (const auto& [key, value] : cfg.items()) {
    CLI::App* sub = app.get_subcommand_no_throw(key);
    if (sub == nullptr) continue;
    if (!value.is_object()) throw UsageError("config section '" + key + "' must be an object");
    if (sub->parsed()) apply_config_object(sub, value, " in section '" + key + "'");
  }
}

// ---------------------------------------------------------------- commands

struct SpaceCmd {
  std::string spec;
  bool validate = true;

  int run(const Globals& g, Outputs& out) const {
    const FiniteMetricSpace X = space_argument(spec, g);
    json s = space_summary(X);
    if (validate) {
      const ValidationReport v = validate_metric(X);
      s["validation"] = {{"exhaustive", v.exhaustive}, {"triples_checked", v.triples_checked}, {"pass", true}};
    }
    std::cout << s.dump(2) << "\n";
    out.add("space.json", s.dump(2) + "\n");
    return 0;
  }
};

struct CoverCmd {
  std::string spec;
  EpsilonOptions eps;
  std::size_t sample_size = PackingOptions{}.sample_size;

  CoveringProfile profile(const FiniteMetricSpace& X, const Globals& g) const {
    PackingOptions opts;
    opts.sample_size = sample_size;
    opts.seed = g.seed;
    return covering_profile(X, eps.grid(), opts, g.threads);
  }

  int run(const Globals& g, Outputs& out) const {
    const FiniteMetricSpace X = space_argument(spec, g);
    const CoveringProfile p = profile(X, g);
    json s = profile_json(p);
    try {
      const SandwichReport sw = sandwich_check(p);
      s["sandwich_violations"] = sw.violations;
    } catch (const GridMismatch&) {
      s["sandwich_violations"] = nullptr;
    }
    std::cout << s.dump(2) << "\n";
    out.add("profile.csv", profile_csv(p));
    out.add("cover.json", s.dump(2) + "\n");
    return 0;
  }
};

struct CritCmd {
  CoverCmd cover;
  std::string family = "D";
  double sigma = 1.0;
  std::string flavor = "cover";

  int run(const Globals& g, Outputs& out) const {
    if (flavor != "cover" && flavor != "packing") throw UsageError("--flavor must be cover or packing");
    const FiniteMetricSpace X = space_argument(cover.spec, g);
    const CoveringProfile p = cover.profile(X, g);
    const CritEstimate est =
        mcrit_estimate(p, parse_family(family), sigma,
                       flavor == "cover" ? CountFlavor::CoverUpper : CountFlavor::PackingLower);
    json per = json::array();
    for (const auto& [e, s] : est.per_epsilon) per.push_back({e, s});
    const json s = {{"space", space_summary(X)},
                    {"family", family_name(est.family)},
                    {"sigma", est.sigma},
                    {"flavor", flavor},
                    {"point_estimate", est.point_estimate},
                    {"residual", est.residual},
                    {"slope", est.slope},
                    {"dropped", est.dropped},
                    {"clamped", est.clamped},
                    {"per_epsilon", per}};
    std::cout << s.dump(2) << "\n";
    out.add("profile.csv", profile_csv(p));
    out.add("crit.csv", crit_csv(est));
    out.add("crit.json", s.dump(2) + "\n");
    return 0;
  }
};

struct WassCmd {
  std::string spec;
  std::string mu_path;
  std::string nu_path;
  double p = 1.0;
  bool forest = false;
  bool monotone = false;
  std::size_t max_cycle = 4;

  int run(const Globals& g, Outputs& out) const {
    if (mu_path.empty() || nu_path.empty()) throw UsageError("--mu and --nu are required");
    const FiniteMetricSpace X = space_argument(spec, g);
    const DiscreteMeasure mu = parse_measure_csv(X, read_file(mu_path));
    const DiscreteMeasure nu = parse_measure_csv(X, read_file(nu_path));
    const TransportResult res = wasserstein(mu, nu, p);
    json s = {{"p", p}, {"distance", res.distance}, {"plan_edges", res.plan.edges().size()}};
    out.add("plan.csv", plan_csv(res.plan));
    if (forest) {
      const ForestResult f = canonicalize_with_report(res.plan);
      s["forest"] = {{"forest", f.forest},
                     {"coupling_forest", f.coupling_forest},
                     {"cancellations", f.cancellations},
                     {"blocked_cycles", f.blocked_cycles},
                     {"face_searched", f.face_searched},
                     {"face_search_complete", f.face_search_complete}};
      out.add("forest_plan.csv", plan_csv(f.plan));
    }
    if (monotone) {
      const MonotonicityVerdict v = check_cyclical_monotonicity(res.plan, max_cycle);
      json witness = json::array();
      for (const auto& [x, y] : v.witness) witness.push_back({x, y});
      s["monotonicity"] = {{"pass", v.pass},
                           {"gap", v.gap},
                           {"witness", witness},
                           {"cycles_checked", v.cycles_checked},
                           {"max_cycle", max_cycle}};
    }
    std::cout << s.dump(2) << "\n";
    out.add("wass.json", s.dump(2) + "\n");
    return 0;
  }
};

struct EmbedCmd {
  std::string kind;
  std::string spec;
  std::size_t k = 2;
  double p = 1.0;
  std::size_t pairs = 500;
  bool exhaustive = false;
  std::size_t depth = 4;
  double beta = 1.0 / 3.0;
  double epsilon = 0.5;
  std::size_t terms = 4;
  std::size_t dimension = 1;
  double alpha = 2.0;
  double d_prime = 2.0;
  std::uint32_t base_resolution = 17;
  std::uint32_t resolution = 200;

  PairSampling sampling(const Globals& g) const {
    return PairSampling{exhaustive, pairs, g.seed, g.threads};
  }

  int run(const Globals& g, Outputs& out) const {
    DistortionReport report;
    json extra;
    if (kind == "power") {
      report = audit_power_embedding(space_argument(spec, g), k, p, sampling(g));
      const PowerBounds b = power_bounds(k, p);
      extra = {{"k", k}, {"p", p}, {"lower_sup", b.lower_sup}};
    } else if (kind == "gray") {
      report = audit_gray_code(gray_code_embedding(k), p);
      extra = {{"k", k}, {"p", p}};
    } else if (kind == "ultrametric") {
      report = audit_ultrametric_embedding(ultrametric_embedding(k, depth), p, sampling(g));
      extra = {{"k", k}, {"p", p}, {"depth", depth}};
    } else if (kind == "geometric") {
      const GeometricConstants c = geometric_constants(beta, epsilon);
      report = audit_geometric_embedding(space_argument(spec, g), beta, epsilon, terms, sampling(g));
      extra = {{"beta", beta}, {"epsilon", epsilon}, {"terms", terms},
               {"A", c.A}, {"B", c.B}, {"lambda", c.lambda}};
    } else if (kind == "hc") {
      std::vector<double> a;
      for (std::size_t n = 1; n <= terms; ++n) a.push_back(std::pow(static_cast<double>(n), -alpha));
      const auto h = homothetic_hc_embedding(a, dimension, grid_cube(dimension, base_resolution, limits_of(g)),
                                             resolution);
      report = audit_homothetic_embedding(h, sampling(g));
      extra = {{"K", h.K()}, {"step", h.step()}, {"dimension", dimension}, {"terms", terms}};
      out.add("placement.csv", placement_csv(h.packing));
    } else if (kind == "subset") {
      const auto h = closed_subset_embedding(terms, dimension, d_prime,
                                             grid_cube(dimension, base_resolution, limits_of(g)),
                                             resolution);
      report = audit_closed_subset_embedding(h, sampling(g));
      extra = {{"C", h.C()}, {"step", h.step()}, {"dimension", dimension}, {"d_prime", d_prime}};
      out.add("placement.csv", placement_csv(h.packing));
    } else {
      throw UsageError("--kind must be one of power, gray, ultrametric, geometric, hc, subset");
    }
    json s = report_json(report);
    s["kind"] = kind;
    s["parameters"] = extra;
    std::cout << s.dump(2) << "\n";
    out.add("embed.json", s.dump(2) + "\n");
    if (!report.violations.empty()) {
      std::cerr << report.violations.size() << " theoretical-bound violation(s)\n";
      return kExitViolation;
    }
    return 0;
  }
};

DynamicalMap build_map(const FiniteMetricSpace& X, const std::string& name) {
  if (name == "identity") return identity_map(X);
  if (name.rfind("times", 0) == 0) {
    const std::string digits = name.substr(5);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw UsageError("map '" + name + "' is not of the form times<d>");
    }
    return circle_multiplication(X, static_cast<std::uint32_t>(std::stoul(digits)));
  }
  if (name == "tent") return interval_map(X, [](double x) { return 1.0 - std::abs(2.0 * x - 1.0); }, "tent");
  if (name == "logistic") return interval_map(X, [](double x) { return 4.0 * x * (1.0 - x); }, "logistic");
  throw UsageError("unknown map '" + name + "'");
}

struct DynCmd {
  std::string spec;
  std::string map = "times2";
  std::string mode = "entropy";
  EpsilonOptions eps;
  std::vector<std::size_t> n_grid;
  std::size_t n_max = 8;
  double p = 2.0;
  double beta = 0.9;
  std::size_t fixed_k = 0;
  std::size_t direct_pairs = 0;

  int run(const Globals& g, Outputs& out) const {
    const DynamicalMap phi = build_map(space_argument(spec, g), map);
    std::vector<std::size_t> ns = n_grid;
    if (ns.empty()) {
      for (std::size_t n = 1; n <= n_max; ++n) ns.push_back(n);
    }
    json s = {{"map", phi.label}, {"exact", phi.exact}, {"mode", mode}};
    if (mode == "entropy") {
      const EntropyReport r = entropy_estimate(phi, eps.grid(), ns, g.threads);
      json slopes = json::array();
      for (const auto& [e, slope] : r.slopes) slopes.push_back({e, slope});
      s["estimate"] = r.estimate;
      s["saturated"] = r.saturated;
      s["slopes"] = slopes;
      out.add("dyn.csv", entropy_csv(r));
    } else if (mode == "mmdim") {
      MmdimOptions opts;
      opts.beta = beta;
      if (fixed_k > 0) opts.fixed_k = fixed_k;
      opts.direct_pairs = direct_pairs;
      opts.seed = g.seed;
      opts.threads = g.threads;
      const MmdimReport r = mmdim_experiment(phi, p, eps.grid(), ns, opts);
      s["p"] = r.p;
      s["beta"] = r.beta;
      s["direct"] = {{"epsilon", r.direct_epsilon},
                     {"n", r.direct_n},
                     {"checked", r.direct_checked},
                     {"failures", r.direct_failures}};
      out.add("dyn.csv", mmdim_csv(r));
    } else {
      throw UsageError("--mode must be entropy or mmdim");
    }
    std::cout << s.dump(2) << "\n";
    out.add("dyn.json", s.dump(2) + "\n");
    return 0;
  }
};

struct SubsetsCmd {
  std::string spec;
  double epsilon = 0.1;
  std::size_t pairs = 200;
  std::size_t max_size = 8;
  std::size_t measure_pairs = 100;
  std::size_t max_support = 6;
  double d_prime = 1.0;
  std::size_t candidates = 0;
  double eta = 1.0;

  int run(const Globals& g, Outputs& out) const {
    const FiniteMetricSpace X = space_argument(spec, g);
    const Partition part = build_partition(X, epsilon, g.point_budget);
    const std::uint64_t fibre_seed = splitmix64(g.seed ^ 0x66696272ULL);
    const std::uint64_t measure_seed = splitmix64(g.seed ^ 0x6d656173ULL);
    const OccupancyAudit fibres = audit_subset_fibres(part, pairs, max_size, fibre_seed);
    const OccupancyAudit measures = audit_measure_occupancy(part, measure_pairs, max_support, measure_seed);
    auto audit_json = [](const OccupancyAudit& a) {
      return json{{"pairs", a.pairs}, {"failures", a.failures}, {"worst_ratio", a.worst_ratio}, {"bound", a.bound}};
    };
    json s = {{"epsilon", epsilon},
              {"blocks", part.block_count()},
              {"max_block_diameter", part.max_block_diameter()},
              {"fibres", audit_json(fibres)},
              {"measures", audit_json(measures)}};
    if (candidates > 0) {
      const auto b = wasserstein_covering_bound(X, epsilon, d_prime, candidates, max_support,
                                                splitmix64(g.seed ^ 0x636f7672ULL), eta);
      s["covering_bound"] = {{"scale", b.scale},
                             {"log_bound", b.log_bound},
                             {"bound", null_if_infinite(b.bound)},
                             {"ideal_blocks", b.ideal_blocks},
                             {"candidates", b.candidates},
                             {"observed", b.observed},
                             {"consistent", b.consistent}};
    }
    std::cout << s.dump(2) << "\n";
    out.add("partition.csv", partition_csv(part));
    out.add("subsets.json", s.dump(2) + "\n");
    return 0;
  }
};

void print_axiom(const AxiomViolation& e) {
  const auto& w = e.witness();
  std::cerr << "axiom violation (" << axiom_name(e.axiom()) << "): witness " << w[0] << " " << w[1] << " "
            << w[2] << ", gap " << format_real(e.gap()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-scale experiments on metric largeness"};
  app.require_subcommand(1);

  Globals g;
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "random seed (mandatory)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--point-budget", g.point_budget, "largest explicit space or partition");
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);

  SpaceCmd space;
  auto* space_app = app.add_subcommand("space", "build, describe and validate a space");
  space_app->add_option("--spec", space.spec, "space JSON (inline or file)");
  space_app->add_option("--validate", space.validate, "run the metric validator");

  CoverCmd cover;
  auto* cover_app = app.add_subcommand("cover", "covering and packing profile");
  cover_app->add_option("--spec", cover.spec, "space JSON (inline or file)");
  cover_app->add_option("--sample-size", cover.sample_size, "points kept for the greedy");
  cover.eps.attach(cover_app);

  CritCmd crit;
  auto* crit_app = app.add_subcommand("crit", "critical parameter estimate");
  crit_app->add_option("--spec", crit.cover.spec, "space JSON (inline or file)");
  crit_app->add_option("--sample-size", crit.cover.sample_size, "points kept for the greedy");
  crit_app->add_option("--family", crit.family, "D, I, I_sigma or P");
  crit_app->add_option("--sigma", crit.sigma, "sigma for I_sigma");
  crit_app->add_option("--flavor", crit.flavor, "cover or packing counts");
  crit.cover.eps.attach(crit_app);

  WassCmd wass;
  auto* wass_app = app.add_subcommand("wass", "Wasserstein distance between two measures");
  wass_app->add_option("--spec", wass.spec, "space JSON (inline or file)");
  wass_app->add_option("--mu", wass.mu_path, "first measure CSV");
  wass_app->add_option("--nu", wass.nu_path, "second measure CSV");
  wass_app->add_option("--p", wass.p, "exponent")->check(CLI::Range(1.0, 1e6));
  wass_app->add_flag("--forest", wass.forest, "canonicalize the plan to a forest");
  wass_app->add_flag("--monotone", wass.monotone, "check cyclical monotonicity");
  wass_app->add_option("--max-cycle", wass.max_cycle, "longest cycle checked");

  EmbedCmd embed;
  auto* embed_app = app.add_subcommand("embed", "distortion audit of an embedding");
  embed_app->add_option("--kind", embed.kind, "power, gray, ultrametric, geometric, hc or subset");
  embed_app->add_option("--spec", embed.spec, "base space JSON for power and geometric");
  embed_app->add_option("--k", embed.k, "tuple length");
  embed_app->add_option("--p", embed.p, "exponent");
  embed_app->add_option("--pairs", embed.pairs, "random pairs");
  embed_app->add_flag("--exhaustive", embed.exhaustive, "all pairs");
  embed_app->add_option("--depth", embed.depth, "ultrametric depth");
  embed_app->add_option("--beta", embed.beta, "geometric ratio");
  embed_app->add_option("--epsilon", embed.epsilon, "geometric scale parameter");
  embed_app->add_option("--terms", embed.terms, "number of coordinates");
  embed_app->add_option("--dimension", embed.dimension, "cube dimension");
  embed_app->add_option("--alpha", embed.alpha, "weights n^-alpha for hc");
  embed_app->add_option("--d-prime", embed.d_prime, "weights n^-d' for subset");
  embed_app->add_option("--base-resolution", embed.base_resolution, "coordinate grid resolution");
  embed_app->add_option("--resolution", embed.resolution, "target grid resolution");

  DynCmd dyn;
  auto* dyn_app = app.add_subcommand("dyn", "entropy and mean dimension tables");
  dyn_app->add_option("--spec", dyn.spec, "space JSON (inline or file)");
  dyn_app->add_option("--map", dyn.map, "times<d>, identity, tent or logistic");
  dyn_app->add_option("--mode", dyn.mode, "entropy or mmdim");
  dyn_app->add_option("--n", dyn.n_grid, "iteration counts");
  dyn_app->add_option("--n-max", dyn.n_max, "use n = 1..n-max when --n is absent");
  dyn_app->add_option("--p", dyn.p, "exponent for mmdim");
  dyn_app->add_option("--beta", dyn.beta, "k schedule factor");
  dyn_app->add_option("--fixed-k", dyn.fixed_k, "fixed tuple length (0 = schedule)");
  dyn_app->add_option("--direct-pairs", dyn.direct_pairs, "pairs checked with the solver");
  dyn.eps.attach(dyn_app);

  SubsetsCmd subsets;
  auto* subsets_app = app.add_subcommand("subsets", "occupancy maps and covering bound");
  subsets_app->add_option("--spec", subsets.spec, "space JSON (inline or file)");
  subsets_app->add_option("--epsilon", subsets.epsilon, "partition radius");
  subsets_app->add_option("--pairs", subsets.pairs, "subset pairs for the fibre audit");
  subsets_app->add_option("--max-size", subsets.max_size, "largest random subset");
  subsets_app->add_option("--measure-pairs", subsets.measure_pairs, "measure pairs for the W2 audit");
  subsets_app->add_option("--max-support", subsets.max_support, "largest random support");
  subsets_app->add_option("--d-prime", subsets.d_prime, "exponent d' of the covering bound");
  subsets_app->add_option("--candidates", subsets.candidates, "random measures for the bound (0 = skip)");
  subsets_app->add_option("--eta", subsets.eta, "slack in the covering bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!g.config.empty()) apply_config(app, g.config);
    if (!seed) throw UsageError("--seed is mandatory");
    g.seed = *seed;
    Outputs out(g.out);
    int code = 0;
    if (space_app->parsed()) code = space.run(g, out);
    if (cover_app->parsed()) code = cover.run(g, out);
    if (crit_app->parsed()) code = crit.run(g, out);
    if (wass_app->parsed()) code = wass.run(g, out);
    if (embed_app->parsed()) code = embed.run(g, out);
    if (dyn_app->parsed()) code = dyn.run(g, out);
    if (subsets_app->parsed()) code = subsets.run(g, out);
    out.commit();
    return code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    std::cerr << "JSON error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AxiomViolation& e) {
    print_axiom(e);
    return kExitAxiom;
  } catch (const InsufficientData& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return kExitData;
  } catch (const DegenerateProfile& e) {
    std::cerr << "degenerate profile: " << e.what() << "\n";
    return kExitData;
  } catch (const MassMismatch& e) {
    std::cerr << "mass mismatch: " << e.what() << "\n";
    return kExitMass;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
