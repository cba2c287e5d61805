#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>

#include "sgotto/commands.hpp"
#include "sgotto/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitOther = 1;

struct Options {
  std::string out = ".";
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string boundary = "abc";
  bool uniform_baseline = false;
  bool quiet = false;

  double t_h = 0.2;
  std::optional<double> t_c;
  std::optional<double> t_c_ratio;
  std::size_t n = 50;
  std::vector<std::size_t> n_list;
  double hi_min = -0.5;
  double hi_max = 2.0;
  std::optional<std::size_t> hi_points;
  double dh = sgotto::kDefaultQuench;
  std::size_t realizations = sgotto::kDefaultRealizations;
  std::string mode = "engine";

  std::size_t samples = 10000;
  std::size_t tc_points = 64;

  std::string quantity = "W";
  double th_min = 0.1;
  double th_max = 1.5;
  std::size_t th_points = 15;
  std::optional<double> divergence_threshold;
  std::optional<double> planted_alpha;

  std::string in;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads (0 = auto)")->capture_default_str();
  sub->add_option("--boundary", o.boundary, "Boundary condition")
      ->check(CLI::IsMember({"abc", "pbc"}))
      ->capture_default_str();
  sub->add_flag("--uniform-baseline", o.uniform_baseline, "Use J_i = 1 for every bond");
  sub->add_flag("--quiet", o.quiet, "No progress output");
}

void add_grid(CLI::App* sub, Options& o) {
  sub->add_option("--hi-min", o.hi_min, "Smallest compression field")->capture_default_str();
  sub->add_option("--hi-max", o.hi_max, "Largest compression field")->capture_default_str();
  sub->add_option("--hi-points", o.hi_points, "Number of h_i grid points");
  sub->add_option("--dh", o.dh, "Quench amplitude delta_h")->capture_default_str();
  sub->add_option("--realizations", o.realizations, "Disorder realizations")->capture_default_str();
}

void add_baths(CLI::App* sub, Options& o) {
  auto* tc = sub->add_option("--tc", o.t_c, "Fixed cold-bath temperature");
  auto* ratio = sub->add_option("--tc-ratio", o.t_c_ratio, "Cold bath as a fraction of t_h");
  tc->excludes(ratio);
}

sgotto::RunConfig run_config(const Options& o) {
  sgotto::RunConfig c;
  c.output_dir = o.out;
  c.master_seed = o.seed;
  c.threads = o.threads;
  c.boundary = o.boundary == "pbc" ? sgotto::Boundary::Periodic : sgotto::Boundary::Antiperiodic;
  c.uniform_baseline = o.uniform_baseline;
  c.quiet = o.quiet;
  return c;
}

sgotto::ColdBathRule cold_rule(const Options& o, double default_ratio) {
  if (o.t_c) return sgotto::ColdBathRule::fixed(*o.t_c);
  return sgotto::ColdBathRule::fraction_of_hot(o.t_c_ratio.value_or(default_ratio));
}

std::vector<std::size_t> sizes(const Options& o, std::vector<std::size_t> fallback) {
  return o.n_list.empty() ? fallback : o.n_list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Otto cycle on a disordered transverse-field Ising ring"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  app.require_subcommand(1);
  Options o;

  auto* critical = app.add_subcommand("critical-field", "Finite-size critical field h_c(N)");
  add_common(critical, o);
  critical->add_option("--n-list", o.n_list, "System sizes")->delimiter(',');
  critical->add_option("--samples", o.samples, "Coupling samples per size")->capture_default_str();

  auto* regime = app.add_subcommand("regime-map", "Working regime over (t_c, h_i)");
  add_common(regime, o);
  add_grid(regime, o);
  regime->add_option("--th", o.t_h, "Hot-bath temperature")->capture_default_str();
  regime->add_option("--n", o.n, "System size")->capture_default_str();
  regime->add_option("--tc-points", o.tc_points, "Number of t_c grid points in [0, t_h]")
      ->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "W/N, Pi/N and Pi_R/N over h_i");
  add_common(sweep, o);
  add_grid(sweep, o);
  add_baths(sweep, o);
  sweep->add_option("--th", o.t_h, "Hot-bath temperature")->capture_default_str();
  auto* sweep_n = sweep->add_option("--n", o.n, "System size");
  sweep->add_option("--n-list", o.n_list, "System sizes")->delimiter(',')->excludes(sweep_n);
  sweep->add_option("--mode", o.mode, "Study")
      ->check(CLI::IsMember({"engine", "refrigerator"}))
      ->capture_default_str();

  auto* scaling = app.add_subcommand("scaling", "Peak scaling exponents over t_h");
  add_common(scaling, o);
  add_grid(scaling, o);
  add_baths(scaling, o);
  scaling->add_option("--n-list", o.n_list, "System sizes (>= 3 distinct)")->delimiter(',');
  scaling->add_option("--quantity", o.quantity, "Fitted quantity")
      ->check(CLI::IsMember({"W", "Pi", "PiR"}))
      ->capture_default_str();
  scaling->add_option("--th-min", o.th_min, "Lowest t_h")->capture_default_str();
  scaling->add_option("--th-max", o.th_max, "Highest t_h")->capture_default_str();
  scaling->add_option("--th-points", o.th_points, "Number of t_h values")->capture_default_str();
  scaling->add_option("--divergence-threshold", o.divergence_threshold,
                      "Midpoint spread that counts as divergence (default: 1.5 h_i steps)");
  scaling->add_option("--planted-alpha", o.planted_alpha)->group("");

  auto* peaks = app.add_subcommand("peaks", "Re-analyze an existing sweep.csv");
  add_common(peaks, o);
  peaks->add_option("--in", o.in, "sweep.csv to analyze")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    const auto config = run_config(o);
    if (critical->parsed()) {
      sgotto::cmd_critical_field(config, sizes(o, {100, 1000, 10000}), o.samples);
    } else if (regime->parsed()) {
      sgotto::RegimeMapRequest r;
      r.t_h = o.t_h;
      r.n = o.n;
      r.t_c_points = o.tc_points;
      r.h_i_grid = {o.hi_min, o.hi_max, o.hi_points.value_or(64)};
      r.delta_h = o.dh;
      r.realizations = o.realizations;
      sgotto::cmd_regime_map(config, r);
    } else if (sweep->parsed()) {
      sgotto::SweepSpec s;
      const bool engine = o.mode == "engine";
      s.mode = engine ? sgotto::StudyMode::EngineStudy : sgotto::StudyMode::RefrigeratorStudy;
      s.n_list = sizes(o, {o.n});
      s.h_i_grid = {o.hi_min, o.hi_max, o.hi_points.value_or(101)};
      s.delta_h = o.dh;
      s.t_h = o.t_h;
      s.t_c_rule = cold_rule(o, engine ? 0.25 : 0.75);
      s.realizations = o.realizations;
      sgotto::cmd_sweep(config, s);
    } else if (scaling->parsed()) {
      sgotto::ScalingRequest r;
      r.quantity = o.quantity == "W"    ? sgotto::ScalingQuantity::Work
                   : o.quantity == "Pi" ? sgotto::ScalingQuantity::Performance
                                        : sgotto::ScalingQuantity::RefrigeratorPerformance;
      const bool fridge = r.quantity == sgotto::ScalingQuantity::RefrigeratorPerformance;
      r.t_h_grid = sgotto::FieldGrid{o.th_min, o.th_max, o.th_points}.values();
      r.t_c_rule = cold_rule(o, fridge ? 0.75 : 0.25);
      r.n_list = sizes(o, {20, 30, 40, 50});
      r.h_i_grid = {o.hi_min, o.hi_max, o.hi_points.value_or(101)};
      r.delta_h = o.dh;
      r.realizations = o.realizations;
      if (o.divergence_threshold) r.divergence_threshold = *o.divergence_threshold;
      r.planted_alpha = o.planted_alpha;
      sgotto::cmd_scaling(config, r);
    } else if (peaks->parsed()) {
      sgotto::cmd_peaks(config, o.in);
    }
  } catch (const sgotto::InvalidArgument& e) {
    std::cerr << "sgotto: configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const sgotto::NumericalFailure& e) {
    std::cerr << "sgotto: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const sgotto::DiagonalizationError& e) {
    std::cerr << "sgotto: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const sgotto::ClausiusViolation& e) {
    std::cerr << "sgotto: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "sgotto: " << e.what() << '\n';
    return kExitOther;
  }
  return 0;
}
