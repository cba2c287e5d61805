#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sgotto/ensemble.hpp"

namespace sgotto {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct RunConfig {
  std::filesystem::path output_dir = ".";
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  ///< 0 = auto
  Boundary boundary = Boundary::Antiperiodic;
  bool uniform_baseline = false;
  bool quiet = false;    ///< suppress progress lines on stderr

  EnsembleOptions ensemble_options() const;
};

/// Paths of the files a command wrote.
struct Artifacts {
  std::vector<std::filesystem::path> files;
  std::filesystem::path manifest;
};

namespace columns {
inline const std::vector<std::string> kCriticalField{"n", "mean_h_c", "stderr_h_c", "samples"};
inline const std::vector<std::string> kRegimeMap{
    "t_c",    "h_i",           "mean_q_c",              "mean_q_h",        "mean_w",
    "regime", "engine_fraction", "refrigerator_fraction", "heater_fraction",
    "accelerator_fraction"};
inline const std::vector<std::string> kSweep{
    "n",     "h_i",   "w_per_spin", "stderr_w", "pi_per_spin",     "pi_r_per_spin",
    "eta",   "eta_r", "regime",     "h_c_mean", "griffiths_marker"};
inline const std::vector<std::string> kScaling{
    "t_h",  "t_c",   "peak",  "n", "h_i_peak", "quench_midpoint", "value_per_spin",
    "value", "alpha", "b",     "r_squared"};
}  // namespace columns

Artifacts cmd_critical_field(const RunConfig& config, const std::vector<std::size_t>& sizes,
                             std::size_t samples);

struct RegimeMapRequest {
  double t_h = 0.2;
  std::size_t n = 50;
  std::size_t t_c_points = 64;  ///< t_c evenly spaced over [0, t_h]
  FieldGrid h_i_grid{-0.5, 2.0, 64};
  double delta_h = kDefaultQuench;
  std::size_t realizations = kDefaultRealizations;
};

Artifacts cmd_regime_map(const RunConfig& config, const RegimeMapRequest& request);

/// spec.master_seed is taken from config.
Artifacts cmd_sweep(const RunConfig& config, SweepSpec spec);

struct ScalingRequest {
  ScalingQuantity quantity = ScalingQuantity::Work;
  std::vector<double> t_h_grid;
  ColdBathRule t_c_rule;
  std::vector<std::size_t> n_list{20, 30, 40, 50};
  FieldGrid h_i_grid;
  double delta_h = kDefaultQuench;
  std::size_t realizations = kDefaultRealizations;
  /// Spread of the tracked quench midpoint that counts as divergence. NaN
  /// means 1.5 h_i grid steps: peak positions sit on the grid, so spreads
  /// are whole steps and this demands two of them without a float tie.
  double divergence_threshold = std::numeric_limits<double>::quiet_NaN();
  /// Test hook: replace simulated curves by synthetic peaks whose total
  /// height grows exactly as n^alpha.
  std::optional<double> planted_alpha;
};

Artifacts cmd_scaling(const RunConfig& config, const ScalingRequest& request);

/// Re-analyzes an existing sweep.csv and writes peaks.json next to the
/// other outputs.
Artifacts cmd_peaks(const RunConfig& config, const std::filesystem::path& sweep_csv);

/// Synthetic per-spin curve used by the planted scaling mode.
Curve planted_curve(std::span<const double> h_i, std::size_t n, double alpha,
                    ScalingQuantity quantity);

}  // namespace sgotto
