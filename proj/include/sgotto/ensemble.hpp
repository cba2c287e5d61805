#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgotto/analysis.hpp"
#include "sgotto/bdg.hpp"
#include "sgotto/otto.hpp"
#include "sgotto/spinglass.hpp"

namespace sgotto {

inline constexpr std::size_t kDefaultRealizations = 512;

struct EnsembleOptions {
  Boundary boundary = Boundary::Antiperiodic;
  /// Replace every sampled realization with J_i = uniform_coupling.
  bool uniform_baseline = false;
  double uniform_coupling = 1.0;
  /// Worker threads; 0 = one per hardware thread.
  unsigned threads = 0;
  /// Also average eta, pi, eta_r, pi_r per realization (for comparison with
  /// the ratios of mean heats).
  bool per_realization_ratios = false;
};

/// Realization r of size n: sample_couplings(n, derive_seed(master, n, r)),
/// or the uniform chain when the baseline mode is on.
DisorderRealization realization_for(std::size_t n, std::size_t r,
                                    std::uint64_t master_seed,
                                    const EnsembleOptions& options);

struct MeanStat {
  double mean = 0.0;
  /// Sample standard deviation / sqrt(R); NaN when R == 1.
  double std_err = std::numeric_limits<double>::quiet_NaN();
};

MeanStat mean_stat(std::span<const double> values);

struct RatioSummary {
  MeanStat eta;
  MeanStat pi;
  MeanStat eta_r;
  MeanStat pi_r;
};

struct EnsembleStats {
  std::size_t n = 0;
  std::size_t realizations = 0;  ///< realizations that entered the averages
  std::size_t skipped = 0;
  double h_i = 0.0;
  double h_f = 0.0;
  double t_c = 0.0;
  double t_h = 0.0;

  MeanStat q_c;
  MeanStat q_h;
  MeanStat w;  ///< w.mean is defined as q_c.mean + q_h.mean

  /// Ratios of the ensemble-mean heats.
  EngineMetrics engine;
  RefrigeratorMetrics refrigerator;
  /// Regime of the ensemble-mean heats.
  RegimeClass regime;

  Regime majority_regime = Regime::Engine;
  /// Fractions of realizations in Engine, Refrigerator, Heater, Accelerator.
  std::array<double, 4> regime_fractions{};

  std::optional<RatioSummary> per_realization;

  double per_spin(double total) const noexcept {
    return total / static_cast<double>(n);
  }
};

/// Coupling realizations of one size with their spectra at a fixed list of
/// fields, computed once and reused for any bath temperatures. A realization
/// whose diagonalization fails is skipped at every field; more than 1% skips
/// throws NumericalFailure.
class SpectrumBank {
 public:
  SpectrumBank(std::size_t n, std::vector<double> fields,
               std::size_t realizations, std::uint64_t master_seed,
               const EnsembleOptions& options);

  std::size_t n() const noexcept { return n_; }
  std::size_t realizations() const noexcept { return realizations_; }
  std::size_t skipped() const noexcept { return skipped_; }
  std::span<const double> fields() const noexcept { return fields_; }

  bool valid(std::size_t r) const noexcept { return valid_[r] != 0; }
  std::span<const double> energies(std::size_t r, std::size_t field) const noexcept;

  /// Per-realization coupling statistics (valid realizations only).
  const GriffithsInputs& coupling_stats(std::size_t r) const noexcept {
    return coupling_stats_[r];
  }
  double h_c(std::size_t r) const noexcept { return h_c_[r]; }

  /// Ensemble means of delta_c, max|J| and min|J|.
  GriffithsInputs mean_coupling_stats() const;
  /// exp of the disorder-averaged delta_c.
  double mean_h_c() const;

  /// Largest energy over all valid realizations at the given field.
  double max_energy(std::size_t field) const noexcept { return max_energy_[field]; }

  /// Averages one cycle between fields[field_i] and fields[field_f].
  EnsembleStats evaluate(std::size_t field_i, std::size_t field_f, double t_c,
                         double t_h, bool per_realization_ratios = false) const;

 private:
  std::size_t n_;
  std::vector<double> fields_;
  std::size_t realizations_;
  std::size_t skipped_ = 0;
  std::vector<double> energies_;  // [r][field][mode]
  std::vector<char> valid_;
  std::vector<GriffithsInputs> coupling_stats_;
  std::vector<double> h_c_;
  std::vector<double> max_energy_;
};

/// Disorder-averaged cycle at one parameter point; h_f = h_i + delta_h.
EnsembleStats run_point(std::size_t n, double h_i, double delta_h, double t_c,
                        double t_h, std::size_t realizations,
                        std::uint64_t master_seed,
                        const EnsembleOptions& options = {});

/// Arithmetic grid of compression fields.
struct FieldGrid {
  double start = -0.5;
  double stop = 2.0;
  std::size_t points = 101;

  std::vector<double> values() const;
};

/// Cold-bath temperature either fixed or as a fraction of t_h.
struct ColdBathRule {
  enum class Kind { Fixed, FractionOfHot };
  Kind kind = Kind::FractionOfHot;
  double value = 0.25;

  static ColdBathRule fixed(double t_c) { return {Kind::Fixed, t_c}; }
  static ColdBathRule fraction_of_hot(double ratio) {
    return {Kind::FractionOfHot, ratio};
  }
  double cold_temperature(double t_h) const noexcept {
    return kind == Kind::Fixed ? value : value * t_h;
  }
};

enum class StudyMode { EngineStudy, RefrigeratorStudy, RegimeMap };

struct SweepSpec {
  std::vector<std::size_t> n_list{50};
  FieldGrid h_i_grid;
  double delta_h = kDefaultQuench;
  double t_h = 0.2;
  ColdBathRule t_c_rule;
  std::size_t realizations = kDefaultRealizations;
  std::uint64_t master_seed = 0;
  StudyMode mode = StudyMode::EngineStudy;
};

/// Throws InvalidArgument when the spec violates its invariants.
void validate(const SweepSpec& spec);

/// Where the ensemble-mean coupling statistics put the Griffiths boundaries
/// on the positive field axis.
struct GriffithsBoundaries {
  double critical = 0.0;           ///< exp(mean delta_c)
  double ordered_boundary = 0.0;   ///< mean min|J|
  double disordered_boundary = 0.0;///< mean max|J|
};

/// Griffiths label of compression field h_i against ensemble statistics.
/// The model is symmetric under h -> -h, so |h_i| is classified; h_i == 0 is
/// the ln h -> -inf limit (StronglyOrdered).
GriffithsLabel griffiths_marker(const GriffithsInputs& ensemble, double h_i);

struct SweepRow {
  std::size_t n = 0;
  double h_i = 0.0;
  EnsembleStats stats;
  double w_per_spin = 0.0;
  double std_err_w_per_spin = 0.0;
  double pi_per_spin = 0.0;    ///< 0 where mean W <= 0
  double pi_r_per_spin = 0.0;  ///< 0 where mean W >= 0
  double h_c_mean = 0.0;
  GriffithsLabel griffiths = GriffithsLabel::Critical;
};

/// One SpectrumBank per size over the sweep grid, evaluated at any number of
/// bath temperatures.
class SweepEvaluator {
 public:
  SweepEvaluator(std::vector<std::size_t> n_list, FieldGrid grid, double delta_h,
                 std::size_t realizations, std::uint64_t master_seed,
                 const EnsembleOptions& options);

  std::span<const std::size_t> n_list() const noexcept { return n_list_; }
  std::span<const double> h_i_values() const noexcept { return h_i_; }
  double delta_h() const noexcept { return delta_h_; }
  const SpectrumBank& bank(std::size_t size_index) const { return banks_.at(size_index); }
  GriffithsBoundaries griffiths_boundaries(std::size_t size_index) const;

  /// |n_list| x |grid| rows, sizes outermost.
  std::vector<SweepRow> rows(double t_c, double t_h) const;

  /// Rows for one size only.
  std::vector<SweepRow> rows_for(std::size_t size_index, double t_c, double t_h) const;

 private:
  std::vector<std::size_t> n_list_;
  std::vector<double> h_i_;
  double delta_h_;
  EnsembleOptions options_;
  std::vector<SpectrumBank> banks_;
};

/// Engine sweep: W/N and clipped Pi/N over (n, h_i).
std::vector<SweepRow> sweep_work_performance(const SweepSpec& spec,
                                             const EnsembleOptions& options = {});

/// Refrigerator sweep: clipped Pi_R/N over (n, h_i).
std::vector<SweepRow> sweep_refrigerator(const SweepSpec& spec,
                                         const EnsembleOptions& options = {});

struct RegimeCell {
  double t_c = 0.0;
  double h_i = 0.0;
  double mean_q_c = 0.0;
  double mean_q_h = 0.0;
  double mean_w = 0.0;
  RegimeClass regime;  ///< of the ensemble-mean heats
  std::array<double, 4> regime_fractions{};
};

/// Regime of the mean heats on the (t_c, h_i) grid for spec.n_list[0]; rows
/// ordered t_c outermost. Requires every t_c in [0, t_h].
std::vector<RegimeCell> regime_map(const SweepSpec& spec,
                                   std::span<const double> t_c_grid,
                                   const EnsembleOptions& options = {});

enum class ScalingQuantity { Work, Performance, RefrigeratorPerformance };

std::string_view to_string(ScalingQuantity q) noexcept;

struct PeakSample {
  std::size_t n = 0;
  double h_i = 0.0;
  double per_spin = 0.0;
  double value = 0.0;  ///< per_spin * n, the quantity that is fitted
};

/// One peak followed across sizes at a fixed temperature.
struct PeakTrack {
  std::string label;  ///< "quantum", "classical" or "dominant"
  std::vector<PeakSample> samples;
  std::optional<ScalingFit> fit;
};

struct ScalingPoint {
  double t_h = 0.0;
  double t_c = 0.0;
  std::vector<PeakSet> peaks;  ///< one per size, same order as n_list
  std::vector<PeakTrack> tracks;
};

struct ScalingStudy {
  ScalingQuantity quantity = ScalingQuantity::Work;
  std::vector<std::size_t> n_list;
  double delta_h = kDefaultQuench;
  std::vector<ScalingPoint> points;

  /// Temperature where the quantum and classical peak heights cross, per
  /// size (Work / Performance only).
  std::vector<std::optional<double>> crossover;
};

/// Per-spin curve of `quantity` for size index `size_index` at temperature
/// t_h. Injectable so planted synthetic curves can drive the study.
using CurveSource =
    std::function<Curve(std::size_t size_index, std::size_t n, double t_h, double t_c)>;

/// Needs >= 3 distinct sizes. For Work and Performance the quantum and
/// classical peaks are tracked; for RefrigeratorPerformance the tallest peak.
ScalingStudy scaling_study(std::span<const std::size_t> n_list,
                           std::span<const double> t_h_grid,
                           ScalingQuantity quantity, const ColdBathRule& t_c_rule,
                           double delta_h, const CurveSource& source,
                           const PeakOptions& peak_options = {});

/// Builds the curves from a SweepEvaluator over spec's sizes and grid.
ScalingStudy scaling_study(const SweepSpec& spec, std::span<const double> t_h_grid,
                           ScalingQuantity quantity,
                           const EnsembleOptions& options = {},
                           const PeakOptions& peak_options = {});

/// Spread across sizes of the quench midpoint of track `label`, one value per
/// study point; NaN where fewer than two sizes report that peak.
std::vector<double> midpoint_spread(const ScalingStudy& study, std::string_view label);

/// Extracts the per-spin curve of `quantity` from sweep rows of one size.
Curve quantity_curve(std::span<const SweepRow> rows, ScalingQuantity quantity);

}  // namespace sgotto
