#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace sgotto {

/// A disorder-averaged curve over the compression field h_i. `err` holds the
/// per-point standard errors when known and is otherwise empty.
struct Curve {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;
};

struct Peak {
  std::size_t index = 0;
  double location = 0.0;
  double height = 0.0;
  double prominence = 0.0;
};

struct CurveMinimum {
  std::size_t index = 0;
  double location = 0.0;
  double value = 0.0;
};

/// Result of peak detection. With two peaks the lower-h_i one is the quantum
/// peak and the higher-h_i one the classical peak; a lone peak goes to
/// `single`.
struct PeakSet {
  std::optional<Peak> quantum;
  std::optional<Peak> classical;
  std::optional<Peak> single;
  std::optional<CurveMinimum> separating_minimum;

  bool empty() const noexcept { return !quantum && !classical && !single; }
  std::size_t count() const noexcept {
    return (quantum ? 1 : 0) + (classical ? 1 : 0) + (single ? 1 : 0);
  }
  /// The tallest reported peak, if any.
  std::optional<Peak> highest() const;
};

struct PeakOptions {
  /// Defaults to twice the median standard error, or 1e-3 of the largest
  /// |y| when the curve carries no errors.
  std::optional<double> min_prominence;
  /// Locate maxima on a 3-point moving average (noisy low-R runs).
  bool smooth = false;
  /// Parabolic refinement of location and height through the 3 points
  /// around each discrete maximum.
  bool refine = false;
};

double default_min_prominence(const Curve& curve);

/// Discrete local maxima with prominence >= min_prominence (and > 0). Keeps
/// the two most prominent. Requires >= 5 points, strictly increasing x and
/// finite y; otherwise InvalidArgument.
PeakSet find_peaks(const Curve& curve, double min_prominence,
                   bool smooth = false, bool refine = false);

PeakSet find_peaks(const Curve& curve, const PeakOptions& options = {});

/// Zero crossing of (quantum - classical) over an ascending temperature grid,
/// by linear interpolation between the first bracketing pair. Empty when the
/// difference never changes sign.
std::optional<double> peak_crossover(std::span<const double> temperatures,
                                     std::span<const double> quantum_heights,
                                     std::span<const double> classical_heights);

struct SizeValue {
  double n = 0.0;
  double value = 0.0;
};

/// value ~ b * n^alpha, fitted by least squares on (ln n, ln value).
struct ScalingFit {
  double alpha = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
  std::vector<SizeValue> points_used;
};

/// Throws InvalidArgument for fewer than 3 points, fewer than 2 distinct
/// sizes, or any value <= 0.
ScalingFit fit_power_law(std::span<const SizeValue> points);

/// Centre of the quench window [h_i, h_i + delta_h].
constexpr double quench_midpoint(double h_i_peak, double delta_h) noexcept {
  return h_i_peak + delta_h / 2.0;
}

/// Spread (max - min) across sizes of each temperature's peak positions.
/// `positions[t]` lists one position per size at temperature index t.
std::vector<double> position_spread(const std::vector<std::vector<double>>& positions);

/// First temperature from which the spread of peak positions across sizes
/// stays >= threshold for the rest of the grid. Empty if it never does.
std::optional<double> divergence_onset(std::span<const double> temperatures,
                                       std::span<const double> spread,
                                       double threshold);

}  // namespace sgotto
