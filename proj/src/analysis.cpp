#include "sgotto/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sgotto/error.hpp"

namespace sgotto {

std::optional<Peak> PeakSet::highest() const {
  std::optional<Peak> best;
  for (const auto* p : {&quantum, &classical, &single}) {
    if (*p && (!best || (*p)->height > best->height)) best = **p;
  }
  return best;
}

double default_min_prominence(const Curve& curve) {
  if (!curve.err.empty()) {
    std::vector<double> e;
    e.reserve(curve.err.size());
    for (double v : curve.err) {
      if (std::isfinite(v)) e.push_back(v);
    }
    if (!e.empty()) {
      const auto mid = e.begin() + static_cast<std::ptrdiff_t>(e.size() / 2);
      std::nth_element(e.begin(), mid, e.end());
      double median = *mid;
      if (e.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(e.begin(), mid));
      }
      if (median > 0.0) return 2.0 * median;
    }
  }
  double scale = 0.0;
  for (double v : curve.y) scale = std::max(scale, std::abs(v));
  return 1e-3 * scale;
}

namespace {

void validate_curve(const Curve& curve) {
  if (curve.x.size() != curve.y.size()) {
    throw InvalidArgument(fmt::format("curve has {} x values but {} y values",
                                      curve.x.size(), curve.y.size()));
  }
  if (curve.x.size() < 5) {
    throw InvalidArgument(fmt::format("peak search needs >= 5 points, got {}",
                                      curve.x.size()));
  }
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (!std::isfinite(curve.x[i]) || !std::isfinite(curve.y[i])) {
      throw InvalidArgument(fmt::format("non-finite curve point at index {}", i));
    }
    if (i > 0 && !(curve.x[i] > curve.x[i - 1])) {
      throw InvalidArgument(fmt::format(
          "curve x must be strictly increasing (index {}: {} after {})", i,
          curve.x[i], curve.x[i - 1]));
    }
  }
}

// Height above the higher of the two lowest points reachable on either side
// before meeting a strictly taller point.
double prominence(std::span<const double> y, std::size_t i) {
  double left_min = y[i];
  for (std::size_t k = i; k-- > 0;) {
    if (y[k] > y[i]) break;
    left_min = std::min(left_min, y[k]);
  }
  double right_min = y[i];
  for (std::size_t k = i + 1; k < y.size(); ++k) {
    if (y[k] > y[i]) break;
    right_min = std::min(right_min, y[k]);
  }
  return y[i] - std::max(left_min, right_min);
}

Peak refine_parabolic(const Curve& curve, Peak p) {
  const std::size_t i = p.index;
  if (i == 0 || i + 1 >= curve.x.size()) return p;
  const double x0 = curve.x[i - 1], x1 = curve.x[i], x2 = curve.x[i + 1];
  const double y0 = curve.y[i - 1], y1 = curve.y[i], y2 = curve.y[i + 1];
  // Lagrange parabola through the three points; vertex by derivative root.
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (!(curvature < 0.0)) return p;
  const double vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
  if (vertex < x0 || vertex > x2) return p;
  p.location = vertex;
  p.height = y1 + d01 * (vertex - x1) + curvature * (vertex - x0) * (vertex - x1);
  return p;
}

}  // namespace

PeakSet find_peaks(const Curve& curve, double min_prominence, bool smooth,
                   bool refine) {
  validate_curve(curve);
  const std::size_t size = curve.y.size();

  std::vector<double> search = curve.y;
  if (smooth) {
    for (std::size_t i = 1; i + 1 < size; ++i) {
      search[i] = (curve.y[i - 1] + curve.y[i] + curve.y[i + 1]) / 3.0;
    }
  }

  std::vector<Peak> candidates;
  for (std::size_t i = 1; i + 1 < size; ++i) {
    if (!(search[i] > search[i - 1] && search[i] >= search[i + 1])) continue;
    const double prom = prominence(search, i);
    if (prom > 0.0 && prom >= min_prominence) {
      candidates.push_back({i, curve.x[i], curve.y[i], prom});
    }
  }

  PeakSet out;
  if (candidates.empty()) return out;
  if (candidates.size() == 1) {
    out.single = refine ? refine_parabolic(curve, candidates.front()) : candidates.front();
    return out;
  }

  std::stable_sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
    if (a.prominence != b.prominence) return a.prominence > b.prominence;
    return a.height > b.height;
  });
  Peak first = candidates[0];
  Peak second = candidates[1];
  if (second.index < first.index) std::swap(first, second);

  CurveMinimum minimum{first.index + 1, curve.x[first.index + 1], curve.y[first.index + 1]};
  for (std::size_t k = first.index + 1; k < second.index; ++k) {
    if (curve.y[k] < minimum.value) minimum = {k, curve.x[k], curve.y[k]};
  }

  out.quantum = refine ? refine_parabolic(curve, first) : first;
  out.classical = refine ? refine_parabolic(curve, second) : second;
  out.separating_minimum = minimum;
  return out;
}

PeakSet find_peaks(const Curve& curve, const PeakOptions& options) {
  const double threshold = options.min_prominence.value_or(default_min_prominence(curve));
  return find_peaks(curve, threshold, options.smooth, options.refine);
}

std::optional<double> peak_crossover(std::span<const double> temperatures,
                                     std::span<const double> quantum_heights,
                                     std::span<const double> classical_heights) {
  if (temperatures.size() != quantum_heights.size() ||
      temperatures.size() != classical_heights.size()) {
    throw InvalidArgument("temperature and peak-height arrays differ in length");
  }
  for (std::size_t i = 0; i < temperatures.size(); ++i) {
    const double d = quantum_heights[i] - classical_heights[i];
    if (d == 0.0) return temperatures[i];
    if (i == 0) continue;
    const double prev = quantum_heights[i - 1] - classical_heights[i - 1];
    if ((prev > 0.0) != (d > 0.0)) {
      const double t0 = temperatures[i - 1];
      const double t1 = temperatures[i];
      return t0 + (t1 - t0) * prev / (prev - d);
    }
  }
  return std::nullopt;
}

ScalingFit fit_power_law(std::span<const SizeValue> points) {
  if (points.size() < 3) {
    throw InvalidArgument(fmt::format(
        "power-law fit is underdetermined with {} points (need >= 3)", points.size()));
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.value > 0.0) || !(p.n > 0.0)) {
      throw InvalidArgument(fmt::format(
          "power-law fit needs positive sizes and values, got ({}, {})", p.n, p.value));
    }
    mean_x += std::log(p.n);
    mean_y += std::log(p.value);
  }
  const auto count = static_cast<double>(points.size());
  mean_x /= count;
  mean_y /= count;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.n) - mean_x;
    const double dy = std::log(p.value) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw InvalidArgument("power-law fit needs at least 2 distinct sizes");
  }

  ScalingFit fit;
  fit.alpha = sxy / sxx;
  fit.b = std::exp(mean_y - fit.alpha * mean_x);
  const double residual = std::max(0.0, syy - fit.alpha * sxy);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - residual / syy, 0.0, 1.0) : 1.0;
  fit.points_used.assign(points.begin(), points.end());
  return fit;
}

std::vector<double> position_spread(const std::vector<std::vector<double>>& positions) {
  std::vector<double> spread;
  spread.reserve(positions.size());
  for (const auto& row : positions) {
    if (row.empty()) {
      spread.push_back(0.0);
      continue;
    }
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    spread.push_back(*hi - *lo);
  }
  return spread;
}

std::optional<double> divergence_onset(std::span<const double> temperatures,
                                       std::span<const double> spread,
                                       double threshold) {
  if (temperatures.size() != spread.size()) {
    throw InvalidArgument("temperature and spread arrays differ in length");
  }
  std::optional<double> onset;
  for (std::size_t i = 0; i < spread.size(); ++i) {
    if (spread[i] >= threshold) {
      if (!onset) onset = temperatures[i];
    } else {
      onset.reset();
    }
  }
  return onset;
}

}  // namespace sgotto
