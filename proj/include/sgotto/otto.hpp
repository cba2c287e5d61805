#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "sgotto/bdg.hpp"

namespace sgotto {

/// Fermi-Dirac occupation 1 / (exp(e/t) + 1). At t == 0 this is the step
/// function (1 below zero, 1/2 at zero, 0 above). Throws InvalidArgument for
/// t < 0.
double fermi_occupation(double e, double t);

/// One Otto cycle: expansion h_i -> h_f, hot bath, compression, cold bath.
struct CycleParams {
  double h_i = 0.0;
  double h_f = 0.5;
  double t_c = 0.05;
  double t_h = 0.2;

  double delta_h() const noexcept { return h_f - h_i; }
};

inline constexpr double kDefaultQuench = 0.5;

/// Heat absorbed from each bath (positive = into the working medium) and
/// the net work output w = q_c + q_h.
struct Heats {
  double q_c = 0.0;
  double q_h = 0.0;
  double w = 0.0;
};

/// Sorted mode j keeps its occupation through both adiabatic strokes:
///   q_h = sum_j E_j (f(E_j, t_h) - f(e_j, t_c))
///   q_c = sum_j e_j (f(e_j, t_c) - f(E_j, t_h))
/// with e_j at h_i and E_j at h_f, summed in ascending mode order.
Heats cycle_heats(std::span<const double> at_h_i, std::span<const double> at_h_f,
                  double t_c, double t_h);

Heats cycle_heats(const QuasiparticleSpectrum& at_h_i,
                  const QuasiparticleSpectrum& at_h_f, double t_c, double t_h);

enum class Regime { Engine, Refrigerator, Heater, Accelerator };

std::string_view to_string(Regime r) noexcept;

struct RegimeClass {
  Regime regime = Regime::Engine;
  /// Some heat or the work lay within tolerance of zero; regime is the first
  /// compatible row in the order H, A, R, E (Engine needs w > tol).
  bool boundary = false;
};

/// Sign table (w, q_c, q_h): Engine (+, -, +), Refrigerator (-, +, -),
/// Heater (-, -, -), Accelerator (-, -, +). Any value with |x| <= tol counts
/// as either sign. Throws ClausiusViolation when no row is compatible.
RegimeClass classify_regime(double q_c, double q_h, double w, double tol);

/// Tolerance used for one cycle: 1e-12 * n * (largest energy involved).
double regime_tolerance(std::size_t n, double energy_scale) noexcept;

struct EngineMetrics {
  std::optional<double> eta;  ///< w / q_h, empty when q_h == 0
  double eta_carnot = 0.0;    ///< 1 - t_c / t_h
  std::optional<double> delta_eta;
  std::optional<double> pi;   ///< w / delta_eta when delta_eta > 0
};

EngineMetrics engine_metrics(double q_h, double w, double t_c, double t_h);

struct RefrigeratorMetrics {
  std::optional<double> eta_r;  ///< -q_c / w, empty when w == 0
  double eta_cop = 0.0;         ///< t_c / (t_h - t_c), +inf at equal baths
  std::optional<double> delta_eta_r;
  std::optional<double> pi_r;   ///< q_c / delta_eta_r when finite and > 0
};

RefrigeratorMetrics refrigerator_metrics(double q_c, double w, double t_c,
                                         double t_h);

struct CycleResult {
  Heats heats;
  EngineMetrics engine;
  RefrigeratorMetrics refrigerator;
  RegimeClass regime;
};

/// Heats, metrics and regime for one realization. Requires
/// 0 <= t_c <= t_h and t_h > 0.
CycleResult run_cycle(std::span<const double> at_h_i,
                      std::span<const double> at_h_f, double t_c, double t_h);

CycleResult run_cycle(const QuasiparticleSpectrum& at_h_i,
                      const QuasiparticleSpectrum& at_h_f, double t_c, double t_h);

}  // namespace sgotto
