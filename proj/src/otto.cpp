#include "sgotto/otto.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "sgotto/error.hpp"

namespace sgotto {

double fermi_occupation(double e, double t) {
  if (t < 0.0 || std::isnan(t)) {
    throw InvalidArgument(fmt::format("temperature must be >= 0, got {}", t));
  }
  if (t == 0.0) {
    if (e < 0.0) return 1.0;
    if (e > 0.0) return 0.0;
    return 0.5;
  }
  // exp overflows to inf for large e/t, giving exactly 0.
  return 1.0 / (std::exp(e / t) + 1.0);
}

Heats cycle_heats(std::span<const double> at_h_i, std::span<const double> at_h_f,
                  double t_c, double t_h) {
  if (at_h_i.size() != at_h_f.size()) {
    throw InvalidArgument(fmt::format("spectra have {} and {} modes",
                                      at_h_i.size(), at_h_f.size()));
  }
  Heats out;
  for (std::size_t j = 0; j < at_h_i.size(); ++j) {
    const double e = at_h_i[j];
    const double big_e = at_h_f[j];
    const double occupation_cold = fermi_occupation(e, t_c);
    const double occupation_hot = fermi_occupation(big_e, t_h);
    out.q_h += big_e * (occupation_hot - occupation_cold);
    out.q_c += e * (occupation_cold - occupation_hot);
  }
  out.w = out.q_c + out.q_h;
  return out;
}

Heats cycle_heats(const QuasiparticleSpectrum& at_h_i,
                  const QuasiparticleSpectrum& at_h_f, double t_c, double t_h) {
  return cycle_heats(at_h_i.energies, at_h_f.energies, t_c, t_h);
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Engine: return "engine";
    case Regime::Refrigerator: return "refrigerator";
    case Regime::Heater: return "heater";
    case Regime::Accelerator: return "accelerator";
  }
  return "unknown";
}

namespace {

int sign_with_tolerance(double x, double tol) {
  if (x > tol) return 1;
  if (x < -tol) return -1;
  return 0;
}

struct SignRow {
  Regime regime;
  int w, q_c, q_h;
};

// Strict sign patterns are mutually exclusive, so the order only matters at
// boundaries. Engine comes last: it must deliver w > tol, and a zero-work
// cycle is always compatible with some dissipative row.
constexpr std::array<SignRow, 4> kSignTable{{
    {Regime::Heater, -1, -1, -1},
    {Regime::Accelerator, -1, -1, +1},
    {Regime::Refrigerator, -1, +1, -1},
    {Regime::Engine, +1, -1, +1},
}};

bool compatible(int observed, int required) {
  return observed == 0 || observed == required;
}

}  // namespace

RegimeClass classify_regime(double q_c, double q_h, double w, double tol) {
  const int sw = sign_with_tolerance(w, tol);
  const int sc = sign_with_tolerance(q_c, tol);
  const int sh = sign_with_tolerance(q_h, tol);
  const bool boundary = sw == 0 || sc == 0 || sh == 0;
  for (const auto& row : kSignTable) {
    if (compatible(sw, row.w) && compatible(sc, row.q_c) && compatible(sh, row.q_h)) {
      return {row.regime, boundary};
    }
  }
  throw ClausiusViolation(fmt::format(
      "forbidden sign pattern w={:.17g} q_c={:.17g} q_h={:.17g}", w, q_c, q_h));
}

double regime_tolerance(std::size_t n, double energy_scale) noexcept {
  return 1e-12 * static_cast<double>(n) * energy_scale;
}

EngineMetrics engine_metrics(double q_h, double w, double t_c, double t_h) {
  if (!(t_h > 0.0) || t_c < 0.0) {
    throw InvalidArgument(fmt::format("invalid bath temperatures t_c={} t_h={}", t_c, t_h));
  }
  EngineMetrics m;
  m.eta_carnot = 1.0 - t_c / t_h;
  if (q_h != 0.0) {
    m.eta = w / q_h;
    m.delta_eta = m.eta_carnot - *m.eta;
    if (*m.delta_eta > 0.0) m.pi = w / *m.delta_eta;
  }
  return m;
}

RefrigeratorMetrics refrigerator_metrics(double q_c, double w, double t_c,
                                         double t_h) {
  if (!(t_h > 0.0) || t_c < 0.0 || t_c > t_h) {
    throw InvalidArgument(fmt::format("invalid bath temperatures t_c={} t_h={}", t_c, t_h));
  }
  RefrigeratorMetrics m;
  m.eta_cop = t_c < t_h ? t_c / (t_h - t_c) : std::numeric_limits<double>::infinity();
  if (w != 0.0) {
    m.eta_r = -q_c / w;
    m.delta_eta_r = m.eta_cop - *m.eta_r;
    if (std::isfinite(*m.delta_eta_r) && *m.delta_eta_r > 0.0) {
      m.pi_r = q_c / *m.delta_eta_r;
    }
  }
  return m;
}

CycleResult run_cycle(std::span<const double> at_h_i,
                      std::span<const double> at_h_f, double t_c, double t_h) {
  if (!(t_h > 0.0) || t_c < 0.0 || t_c > t_h) {
    throw InvalidArgument(fmt::format(
        "bath temperatures must satisfy 0 <= t_c <= t_h, t_h > 0; got t_c={} t_h={}",
        t_c, t_h));
  }
  CycleResult out;
  out.heats = cycle_heats(at_h_i, at_h_f, t_c, t_h);
  double scale = 0.0;
  if (!at_h_i.empty()) scale = std::max(at_h_i.back(), at_h_f.back());
  out.regime = classify_regime(out.heats.q_c, out.heats.q_h, out.heats.w,
                               regime_tolerance(at_h_i.size(), scale));
  out.engine = engine_metrics(out.heats.q_h, out.heats.w, t_c, t_h);
  out.refrigerator = refrigerator_metrics(out.heats.q_c, out.heats.w, t_c, t_h);
  return out;
}

CycleResult run_cycle(const QuasiparticleSpectrum& at_h_i,
                      const QuasiparticleSpectrum& at_h_f, double t_c, double t_h) {
  return run_cycle(std::span<const double>(at_h_i.energies),
                   std::span<const double>(at_h_f.energies), t_c, t_h);
}

}  // namespace sgotto
