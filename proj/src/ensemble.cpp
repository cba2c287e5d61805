#include "sgotto/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <iostream>
#include <set>

#include "sgotto/error.hpp"
#include "sgotto/parallel.hpp"
#include "sgotto/rng.hpp"

namespace sgotto {

DisorderRealization realization_for(std::size_t n, std::size_t r,
                                    std::uint64_t master_seed,
                                    const EnsembleOptions& options) {
  if (options.uniform_baseline) return uniform_couplings(n, options.uniform_coupling);
  return sample_couplings(n, rng::derive_seed(master_seed, n, r));
}

MeanStat mean_stat(std::span<const double> values) {
  MeanStat out;
  if (values.empty()) {
    out.mean = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  // Shifted by the first value so identical inputs give exactly that value
  // and exactly zero spread.
  const double shift = values.front();
  const auto count = static_cast<double>(values.size());
  double d_mean = 0.0;
  for (double v : values) d_mean += v - shift;
  d_mean /= count;
  out.mean = shift + d_mean;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - shift - d_mean) * (v - shift - d_mean);
    out.std_err = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SpectrumBank

SpectrumBank::SpectrumBank(std::size_t n, std::vector<double> fields,
                           std::size_t realizations, std::uint64_t master_seed,
                           const EnsembleOptions& options)
    : n_(n), fields_(std::move(fields)), realizations_(realizations) {
  if (n < 2) throw InvalidArgument(fmt::format("spin count must be >= 2, got {}", n));
  if (realizations == 0) throw InvalidArgument("need at least one realization");
  if (fields_.empty()) throw InvalidArgument("no fields to diagonalize at");

  const std::size_t field_count = fields_.size();
  energies_.assign(realizations * field_count * n, 0.0);
  valid_.assign(realizations, 0);
  coupling_stats_.assign(realizations, {});
  h_c_.assign(realizations, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> failures(realizations);

  parallel_for(realizations, options.threads, [&](std::size_t r) {
    const DisorderRealization realization = realization_for(n, r, master_seed, options);
    try {
      coupling_stats_[r] = griffiths_inputs(realization);
      h_c_[r] = std::exp(coupling_stats_[r].delta_c);
      for (std::size_t f = 0; f < field_count; ++f) {
        const auto spec = spectrum(realization, fields_[f], options.boundary);
        std::copy(spec.energies.begin(), spec.energies.end(),
                  energies_.begin() + static_cast<std::ptrdiff_t>((r * field_count + f) * n));
      }
      valid_[r] = 1;
    } catch (const DiagonalizationError& e) {
      failures[r] = e.what();
    } catch (const DegenerateCoupling& e) {
      failures[r] = e.what();
    }
  });

  for (std::size_t r = 0; r < realizations; ++r) {
    if (valid_[r]) continue;
    ++skipped_;
    std::cerr << fmt::format("warning: skipped realization {} (n={}): {}\n", r, n, failures[r]);
  }
  if (static_cast<double>(skipped_) > 0.01 * static_cast<double>(realizations)) {
    throw NumericalFailure(fmt::format(
        "{} of {} realizations failed at n={}, above the 1% ceiling", skipped_,
        realizations, n));
  }

  max_energy_.assign(field_count, 0.0);
  for (std::size_t r = 0; r < realizations; ++r) {
    if (!valid_[r]) continue;
    for (std::size_t f = 0; f < field_count; ++f) {
      max_energy_[f] = std::max(max_energy_[f], energies(r, f).back());
    }
  }
}

std::span<const double> SpectrumBank::energies(std::size_t r, std::size_t field) const noexcept {
  return std::span<const double>(energies_).subspan((r * fields_.size() + field) * n_, n_);
}

GriffithsInputs SpectrumBank::mean_coupling_stats() const {
  GriffithsInputs mean;
  std::size_t count = 0;
  for (std::size_t r = 0; r < realizations_; ++r) {
    if (!valid_[r]) continue;
    mean.delta_c += coupling_stats_[r].delta_c;
    mean.max_abs_coupling += coupling_stats_[r].max_abs_coupling;
    mean.min_abs_coupling += coupling_stats_[r].min_abs_coupling;
    ++count;
  }
  const auto c = static_cast<double>(count);
  mean.delta_c /= c;
  mean.max_abs_coupling /= c;
  mean.min_abs_coupling /= c;
  return mean;
}

double SpectrumBank::mean_h_c() const { return std::exp(mean_coupling_stats().delta_c); }

namespace {

std::size_t regime_index(Regime r) { return static_cast<std::size_t>(r); }

RatioSummary summarize_ratios(const std::vector<CycleResult>& cycles) {
  std::vector<double> eta, pi, eta_r, pi_r;
  for (const auto& c : cycles) {
    if (c.engine.eta) eta.push_back(*c.engine.eta);
    if (c.engine.pi) pi.push_back(*c.engine.pi);
    if (c.refrigerator.eta_r) eta_r.push_back(*c.refrigerator.eta_r);
    if (c.refrigerator.pi_r) pi_r.push_back(*c.refrigerator.pi_r);
  }
  return {mean_stat(eta), mean_stat(pi), mean_stat(eta_r), mean_stat(pi_r)};
}

}  // namespace

EnsembleStats SpectrumBank::evaluate(std::size_t field_i, std::size_t field_f,
                                     double t_c, double t_h,
                                     bool per_realization_ratios) const {
  if (field_i >= fields_.size() || field_f >= fields_.size()) {
    throw InvalidArgument("field index out of range");
  }
  if (!(t_h > 0.0) || t_c < 0.0 || t_c > t_h) {
    throw InvalidArgument(fmt::format(
        "bath temperatures must satisfy 0 <= t_c <= t_h, t_h > 0; got t_c={} t_h={}",
        t_c, t_h));
  }

  std::vector<CycleResult> cycles;
  cycles.reserve(realizations_ - skipped_);
  for (std::size_t r = 0; r < realizations_; ++r) {
    if (!valid_[r]) continue;
    cycles.push_back(run_cycle(energies(r, field_i), energies(r, field_f), t_c, t_h));
  }

  EnsembleStats s;
  s.n = n_;
  s.realizations = cycles.size();
  s.skipped = skipped_;
  s.h_i = fields_[field_i];
  s.h_f = fields_[field_f];
  s.t_c = t_c;
  s.t_h = t_h;

  std::vector<double> buffer(cycles.size());
  auto collect = [&](auto member) {
    for (std::size_t k = 0; k < cycles.size(); ++k) buffer[k] = cycles[k].heats.*member;
    return mean_stat(buffer);
  };
  s.q_c = collect(&Heats::q_c);
  s.q_h = collect(&Heats::q_h);
  s.w = collect(&Heats::w);
  s.w.mean = s.q_c.mean + s.q_h.mean;

  const double scale = std::max(max_energy_[field_i], max_energy_[field_f]);
  s.regime = classify_regime(s.q_c.mean, s.q_h.mean, s.w.mean, regime_tolerance(n_, scale));
  s.engine = engine_metrics(s.q_h.mean, s.w.mean, t_c, t_h);
  s.refrigerator = refrigerator_metrics(s.q_c.mean, s.w.mean, t_c, t_h);

  std::array<std::size_t, 4> counts{};
  for (const auto& c : cycles) ++counts[regime_index(c.regime.regime)];
  std::size_t best = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    s.regime_fractions[k] = static_cast<double>(counts[k]) / static_cast<double>(cycles.size());
    if (counts[k] > counts[best]) best = k;
  }
  s.majority_regime = static_cast<Regime>(best);

  if (per_realization_ratios) s.per_realization = summarize_ratios(cycles);
  return s;
}

EnsembleStats run_point(std::size_t n, double h_i, double delta_h, double t_c,
                        double t_h, std::size_t realizations,
                        std::uint64_t master_seed, const EnsembleOptions& options) {
  const SpectrumBank bank(n, {h_i, h_i + delta_h}, realizations, master_seed, options);
  return bank.evaluate(0, 1, t_c, t_h, options.per_realization_ratios);
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<double> FieldGrid::values() const {
  if (points == 0) throw InvalidArgument("field grid needs at least one point");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = start;
    return v;
  }
  const double step = (stop - start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) v[i] = start + step * static_cast<double>(i);
  v.back() = stop;
  return v;
}

void validate(const SweepSpec& spec) {
  if (spec.n_list.empty()) throw InvalidArgument("n_list is empty");
  for (std::size_t n : spec.n_list) {
    if (n < 2) throw InvalidArgument(fmt::format("spin count must be >= 2, got {}", n));
  }
  if (spec.mode != StudyMode::RegimeMap && spec.h_i_grid.points < 2) {
    throw InvalidArgument("curve sweeps need at least 2 grid points");
  }
  if (spec.realizations == 0) throw InvalidArgument("need at least one realization");
  if (!(spec.t_h > 0.0)) throw InvalidArgument(fmt::format("t_h must be positive, got {}", spec.t_h));
  if (spec.t_c_rule.kind == ColdBathRule::Kind::FractionOfHot &&
      !(spec.t_c_rule.value > 0.0 && spec.t_c_rule.value <= 1.0)) {
    throw InvalidArgument(fmt::format("t_c ratio must lie in (0, 1], got {}", spec.t_c_rule.value));
  }
  const double t_c = spec.t_c_rule.cold_temperature(spec.t_h);
  if (t_c < 0.0 || t_c > spec.t_h) {
    throw InvalidArgument(fmt::format("t_c={} outside [0, t_h={}]", t_c, spec.t_h));
  }
}

GriffithsLabel griffiths_marker(const GriffithsInputs& ensemble, double h_i) {
  const double h = std::abs(h_i);
  if (h == 0.0) return GriffithsLabel::StronglyOrdered;
  return griffiths_classify(ensemble, h);
}

namespace {

std::vector<double> sweep_fields(std::span<const double> h_i, double delta_h) {
  std::vector<double> fields(h_i.begin(), h_i.end());
  for (double h : h_i) fields.push_back(h + delta_h);
  return fields;
}

}  // namespace

SweepEvaluator::SweepEvaluator(std::vector<std::size_t> n_list, FieldGrid grid,
                               double delta_h, std::size_t realizations,
                               std::uint64_t master_seed,
                               const EnsembleOptions& options)
    : n_list_(std::move(n_list)), h_i_(grid.values()), delta_h_(delta_h), options_(options) {
  if (n_list_.empty()) throw InvalidArgument("n_list is empty");
  banks_.reserve(n_list_.size());
  const auto fields = sweep_fields(h_i_, delta_h_);
  for (std::size_t n : n_list_) {
    banks_.emplace_back(n, fields, realizations, master_seed, options_);
  }
}

GriffithsBoundaries SweepEvaluator::griffiths_boundaries(std::size_t size_index) const {
  const auto stats = banks_.at(size_index).mean_coupling_stats();
  return {std::exp(stats.delta_c), stats.min_abs_coupling, stats.max_abs_coupling};
}

std::vector<SweepRow> SweepEvaluator::rows_for(std::size_t size_index, double t_c,
                                               double t_h) const {
  const SpectrumBank& bank = banks_.at(size_index);
  const GriffithsInputs ensemble = bank.mean_coupling_stats();
  const double h_c_mean = bank.mean_h_c();
  const std::size_t points = h_i_.size();
  const auto n = static_cast<double>(bank.n());

  std::vector<SweepRow> rows(points);
  parallel_for(points, options_.threads, [&](std::size_t k) {
    SweepRow& row = rows[k];
    row.n = bank.n();
    row.h_i = h_i_[k];
    row.stats = bank.evaluate(k, points + k, t_c, t_h, options_.per_realization_ratios);
    row.w_per_spin = row.stats.w.mean / n;
    row.std_err_w_per_spin = row.stats.w.std_err / n;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    // W == 0 (e.g. a quench symmetric about h = 0) is clipped in both
    // columns: Q_c and Q_h vanish with W there, so 0 is the limiting value.
    row.pi_per_spin =
        row.stats.w.mean <= 0.0 ? 0.0 : row.stats.engine.pi.value_or(nan) / n;
    row.pi_r_per_spin =
        row.stats.w.mean >= 0.0 ? 0.0 : row.stats.refrigerator.pi_r.value_or(nan) / n;
    row.h_c_mean = h_c_mean;
    row.griffiths = griffiths_marker(ensemble, h_i_[k]);
  });
  return rows;
}

std::vector<SweepRow> SweepEvaluator::rows(double t_c, double t_h) const {
  std::vector<SweepRow> all;
  all.reserve(n_list_.size() * h_i_.size());
  for (std::size_t s = 0; s < n_list_.size(); ++s) {
    auto part = rows_for(s, t_c, t_h);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::vector<SweepRow> sweep_work_performance(const SweepSpec& spec,
                                             const EnsembleOptions& options) {
  validate(spec);
  if (spec.mode != StudyMode::EngineStudy) {
    throw InvalidArgument("sweep_work_performance needs an EngineStudy spec");
  }
  const SweepEvaluator evaluator(spec.n_list, spec.h_i_grid, spec.delta_h,
                                 spec.realizations, spec.master_seed, options);
  return evaluator.rows(spec.t_c_rule.cold_temperature(spec.t_h), spec.t_h);
}

std::vector<SweepRow> sweep_refrigerator(const SweepSpec& spec,
                                         const EnsembleOptions& options) {
  validate(spec);
  if (spec.mode != StudyMode::RefrigeratorStudy) {
    throw InvalidArgument("sweep_refrigerator needs a RefrigeratorStudy spec");
  }
  const SweepEvaluator evaluator(spec.n_list, spec.h_i_grid, spec.delta_h,
                                 spec.realizations, spec.master_seed, options);
  return evaluator.rows(spec.t_c_rule.cold_temperature(spec.t_h), spec.t_h);
}

std::vector<RegimeCell> regime_map(const SweepSpec& spec,
                                   std::span<const double> t_c_grid,
                                   const EnsembleOptions& options) {
  validate(spec);
  if (spec.n_list.size() != 1) {
    throw InvalidArgument("regime_map takes exactly one system size");
  }
  for (double t_c : t_c_grid) {
    if (t_c < 0.0 || t_c > spec.t_h) {
      throw InvalidArgument(fmt::format("t_c={} outside [0, t_h={}]", t_c, spec.t_h));
    }
  }
  const auto h_i = spec.h_i_grid.values();
  const SpectrumBank bank(spec.n_list.front(), sweep_fields(h_i, spec.delta_h),
                          spec.realizations, spec.master_seed, options);

  const std::size_t points = h_i.size();
  std::vector<RegimeCell> cells(t_c_grid.size() * points);
  parallel_for(cells.size(), options.threads, [&](std::size_t idx) {
    const std::size_t row = idx / points;
    const std::size_t k = idx % points;
    const auto s = bank.evaluate(k, points + k, t_c_grid[row], spec.t_h);
    cells[idx] = {t_c_grid[row], h_i[k], s.q_c.mean, s.q_h.mean, s.w.mean,
                  s.regime, s.regime_fractions};
  });
  return cells;
}

// ---------------------------------------------------------------------------
// Scaling

std::string_view to_string(ScalingQuantity q) noexcept {
  switch (q) {
    case ScalingQuantity::Work: return "W";
    case ScalingQuantity::Performance: return "Pi";
    case ScalingQuantity::RefrigeratorPerformance: return "PiR";
  }
  return "unknown";
}

Curve quantity_curve(std::span<const SweepRow> rows, ScalingQuantity quantity) {
  Curve c;
  c.x.reserve(rows.size());
  c.y.reserve(rows.size());
  for (const auto& row : rows) {
    c.x.push_back(row.h_i);
    switch (quantity) {
      case ScalingQuantity::Work:
        c.y.push_back(row.w_per_spin);
        c.err.push_back(row.std_err_w_per_spin);
        break;
      case ScalingQuantity::Performance:
        c.y.push_back(row.pi_per_spin);
        break;
      case ScalingQuantity::RefrigeratorPerformance:
        c.y.push_back(row.pi_r_per_spin);
        break;
    }
  }
  return c;
}

namespace {

void fit_track(PeakTrack& track) {
  if (track.samples.size() < 3) return;
  std::vector<SizeValue> points;
  std::set<std::size_t> sizes;
  for (const auto& s : track.samples) {
    if (!(s.value > 0.0)) return;
    points.push_back({static_cast<double>(s.n), s.value});
    sizes.insert(s.n);
  }
  if (sizes.size() < 2) return;
  track.fit = fit_power_law(points);
}

}  // namespace

ScalingStudy scaling_study(std::span<const std::size_t> n_list,
                           std::span<const double> t_h_grid,
                           ScalingQuantity quantity, const ColdBathRule& t_c_rule,
                           double delta_h, const CurveSource& source,
                           const PeakOptions& peak_options) {
  const std::set<std::size_t> distinct(n_list.begin(), n_list.end());
  if (distinct.size() < 3) {
    throw InvalidArgument(fmt::format(
        "scaling fit is underdetermined with {} distinct sizes (need >= 3)", distinct.size()));
  }
  if (t_h_grid.empty()) throw InvalidArgument("no hot-bath temperatures given");

  ScalingStudy study;
  study.quantity = quantity;
  study.n_list.assign(n_list.begin(), n_list.end());
  study.delta_h = delta_h;

  for (double t_h : t_h_grid) {
    ScalingPoint point;
    point.t_h = t_h;
    point.t_c = t_c_rule.cold_temperature(t_h);

    const bool two_peaks = quantity != ScalingQuantity::RefrigeratorPerformance;
    PeakTrack quantum{"quantum", {}, {}};
    PeakTrack classical{"classical", {}, {}};
    PeakTrack dominant{"dominant", {}, {}};
    for (std::size_t s = 0; s < n_list.size(); ++s) {
      const std::size_t n = n_list[s];
      const Curve curve = source(s, n, t_h, point.t_c);
      const PeakSet peaks = find_peaks(curve, peak_options);
      point.peaks.push_back(peaks);
      auto sample = [n](const Peak& p) {
        return PeakSample{n, p.location, p.height, p.height * static_cast<double>(n)};
      };
      if (two_peaks) {
        if (peaks.quantum) quantum.samples.push_back(sample(*peaks.quantum));
        if (peaks.classical) classical.samples.push_back(sample(*peaks.classical));
      } else if (auto best = peaks.highest()) {
        dominant.samples.push_back(sample(*best));
      }
    }
    if (two_peaks) {
      fit_track(quantum);
      fit_track(classical);
      point.tracks = {std::move(quantum), std::move(classical)};
    } else {
      fit_track(dominant);
      point.tracks = {std::move(dominant)};
    }
    study.points.push_back(std::move(point));
  }

  if (quantity != ScalingQuantity::RefrigeratorPerformance) {
    for (std::size_t s = 0; s < n_list.size(); ++s) {
      std::vector<double> temps, q, c;
      for (const auto& point : study.points) {
        const auto& peaks = point.peaks[s];
        if (peaks.quantum && peaks.classical) {
          temps.push_back(point.t_h);
          q.push_back(peaks.quantum->height);
          c.push_back(peaks.classical->height);
        }
      }
      study.crossover.push_back(peak_crossover(temps, q, c));
    }
  }
  return study;
}

ScalingStudy scaling_study(const SweepSpec& spec, std::span<const double> t_h_grid,
                           ScalingQuantity quantity, const EnsembleOptions& options,
                           const PeakOptions& peak_options) {
  validate(spec);
  const SweepEvaluator evaluator(spec.n_list, spec.h_i_grid, spec.delta_h,
                                 spec.realizations, spec.master_seed, options);
  const CurveSource source = [&](std::size_t size_index, std::size_t, double t_h,
                                 double t_c) {
    const auto rows = evaluator.rows_for(size_index, t_c, t_h);
    return quantity_curve(rows, quantity);
  };
  return scaling_study(spec.n_list, t_h_grid, quantity, spec.t_c_rule, spec.delta_h,
                       source, peak_options);
}

std::vector<double> midpoint_spread(const ScalingStudy& study, std::string_view label) {
  std::vector<std::vector<double>> positions;
  for (const auto& point : study.points) {
    std::vector<double> at_t;
    for (const auto& track : point.tracks) {
      if (track.label != label) continue;
      for (const auto& s : track.samples) at_t.push_back(quench_midpoint(s.h_i, study.delta_h));
    }
    positions.push_back(std::move(at_t));
  }
  auto spread = position_spread(positions);
  for (std::size_t t = 0; t < positions.size(); ++t) {
    if (positions[t].size() < 2) spread[t] = std::numeric_limits<double>::quiet_NaN();
  }
  return spread;
}

}  // namespace sgotto
