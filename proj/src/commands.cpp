#include "sgotto/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fmt/format.h>
#include <iostream>
#include <json.hpp>
#include <map>
#include <set>

#include "sgotto/error.hpp"
#include "sgotto/table.hpp"

namespace sgotto {

using nlohmann::ordered_json;

EnsembleOptions RunConfig::ensemble_options() const {
  EnsembleOptions o;
  o.boundary = boundary;
  o.uniform_baseline = uniform_baseline;
  o.threads = threads;
  return o;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void progress(const RunConfig& config, std::string_view message) {
  if (!config.quiet) std::cerr << "sgotto: " << message << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return format_double(v.value_or(kNaN)); }

ordered_json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json json_opt(const std::optional<double>& v) {
  return v ? json_number(*v) : ordered_json(nullptr);
}

ordered_json grid_json(const FieldGrid& g) {
  return {{"start", g.start}, {"stop", g.stop}, {"points", g.points}};
}

ordered_json cold_rule_json(const ColdBathRule& rule) {
  if (rule.kind == ColdBathRule::Kind::Fixed) return {{"t_c", rule.value}};
  return {{"t_c_ratio", rule.value}};
}

// Writes each (name, body) pair plus <stem>.manifest.json recording the
// parameters and the body hashes.
Artifacts write_outputs(const RunConfig& config, std::string_view command,
                        std::string_view stem, ordered_json parameters,
                        const std::vector<std::pair<std::string, std::string>>& outputs) {
  Artifacts a;
  ordered_json files = ordered_json::array();
  for (const auto& [name, body] : outputs) {
    const auto path = config.output_dir / name;
    write_text_file(path, body);
    a.files.push_back(path);
    files.push_back({{"name", name}, {"bytes", body.size()}, {"sha256", sha256_hex(body)}});
  }
  ordered_json manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["command"] = command;
  manifest["master_seed"] = config.master_seed;
  manifest["threads"] = config.threads;
  manifest["boundary"] = std::string(to_string(config.boundary));
  manifest["uniform_baseline"] = config.uniform_baseline;
  manifest["parameters"] = std::move(parameters);
  manifest["files"] = std::move(files);
  manifest["created_utc"] = utc_timestamp();
  a.manifest = config.output_dir / fmt::format("{}.manifest.json", stem);
  write_text_file(a.manifest, manifest.dump(2) + "\n");
  for (const auto& f : a.files) progress(config, fmt::format("wrote {}", f.string()));
  return a;
}

ordered_json peak_json(const std::optional<Peak>& p, double delta_h) {
  if (!p) return nullptr;
  ordered_json j{{"h_i", p->location}, {"height", json_number(p->height)},
                 {"prominence", json_number(p->prominence)}};
  if (std::isfinite(delta_h)) j["quench_midpoint"] = quench_midpoint(p->location, delta_h);
  return j;
}

ordered_json peak_set_json(const PeakSet& s, double delta_h) {
  ordered_json j{{"quantum", peak_json(s.quantum, delta_h)},
                 {"classical", peak_json(s.classical, delta_h)},
                 {"single", peak_json(s.single, delta_h)}};
  if (s.separating_minimum) {
    j["separating_minimum"] = {{"h_i", s.separating_minimum->location},
                               {"value", json_number(s.separating_minimum->value)}};
  } else {
    j["separating_minimum"] = nullptr;
  }
  return j;
}

ordered_json track_json(const PeakTrack& track, double delta_h) {
  ordered_json samples = ordered_json::array();
  for (const auto& s : track.samples) {
    samples.push_back({{"n", s.n},
                       {"h_i_peak", s.h_i},
                       {"quench_midpoint", json_number(quench_midpoint(s.h_i, delta_h))},
                       {"value_per_spin", json_number(s.per_spin)},
                       {"value", json_number(s.value)}});
  }
  ordered_json fit = nullptr;
  if (track.fit) {
    fit = {{"alpha", json_number(track.fit->alpha)},
           {"b", json_number(track.fit->b)},
           {"r_squared", json_number(track.fit->r_squared)}};
  }
  return {{"label", track.label}, {"samples", samples}, {"fit", fit}};
}

std::string divergence_track(ScalingQuantity q) {
  return q == ScalingQuantity::RefrigeratorPerformance ? "dominant" : "quantum";
}

}  // namespace

Artifacts cmd_critical_field(const RunConfig& config, const std::vector<std::size_t>& sizes,
                             std::size_t samples) {
  if (sizes.empty()) throw InvalidArgument("no sizes given");
  if (samples == 0) throw InvalidArgument("need at least one sample per size");
  progress(config, fmt::format("critical field: {} sizes x {} samples", sizes.size(), samples));
  const auto rows = critical_field_scaling(sizes, samples, config.master_seed);

  Table t{columns::kCriticalField, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), format_double(r.mean_h_c),
                      format_double(r.stderr_h_c), std::to_string(r.samples)});
  }
  ordered_json params{{"sizes", sizes}, {"samples", samples}};
  return write_outputs(config, "critical-field", "critical_field", std::move(params),
                       {{"critical_field.csv", to_csv(t)}});
}

Artifacts cmd_regime_map(const RunConfig& config, const RegimeMapRequest& request) {
  if (request.t_c_points < 1) throw InvalidArgument("need at least one t_c point");
  SweepSpec spec;
  spec.n_list = {request.n};
  spec.h_i_grid = request.h_i_grid;
  spec.delta_h = request.delta_h;
  spec.t_h = request.t_h;
  spec.t_c_rule = ColdBathRule::fixed(0.0);
  spec.realizations = request.realizations;
  spec.master_seed = config.master_seed;
  spec.mode = StudyMode::RegimeMap;

  const auto t_c_grid = FieldGrid{0.0, request.t_h, request.t_c_points}.values();
  progress(config, fmt::format("regime map: n={} {}x{} grid, {} realizations", request.n,
                               t_c_grid.size(), request.h_i_grid.points, request.realizations));
  const auto cells = regime_map(spec, t_c_grid, config.ensemble_options());

  Table t{columns::kRegimeMap, {}};
  for (const auto& c : cells) {
    t.rows.push_back({format_double(c.t_c), format_double(c.h_i), format_double(c.mean_q_c),
                      format_double(c.mean_q_h), format_double(c.mean_w),
                      std::string(to_string(c.regime.regime)),
                      format_double(c.regime_fractions[0]), format_double(c.regime_fractions[1]),
                      format_double(c.regime_fractions[2]), format_double(c.regime_fractions[3])});
  }
  ordered_json params{{"t_h", request.t_h},
                      {"n", request.n},
                      {"t_c_points", request.t_c_points},
                      {"h_i_grid", grid_json(request.h_i_grid)},
                      {"delta_h", request.delta_h},
                      {"realizations", request.realizations}};
  return write_outputs(config, "regime-map", "regime_map", std::move(params),
                       {{"regime_map.csv", to_csv(t)}});
}

Artifacts cmd_sweep(const RunConfig& config, SweepSpec spec) {
  spec.master_seed = config.master_seed;
  validate(spec);
  if (spec.mode == StudyMode::RegimeMap) throw InvalidArgument("sweep needs engine or refrigerator mode");
  const bool engine = spec.mode == StudyMode::EngineStudy;
  progress(config, fmt::format("sweep ({}): {} sizes x {} fields, {} realizations",
                               engine ? "engine" : "refrigerator", spec.n_list.size(),
                               spec.h_i_grid.points, spec.realizations));
  const auto rows = engine ? sweep_work_performance(spec, config.ensemble_options())
                           : sweep_refrigerator(spec, config.ensemble_options());

  Table t{columns::kSweep, {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.n), format_double(r.h_i), format_double(r.w_per_spin),
                      format_double(r.std_err_w_per_spin), format_double(r.pi_per_spin),
                      format_double(r.pi_r_per_spin), fmt_opt(r.stats.engine.eta),
                      fmt_opt(r.stats.refrigerator.eta_r),
                      std::string(to_string(r.stats.regime.regime)), format_double(r.h_c_mean),
                      std::string(to_string(r.griffiths))});
  }
  ordered_json params{{"mode", engine ? "engine" : "refrigerator"},
                      {"t_h", spec.t_h},
                      {"t_c", spec.t_c_rule.cold_temperature(spec.t_h)},
                      {"t_c_rule", cold_rule_json(spec.t_c_rule)},
                      {"n_list", spec.n_list},
                      {"h_i_grid", grid_json(spec.h_i_grid)},
                      {"delta_h", spec.delta_h},
                      {"realizations", spec.realizations}};
  return write_outputs(config, "sweep", "sweep", std::move(params), {{"sweep.csv", to_csv(t)}});
}

Curve planted_curve(std::span<const double> h_i, std::size_t n, double alpha,
                    ScalingQuantity quantity) {
  const std::size_t points = h_i.size();
  if (points < 9) throw InvalidArgument("planted curves need at least 9 grid points");
  // Compact parabolic bumps centred on grid points, so discrete peaks and
  // their parabolic refinement both return the planted height exactly.
  const double growth = std::pow(static_cast<double>(n), alpha - 1.0);
  struct Bump { std::size_t centre; double amplitude; };
  std::vector<Bump> bumps;
  if (quantity == ScalingQuantity::RefrigeratorPerformance) {
    bumps.push_back({points / 2, 0.02 * growth});
  } else {
    bumps.push_back({points / 4, 0.015 * growth});
    bumps.push_back({(3 * points) / 4, 0.006 * growth});
  }
  const double half_width = static_cast<double>(points / 8);
  Curve c;
  c.x.assign(h_i.begin(), h_i.end());
  c.y.assign(points, 0.0);
  for (const auto& b : bumps) {
    for (std::size_t k = 0; k < points; ++k) {
      const double d = (static_cast<double>(k) - static_cast<double>(b.centre)) / half_width;
      if (std::abs(d) < 1.0) c.y[k] += b.amplitude * (1.0 - d * d);
    }
  }
  return c;
}

Artifacts cmd_scaling(const RunConfig& config, const ScalingRequest& request) {
  if (request.t_h_grid.empty()) throw InvalidArgument("no hot-bath temperatures given");
  for (double t_h : request.t_h_grid) {
    const double t_c = request.t_c_rule.cold_temperature(t_h);
    if (!(t_h > 0.0) || t_c < 0.0 || t_c > t_h) {
      throw InvalidArgument(fmt::format("invalid bath pair t_c={} t_h={}", t_c, t_h));
    }
  }
  const PeakOptions peak_options{};
  ScalingStudy study;
  if (request.planted_alpha) {
    progress(config, fmt::format("scaling: planted alpha={}", *request.planted_alpha));
    const auto h_i = request.h_i_grid.values();
    const double alpha = *request.planted_alpha;
    const CurveSource source = [&](std::size_t, std::size_t n, double, double) {
      return planted_curve(h_i, n, alpha, request.quantity);
    };
    study = scaling_study(request.n_list, request.t_h_grid, request.quantity, request.t_c_rule,
                          request.delta_h, source, peak_options);
  } else {
    SweepSpec spec;
    spec.n_list = request.n_list;
    spec.h_i_grid = request.h_i_grid;
    spec.delta_h = request.delta_h;
    spec.t_h = request.t_h_grid.front();
    spec.t_c_rule = request.t_c_rule;
    spec.realizations = request.realizations;
    spec.master_seed = config.master_seed;
    spec.mode = request.quantity == ScalingQuantity::RefrigeratorPerformance
                    ? StudyMode::RefrigeratorStudy
                    : StudyMode::EngineStudy;
    progress(config, fmt::format("scaling ({}): {} sizes, {} temperatures, {} realizations",
                                 to_string(request.quantity), spec.n_list.size(),
                                 request.t_h_grid.size(), spec.realizations));
    study = scaling_study(spec, request.t_h_grid, request.quantity, config.ensemble_options(),
                          peak_options);
  }

  const auto grid = request.h_i_grid;
  const double step = grid.points > 1 ? (grid.stop - grid.start) / static_cast<double>(grid.points - 1) : 0.0;
  const double threshold =
      std::isnan(request.divergence_threshold) ? 1.5 * step : request.divergence_threshold;
  const std::string tracked = divergence_track(request.quantity);
  const auto spread = midpoint_spread(study, tracked);
  const auto onset = divergence_onset(request.t_h_grid, spread, threshold);

  Table t{columns::kScaling, {}};
  ordered_json points = ordered_json::array();
  for (const auto& point : study.points) {
    ordered_json sizes = ordered_json::array();
    for (std::size_t s = 0; s < study.n_list.size(); ++s) {
      sizes.push_back({{"n", study.n_list[s]}, {"peaks", peak_set_json(point.peaks[s], study.delta_h)}});
    }
    ordered_json tracks = ordered_json::array();
    for (const auto& track : point.tracks) {
      tracks.push_back(track_json(track, study.delta_h));
      for (const auto& s : track.samples) {
        const double alpha = track.fit ? track.fit->alpha : kNaN;
        const double b = track.fit ? track.fit->b : kNaN;
        const double r2 = track.fit ? track.fit->r_squared : kNaN;
        t.rows.push_back({format_double(point.t_h), format_double(point.t_c), track.label,
                          std::to_string(s.n), format_double(s.h_i),
                          format_double(quench_midpoint(s.h_i, study.delta_h)),
                          format_double(s.per_spin), format_double(s.value),
                          format_double(alpha), format_double(b), format_double(r2)});
      }
    }
    points.push_back({{"t_h", point.t_h}, {"t_c", point.t_c}, {"sizes", sizes}, {"tracks", tracks}});
  }

  ordered_json crossover = ordered_json::array();
  for (std::size_t s = 0; s < study.crossover.size(); ++s) {
    crossover.push_back({{"n", study.n_list[s]}, {"t_h", json_opt(study.crossover[s])}});
  }
  ordered_json spread_json = ordered_json::array();
  for (double v : spread) spread_json.push_back(json_number(v));

  ordered_json peaks{{"quantity", std::string(to_string(study.quantity))},
                     {"n_list", study.n_list},
                     {"delta_h", study.delta_h},
                     {"points", points},
                     {"crossover", crossover},
                     {"divergence",
                      {{"track", tracked},
                       {"threshold", threshold},
                       {"spread", spread_json},
                       {"onset_t_h", json_opt(onset)}}}};

  ordered_json th_list = request.t_h_grid;
  ordered_json params{{"quantity", std::string(to_string(request.quantity))},
                      {"t_h_grid", th_list},
                      {"t_c_rule", cold_rule_json(request.t_c_rule)},
                      {"n_list", request.n_list},
                      {"h_i_grid", grid_json(request.h_i_grid)},
                      {"delta_h", request.delta_h},
                      {"realizations", request.realizations},
                      {"divergence_threshold", threshold},
                      {"planted_alpha", json_opt(request.planted_alpha)}};
  return write_outputs(config, "scaling", "scaling", std::move(params),
                       {{"scaling.csv", to_csv(t)}, {"peaks.json", peaks.dump(2) + "\n"}});
}

Artifacts cmd_peaks(const RunConfig& config, const std::filesystem::path& sweep_csv) {
  const Table table = read_csv(sweep_csv);
  const std::size_t col_n = table.column("n");
  const std::size_t col_h = table.column("h_i");
  const std::size_t col_w = table.column("w_per_spin");
  const std::size_t col_err = table.column("stderr_w");
  const std::size_t col_pi = table.column("pi_per_spin");
  const std::size_t col_pir = table.column("pi_r_per_spin");

  // The sweep's own manifest supplies delta_h when present.
  double delta_h = kNaN;
  auto manifest_path = sweep_csv;
  manifest_path.replace_filename(sweep_csv.stem().string() + ".manifest.json");
  if (std::filesystem::exists(manifest_path)) {
    const auto m = ordered_json::parse(read_text_file(manifest_path), nullptr, false);
    if (!m.is_discarded() && m.contains("parameters") && m["parameters"].contains("delta_h")) {
      delta_h = m["parameters"]["delta_h"].get<double>();
    }
  }

  std::vector<std::size_t> order;
  std::map<std::size_t, std::vector<SweepRow>> by_size;
  for (const auto& row : table.rows) {
    const auto n = static_cast<std::size_t>(std::stoull(row[col_n]));
    if (!by_size.count(n)) order.push_back(n);
    SweepRow r;
    r.n = n;
    r.h_i = parse_double(row[col_h]);
    r.w_per_spin = parse_double(row[col_w]);
    r.std_err_w_per_spin = parse_double(row[col_err]);
    r.pi_per_spin = parse_double(row[col_pi]);
    r.pi_r_per_spin = parse_double(row[col_pir]);
    by_size[n].push_back(r);
  }
  if (order.empty()) throw InvalidArgument(fmt::format("'{}' has no data rows", sweep_csv.string()));
  progress(config, fmt::format("peaks: {} sizes from {}", order.size(), sweep_csv.string()));

  const PeakOptions peak_options{};
  const std::vector<ScalingQuantity> quantities{ScalingQuantity::Work, ScalingQuantity::Performance,
                                                ScalingQuantity::RefrigeratorPerformance};
  ordered_json sizes = ordered_json::array();
  std::map<ScalingQuantity, std::vector<PeakSet>> found;
  for (std::size_t n : order) {
    ordered_json entry{{"n", n}};
    for (auto q : quantities) {
      const auto curve = quantity_curve(by_size[n], q);
      // All-zero clipped curves (e.g. Pi in a refrigerator sweep) have no peaks.
      const bool flat = std::all_of(curve.y.begin(), curve.y.end(),
                                    [](double v) { return v == 0.0 || std::isnan(v); });
      const PeakSet set = flat ? PeakSet{} : find_peaks(curve, peak_options);
      entry[std::string(to_string(q))] = peak_set_json(set, delta_h);
      found[q].push_back(set);
    }
    sizes.push_back(std::move(entry));
  }

  ordered_json fits = ordered_json::object();
  const std::set<std::size_t> distinct(order.begin(), order.end());
  if (distinct.size() >= 3) {
    for (auto q : quantities) {
      const auto& sets = found[q];
      ordered_json tracks = ordered_json::array();
      std::vector<PeakTrack> list;
      if (q == ScalingQuantity::RefrigeratorPerformance) {
        list = {{"dominant", {}, {}}};
      } else {
        list = {{"quantum", {}, {}}, {"classical", {}, {}}};
      }
      for (std::size_t s = 0; s < order.size(); ++s) {
        const double n = static_cast<double>(order[s]);
        auto add = [&](PeakTrack& track, const std::optional<Peak>& p) {
          if (p) track.samples.push_back({order[s], p->location, p->height, p->height * n});
        };
        if (q == ScalingQuantity::RefrigeratorPerformance) {
          add(list[0], sets[s].highest());
        } else {
          add(list[0], sets[s].quantum);
          add(list[1], sets[s].classical);
        }
      }
      for (auto& track : list) {
        std::vector<SizeValue> pts;
        bool positive = track.samples.size() >= 3;
        for (const auto& smp : track.samples) {
          positive = positive && smp.value > 0.0;
          pts.push_back({static_cast<double>(smp.n), smp.value});
        }
        if (positive) track.fit = fit_power_law(pts);
        tracks.push_back(track_json(track, delta_h));
      }
      fits[std::string(to_string(q))] = tracks;
    }
  }

  ordered_json peaks{{"source", sweep_csv.filename().string()},
                     {"delta_h", json_number(delta_h)},
                     {"sizes", sizes},
                     {"tracks", fits}};
  ordered_json params{{"in", sweep_csv.string()}};
  return write_outputs(config, "peaks", "peaks", std::move(params),
                       {{"peaks.json", peaks.dump(2) + "\n"}});
}

}  // namespace sgotto
