// Acceptance checks, one per primary criterion. Prints one PASS/FAIL line
// per criterion; `--only <name>` runs a single one.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracles.hpp"
#include "sgotto/commands.hpp"
#include "sgotto/error.hpp"
#include "sgotto/rng.hpp"
#include "sgotto/table.hpp"

using namespace sgotto;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

fs::path work_dir(const std::string& name) {
  const auto dir = fs::current_path() / "acceptance_out" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SGOTTO_CLI_PATH) + " " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t nearest_index(std::span<const double> grid, double value) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - value) < std::abs(grid[best] - value)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------

Outcome uniform_oracle() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t spectra = 0;
  for (std::size_t n = 2; n <= 512; ++n) {
    const auto chain = uniform_couplings(n, 1.0);
    for (double h : {0.0, 0.5, 1.0, 2.0}) {
      const auto got = spectrum(chain, h, Boundary::Antiperiodic).energies;
      worst = std::max(worst, oracle::max_relative_error(got, oracle::uniform_dispersion(n, 1.0, h)));
      ++spectra;
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-10 && elapsed < 10.0,
          fmt::format("{} spectra, max relative error {:.3g} (< 1e-10), {:.2f} s (< 10 s)", spectra,
                      worst, elapsed)};
}

Outcome brute_force() {
  double worst = 0.0;
  std::size_t cases = 0;
  rng::SplitMix64 fields(2024);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint64_t r = 0; r < 100; ++r) {
      const auto real = sample_couplings(n, rng::derive_seed(31, n, r));
      const double h = -0.5 + 2.5 * fields.uniform_open();
      for (auto b : {Boundary::Antiperiodic, Boundary::Periodic}) {
        const auto got = spectrum(real, h, b).energies;
        const auto want = oracle::dense_bdg_spectrum(real.couplings(), h, b == Boundary::Antiperiodic);
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(got[k] - want[k]));
        ++cases;
      }
    }
  }
  return {worst < 1e-10, fmt::format("{} (realization, boundary) cases for n=2..8, max |diff| {:.3g} (< 1e-10)",
                                     cases, worst)};
}

Outcome critical_field_law() {
  const auto start = Clock::now();
  const std::vector<std::size_t> sizes{100, 1000, 10000};
  const auto rows = critical_field_scaling(sizes, 10000, 20240501);
  bool ok = true;
  std::string detail;
  for (const auto& r : rows) {
    const double law = oracle::critical_field_law(static_cast<double>(r.n));
    const double z = (r.mean_h_c - law) / r.stderr_h_c;
    ok = ok && std::abs(z) <= 3.0;
    detail += fmt::format("N={} mean {:.6g} vs {:.6g} ({:+.2f} SE); ", r.n, r.mean_h_c, law, z);
  }
  const double elapsed = seconds_since(start);
  ok = ok && elapsed < 60.0;
  return {ok, detail + fmt::format("{:.1f} s (< 60 s)", elapsed)};
}

Outcome thermodynamic_properties() {
  const auto start = Clock::now();
  rng::SplitMix64 g(77);
  std::size_t first_law = 0, clausius = 0, equal_bath = 0, carnot = 0, cop = 0, forbidden = 0;
  std::size_t equal_points = 0, engine_cells = 0, fridge_cells = 0;
  double worst_clausius = -1e300;
  const std::size_t points = 10000;
  for (std::size_t p = 0; p < points; ++p) {
    const std::size_t n = 4 + static_cast<std::size_t>(g() % 47);
    const auto real = sample_couplings(n, rng::derive_seed(99, n, p));
    const double h_i = -0.5 + 2.5 * g.uniform_open();
    const double t_h = 1.5 * g.uniform_open();
    const bool equal = p % 10 == 0;
    const double t_c = equal ? t_h : t_h * g.uniform_open();
    if (equal) ++equal_points;
    const auto e = spectrum(real, h_i, Boundary::Antiperiodic);
    const auto E = spectrum(real, h_i + 0.5, Boundary::Antiperiodic);
    CycleResult c;
    try {
      c = run_cycle(e, E, t_c, t_h);
    } catch (const ClausiusViolation&) {
      ++forbidden;
      continue;
    }
    if (c.heats.w != c.heats.q_c + c.heats.q_h) ++first_law;
    if (t_c > 1e-6) {
      const double s = c.heats.q_c / t_c + c.heats.q_h / t_h;
      worst_clausius = std::max(worst_clausius, s);
      if (s > 1e-10) ++clausius;
    }
    if (equal && c.heats.w > 0.0) ++equal_bath;
    if (c.regime.regime == Regime::Engine && !c.regime.boundary) {
      ++engine_cells;
      if (c.engine.eta && *c.engine.eta > c.engine.eta_carnot) ++carnot;
    }
    if (c.regime.regime == Regime::Refrigerator && !c.regime.boundary) {
      ++fridge_cells;
      if (c.refrigerator.eta_r && *c.refrigerator.eta_r > c.refrigerator.eta_cop) ++cop;
    }
  }
  const double elapsed = seconds_since(start);
  const bool ok = first_law + clausius + equal_bath + carnot + cop + forbidden == 0 && elapsed < 120.0;
  return {ok, fmt::format("{} points: first-law {} / Clausius {} (max {:.3g}) / equal-bath W>0 {} of {} / "
                          "eta>eta_C {} of {} / eta_R>eta_COP {} of {} / forbidden {}; {:.1f} s (< 120 s)",
                          points, first_law, clausius, worst_clausius, equal_bath, equal_points, carnot,
                          engine_cells, cop, fridge_cells, forbidden, elapsed)};
}

Outcome regime_map_structure() {
  const auto start = Clock::now();
  SweepSpec spec;
  spec.n_list = {50};
  spec.h_i_grid = {-0.5, 2.0, 64};
  spec.t_h = 0.2;
  spec.realizations = 64;
  spec.master_seed = 3;
  spec.mode = StudyMode::RegimeMap;
  const auto t_c = FieldGrid{0.0, 0.2, 64}.values();
  const auto cells = regime_map(spec, t_c, {});
  const std::size_t cols = 64;
  const std::size_t low = nearest_index(t_c, 0.05);
  const std::size_t high = nearest_index(t_c, 0.15);

  std::size_t fridge_high = 0, engine_low = 0, between_ha = 0;
  for (std::size_t k = 0; k < cols; ++k) {
    if (cells[high * cols + k].regime.regime == Regime::Refrigerator) ++fridge_high;
    if (cells[low * cols + k].regime.regime == Regime::Engine) ++engine_low;
  }
  for (std::size_t row = low; row <= high; ++row) {
    for (std::size_t k = 0; k < cols; ++k) {
      const auto r = cells[row * cols + k].regime.regime;
      if (r == Regime::Heater || r == Regime::Accelerator) ++between_ha;
    }
  }
  const bool ok = 2 * fridge_high > cols && engine_low > 0 && between_ha > 0;
  return {ok, fmt::format("t_c={:.4f} row: {}/{} Refrigerator; t_c={:.4f} row: {} Engine cells; "
                          "{} H/A cells between; {:.1f} s",
                          t_c[high], fridge_high, cols, t_c[low], engine_low, between_ha,
                          seconds_since(start))};
}

Outcome double_peak_crossover() {
  const auto start = Clock::now();
  const std::vector<std::size_t> sizes{50};
  const SweepEvaluator evaluator(sizes, FieldGrid{}, kDefaultQuench, 512, 1, {});
  auto peaks_at = [&](double t_h) {
    const auto rows = evaluator.rows_for(0, t_h / 4.0, t_h);
    return find_peaks(quantity_curve(rows, ScalingQuantity::Work));
  };

  const auto low = peaks_at(0.2);
  const auto high = peaks_at(0.5);
  const bool low_ok = low.quantum && low.classical && low.quantum->height > low.classical->height;
  const bool high_ok = high.quantum && high.classical && high.quantum->height < high.classical->height;

  std::vector<double> temps, q, c;
  for (double t_h : FieldGrid{0.05, 1.5, 59}.values()) {
    const auto p = peaks_at(t_h);
    if (p.quantum && p.classical) {
      temps.push_back(t_h);
      q.push_back(p.quantum->height);
      c.push_back(p.classical->height);
    }
  }
  const auto cross = peak_crossover(temps, q, c);
  const bool cross_ok = cross && std::abs(*cross - 0.29) <= 0.05;

  auto describe = [](const PeakSet& p) {
    if (!(p.quantum && p.classical)) return fmt::format("{} peak(s)", p.count());
    return fmt::format("quantum {:.5f}@{:.3f}, classical {:.5f}@{:.3f}", p.quantum->height,
                       p.quantum->location, p.classical->height, p.classical->location);
  };
  return {low_ok && high_ok && cross_ok,
          fmt::format("t_h=0.2: {}; t_h=0.5: {}; crossover {} (0.29 +/- 0.05); {:.1f} s", describe(low),
                      describe(high), cross ? fmt::format("{:.4f}", *cross) : "none", seconds_since(start))};
}

Outcome refrigerator_scaling() {
  const auto start = Clock::now();
  const auto dir = work_dir("refrigerator_scaling");
  const int code = run_cli(fmt::format(
      "scaling --quantity PiR --n-list 20,30,40,50 --tc-ratio 0.75 --th-min 0.2 --th-max 1.5 "
      "--th-points 27 --realizations 512 --seed 11 --quiet --out {}",
      dir.string()));
  if (code != 0) return {false, fmt::format("scaling command exited with {}", code)};
  const auto j = nlohmann::json::parse(read_text_file(dir / "peaks.json"));

  bool alpha_ok = true;
  std::string alphas;
  for (const auto& point : j["points"]) {
    const double t_h = point["t_h"].get<double>();
    if (t_h < 1.0 - 1e-9 || t_h > 1.5 + 1e-9) continue;
    const auto& fit = point["tracks"][0]["fit"];
    if (fit.is_null()) {
      alpha_ok = false;
      alphas += fmt::format("{:.2f}:none ", t_h);
      continue;
    }
    const double alpha = fit["alpha"].get<double>();
    alpha_ok = alpha_ok && std::abs(alpha - 1.1) <= 0.15;
    alphas += fmt::format("{:.2f}:{:.3f} ", t_h, alpha);
  }
  const auto& onset = j["divergence"]["onset_t_h"];
  const bool onset_ok = !onset.is_null() && std::abs(onset.get<double>() - 0.7) <= 0.15;
  return {alpha_ok && onset_ok,
          fmt::format("alpha(t_h) [{}] (1.1 +/- 0.15); divergence onset {} (0.7 +/- 0.15, spread >= {:.3f}); {:.1f} s",
                      alphas, onset.is_null() ? "none" : fmt::format("{:.3f}", onset.get<double>()),
                      j["divergence"]["threshold"].get<double>(), seconds_since(start))};
}

Outcome clipping() {
  const auto start = Clock::now();
  const auto dir = work_dir("clipping");
  struct Run { std::string name, args; };
  const std::vector<Run> runs{
      {"engine_th0.2", "--mode engine --th 0.2 --n-list 20,50"},
      {"engine_th0.5", "--mode engine --th 0.5 --n-list 20,50"},
      {"engine_th1.0_tc0.9", "--mode engine --th 1.0 --tc 0.9 --n 30"},
      {"fridge_th0.2", "--mode refrigerator --th 0.2 --n-list 20,50"},
      {"fridge_th0.5", "--mode refrigerator --th 0.5 --n-list 20,30,40,50"},
      {"fridge_th1.5", "--mode refrigerator --th 1.5 --n 40"},
      {"fridge_pbc", "--mode refrigerator --th 0.7 --n 30 --boundary pbc"},
  };
  std::size_t files = 0, rows = 0, violations = 0, clipped_pi = 0, clipped_pir = 0;
  for (const auto& r : runs) {
    const auto out = dir / r.name;
    if (run_cli(fmt::format("sweep {} --realizations 64 --seed 2 --quiet --out {}", r.args, out.string())) != 0) {
      return {false, fmt::format("sweep {} failed", r.name)};
    }
  }
  // Every sweep.csv emitted under the acceptance output tree.
  for (const auto& entry : fs::recursive_directory_iterator(dir.parent_path())) {
    if (entry.path().filename() != "sweep.csv") continue;
    const auto t = read_csv(entry.path());
    ++files;
    const auto cw = t.column("w_per_spin"), cp = t.column("pi_per_spin"), cr = t.column("pi_r_per_spin");
    for (const auto& row : t.rows) {
      ++rows;
      const double w = parse_double(row[cw]);
      const double pi = parse_double(row[cp]);
      const double pir = parse_double(row[cr]);
      if (w < 0.0) {
        ++clipped_pi;
        if (pi != 0.0) ++violations;
      }
      if (w > 0.0) {
        ++clipped_pir;
        if (pir != 0.0) ++violations;
      }
    }
  }
  return {violations == 0 && files >= runs.size(),
          fmt::format("{} sweep files, {} rows: {} rows with W<0 (Pi/N must be 0), {} with W>0 (Pi_R/N must be 0), "
                      "{} violations; {:.1f} s",
                      files, rows, clipped_pi, clipped_pir, violations, seconds_since(start))};
}

Outcome determinism() {
  const auto start = Clock::now();
  const auto dir = work_dir("determinism");
  struct Run { std::string args; std::vector<std::string> outputs; };
  const std::vector<Run> runs{
      {"critical-field --n-list 10,100,1000 --samples 2000", {"critical_field.csv"}},
      {"regime-map --n 30 --tc-points 12 --hi-points 16 --realizations 32", {"regime_map.csv"}},
      {"sweep --mode engine --n-list 20,30 --realizations 48", {"sweep.csv"}},
      {"sweep --mode refrigerator --tc-ratio 0.75 --th 0.5 --n 24 --realizations 48 --boundary pbc",
       {"sweep.csv"}},
      {"scaling --quantity PiR --th-min 0.3 --th-max 1.2 --th-points 4 --realizations 24 --hi-points 41",
       {"scaling.csv", "peaks.json"}},
  };
  std::size_t compared = 0, mismatched = 0;
  std::string bad;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::vector<std::string> bodies[2];
    const unsigned threads[2] = {1, 4};
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / fmt::format("run{}_t{}", i, threads[k]);
      const int code = run_cli(fmt::format("{} --seed 42 --threads {} --quiet --out {}", runs[i].args,
                                           threads[k], out.string()));
      if (code != 0) return {false, fmt::format("'{}' exited with {}", runs[i].args, code)};
      for (const auto& f : runs[i].outputs) bodies[k].push_back(read_text_file(out / f));
    }
    for (std::size_t f = 0; f < bodies[0].size(); ++f) {
      ++compared;
      if (bodies[0][f] != bodies[1][f]) {
        ++mismatched;
        bad += " " + runs[i].outputs[f];
      }
    }
    // The peaks command re-analyzes a sweep; compare it too.
    if (runs[i].outputs[0] == "sweep.csv") {
      std::string peaks[2];
      for (int k = 0; k < 2; ++k) {
        const auto out = dir / fmt::format("run{}_t{}", i, threads[k]);
        if (run_cli(fmt::format("peaks --in {} --threads {} --quiet --out {}", (out / "sweep.csv").string(),
                                threads[k], out.string())) != 0) {
          return {false, "peaks command failed"};
        }
        peaks[k] = read_text_file(out / "peaks.json");
      }
      ++compared;
      if (peaks[0] != peaks[1]) {
        ++mismatched;
        bad += " peaks.json";
      }
    }
  }
  return {mismatched == 0,
          fmt::format("{} artifacts compared between --threads 1 and --threads 4, {} differ{}; {:.1f} s", compared,
                      mismatched, bad, seconds_since(start))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"uniform_oracle", uniform_oracle},
      {"brute_force", brute_force},
      {"critical_field_law", critical_field_law},
      {"thermodynamic_properties", thermodynamic_properties},
      {"regime_map", regime_map_structure},
      {"double_peak_crossover", double_peak_crossover},
      {"refrigerator_scaling", refrigerator_scaling},
      {"clipping", clipping},
      {"determinism", determinism},
  };
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--only" && i + 1 < argc) only = argv[++i];
  }
  bool all_pass = true;
  bool matched = false;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && name != only) continue;
    matched = true;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
