#include <doctest.h>

#include <cmath>

#include "sgotto/analysis.hpp"
#include "sgotto/error.hpp"
#include "sgotto/rng.hpp"

using namespace sgotto;

namespace {

Curve sample(double lo, double hi, std::size_t points, auto fn) {
  Curve c;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    c.x.push_back(x);
    c.y.push_back(fn(x));
  }
  return c;
}

double bumps(double x) {
  return std::exp(-std::pow((x - 0.2) / 0.15, 2)) + 0.6 * std::exp(-std::pow((x - 1.2) / 0.2, 2));
}

}  // namespace

TEST_CASE("tent map has a single peak") {
  const auto c = sample(0.0, 2.0, 21, [](double x) { return 1.0 - std::abs(x - 1.0); });
  const auto p = find_peaks(c, 1e-6);
  REQUIRE(p.single);
  CHECK(p.count() == 1);
  CHECK(p.single->location == doctest::Approx(1.0));
  CHECK(p.single->height == doctest::Approx(1.0));
}

TEST_CASE("double Gaussian gives quantum and classical peaks") {
  const auto c = sample(-0.5, 2.0, 101, bumps);
  const auto p = find_peaks(c, 1e-3);
  REQUIRE(p.quantum);
  REQUIRE(p.classical);
  REQUIRE(p.separating_minimum);
  CHECK(p.quantum->location == doctest::Approx(0.2));
  CHECK(p.classical->location == doctest::Approx(1.2));
  CHECK(p.quantum->location < p.separating_minimum->location);
  CHECK(p.separating_minimum->location < p.classical->location);
  CHECK(p.quantum->height == c.y[p.quantum->index]);
  CHECK(p.highest()->location == p.quantum->location);
}

TEST_CASE("flat and monotone curves have no peaks") {
  CHECK(find_peaks(sample(0, 1, 11, [](double) { return 0.0; }), 0.0).empty());
  CHECK(find_peaks(sample(0, 1, 11, [](double x) { return x; }), 0.0).empty());
}

TEST_CASE("small bumps are filtered by prominence") {
  auto c = sample(-0.5, 2.0, 101, bumps);
  c.y[80] += 1e-4;
  const auto p = find_peaks(c, 1e-3);
  CHECK(p.count() == 2);
  CHECK(p.classical->location == doctest::Approx(1.2));
}

TEST_CASE("invalid curves are rejected") {
  Curve c{{0, 1, 2, 3}, {0, 1, 0, 1}, {}};
  CHECK_THROWS_AS(find_peaks(c, 0.0), InvalidArgument);
  Curve unsorted{{0, 2, 1, 3, 4}, {0, 1, 0, 1, 0}, {}};
  CHECK_THROWS_AS(find_peaks(unsorted, 0.0), InvalidArgument);
  Curve nan{{0, 1, 2, 3, 4}, {0, NAN, 0, 1, 0}, {}};
  CHECK_THROWS_AS(find_peaks(nan, 0.0), InvalidArgument);
}

TEST_CASE("default prominence uses the median error") {
  Curve c = sample(0, 1, 5, [](double x) { return x; });
  c.err = {0.1, 0.3, 0.2, 0.5, 0.4};
  CHECK(default_min_prominence(c) == doctest::Approx(0.6));
  c.err.clear();
  CHECK(default_min_prominence(c) == doctest::Approx(1e-3));
}

TEST_CASE("shift and scale equivariance") {
  const auto c = sample(-0.5, 2.0, 101, bumps);
  auto shifted = c;
  for (double& x : shifted.x) x += 0.37;
  auto scaled = c;
  for (double& y : scaled.y) y *= 3.5;
  const auto p = find_peaks(c, 1e-3);
  const auto s = find_peaks(shifted, 1e-3);
  const auto k = find_peaks(scaled, 3.5e-3);
  CHECK(s.quantum->location == doctest::Approx(p.quantum->location + 0.37));
  CHECK(s.quantum->height == p.quantum->height);
  CHECK(k.classical->location == p.classical->location);
  CHECK(k.classical->height == doctest::Approx(3.5 * p.classical->height));
}

TEST_CASE("smoothing and refinement") {
  auto c = sample(-0.5, 2.0, 101, bumps);
  rng::StandardNormal z(3);
  for (double& y : c.y) y += 1e-3 * z();
  const auto p = find_peaks(c, 0.05, true, false);
  CHECK(p.count() == 2);
  const auto off_grid = sample(0.0, 1.0, 11, [](double x) { return 1.0 - (x - 0.52) * (x - 0.52); });
  const auto r = find_peaks(off_grid, 1e-6, false, true);
  REQUIRE(r.single);
  CHECK(r.single->location == doctest::Approx(0.52));
  CHECK(r.single->height == doctest::Approx(1.0));
}

TEST_CASE("peak crossover") {
  const std::vector<double> t{0.25, 0.35};
  const std::vector<double> q{0.2, 0.1}, c{0.1, 0.2};
  CHECK(*peak_crossover(t, q, c) == doctest::Approx(0.30));
  const std::vector<double> t3{0.1, 0.2, 0.3};
  const std::vector<double> q3{0.5, 0.5, 0.5}, c3{0.1, 0.2, 0.3};
  CHECK_FALSE(peak_crossover(t3, q3, c3).has_value());
}

TEST_CASE("power-law fits") {
  const std::vector<SizeValue> linear{{20, 40}, {30, 60}, {40, 80}, {50, 100}};
  const auto f = fit_power_law(linear);
  CHECK(f.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.b == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0));

  const std::vector<SizeValue> planted{{20, std::pow(20.0, 1.3)}, {30, std::pow(30.0, 1.3)},
                                       {50, std::pow(50.0, 1.3)}};
  const auto g = fit_power_law(planted);
  CHECK(g.alpha == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(g.b == doctest::Approx(1.0).epsilon(1e-12));

  auto scaled = planted;
  for (auto& p : scaled) p.value *= 7.0;
  CHECK(fit_power_law(scaled).b == doctest::Approx(7.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_power_law(std::vector<SizeValue>{{20, 1}, {30, 2}}), InvalidArgument);
  CHECK_THROWS_AS(fit_power_law(std::vector<SizeValue>{{20, 1}, {30, 0}, {40, 2}}), InvalidArgument);
  CHECK_THROWS_AS(fit_power_law(std::vector<SizeValue>{{20, 1}, {20, 2}, {20, 3}}), InvalidArgument);
}

TEST_CASE("power-law fit with 1% noise stays near the planted exponent") {
  rng::StandardNormal z(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SizeValue> pts;
    for (double n : {20.0, 30.0, 40.0, 50.0}) pts.push_back({n, 3.0 * std::pow(n, 1.1) * (1.0 + 0.01 * z())});
    CHECK(std::abs(fit_power_law(pts).alpha - 1.1) < 0.05);
  }
}

TEST_CASE("quench midpoint") {
  CHECK(quench_midpoint(0.65, 0.5) == doctest::Approx(0.9));
  CHECK(quench_midpoint(0.0, 0.5) == 0.25);
  CHECK(quench_midpoint(1.0, 0.0) == 1.0);
}

TEST_CASE("position spread and divergence onset") {
  const std::vector<std::vector<double>> pos{{0.1, 0.1}, {0.1, 0.2}, {0.1, 0.1}, {0.1, 0.3}, {0.0, 0.4}};
  const auto spread = position_spread(pos);
  CHECK(spread[1] == doctest::Approx(0.1));
  const std::vector<double> t{0.1, 0.2, 0.3, 0.4, 0.5};
  CHECK(*divergence_onset(t, spread, 0.05) == doctest::Approx(0.4));
  CHECK_FALSE(divergence_onset(t, spread, 1.0).has_value());
}
