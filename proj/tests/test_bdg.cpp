#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "sgotto/bdg.hpp"
#include "sgotto/rng.hpp"

using namespace sgotto;

TEST_CASE("two-spin antiperiodic block") {
  const DisorderRealization r({0.3, 0.8});
  const auto m = build_bdg(r, 0.7, Boundary::Antiperiodic);
  CHECK(m.a_block(0, 0) == 0.7);
  CHECK(m.a_block(1, 1) == 0.7);
  CHECK(m.a_block(0, 1) == doctest::Approx((-0.3 + 0.8) / 2));
  CHECK(m.a_block(1, 0) == doctest::Approx((-0.3 + 0.8) / 2));
}

TEST_CASE("boundary bond carries the sign flip only under ABC") {
  const DisorderRealization r({0.1, 0.2, 0.3, 0.4, 0.5});
  const auto abc = build_bdg(r, 1.0, Boundary::Antiperiodic);
  const auto pbc = build_bdg(r, 1.0, Boundary::Periodic);
  CHECK(abc.a_block(4, 0) == doctest::Approx(0.25));
  CHECK(abc.a_block(0, 4) == doctest::Approx(0.25));
  CHECK(abc.b_block(4, 0) == doctest::Approx(0.25));
  CHECK(abc.b_block(0, 4) == doctest::Approx(-0.25));
  CHECK(pbc.a_block(4, 0) == doctest::Approx(-0.25));
  CHECK(pbc.b_block(4, 0) == doctest::Approx(-0.25));
  CHECK(abc.a_block(1, 2) == doctest::Approx(-0.1));
  CHECK(abc.b_block(1, 2) == doctest::Approx(-0.1));
  CHECK(abc.b_block(2, 1) == doctest::Approx(0.1));
}

TEST_CASE("blocks are symmetric / antisymmetric with diagonal h") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = sample_couplings(9, s);
    for (auto b : {Boundary::Antiperiodic, Boundary::Periodic}) {
      const auto m = build_bdg(r, 0.0, b);
      CHECK((m.a_block - m.a_block.transpose()).norm() == 0.0);
      CHECK((m.b_block + m.b_block.transpose()).norm() == 0.0);
      CHECK(m.a_block.diagonal().norm() == 0.0);
      for (Eigen::Index i = 0; i < 9; ++i) {
        for (Eigen::Index j = 0; j < 9; ++j) {
          const auto d = std::abs(i - j);
          if (d != 1 && d != 8 && i != j) CHECK(m.a_block(i, j) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("uniform ring at n=4, J=h=1") {
  const auto s = spectrum(uniform_couplings(4, 1.0), 1.0, Boundary::Antiperiodic);
  REQUIRE(s.energies.size() == 4);
  CHECK(s.energies[0] == doctest::Approx(0.765367).epsilon(1e-6));
  CHECK(s.energies[1] == doctest::Approx(0.765367).epsilon(1e-6));
  CHECK(s.energies[2] == doctest::Approx(1.847759).epsilon(1e-6));
  CHECK(s.energies[3] == doctest::Approx(1.847759).epsilon(1e-6));
}

TEST_CASE("uniform ring matches the dispersion") {
  for (std::size_t n : {2, 3, 5, 8, 17, 64, 101}) {
    for (double j : {0.5, 1.0, 1.3}) {
      for (double h : {0.0, 0.3, 1.0, 2.5}) {
        const auto got = spectrum(uniform_couplings(n, j), h, Boundary::Antiperiodic).energies;
        const auto want = oracle::uniform_dispersion(n, j, h);
        CHECK(oracle::max_relative_error(got, want) < 1e-10);
      }
    }
  }
}

TEST_CASE("zero field gives |J_i|, zero couplings give |h|") {
  const DisorderRealization r({0.4, -1.2, 0.05, 0.9, -0.3});
  auto want = std::vector<double>{0.4, 1.2, 0.05, 0.9, 0.3};
  std::sort(want.begin(), want.end());
  for (auto b : {Boundary::Antiperiodic, Boundary::Periodic}) {
    const auto got = spectrum(r, 0.0, b).energies;
    CHECK(oracle::max_relative_error(got, want) < 1e-12);
    const auto free = spectrum(uniform_couplings(5, 0.0), -0.7, b).energies;
    for (double e : free) CHECK(e == doctest::Approx(0.7).epsilon(1e-14));
  }
}

TEST_CASE("singular values equal the positive half of the dense BdG spectrum") {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto r = sample_couplings(n, rng::derive_seed(3, n, s));
      for (double h : {-0.4, 0.0, 0.2, 1.1}) {
        for (auto b : {Boundary::Antiperiodic, Boundary::Periodic}) {
          const auto got = spectrum(r, h, b).energies;
          const auto want = oracle::dense_bdg_spectrum(r.couplings(), h, b == Boundary::Antiperiodic);
          for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("spectrum output is sorted, nonnegative and of length n") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto r = sample_couplings(40, s);
    const auto e = spectrum(r, 0.1 * static_cast<double>(s % 7) - 0.3, Boundary::Antiperiodic).energies;
    REQUIRE(e.size() == 40);
    CHECK(std::is_sorted(e.begin(), e.end()));
    CHECK(e.front() >= 0.0);
  }
}

TEST_CASE("large fields confine the spectrum to [h - 2M, h + 2M]") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = sample_couplings(30, s);
    const double big = 2.0 * r.max_abs_coupling();
    const double h = big + 0.5;
    for (double e : spectrum(r, h, Boundary::Antiperiodic).energies) {
      CHECK(e >= h - big - 1e-12);
      CHECK(e <= h + big + 1e-12);
    }
  }
}

TEST_CASE("ABC and PBC spectra converge with n") {
  auto mean_gap = [](std::size_t n) {
    double total = 0.0;
    const int samples = 40;
    for (int s = 0; s < samples; ++s) {
      const auto r = sample_couplings(n, rng::derive_seed(21, n, static_cast<std::uint64_t>(s)));
      const auto a = spectrum(r, 0.3, Boundary::Antiperiodic).energies;
      const auto p = spectrum(r, 0.3, Boundary::Periodic).energies;
      double d = 0.0;
      for (std::size_t k = 0; k < n; ++k) d += std::abs(a[k] - p[k]);
      total += d / static_cast<double>(n);
    }
    return total / samples;
  };
  CHECK(mean_gap(100) < mean_gap(10));
}
