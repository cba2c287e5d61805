#include "sgotto/bdg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sgotto/error.hpp"

namespace sgotto {

std::string_view to_string(Boundary b) noexcept {
  return b == Boundary::Antiperiodic ? "abc" : "pbc";
}

Eigen::MatrixXd BdGMatrix::assembled() const {
  const auto n = a_block.rows();
  Eigen::MatrixXd full(2 * n, 2 * n);
  full.topLeftCorner(n, n) = a_block;
  full.topRightCorner(n, n) = b_block;
  full.bottomLeftCorner(n, n) = -b_block;
  full.bottomRightCorner(n, n) = -a_block;
  return full;
}

BdGMatrix build_bdg(const DisorderRealization& r, double h, Boundary boundary) {
  const auto n = static_cast<Eigen::Index>(r.n());
  const auto couplings = r.couplings();

  BdGMatrix m;
  m.h = h;
  m.boundary = boundary;
  m.a_block = Eigen::MatrixXd::Zero(n, n);
  m.b_block = Eigen::MatrixXd::Zero(n, n);
  m.a_block.diagonal().setConstant(h);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index j = (i + 1) % n;
    const bool closing = (j == 0);
    const double sign = (closing && boundary == Boundary::Antiperiodic) ? -1.0 : 1.0;
    const double half = sign * couplings[static_cast<std::size_t>(i)] / 2.0;
    m.a_block(i, j) -= half;
    m.a_block(j, i) -= half;
    m.b_block(i, j) -= half;
    m.b_block(j, i) += half;
  }
  return m;
}

namespace {

// Positions of rows and columns after folding the bipartite ring
// c0 r0 c1 r1 ... c_{n-1} r_{n-1} into the order s0 s1 s_{m-1} s2 s_{m-2} ...
// Every ring edge then lands within one diagonal of the main one.
struct FoldOrder {
  std::vector<Eigen::Index> row_pos;
  std::vector<Eigen::Index> col_pos;
};

FoldOrder fold_order(Eigen::Index n) {
  const Eigen::Index m = 2 * n;
  FoldOrder order{std::vector<Eigen::Index>(static_cast<std::size_t>(n)),
                  std::vector<Eigen::Index>(static_cast<std::size_t>(n))};
  Eigen::Index next_row = 0;
  Eigen::Index next_col = 0;
  auto place = [&](Eigen::Index s) {
    const auto node = static_cast<std::size_t>(s / 2);
    if (s % 2 == 0) {
      order.col_pos[node] = next_col++;
    } else {
      order.row_pos[node] = next_row++;
    }
  };
  place(0);
  for (Eigen::Index lo = 1, hi = m - 1; lo <= hi; ++lo, --hi) {
    place(lo);
    if (hi != lo) place(hi);
  }
  return order;
}

std::string failure_diagnostics(const Eigen::MatrixXd& m, double h) {
  return fmt::format("n={} h={} frobenius_norm={:.6e} max_abs_entry={:.6e}",
                     m.rows(), h, m.norm(), m.cwiseAbs().maxCoeff());
}

}  // namespace

QuasiparticleSpectrum spectrum(const BdGMatrix& bdg) {
  const Eigen::MatrixXd m = bdg.a_block + bdg.b_block;
  const Eigen::Index n = m.rows();
  const FoldOrder order = fold_order(n);

  lapack_int kl = 0;
  lapack_int ku = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (m(i, j) == 0.0) continue;
      const auto offset = static_cast<lapack_int>(
          order.col_pos[static_cast<std::size_t>(j)] -
          order.row_pos[static_cast<std::size_t>(i)]);
      ku = std::max(ku, offset);
      kl = std::max(kl, -offset);
    }
  }

  // General band storage, column-major: ab(ku + p - q, q) = M(p, q).
  const lapack_int ldab = kl + ku + 1;
  std::vector<double> band(static_cast<std::size_t>(ldab * n), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (m(i, j) == 0.0) continue;
      const auto p = order.row_pos[static_cast<std::size_t>(i)];
      const auto q = order.col_pos[static_cast<std::size_t>(j)];
      band[static_cast<std::size_t>(ku + p - q + q * ldab)] = m(i, j);
    }
  }

  const auto nn = static_cast<lapack_int>(n);
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> offdiag(static_cast<std::size_t>(n));
  lapack_int info = LAPACKE_dgbbrd(LAPACK_COL_MAJOR, 'N', nn, nn, 0, kl, ku,
                                   band.data(), ldab, diag.data(), offdiag.data(),
                                   nullptr, 1, nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw DiagonalizationError(fmt::format("band bidiagonalization failed (info={}): {}",
                                           info, failure_diagnostics(m, bdg.h)));
  }
  info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'U', nn, 0, 0, 0, diag.data(),
                        offdiag.data(), nullptr, 1, nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw DiagonalizationError(fmt::format("bidiagonal SVD did not converge (info={}): {}",
                                           info, failure_diagnostics(m, bdg.h)));
  }

  std::sort(diag.begin(), diag.end());
  return {bdg.h, std::move(diag)};
}

QuasiparticleSpectrum spectrum(const DisorderRealization& r, double h,
                               Boundary boundary) {
  return spectrum(build_bdg(r, h, boundary));
}

}  // namespace sgotto
