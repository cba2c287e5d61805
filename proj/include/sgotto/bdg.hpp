#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string_view>
#include <vector>

#include "sgotto/spinglass.hpp"

namespace sgotto {

/// Fermion-sector boundary condition of the Jordan-Wigner chain. The ground
/// state of the periodic spin ring lives in the antiperiodic sector.
enum class Boundary { Antiperiodic, Periodic };

std::string_view to_string(Boundary b) noexcept;

/// Blocks of the 2n x 2n Bogoliubov-de Gennes matrix [[A, B], [-B, -A]].
/// A is symmetric with h on the diagonal, B antisymmetric; both are nonzero
/// only on the ring bonds (i, i+1 mod n).
struct BdGMatrix {
  double h = 0.0;
  Boundary boundary = Boundary::Antiperiodic;
  Eigen::MatrixXd a_block;
  Eigen::MatrixXd b_block;

  std::size_t n() const noexcept { return static_cast<std::size_t>(a_block.rows()); }

  /// The full 2n x 2n matrix. Used by tests as a brute-force reference.
  Eigen::MatrixXd assembled() const;
};

/// Bulk bonds: A(i,i+1) = A(i+1,i) = -J_i/2, B(i,i+1) = -B(i+1,i) = -J_i/2.
/// The closing bond (n, 1) follows the bulk pattern for Periodic and carries
/// the opposite sign for Antiperiodic. Contributions are summed, so n = 2
/// puts both bonds on the same matrix entries (the Periodic n = 2 ring
/// double-counts its single physical bond).
BdGMatrix build_bdg(const DisorderRealization& r, double h,
                    Boundary boundary = Boundary::Antiperiodic);

/// The n nonnegative Bogoliubov energies at field h, ascending.
struct QuasiparticleSpectrum {
  double h = 0.0;
  std::vector<double> energies;

  std::size_t n() const noexcept { return energies.size(); }
};

/// Singular values of A + B, which are the nonnegative eigenvalues of the
/// assembled matrix. A + B of a ring has the sparsity of a cyclic bidiagonal
/// matrix; folding the ring order makes it tridiagonal, which LAPACK reduces
/// to bidiagonal form in O(n^2) before the dqds singular value sweep.
/// Throws DiagonalizationError when LAPACK fails.
QuasiparticleSpectrum spectrum(const BdGMatrix& m);

/// build_bdg + spectrum.
QuasiparticleSpectrum spectrum(const DisorderRealization& r, double h,
                               Boundary boundary = Boundary::Antiperiodic);

}  // namespace sgotto
