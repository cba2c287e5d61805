#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace sgotto {

/// One sampled set of nearest-neighbour couplings J_1..J_n on a ring.
/// Bond i joins spin i and spin i+1 (mod n).
class DisorderRealization {
 public:
  /// Throws InvalidArgument when fewer than two couplings are given.
  explicit DisorderRealization(std::vector<double> couplings,
                               std::uint64_t seed = 0);

  std::size_t n() const noexcept { return couplings_.size(); }
  std::span<const double> couplings() const noexcept { return couplings_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double max_abs_coupling() const noexcept;
  double min_abs_coupling() const noexcept;

 private:
  std::vector<double> couplings_;
  std::uint64_t seed_;
};

/// n i.i.d. Normal(0, 1/n) couplings, a pure function of (n, seed).
DisorderRealization sample_couplings(std::size_t n, std::uint64_t seed);

/// Constant couplings J_i = j; the clean-chain baseline.
DisorderRealization uniform_couplings(std::size_t n, double j);

struct CriticalPointData {
  double delta_c = 0.0;  ///< mean of ln|J_i|
  double h_c = 0.0;      ///< exp(delta_c)
  double delta_h = 0.0;  ///< ln h for the queried field, 0 when none given
};

/// delta_c = mean ln|J_i|, h_c = exp(delta_c). Throws DegenerateCoupling if
/// any coupling is exactly zero.
CriticalPointData critical_field(const DisorderRealization& r);

/// Same as above, also filling delta_h = ln h (h > 0).
CriticalPointData critical_field(const DisorderRealization& r, double h);

struct CriticalFieldRow {
  std::size_t n = 0;
  double mean_h_c = 0.0;
  double stderr_h_c = 0.0;  ///< NaN for a single sample
  std::size_t samples = 0;
};

/// Disorder-averaged h_c for every size: exp of the mean delta_c, with the
/// standard error propagated as mean_h_c * stderr(delta_c). Sample s of size
/// n uses derive_seed(seed, n, s).
std::vector<CriticalFieldRow> critical_field_scaling(
    std::span<const std::size_t> sizes, std::size_t samples_per_size,
    std::uint64_t seed);

enum class GriffithsLabel {
  WeaklyDisordered,
  StronglyDisordered,
  WeaklyOrdered,
  StronglyOrdered,
  Critical,
};

std::string_view to_string(GriffithsLabel label) noexcept;

/// The three coupling statistics the Griffiths conditions look at. Built from
/// one realization, or from ensemble means for sweep annotations.
struct GriffithsInputs {
  double delta_c = 0.0;
  double max_abs_coupling = 0.0;
  double min_abs_coupling = 0.0;
};

GriffithsInputs griffiths_inputs(const DisorderRealization& r);

inline constexpr double kCriticalTolerance = 1e-12;

/// Classifies a uniform field h > 0 against the coupling statistics.
/// |ln h - delta_c| <= tol is Critical; otherwise exactly one of the four
/// Griffiths phases.
GriffithsLabel griffiths_classify(const GriffithsInputs& in, double h,
                                  double tol = kCriticalTolerance);

GriffithsLabel griffiths_classify(const DisorderRealization& r, double h,
                                  double tol = kCriticalTolerance);

}  // namespace sgotto
