#include "sgotto/rng.hpp"

#include <cmath>
#include <numbers>

namespace sgotto::rng {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index) noexcept {
  std::uint64_t key = mix64(master ^ 0x6a09e667f3bcc909ULL);
  key = mix64(key ^ (stream + 0x3c6ef372fe94f82bULL));
  return mix64(key ^ (index + 0xa54ff53a5f1d36f1ULL));
}

double StandardNormal::operator()() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = engine_.uniform_open();
  const double u2 = engine_.uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace sgotto::rng
