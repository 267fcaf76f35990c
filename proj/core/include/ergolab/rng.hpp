#pragma once

// Seeded, platform-independent random draws. std::uniform_real_distribution
// is implementation-defined, so doubles are built from raw 64-bit words.

#include <cstdint>
#include <random>

#include "ergolab/linop.hpp"

namespace ergolab {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on the closed unit disk.
  Complex unit_disk();
  // Standard complex normal (Box-Muller on both components).
  Complex normal();
  long long integer(long long lo, long long hi);  // inclusive

 private:
  std::mt19937_64 engine_;
};

// Entries uniform on the unit disk, then rescaled to the requested spectral
// radius (left unscaled if the draw has radius zero).
ComplexMatrix random_matrix(Index dim, double spectral_radius, Rng& rng);
OperatorModel random_operator(Index dim, double spectral_radius, std::uint64_t seed);

ComplexVector random_unit_vector(Index dim, Rng& rng);

}  // namespace ergolab
