#include "ergolab/rng.hpp"

#include <cmath>
#include <numbers>

namespace ergolab {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

Complex Rng::unit_disk() {
  for (;;) {
    const double x = uniform(-1.0, 1.0);
    const double y = uniform(-1.0, 1.0);
    if (x * x + y * y <= 1.0) return {x, y};
  }
}

Complex Rng::normal() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * std::numbers::pi * v;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

long long Rng::integer(long long lo, long long hi) {
  if (hi < lo) throw Error(Errc::InvalidArgument, "empty integer range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long long>(engine_() % span);
}

ComplexMatrix random_matrix(Index dim, double spectral_radius, Rng& rng) {
  if (dim < 1) throw Error(Errc::BadDimension, "random matrix needs dim >= 1");
  ComplexMatrix a(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) a(i, j) = rng.unit_disk();
  const double rho = ergolab::spectral_radius(a);
  if (rho > 0.0) a *= spectral_radius / rho;
  return a;
}

OperatorModel random_operator(Index dim, double spectral_radius, std::uint64_t seed) {
  Rng rng(seed);
  return make_operator(random_matrix(dim, spectral_radius, rng), std::nullopt,
                       "random:" + std::to_string(dim));
}

ComplexVector random_unit_vector(Index dim, Rng& rng) {
  ComplexVector x(dim);
  for (Index i = 0; i < dim; ++i) x(i) = rng.normal();
  const double n = x.norm();
  if (n == 0.0) {
    x.setZero();
    x(0) = 1.0;
    return x;
  }
  return x / n;
}

}  // namespace ergolab
