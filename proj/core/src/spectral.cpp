#include "ergolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "ergolab/means.hpp"

namespace ergolab {

namespace {

constexpr double kSpectrumGap = 1e-12;

bool near_spectrum(const ComplexVector& eig, Complex lambda) {
  for (Index i = 0; i < eig.size(); ++i)
    if (std::abs(eig(i) - lambda) < kSpectrumGap) return true;
  return false;
}

ComplexMatrix resolvent_unchecked(const OperatorModel& t, Complex lambda) {
  ComplexMatrix shifted = t.matrix;
  shifted.diagonal().array() -= lambda;
  return shifted.partialPivLu().inverse();
}

double kreiss_weight(double rho, int r) {
  return std::pow(rho - 1.0, r + 1) / std::pow(rho, r);
}

void check_order(int r) {
  if (r < 0) throw Error(Errc::InvalidArgument, "order r must be >= 0");
}

double refinement(const std::vector<double>& profile) {
  if (profile.size() < 2) return 1.0;
  const double coarse = *std::max_element(profile.begin(), profile.end() - 1);
  const double fine = std::max(coarse, profile.back());
  return coarse > 0.0 ? fine / coarse : 1.0;
}

void take_max(FunctionalReport& rep, double v, GridPoint at) {
  if (v > rep.value) {
    rep.value = v;
    rep.argmax = at;
  }
}

}  // namespace

AnnulusGrid AnnulusGrid::dyadic(int k_max, int angles, int k_min) {
  if (k_min < 1 || k_max < k_min) throw Error(Errc::InvalidArgument, "need 1 <= k_min <= k_max");
  AnnulusGrid g;
  g.angles = angles;
  for (int k = k_min; k <= k_max; ++k) g.radii.push_back(1.0 + std::ldexp(1.0, -k));
  g.validate();
  return g;
}

void AnnulusGrid::validate() const {
  if (radii.empty()) throw Error(Errc::InvalidArgument, "annulus grid has no radii");
  if (angles < 8) throw Error(Errc::InvalidArgument, "annulus grid needs at least 8 angles");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 1.0)) throw Error(Errc::InvalidArgument, "grid radii must exceed 1");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw Error(Errc::InvalidArgument, "grid radii must decrease toward 1");
  }
}

double AnnulusGrid::angle(int m) const {
  return 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(angles);
}

ComplexMatrix resolvent(const OperatorModel& t, Complex lambda) {
  if (near_spectrum(eigenvalues(t.matrix), lambda))
    throw Error(Errc::SingularResolvent, "lambda lies on the spectrum of " + t.label);
  return resolvent_unchecked(t, lambda);
}

double resolvent_norm(const OperatorModel& t, Complex lambda) {
  return op_norm(t, resolvent(t, lambda));
}

FunctionalReport kreiss_functional(const OperatorModel& t, int r, const AnnulusGrid& grid) {
  check_order(r);
  grid.validate();
  const ComplexVector eig = eigenvalues(t.matrix);
  FunctionalReport rep;
  rep.profile.assign(grid.radii.size(), 0.0);
  for (std::size_t i = 0; i < grid.radii.size(); ++i) {
    const double rho = grid.radii[i];
    const double w = kreiss_weight(rho, r);
    for (int m = 0; m < grid.angles; ++m) {
      const double theta = grid.angle(m);
      const Complex lambda = std::polar(rho, theta);
      if (near_spectrum(eig, lambda)) {
        ++rep.skipped;
        continue;
      }
      const double v = w * op_norm(t, resolvent_unchecked(t, lambda));
      rep.profile[i] = std::max(rep.profile[i], v);
      take_max(rep, v, {rho, theta, -1});
    }
  }
  rep.refinement_ratio = refinement(rep.profile);
  return rep;
}

FunctionalReport partial_sum_functional(const OperatorModel& t, int r, long long nmax,
                                        const AnnulusGrid& grid) {
  check_order(r);
  grid.validate();
  if (nmax < 1) throw Error(Errc::InvalidArgument, "nmax must be >= 1");
  std::vector<ComplexMatrix> powers;
  powers.reserve(static_cast<std::size_t>(nmax + 1));
  powers.push_back(identity(t.dim()));
  for (long long k = 1; k <= nmax; ++k) powers.push_back(t.apply(powers.back()));

  FunctionalReport rep;
  rep.profile.assign(grid.radii.size(), 0.0);
  for (std::size_t i = 0; i < grid.radii.size(); ++i) {
    const double rho = grid.radii[i];
    const double w = kreiss_weight(rho, r);
    for (int m = 0; m < grid.angles; ++m) {
      const double theta = grid.angle(m);
      const Complex inv = 1.0 / std::polar(rho, theta);
      Complex scale = inv;
      ComplexMatrix acc = ComplexMatrix::Zero(t.dim(), t.dim());
      for (long long n = 0; n <= nmax; ++n) {
        acc += scale * powers[static_cast<std::size_t>(n)];
        scale *= inv;
        const double v = w * op_norm(t, acc);
        rep.profile[i] = std::max(rep.profile[i], v);
        take_max(rep, v, {rho, theta, n});
      }
    }
  }
  rep.refinement_ratio = refinement(rep.profile);
  return rep;
}

FunctionalReport mean_growth_functional(const OperatorModel& t, int p, int r, long long nmax,
                                        int angles) {
  check_order(r);
  if (nmax < 1) throw Error(Errc::InvalidArgument, "nmax must be >= 1");
  if (angles < 1) throw Error(Errc::InvalidArgument, "angles must be >= 1");
  const MeanScheme scheme = MeanScheme::cesaro(p);
  FunctionalReport rep;
  rep.profile.assign(static_cast<std::size_t>(nmax), 0.0);
  for (int m = 0; m < angles; ++m) {
    const double theta = 2.0 * std::numbers::pi * m / angles;
    MeanSweep sweep(scheme, t, std::polar(1.0, theta));
    for (long long n = 1; n <= nmax; ++n) {
      sweep.advance();
      const double v = op_norm(t, sweep.value()) / std::pow(static_cast<double>(n), r);
      auto& slot = rep.profile[static_cast<std::size_t>(n - 1)];
      slot = std::max(slot, v);
      take_max(rep, v, {1.0, theta, n});
    }
  }
  const long long lo = std::max<long long>(1, nmax / 2);
  for (long long n = lo; n <= nmax; ++n)
    rep.tail_value = std::max(rep.tail_value, rep.profile[static_cast<std::size_t>(n - 1)]);
  return rep;
}

long long sw_default_terms(double rho) {
  return static_cast<long long>(std::ceil(40.0 / (1.0 - rho)));
}

double sw_identity_residual(const OperatorModel& t, int p, Complex lambda, double rho,
                            long long n_terms) {
  if (!(rho > 0.0 && rho <= 0.9)) throw Error(Errc::InvalidArgument, "rho must lie in (0, 0.9]");
  if (n_terms < 0) throw Error(Errc::InvalidArgument, "term count must be >= 0");
  if (spectral_radius(t.matrix) > 1.0 + 1e-9)
    throw Error(Errc::SpectralRadiusTooLarge, "generating identity needs spectral radius <= 1");
  const Index d = t.dim();
  ComplexMatrix lhs = -(rho * lambda) * t.matrix;
  lhs.diagonal().array() += 1.0;
  lhs = lhs.partialPivLu().inverse();

  MeanSweep sweep(MeanScheme::cesaro(p), t, lambda);
  ComplexMatrix series = ComplexMatrix::Zero(d, d);
  double coeff = 1.0;  // C(n+p, p) rho^n
  for (long long n = 0;; ++n) {
    series += coeff * sweep.value();
    if (n == n_terms) break;
    coeff *= rho * static_cast<double>(n + p + 1) / static_cast<double>(n + 1);
    sweep.advance();
  }
  return op_norm(t, lhs - std::pow(1.0 - rho, p) * series);
}

double abel_summation_residual(const OperatorModel& t, Complex lambda, double rho, long long n) {
  if (!(rho > 0.0 && rho <= 1.0)) throw Error(Errc::InvalidArgument, "rho must lie in (0, 1]");
  if (n < 1) throw Error(Errc::InvalidArgument, "n must be >= 1");
  const Index d = t.dim();
  ComplexMatrix lhs = ComplexMatrix::Zero(d, d);
  ComplexMatrix pw = identity(d);
  for (long long k = 0; k <= n; ++k) {
    lhs += pw;
    pw = (rho * lambda) * t.apply(pw);
  }

  MeanSweep sweep(MeanScheme::cesaro(1), t, lambda);
  ComplexMatrix rhs = ComplexMatrix::Zero(d, d);
  double rho_k = 1.0;
  for (long long k = 0; k < n; ++k) {
    rhs += ((1.0 - rho) * static_cast<double>(k + 1) * rho_k) * sweep.value();
    rho_k *= rho;
    sweep.advance();
  }
  rhs += (static_cast<double>(n + 1) * rho_k) * sweep.value();
  return op_norm(t, lhs - rhs);
}

MeanBoundReport kreiss_to_mean_bound_check(const OperatorModel& t, int r, long long nmax,
                                           int angles, const AnnulusGrid& grid) {
  if (angles < 1) throw Error(Errc::InvalidArgument, "angles must be >= 1");
  MeanBoundReport rep;
  rep.constant = partial_sum_functional(t, r, nmax, grid).value;
  const double scale = std::pow(2.0, r) * (2.0 * std::numbers::e - 1.0) * rep.constant;
  const MeanScheme scheme = MeanScheme::cesaro(1);
  for (int m = 0; m < angles; ++m) {
    const double theta = 2.0 * std::numbers::pi * m / angles;
    MeanSweep sweep(scheme, t, std::polar(1.0, theta));
    for (long long n = 1; n <= nmax; ++n) {
      sweep.advance();
      const double ratio =
          op_norm(t, sweep.value()) / (scale * std::pow(static_cast<double>(n), r));
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.argmax_n = n;
        rep.argmax_angle = theta;
      }
    }
  }
  return rep;
}

}  // namespace ergolab
