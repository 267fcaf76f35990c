#pragma once

// Resolvent norms and the rotation-invariant growth functionals: the Kreiss
// functional, its partial-sum (uniform) variant, and sup-norms of rotated
// Cesaro means, together with the generating identities tying them together.

#include <vector>

#include "ergolab/linop.hpp"

namespace ergolab {

// Points rho * e^{i theta}, rho in `radii` (all > 1, decreasing toward 1) and
// theta = 2 pi m / angles.
struct AnnulusGrid {
  std::vector<double> radii;
  int angles = 512;

  // radii 1 + 2^{-k}, k = k_min..k_max
  static AnnulusGrid dyadic(int k_max = 10, int angles = 512, int k_min = 1);

  void validate() const;
  double angle(int m) const;
};

struct GridPoint {
  double radius = 0.0;
  double angle = 0.0;
  long long n = -1;  // -1 when the functional has no index
};

struct FunctionalReport {
  double value = 0.0;
  GridPoint argmax;
  // Kreiss-type functionals: max over angles (and n) at each radius, in grid
  // order. Mean growth: max over angles at each n = 1..nmax.
  std::vector<double> profile;
  // Kreiss-type functionals: sup over the grid with its finest radius removed,
  // divided into `value`. 1 for single-radius grids. Mean growth: 1.
  double refinement_ratio = 1.0;
  // Mean growth only: sup over n in [nmax/2, nmax].
  double tail_value = 0.0;
  long long skipped = 0;  // grid points on the spectrum
};

// (T - lambda I)^{-1} by dense LU.
ComplexMatrix resolvent(const OperatorModel& t, Complex lambda);
double resolvent_norm(const OperatorModel& t, Complex lambda);

// sup over the grid of ((|l| - 1)^{r+1} / |l|^r) ||(T - l I)^{-1}||.
FunctionalReport kreiss_functional(const OperatorModel& t, int r, const AnnulusGrid& grid);

// sup over n <= nmax and the grid of ((|l| - 1)^{r+1} / |l|^r) ||sum_{k<=n} l^{-k-1} T^k||.
FunctionalReport partial_sum_functional(const OperatorModel& t, int r, long long nmax,
                                        const AnnulusGrid& grid);

// sup over 1 <= n <= nmax and lambda = e^{2 pi i m / angles} of n^{-r} ||M_n^{(p)}(lambda T)||.
FunctionalReport mean_growth_functional(const OperatorModel& t, int p, int r, long long nmax,
                                        int angles);

// Default truncation ceil(40 / (1 - rho)).
long long sw_default_terms(double rho);

// || (I - rho lambda T)^{-1} - (1 - rho)^p sum_{n<=N} C(n+p, p) M_n^{(p)}(lambda T) rho^n ||
double sw_identity_residual(const OperatorModel& t, int p, Complex lambda, double rho, long long n_terms);

// || sum_{k<=n} (rho lambda T)^k
//    - (1 - rho) sum_{k<n} (k+1) M_k(lambda T) rho^k - (n+1) M_n(lambda T) rho^n ||
double abel_summation_residual(const OperatorModel& t, Complex lambda, double rho, long long n);

struct MeanBoundReport {
  double constant = 0.0;   // partial-sum functional value C
  double max_ratio = 0.0;  // sup ||M_n(mu T)|| / (2^r (2e - 1) C n^r)
  long long argmax_n = 0;
  double argmax_angle = 0.0;
};

MeanBoundReport kreiss_to_mean_bound_check(const OperatorModel& t, int r, long long nmax,
                                           int angles, const AnnulusGrid& grid);

}  // namespace ergolab
