#pragma once

// Power growth and its log-log exponent, ergodic projections, convergence of
// means, and the gamma-seminorm quotient at finite dimension.

#include <string>
#include <vector>

#include "ergolab/linop.hpp"
#include "ergolab/means.hpp"

namespace ergolab {

struct GrowthPoint {
  long long n;
  double value;
};

struct GrowthReport {
  std::string label;
  std::vector<GrowthPoint> points;  // sorted by n
  double fit_exponent = 0.0;
  double fit_residual = 0.0;
  long long window_lo = 0;
  long long window_hi = 0;
  bool fitted = false;
  bool overflow = false;  // a norm exceeded 1e300; the sequence stops there
};

struct ExponentFit {
  double exponent;
  double residual;  // max |log value - fitted log value| over the window
  long long window_lo;
  long long window_hi;
};

// (n, ||T^n||) for n = 1..n_max, by repeated left multiplication.
GrowthReport power_norm_sequence(const OperatorModel& t, long long n_max,
                                 NormKind kind = NormKind::Spectral);

// Least-squares slope of log(value) against log(n) over the trailing
// `window_fraction` of the points.
ExponentFit growth_exponent(const GrowthReport& rep, double window_fraction = 0.5);

// Stores the fit in the report.
void fit_growth(GrowthReport& rep, double window_fraction = 0.5);

// Projection onto N(T - I) along R(T - I). Zero when 1 is not an eigenvalue
// (within tol). Throws NonSimplePole if 1 carries a Jordan block.
ComplexMatrix ergodic_projection(const OperatorModel& t, double tol = 1e-9);

// (n, ||T_n - P_T||) for n = min_n..nmax.
GrowthReport mean_convergence_report(const MeanScheme& s, const OperatorModel& t, long long nmax);

// || (T - I)^{k-m} T_n x - sum_l (-1)^{k-m-l} C(k-m, l) T_{n + l n0} x ||
double alternating_sum_residual(const MeanScheme& s, const OperatorModel& t, long long k,
                                long long m, long long n0, const ComplexVector& x, long long n);

struct QuotientModel {
  ComplexMatrix kernel_basis;   // dim x k, orthonormal columns
  ComplexMatrix quotient_map;   // q x dim, ||Q x||^2 = x* Gamma x
  ComplexMatrix induced_op;     // q x q
  std::vector<double> gamma_values;  // gamma on each probe
  double kernel_tol = 0.0;
  double isometry_defect = 0.0;      // max over probes |gamma(T x) - gamma(x)|
  double window_sensitivity = 0.0;   // max over probes |gamma_first_half - gamma_second_half|

  Index quotient_dim() const { return induced_op.rows(); }
};

// gamma(x) = max over n in [lo, hi] of ||T_n (T - I)^m x||. The quadratic
// form Gamma is the window average of A_n* G A_n with A_n = T_n (T - I)^m.
// kernel_tol <= 0 selects 1e-8 * (max gamma on the probes).
QuotientModel gamma_quotient(const OperatorModel& t, const MeanScheme& s, long long m,
                             long long lo, long long hi, double kernel_tol = 0.0);

// Standard basis followed by 8 seeded random unit vectors.
std::vector<ComplexVector> probe_vectors(Index dim);

// sup_{min_n <= n <= n_sup} || (k+1)^{-1} sum_{j<=k} T_{n+j} x - P x ||
double almost_convergence_defect(const MeanScheme& s, const OperatorModel& t, const ComplexMatrix& p,
                                 long long k, long long n_sup, const ComplexVector& x);

}  // namespace ergolab
