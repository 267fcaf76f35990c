#pragma once

// Coefficient-level models: weighted Dirichlet norms D_alpha, the H_1 space of
// the shift with x0 = 1 - z, and the space X_r with norm
// ||f||_r = sum_{j<=r} |f^{(j)}(0)| + int |f^{(r+1)}| dm.

#include <functional>
#include <vector>

#include "ergolab/ergodic.hpp"
#include "ergolab/linop.hpp"

namespace ergolab {

// Analytic polynomial sum c_k z^k. Always holds at least one coefficient.
struct Poly {
  std::vector<Complex> coeffs{Complex(0.0)};

  Poly() = default;
  explicit Poly(std::vector<Complex> c);
  static Poly monomial(long long k, Complex c = 1.0);
  // F_n(z) = (n+1)^{-1} sum_{j<=n} z^j
  static Poly cesaro_multiplier(long long n);

  long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }
  Complex operator[](long long k) const {
    return k >= 0 && k <= degree() ? coeffs[static_cast<std::size_t>(k)] : Complex(0.0);
  }
  ComplexVector vector(Index length) const;  // zero-padded or truncated
};

Poly operator*(const Poly& a, const Poly& b);
Poly operator+(const Poly& a, const Poly& b);
Poly shift(const Poly& p, long long k = 1);  // z^k p
Poly one_minus_z_times(const Poly& p);       // (1 - z) p

double hardy_norm(const Poly& p);  // (sum |p_k|^2)^{1/2}

// (sum (k+1)^{1-alpha} |p_k|^2)^{1/2}
double d_alpha_norm(const Poly& p, double alpha);

// With q = (1 - z) p: (sum |p_k|^2 + sum (k+1)(k+2)/2 |q_k|^2)^{1/2}.
double h1_norm(const Poly& p);

// (sum |p_k|^2 + ||p'(z)(1 - z)||_2^2)^{1/2}
double h1_star_norm(const Poly& p);

// Tridiagonal Gram of the H_1 norm on polynomials of degree <= n.
struct H1Gram {
  long long n = 0;
  std::vector<double> diag;  // 1 + (k+2)^2, k = 0..n
  std::vector<double> off;   // -(k+2)(k+3)/2, k = 0..n-1

  ComplexMatrix matrix() const;
  GramGeometry geometry() const;
};

H1Gram h1_gram(long long n);

// <u, v> = v* G u in H_1.
Complex h1_inner(const Poly& u, const Poly& v);

// sum_k (-1)^k C(order, k) norm(shift^k p)^2
double m_isometry_defect(const std::function<double(const Poly&)>& norm,
                         const std::function<Poly(const Poly&)>& shift_apply, int order,
                         const Poly& p);

struct GapPair {
  double lhs;  // ||z^n f||_1
  double rhs;  // ||(1 - z) f||_2 sqrt(n(n-1)/2)
};

GapPair shift_power_gap(const Poly& f, long long n);

// <F_n p, q> in H_1
Complex h1_mean_pairing(long long n, const Poly& p, const Poly& q);

// H_1 operator norm of multiplication by F_n from degree <= n_trunc into
// degree <= n_trunc + n.
double h1_mean_norm(long long n, long long n_trunc);

// max(1024, 8 * degree)
long long xr_default_nodes(long long degree);

double xr_norm(const Poly& f, int r, long long quad_nodes);

// int_0^{2 pi} |f^{(r+1)}(rho e^{it})| dt, composite trapezoid.
double derivative_circle_integral(const Poly& f, int r, double rho, long long quad_nodes);

struct LogFit {
  double slope = 0.0;              // c in c log n + d
  double intercept = 0.0;          // d
  double relative_residual = 0.0;  // max |fit - value| / value
};

LogFit fit_log(const std::vector<GrowthPoint>& points, long long lo, long long hi);

struct ShieldsReport {
  int r = 0;
  GrowthReport mean_norm;    // n^{-r} ||F_n||_r
  GrowthReport power_norm;   // n^{-r-1} ||z^n||_r
  GrowthReport lower_bound;  // n^{-r} int |F_n^{(r+1)}(rho_n e^{it})| dt, rho_n = 1 - 1/n
  LogFit log_fit;            // of mean_norm over [fit_lo, fit_hi]
  long long fit_lo = 0;
  long long fit_hi = 0;
  double band_min = 0.0;  // min / max of mean_norm / log n over the fit range
  double band_max = 0.0;
  // a(2n) - a(n) for powers of two n >= 256 with 2n <= nmax.
  std::vector<GrowthPoint> doubling_increments;
  double doubling_spread = 0.0;  // max |increment / (c log 2) - 1|
  double node_check = 0.0;       // max relative change of mean_norm at doubled nodes
};

// Sample points: round(2^{i/8}) for i >= 0 up to nmax, plus nmax, deduplicated.
std::vector<long long> shields_grid(long long nmax);

// quad_nodes = 0 uses xr_default_nodes per sample. The fit window is
// [min(64, nmax), min(4096, nmax)].
ShieldsReport shields_report(int r, long long nmax, long long quad_nodes = 0);

}  // namespace ergolab
