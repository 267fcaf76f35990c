#include "ergolab/examples.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace ergolab {

namespace {

// k!/(k-j)!
double falling(long long k, int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) v *= static_cast<double>(k - i);
  return v;
}

double factorial(int j) { return falling(j, j); }

double h1_weight(long long k) {
  const double kd = static_cast<double>(k);
  return 0.5 * (kd + 1.0) * (kd + 2.0);
}

// Mean of |g| over the quad_nodes-th roots of unity, g given by coefficients.
double circle_mean_abs(std::vector<Complex> coeffs, long long quad_nodes) {
  if (coeffs.empty()) return 0.0;
  const auto m = static_cast<std::size_t>(quad_nodes);
  if (coeffs.size() > m) throw Error(Errc::TooFewNodes, "fewer nodes than coefficients");
  coeffs.resize(m, Complex(0.0));
  Eigen::FFT<double> fft;
  std::vector<Complex> values;
  fft.fwd(values, coeffs);
  double acc = 0.0;
  for (const auto& v : values) acc += std::abs(v);
  return acc / static_cast<double>(m);
}

// Coefficients of f^{(r+1)}.
std::vector<Complex> derivative_coeffs(const Poly& f, int r) {
  std::vector<Complex> d;
  const int order = r + 1;
  for (long long k = order; k <= f.degree(); ++k) d.push_back(f[k] * falling(k, order));
  return d;
}

void check_nodes(const Poly& f, long long quad_nodes) {
  if (quad_nodes < 4 * (f.degree() + 1))
    throw Error(Errc::TooFewNodes, "need at least 4 (degree + 1) = " +
                                       std::to_string(4 * (f.degree() + 1)) + " nodes");
}

}  // namespace

Poly::Poly(std::vector<Complex> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) coeffs.push_back(0.0);
}

Poly Poly::monomial(long long k, Complex c) {
  std::vector<Complex> v(static_cast<std::size_t>(k + 1), Complex(0.0));
  v.back() = c;
  return Poly(std::move(v));
}

Poly Poly::cesaro_multiplier(long long n) {
  if (n < 0) throw Error(Errc::InvalidArgument, "Cesaro multiplier needs n >= 0");
  return Poly(std::vector<Complex>(static_cast<std::size_t>(n + 1), Complex(1.0 / static_cast<double>(n + 1))));
}

ComplexVector Poly::vector(Index length) const {
  ComplexVector v = ComplexVector::Zero(length);
  for (Index k = 0; k < length && k <= degree(); ++k) v(k) = coeffs[static_cast<std::size_t>(k)];
  return v;
}

Poly operator*(const Poly& a, const Poly& b) {
  std::vector<Complex> c(static_cast<std::size_t>(a.degree() + b.degree() + 1), Complex(0.0));
  for (long long i = 0; i <= a.degree(); ++i)
    for (long long j = 0; j <= b.degree(); ++j) c[static_cast<std::size_t>(i + j)] += a[i] * b[j];
  return Poly(std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Complex> c(static_cast<std::size_t>(std::max(a.degree(), b.degree()) + 1));
  for (std::size_t k = 0; k < c.size(); ++k) {
    const auto kk = static_cast<long long>(k);
    c[k] = a[kk] + b[kk];
  }
  return Poly(std::move(c));
}

Poly shift(const Poly& p, long long k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "shift needs k >= 0");
  std::vector<Complex> c(static_cast<std::size_t>(k), Complex(0.0));
  c.insert(c.end(), p.coeffs.begin(), p.coeffs.end());
  return Poly(std::move(c));
}

Poly one_minus_z_times(const Poly& p) {
  std::vector<Complex> c(static_cast<std::size_t>(p.degree() + 2));
  for (long long k = 0; k <= p.degree() + 1; ++k) c[static_cast<std::size_t>(k)] = p[k] - p[k - 1];
  return Poly(std::move(c));
}

double hardy_norm(const Poly& p) {
  double acc = 0.0;
  for (const auto& c : p.coeffs) acc += std::norm(c);
  return std::sqrt(acc);
}

double d_alpha_norm(const Poly& p, double alpha) {
  double acc = 0.0;
  for (long long k = 0; k <= p.degree(); ++k)
    acc += std::pow(static_cast<double>(k + 1), 1.0 - alpha) * std::norm(p[k]);
  return std::sqrt(acc);
}

double h1_norm(const Poly& p) {
  const Poly q = one_minus_z_times(p);
  double acc = 0.0;
  for (const auto& c : p.coeffs) acc += std::norm(c);
  for (long long k = 0; k <= q.degree(); ++k) acc += h1_weight(k) * std::norm(q[k]);
  return std::sqrt(acc);
}

double h1_star_norm(const Poly& p) {
  double acc = 0.0;
  for (const auto& c : p.coeffs) acc += std::norm(c);
  // p'(z)(1 - z) has coefficient k p_k - (k-1) p_{k-1} at z^{k-1}.
  for (long long k = 1; k <= p.degree() + 1; ++k)
    acc += std::norm(static_cast<double>(k) * p[k] - static_cast<double>(k - 1) * p[k - 1]);
  return std::sqrt(acc);
}

ComplexMatrix H1Gram::matrix() const {
  const auto dim = static_cast<Index>(n + 1);
  ComplexMatrix g = ComplexMatrix::Zero(dim, dim);
  for (Index k = 0; k < dim; ++k) {
    g(k, k) = diag[static_cast<std::size_t>(k)];
    if (k + 1 < dim) g(k, k + 1) = g(k + 1, k) = off[static_cast<std::size_t>(k)];
  }
  return g;
}

GramGeometry H1Gram::geometry() const { return GramGeometry::dense(matrix()); }

H1Gram h1_gram(long long n) {
  if (n < 1) throw Error(Errc::BadDimension, "H1 Gram needs N >= 1");
  H1Gram g;
  g.n = n;
  for (long long k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    g.diag.push_back(1.0 + (kd + 2.0) * (kd + 2.0));
    if (k < n) g.off.push_back(-0.5 * (kd + 2.0) * (kd + 3.0));
  }
  (void)g.geometry();  // positive-definiteness check
  return g;
}

Complex h1_inner(const Poly& u, const Poly& v) {
  const long long top = std::max(u.degree(), v.degree());
  Complex acc = 0.0;
  for (long long k = 0; k <= top; ++k) {
    const double kd = static_cast<double>(k);
    Complex gu = (1.0 + (kd + 2.0) * (kd + 2.0)) * u[k];
    if (k > 0) gu += -0.5 * (kd + 1.0) * (kd + 2.0) * u[k - 1];
    gu += -0.5 * (kd + 2.0) * (kd + 3.0) * u[k + 1];
    acc += std::conj(v[k]) * gu;
  }
  return acc;
}

double m_isometry_defect(const std::function<double(const Poly&)>& norm,
                         const std::function<Poly(const Poly&)>& shift_apply, int order,
                         const Poly& p) {
  if (order < 1) throw Error(Errc::InvalidArgument, "isometry order must be >= 1");
  double acc = 0.0;
  double binom = 1.0;
  Poly current = p;
  for (int k = 0; k <= order; ++k) {
    const double v = norm(current);
    acc += (k % 2 == 0 ? binom : -binom) * v * v;
    binom = binom * (order - k) / (k + 1);
    if (k < order) current = shift_apply(current);
  }
  return acc;
}

GapPair shift_power_gap(const Poly& f, long long n) {
  if (n < 2) throw Error(Errc::InvalidArgument, "gap needs n >= 2");
  const double nd = static_cast<double>(n);
  return {h1_norm(shift(f, n)), hardy_norm(one_minus_z_times(f)) * std::sqrt(nd * (nd - 1.0) / 2.0)};
}

Complex h1_mean_pairing(long long n, const Poly& p, const Poly& q) {
  return h1_inner(Poly::cesaro_multiplier(n) * p, q);
}

double h1_mean_norm(long long n, long long n_trunc) {
  if (n < 0) throw Error(Errc::InvalidArgument, "n must be >= 0");
  if (n_trunc < 4 * n || n_trunc < 1)
    throw Error(Errc::BadTruncation, "truncation degree must be >= max(1, 4n)");
  const Index cols = n_trunc + 1;
  const Index rows = n_trunc + n + 1;
  ComplexMatrix mult = ComplexMatrix::Zero(rows, cols);
  const double w = 1.0 / static_cast<double>(n + 1);
  for (Index j = 0; j < cols; ++j) mult.block(j, j, n + 1, 1).setConstant(w);
  const GramGeometry dom = h1_gram(n_trunc).geometry();
  const GramGeometry cod = h1_gram(n_trunc + n).geometry();
  return op_norm(mult, &dom, &cod);
}

long long xr_default_nodes(long long degree) { return std::max<long long>(1024, 8 * degree); }

double xr_norm(const Poly& f, int r, long long quad_nodes) {
  if (r < 0) throw Error(Errc::InvalidArgument, "r must be >= 0");
  check_nodes(f, quad_nodes);
  double acc = 0.0;
  for (int j = 0; j <= r; ++j) acc += factorial(j) * std::abs(f[j]);
  return acc + circle_mean_abs(derivative_coeffs(f, r), quad_nodes);
}

double derivative_circle_integral(const Poly& f, int r, double rho, long long quad_nodes) {
  if (r < 0) throw Error(Errc::InvalidArgument, "r must be >= 0");
  check_nodes(f, quad_nodes);
  auto d = derivative_coeffs(f, r);
  double rk = 1.0;
  for (auto& c : d) {
    c *= rk;
    rk *= rho;
  }
  return 2.0 * std::numbers::pi * circle_mean_abs(std::move(d), quad_nodes);
}

LogFit fit_log(const std::vector<GrowthPoint>& points, long long lo, long long hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long long count = 0;
  for (const auto& pt : points) {
    if (pt.n < lo || pt.n > hi) continue;
    const double x = std::log(static_cast<double>(pt.n));
    sx += x;
    sy += pt.value;
    sxx += x * x;
    sxy += x * pt.value;
    ++count;
  }
  if (count < 3) throw Error(Errc::InvalidArgument, "log fit needs at least 3 points in range");
  const double k = static_cast<double>(count);
  LogFit fit;
  fit.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / k;
  for (const auto& pt : points) {
    if (pt.n < lo || pt.n > hi) continue;
    const double model = fit.intercept + fit.slope * std::log(static_cast<double>(pt.n));
    fit.relative_residual = std::max(fit.relative_residual, std::abs(model - pt.value) / std::abs(pt.value));
  }
  return fit;
}

std::vector<long long> shields_grid(long long nmax) {
  std::vector<long long> grid;
  for (int i = 0;; ++i) {
    const auto n = static_cast<long long>(std::llround(std::exp2(i / 8.0)));
    if (n > nmax) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != nmax) grid.push_back(nmax);
  return grid;
}

ShieldsReport shields_report(int r, long long nmax, long long quad_nodes) {
  if (r < 0 || r > 3) throw Error(Errc::InvalidArgument, "r must lie in [0, 3]");
  if (nmax < 2 || nmax > (1LL << 14)) throw Error(Errc::InvalidArgument, "nmax must lie in [2, 2^14]");
  ShieldsReport rep;
  rep.r = r;
  rep.mean_norm.label = "mean_norm";
  rep.power_norm.label = "power_norm";
  rep.lower_bound.label = "lower_bound";

  for (long long n : shields_grid(nmax)) {
    const double nd = static_cast<double>(n);
    const double scale = std::pow(nd, -r);
    const Poly fn = Poly::cesaro_multiplier(n);
    const long long nodes = quad_nodes > 0 ? quad_nodes : xr_default_nodes(n);
    const double a = scale * xr_norm(fn, r, nodes);
    rep.mean_norm.points.push_back({n, a});
    const double a2 = scale * xr_norm(fn, r, 2 * nodes);
    rep.node_check = std::max(rep.node_check, std::abs(a2 - a) / std::abs(a));
    if (n > r) {
      rep.power_norm.points.push_back({n, scale / nd * xr_norm(Poly::monomial(n), r, nodes)});
    }
    if (n >= 2) {
      rep.lower_bound.points.push_back(
          {n, scale * derivative_circle_integral(fn, r, 1.0 - 1.0 / nd, nodes)});
    }
  }

  rep.fit_lo = std::min<long long>(64, nmax);
  rep.fit_hi = std::min<long long>(4096, nmax);
  rep.log_fit = fit_log(rep.mean_norm.points, rep.fit_lo, rep.fit_hi);
  rep.band_min = std::numeric_limits<double>::infinity();
  for (const auto& pt : rep.mean_norm.points) {
    if (pt.n < rep.fit_lo || pt.n > rep.fit_hi) continue;
    const double ratio = pt.value / std::log(static_cast<double>(pt.n));
    rep.band_min = std::min(rep.band_min, ratio);
    rep.band_max = std::max(rep.band_max, ratio);
  }

  auto value_at = [&](long long n) {
    for (const auto& pt : rep.mean_norm.points)
      if (pt.n == n) return pt.value;
    throw Error(Errc::InternalMismatch, "power of two missing from the Shields grid");
  };
  const double step = rep.log_fit.slope * std::log(2.0);
  for (long long n = 256; 2 * n <= nmax; n *= 2) {
    const double inc = value_at(2 * n) - value_at(n);
    rep.doubling_increments.push_back({n, inc});
    rep.doubling_spread = std::max(rep.doubling_spread, std::abs(inc / step - 1.0));
  }
  return rep;
}

}  // namespace ergolab
