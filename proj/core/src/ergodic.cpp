#include "ergolab/ergodic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "ergolab/rng.hpp"

namespace ergolab {

namespace {

constexpr double kOverflow = 1e300;
constexpr double kRankTol = 1e-8;
constexpr long long kMinWindow = 16;
constexpr int kRandomProbes = 8;

double binomial(long long q, long long l) {
  double c = 1.0;
  for (long long i = 1; i <= l; ++i) c = c * static_cast<double>(q - l + i) / static_cast<double>(i);
  return c;
}

ComplexMatrix metric(const OperatorModel& t) {
  return t.geometry ? t.geometry->gram() : identity(t.dim());
}

}  // namespace

GrowthReport power_norm_sequence(const OperatorModel& t, long long n_max, NormKind kind) {
  if (n_max < 2) throw Error(Errc::InvalidArgument, "power sequence needs N >= 2");
  GrowthReport rep;
  rep.label = t.label;
  rep.points.reserve(static_cast<std::size_t>(n_max));
  ComplexMatrix pw = t.matrix;
  for (long long n = 1; n <= n_max; ++n) {
    const double v = op_norm(t, pw, kind);
    if (!std::isfinite(v) || v > kOverflow) {
      rep.overflow = true;
      break;
    }
    rep.points.push_back({n, v});
    if (n < n_max) pw = t.apply(pw);
  }
  return rep;
}

ExponentFit growth_exponent(const GrowthReport& rep, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw Error(Errc::InvalidArgument, "window fraction must lie in (0, 1]");
  const auto total = rep.points.size();
  const auto count = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(total)));
  if (count < 8) throw Error(Errc::InvalidArgument, "fit window needs at least 8 points");
  const std::size_t first = total - count;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < total; ++i) {
    const auto& pt = rep.points[i];
    if (!(pt.value > 0.0) || pt.n < 1)
      throw Error(Errc::NonPositiveValues, "log-log fit needs positive n and values");
    const double x = std::log(static_cast<double>(pt.n));
    const double y = std::log(pt.value);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(count);
  const double denom = k * sxx - sx * sx;
  const double slope = denom != 0.0 ? (k * sxy - sx * sy) / denom : 0.0;
  const double intercept = (sy - slope * sx) / k;

  double residual = 0.0;
  for (std::size_t i = first; i < total; ++i) {
    const auto& pt = rep.points[i];
    const double fit = intercept + slope * std::log(static_cast<double>(pt.n));
    residual = std::max(residual, std::abs(std::log(pt.value) - fit));
  }
  return {slope, residual, rep.points[first].n, rep.points.back().n};
}

void fit_growth(GrowthReport& rep, double window_fraction) {
  const ExponentFit fit = growth_exponent(rep, window_fraction);
  rep.fit_exponent = fit.exponent;
  rep.fit_residual = fit.residual;
  rep.window_lo = fit.window_lo;
  rep.window_hi = fit.window_hi;
  rep.fitted = true;
}

ComplexMatrix ergodic_projection(const OperatorModel& t, double tol) {
  const Index d = t.dim();
  Eigen::ComplexSchur<ComplexMatrix> schur(t.matrix, false);
  const ComplexVector eig = schur.matrixT().diagonal();
  Index cluster = 0;
  for (Index i = 0; i < d; ++i)
    if (std::abs(eig(i) - 1.0) < tol) ++cluster;
  if (cluster == 0) return ComplexMatrix::Zero(d, d);

  ComplexMatrix shifted = t.matrix - identity(d);
  Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = kRankTol * std::max(1.0, sv(0));
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  const Index geometric = d - rank;
  if (geometric < cluster)
    throw Error(Errc::NonSimplePole, "eigenvalue 1 of " + t.label + " has algebraic multiplicity " +
                                         std::to_string(cluster) + " but geometric multiplicity " +
                                         std::to_string(geometric));
  if (geometric > cluster)
    throw Error(Errc::InvalidArgument, "eigenvalue cluster at 1 is not resolved at tolerance");

  // Columns: kernel of T - I (trailing right singular vectors), then its
  // range (leading left singular vectors).
  ComplexMatrix basis(d, d);
  basis.leftCols(cluster) = svd.matrixV().rightCols(cluster);
  basis.rightCols(rank) = svd.matrixU().leftCols(rank);
  Eigen::PartialPivLU<ComplexMatrix> lu(basis);
  ComplexMatrix selector = ComplexMatrix::Zero(d, d);
  selector.topLeftCorner(cluster, cluster) = identity(cluster);
  return basis * selector * lu.inverse();
}

GrowthReport mean_convergence_report(const MeanScheme& s, const OperatorModel& t, long long nmax) {
  const ComplexMatrix p = ergodic_projection(t);
  GrowthReport rep;
  rep.label = s.name() + " on " + t.label;
  if (nmax < s.min_n()) return rep;
  MeanSweep sweep(s, t);
  for (;;) {
    rep.points.push_back({sweep.n(), op_norm(t, sweep.value() - p)});
    if (sweep.n() >= nmax) break;
    sweep.advance();
  }
  return rep;
}

double alternating_sum_residual(const MeanScheme& s, const OperatorModel& t, long long k,
                                long long m, long long n0, const ComplexVector& x, long long n) {
  if (k < m || m < 0) throw Error(Errc::InvalidArgument, "need 0 <= m <= k");
  if (n0 < 1) throw Error(Errc::InvalidArgument, "n0 must be >= 1");
  if (x.size() != t.dim()) throw Error(Errc::DimensionMismatch, "probe vector has wrong length");
  const long long q = k - m;
  ComplexVector lhs = apply_mean(s, t, n) * x;
  for (long long i = 0; i < q; ++i) lhs = t.matrix * lhs - lhs;
  ComplexVector rhs = ComplexVector::Zero(t.dim());
  for (long long l = 0; l <= q; ++l) {
    const double sign = ((q - l) % 2 == 0) ? 1.0 : -1.0;
    rhs += (sign * binomial(q, l)) * (apply_mean(s, t, n + l * n0) * x);
  }
  return vector_norm(t, lhs - rhs);
}

std::vector<ComplexVector> probe_vectors(Index dim) {
  std::vector<ComplexVector> probes;
  probes.reserve(static_cast<std::size_t>(dim + kRandomProbes));
  for (Index i = 0; i < dim; ++i) probes.push_back(ComplexVector::Unit(dim, i));
  Rng rng(kDefaultSeed);
  for (int i = 0; i < kRandomProbes; ++i) probes.push_back(random_unit_vector(dim, rng));
  return probes;
}

QuotientModel gamma_quotient(const OperatorModel& t, const MeanScheme& s, long long m,
                             long long lo, long long hi, double kernel_tol) {
  if (hi - lo < kMinWindow)
    throw Error(Errc::WindowTooSmall, "gamma window needs hi - lo >= " + std::to_string(kMinWindow));
  if (lo < s.min_n()) throw Error(Errc::RowOutOfRange, "gamma window starts below min_n");
  if (m < 0) throw Error(Errc::InvalidArgument, "m must be >= 0");
  const Index d = t.dim();
  const ComplexMatrix g = metric(t);
  const ComplexMatrix lift = power(t.matrix - identity(d), m);

  std::vector<ComplexMatrix> window;
  window.reserve(static_cast<std::size_t>(hi - lo + 1));
  MeanSweep sweep(s, t);
  while (sweep.n() < lo) sweep.advance();
  for (;;) {
    window.push_back(sweep.value() * lift);
    if (sweep.n() >= hi) break;
    sweep.advance();
  }

  const std::size_t half = window.size() / 2;
  auto gamma_over = [&](const ComplexVector& x, std::size_t from, std::size_t to) {
    double best = 0.0;
    for (std::size_t i = from; i < to; ++i) best = std::max(best, vector_norm(t, window[i] * x));
    return best;
  };
  auto gamma = [&](const ComplexVector& x) { return gamma_over(x, 0, window.size()); };

  QuotientModel out;
  const auto probes = probe_vectors(d);
  double gamma_max = 0.0;
  for (const auto& x : probes) {
    const double v = gamma(x);
    out.gamma_values.push_back(v);
    gamma_max = std::max(gamma_max, v);
    out.isometry_defect = std::max(out.isometry_defect, std::abs(gamma(t.matrix * x) - v));
    out.window_sensitivity = std::max(
        out.window_sensitivity, std::abs(gamma_over(x, 0, half) - gamma_over(x, half, window.size())));
  }
  out.kernel_tol = kernel_tol > 0.0 ? kernel_tol : 1e-8 * gamma_max;

  ComplexMatrix form = ComplexMatrix::Zero(d, d);
  for (const auto& a : window) form += a.adjoint() * g * a;
  form /= static_cast<double>(window.size());
  form = 0.5 * (form + form.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(form);
  const Eigen::VectorXd& vals = eig.eigenvalues();  // ascending
  Index kernel = 0;
  for (Index i = 0; i < d; ++i)
    if (gamma_max == 0.0 || std::sqrt(std::max(vals(i), 0.0)) < out.kernel_tol) ++kernel;
  const Index q = d - kernel;

  out.kernel_basis = eig.eigenvectors().leftCols(kernel);
  const ComplexMatrix w = eig.eigenvectors().rightCols(q);
  const Eigen::VectorXd root = vals.tail(q).cwiseSqrt();
  out.quotient_map = root.cast<Complex>().asDiagonal() * w.adjoint();
  const ComplexMatrix lift_back = w * root.cwiseInverse().cast<Complex>().asDiagonal();
  out.induced_op = out.quotient_map * t.matrix * lift_back;
  return out;
}

double almost_convergence_defect(const MeanScheme& s, const OperatorModel& t, const ComplexMatrix& p,
                                 long long k, long long n_sup, const ComplexVector& x) {
  if (k < 0) throw Error(Errc::InvalidArgument, "k must be >= 0");
  if (n_sup < s.min_n()) throw Error(Errc::RowOutOfRange, "n_sup is below min_n");
  if (x.size() != t.dim() || p.rows() != t.dim() || p.cols() != t.dim())
    throw Error(Errc::DimensionMismatch, "almost convergence inputs disagree in dimension");
  std::vector<ComplexVector> orbit;
  MeanSweep sweep(s, t);
  for (;;) {
    orbit.push_back(sweep.value() * x);
    if (sweep.n() >= n_sup + k) break;
    sweep.advance();
  }
  const ComplexVector target = p * x;
  ComplexVector window = ComplexVector::Zero(t.dim());
  for (long long j = 0; j <= k; ++j) window += orbit[static_cast<std::size_t>(j)];
  double best = 0.0;
  const long long count = n_sup - s.min_n() + 1;
  for (long long i = 0; i < count; ++i) {
    if (i > 0) {
      window += orbit[static_cast<std::size_t>(i + k)];
      window -= orbit[static_cast<std::size_t>(i - 1)];
    }
    best = std::max(best, vector_norm(t, window / static_cast<double>(k + 1) - target));
  }
  return best;
}

}  // namespace ergolab
