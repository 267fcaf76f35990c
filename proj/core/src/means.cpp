#include "ergolab/means.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

namespace ergolab {

namespace {

// Finer truncation used when the defining backward formula needs the tail of
// an infinite row.
constexpr double kFormulaEpsFactor = 1e-6;
constexpr double kBackwardCheckTol = 1e-12;
constexpr long long kBackwardCheckRows = 8;

void check_tail_eps(double tail_eps) {
  if (!(tail_eps > 0.0) || tail_eps > 1e-6)
    throw Error(Errc::InvalidArgument, "tail_eps must lie in (0, 1e-6]");
}

void check_row_index(const MeanScheme& s, long long n) {
  if (n < s.min_n())
    throw Error(Errc::RowOutOfRange, s.name() + ": row " + std::to_string(n) +
                                         " is below min_n = " + std::to_string(s.min_n()));
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

MeanRow cesaro_row(int p, long long n) {
  MeanRow row;
  row.n = n;
  row.support.reserve(static_cast<std::size_t>(n + 1));
  const double nd = static_cast<double>(n);
  const double lead = p / (nd + p);
  for (long long j = 0; j <= n; ++j) {
    double t = lead;
    for (int k = 1; k < p; ++k) t *= 1.0 - static_cast<double>(j) / (nd + k);
    row.support.push_back({j, t});
  }
  return row;
}

MeanRow abel_row(long long n, double tail_eps) {
  MeanRow row;
  row.n = n;
  if (n == 1) {
    row.support.push_back({0, 1.0});
    return row;
  }
  const double q = 1.0 - 1.0 / static_cast<double>(n);
  const double scale = 1.0 / static_cast<double>(n);
  double qj = 1.0;  // q^j
  for (long long j = 0;; ++j) {
    row.support.push_back({j, scale * qj});
    qj *= q;
    if (qj < tail_eps) break;  // qj is now q^{j+1}, the tail mass
  }
  row.tail_mass_bound = qj;
  return row;
}

MeanRow zweier_row(long long n) {
  MeanRow row;
  row.n = n;
  row.support = {{n - 1, 0.5}, {n, 0.5}};
  return row;
}

MeanRow binomial_row(long long n) {
  MeanRow row;
  row.n = n;
  row.support.reserve(static_cast<std::size_t>(n + 1));
  const double nd = static_cast<double>(n);
  const double log_norm = std::lgamma(nd + 1.0) - nd * std::log(2.0);
  for (long long k = 0; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    const double t = std::exp(log_norm - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0));
    row.support.push_back({k, t});
  }
  return row;
}

// Power-series bookkeeping for a single radius.
struct SeriesAtRadius {
  const scheme::PowerSeries& ps;
  double r;

  std::size_t tail_start() const { return ps.coeffs.size() - 1; }
  double coeff(long long j) const {
    const auto idx = static_cast<std::size_t>(j);
    if (idx < ps.coeffs.size()) return ps.coeffs[idx];
    return ps.repeat_last ? ps.coeffs.back() : 0.0;
  }
  // F(r)
  double value() const {
    if (!ps.repeat_last) {
      double acc = 0.0;
      for (std::size_t j = ps.coeffs.size(); j-- > 0;) acc = acc * r + ps.coeffs[j];
      return acc;
    }
    const auto l = static_cast<long long>(tail_start());
    double acc = ps.coeffs.back() * std::pow(r, static_cast<double>(l)) / (1.0 - r);
    for (long long j = 0; j < l; ++j) acc += coeff(j) * std::pow(r, static_cast<double>(j));
    return acc;
  }
  // r F'(r)
  double moment() const {
    double acc = 0.0;
    if (!ps.repeat_last) {
      for (std::size_t j = 1; j < ps.coeffs.size(); ++j)
        acc += static_cast<double>(j) * ps.coeffs[j] * std::pow(r, static_cast<double>(j));
      return acc;
    }
    const auto l = static_cast<long long>(tail_start());
    for (long long j = 1; j < l; ++j)
      acc += static_cast<double>(j) * coeff(j) * std::pow(r, static_cast<double>(j));
    // sum_{j>=l} j c r^j = c r^l (l (1-r) + r) / (1-r)^2
    const double rl = std::pow(r, static_cast<double>(l));
    acc += ps.coeffs.back() * rl * (static_cast<double>(l) * (1.0 - r) + r) / ((1.0 - r) * (1.0 - r));
    return acc;
  }
};

double series_radius(const scheme::PowerSeries& ps, long long min_n, long long n) {
  if (ps.radii.empty()) return 1.0 - 1.0 / static_cast<double>(n);
  const auto idx = static_cast<std::size_t>(n - min_n);
  if (idx >= ps.radii.size())
    throw Error(Errc::RowOutOfRange, "power series has no radius for row " + std::to_string(n));
  return ps.radii[idx];
}

MeanRow power_series_row(const scheme::PowerSeries& ps, double r, long long n, double tail_eps) {
  const SeriesAtRadius f{ps, r};
  const double total = f.value();
  MeanRow row;
  row.n = n;
  const double c_tail = ps.coeffs.back();
  const auto l = static_cast<long long>(f.tail_start());
  double rj = 1.0;
  for (long long j = 0;; ++j) {
    const double c = f.coeff(j);
    if (c > 0.0) row.support.push_back({j, c * rj / total});
    rj *= r;  // r^{j+1}
    if (!ps.repeat_last || c_tail == 0.0) {
      if (j + 1 >= static_cast<long long>(ps.coeffs.size())) break;
      continue;
    }
    if (j >= l) {
      const double tail = c_tail * rj / (1.0 - r) / total;
      if (tail < tail_eps) {
        row.tail_mass_bound = tail;
        break;
      }
    }
  }
  return row;
}

// G_n coefficients: s_k = sum_{j>k} c_j r^j / (r F'(r)).
MeanRow power_series_backward_row(const scheme::PowerSeries& ps, double r, long long n,
                                  double tail_eps) {
  const SeriesAtRadius f{ps, r};
  const double denom = f.moment();
  const auto l = static_cast<long long>(f.tail_start());
  const double c_tail = ps.coeffs.back();
  const bool infinite = ps.repeat_last && c_tail > 0.0;
  // Suffix sums over the explicit coefficients, plus the geometric tail.
  const long long last = infinite ? l : static_cast<long long>(ps.coeffs.size()) - 1;
  std::vector<double> suffix(static_cast<std::size_t>(last + 2), 0.0);
  if (infinite) suffix[static_cast<std::size_t>(l)] = c_tail * std::pow(r, static_cast<double>(l)) / (1.0 - r);
  for (long long j = (infinite ? l - 1 : last); j >= 0; --j)
    suffix[static_cast<std::size_t>(j)] =
        suffix[static_cast<std::size_t>(j + 1)] + f.coeff(j) * std::pow(r, static_cast<double>(j));
  MeanRow row;
  row.n = n;
  for (long long k = 0;; ++k) {
    double s;
    if (k + 1 <= last || !infinite) {
      if (k + 1 > last) break;
      s = suffix[static_cast<std::size_t>(k + 1)] / denom;
    } else {
      s = c_tail * std::pow(r, static_cast<double>(k + 1)) / (1.0 - r) / denom;
    }
    row.support.push_back({k, s});
    if (infinite && k + 1 >= l) {
      // sum_{k'>k} s_k' = c r^{k+2} / ((1-r)^2 r F'(r))
      const double tail = c_tail * std::pow(r, static_cast<double>(k + 2)) / ((1.0 - r) * (1.0 - r)) / denom;
      if (tail < tail_eps) {
        row.tail_mass_bound = tail;
        break;
      }
    }
  }
  return row;
}

bool degenerate(const MeanRow& row) {
  return row.support.size() == 1 && row.support.front().j == 0;
}

double row_moment(const MeanRow& row) {
  double acc = 0.0;
  for (const auto& e : row.support) acc += static_cast<double>(e.j) * e.t;
  return acc;
}

// Closed-form backward row, if the base family has one.
std::optional<MeanRow> backward_closed_form(const MeanScheme& base, long long n, double tail_eps) {
  return std::visit(
      [&](const auto& k) -> std::optional<MeanRow> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, scheme::Cesaro>) {
          MeanRow row = cesaro_row(k.p + 1, n - 1);
          row.n = n;
          return row;
        } else if constexpr (std::is_same_v<K, scheme::Abel>) {
          return abel_row(n, tail_eps);
        } else if constexpr (std::is_same_v<K, scheme::Zweier>) {
          MeanRow row;
          row.n = n;
          const double w = 2.0 / (2.0 * static_cast<double>(n) - 1.0);
          for (long long j = 0; j + 2 <= n; ++j) row.support.push_back({j, w});
          row.support.push_back({n - 1, 0.5 * w});
          return row;
        } else if constexpr (std::is_same_v<K, scheme::IdentityPowers>) {
          MeanRow row = cesaro_row(1, n - 1);
          row.n = n;
          return row;
        } else if constexpr (std::is_same_v<K, scheme::PowerSeries>) {
          return power_series_backward_row(k, series_radius(k, base.min_n(), n), n, tail_eps);
        } else {
          return std::nullopt;
        }
      },
      base.kind());
}

double max_coefficient_gap(const MeanRow& a, const MeanRow& b) {
  std::map<long long, double> diff;
  for (const auto& e : a.support) diff[e.j] += e.t;
  for (const auto& e : b.support) diff[e.j] -= e.t;
  double gap = 0.0;
  for (const auto& [j, d] : diff) gap = std::max(gap, std::abs(d));
  return gap;
}

ComplexMatrix scaled_apply(const OperatorModel& t, Complex lambda, const ComplexMatrix& x) {
  if (lambda == Complex(1.0, 0.0)) return t.apply(x);
  return lambda * t.apply(x);
}

void check_unimodular(Complex lambda) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
    throw Error(Errc::InvalidArgument, "rotation must have modulus one");
}

}  // namespace

MeanScheme MeanScheme::cesaro(int p) {
  if (p < 1) throw Error(Errc::InvalidArgument, "Cesaro order must be >= 1");
  return MeanScheme(scheme::Cesaro{p}, "cesaro:p=" + std::to_string(p), 0, true);
}

MeanScheme MeanScheme::abel() { return MeanScheme(scheme::Abel{}, "abel", 1, false); }

MeanScheme MeanScheme::zweier() { return MeanScheme(scheme::Zweier{}, "zweier", 1, true); }

MeanScheme MeanScheme::binomial() { return MeanScheme(scheme::Binomial{}, "binomial", 0, true); }

MeanScheme MeanScheme::identity_powers() {
  return MeanScheme(scheme::IdentityPowers{}, "powers", 0, true);
}

MeanScheme MeanScheme::power_series(std::vector<double> coeffs, bool repeat_last,
                                    std::vector<double> radii) {
  if (coeffs.empty()) throw Error(Errc::InvalidArgument, "power series needs coefficients");
  bool any_positive = false;
  for (double c : coeffs) {
    if (!std::isfinite(c) || c < 0.0)
      throw Error(Errc::InvalidArgument, "power series coefficients must be finite and >= 0");
    any_positive = any_positive || c > 0.0;
  }
  if (!any_positive) throw Error(Errc::InvalidArgument, "power series coefficients are all zero");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] < 1.0))
      throw Error(Errc::InvalidArgument, "power series radii must lie in (0, 1)");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw Error(Errc::InvalidArgument, "power series radii must be strictly increasing");
  }
  std::string name = "powseries:coeffs=";
  for (std::size_t i = 0; i < coeffs.size(); ++i) name += (i ? "," : "") + format_number(coeffs[i]);
  if (repeat_last) name += ":tail=repeat";
  const bool finite = !repeat_last || coeffs.back() == 0.0;
  const long long min_n = radii.empty() ? 2 : 0;
  return MeanScheme(scheme::PowerSeries{std::move(coeffs), repeat_last, std::move(radii)},
                    std::move(name), min_n, finite);
}

double MeanRow::sum() const {
  double acc = 0.0;
  for (const auto& e : support) acc += e.t;
  return acc;
}

MeanRow scheme_row(const MeanScheme& s, long long n, double tail_eps) {
  check_tail_eps(tail_eps);
  check_row_index(s, n);
  return std::visit(
      [&](const auto& k) -> MeanRow {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, scheme::Cesaro>) {
          return cesaro_row(k.p, n);
        } else if constexpr (std::is_same_v<K, scheme::Abel>) {
          return abel_row(n, tail_eps);
        } else if constexpr (std::is_same_v<K, scheme::Zweier>) {
          return zweier_row(n);
        } else if constexpr (std::is_same_v<K, scheme::Binomial>) {
          return binomial_row(n);
        } else if constexpr (std::is_same_v<K, scheme::PowerSeries>) {
          return power_series_row(k, series_radius(k, s.min_n(), n), n, tail_eps);
        } else if constexpr (std::is_same_v<K, scheme::IdentityPowers>) {
          MeanRow row;
          row.n = n;
          row.support.push_back({n, 1.0});
          return row;
        } else {
          const MeanScheme& base = *k.base;
          if (auto closed = backward_closed_form(base, n, tail_eps)) return *closed;
          return backward_row_by_formula(base, n, tail_eps);
        }
      },
      s.kind());
}

double first_moment(const MeanScheme& s, long long n) {
  check_row_index(s, n);
  const double nd = static_cast<double>(n);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, scheme::Cesaro>) {
          return nd / (k.p + 1.0);
        } else if constexpr (std::is_same_v<K, scheme::Abel>) {
          return nd - 1.0;
        } else if constexpr (std::is_same_v<K, scheme::Zweier>) {
          return nd - 0.5;
        } else if constexpr (std::is_same_v<K, scheme::Binomial>) {
          return 0.5 * nd;
        } else if constexpr (std::is_same_v<K, scheme::IdentityPowers>) {
          return nd;
        } else if constexpr (std::is_same_v<K, scheme::PowerSeries>) {
          const SeriesAtRadius f{k, series_radius(k, s.min_n(), n)};
          return f.moment() / f.value();
        } else {
          const MeanScheme& base = *k.base;
          if (base.is<scheme::Cesaro>())
            return (nd - 1.0) / (std::get<scheme::Cesaro>(base.kind()).p + 2.0);
          if (base.is<scheme::Abel>()) return nd - 1.0;
          if (base.is<scheme::IdentityPowers>()) return 0.5 * (nd - 1.0);
          if (base.is<scheme::Zweier>()) return (nd - 1.0) * (nd - 1.0) / (2.0 * nd - 1.0);
          return row_moment(scheme_row(s, n, kDefaultTailEps * kFormulaEpsFactor));
        }
      },
      s.kind());
}

ComplexMatrix apply_mean(const MeanScheme& s, const OperatorModel& t, long long n, Complex lambda,
                         double tail_eps) {
  check_unimodular(lambda);
  if (!s.finite_rows() && spectral_radius(t.matrix) > 1.0 + 1e-9)
    throw Error(Errc::SpectralRadiusTooLarge,
                s.name() + " needs spectral radius <= 1 (operator " + t.label + ")");
  const MeanRow row = scheme_row(s, n, tail_eps);
  const Index dim = t.dim();
  ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
  if (row.support.empty()) return acc;

  long long j = row.support.front().j;
  ComplexMatrix pw = power(t, j);
  if (j > 0 && lambda != Complex(1.0, 0.0)) pw *= std::pow(lambda, static_cast<double>(j));
  for (const auto& e : row.support) {
    while (j < e.j) {
      pw = scaled_apply(t, lambda, pw);
      ++j;
    }
    acc += e.t * pw;
  }
  return acc;
}

MeanRow backward_row_by_formula(const MeanScheme& base, long long n, double tail_eps) {
  check_tail_eps(tail_eps);
  const double fine_eps = std::max(tail_eps * kFormulaEpsFactor, 1e-300);
  MeanRow row_t;
  if (base.finite_rows()) {
    row_t = scheme_row(base, n, tail_eps);
  } else {
    check_row_index(base, n);
    // scheme_row caps tail_eps at 1e-6 from above only; finer values are fine.
    row_t = std::visit(
        [&](const auto& k) -> MeanRow {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, scheme::Abel>) {
            return abel_row(n, fine_eps);
          } else if constexpr (std::is_same_v<K, scheme::PowerSeries>) {
            return power_series_row(k, series_radius(k, base.min_n(), n), n, fine_eps);
          } else {
            return scheme_row(base, n, fine_eps);
          }
        },
        base.kind());
  }
  if (degenerate(row_t))
    throw Error(Errc::DegenerateRow, base.name() + ": row " + std::to_string(n) + " has t_n0 = 1");
  const double moment = row_moment(row_t);

  const long long j_last = row_t.support.back().j;
  std::vector<double> suffix(static_cast<std::size_t>(j_last + 2), 0.0);
  for (const auto& e : row_t.support) suffix[static_cast<std::size_t>(e.j)] += e.t;
  for (long long j = j_last; j > 0; --j)
    suffix[static_cast<std::size_t>(j - 1)] += suffix[static_cast<std::size_t>(j)];
  // remaining[k] = sum_{k' >= k} s_k' * moment = sum_j t_j max(0, j - k)
  std::vector<double> remaining(static_cast<std::size_t>(j_last + 2), 0.0);
  for (long long k = j_last; k >= 0; --k)
    remaining[static_cast<std::size_t>(k)] =
        remaining[static_cast<std::size_t>(k + 1)] + suffix[static_cast<std::size_t>(k + 1)];

  MeanRow row;
  row.n = n;
  for (long long k = 0; k < j_last; ++k) {
    row.support.push_back({k, suffix[static_cast<std::size_t>(k + 1)] / moment});
    if (!base.finite_rows()) {
      const double tail = remaining[static_cast<std::size_t>(k + 1)] / moment;
      if (tail < tail_eps) {
        row.tail_mass_bound = tail;
        break;
      }
    }
  }
  return row;
}

MeanScheme backward_iterate(const MeanScheme& s) {
  long long min_n = s.min_n();
  if (degenerate(scheme_row(s, min_n))) {
    ++min_n;
    if (degenerate(scheme_row(s, min_n)))
      throw Error(Errc::DegenerateRow,
                  s.name() + ": rows " + std::to_string(min_n - 1) + " and " +
                      std::to_string(min_n) + " have t_n0 = 1");
  }
  auto base = std::make_shared<const MeanScheme>(s);
  MeanScheme out(scheme::Backward{base}, "back:" + s.name(), min_n, s.finite_rows());

  for (long long n = min_n; n < min_n + kBackwardCheckRows; ++n) {
    if (const auto* ps = std::get_if<scheme::PowerSeries>(&s.kind());
        ps && !ps->radii.empty() && static_cast<std::size_t>(n - s.min_n()) >= ps->radii.size())
      break;
    const auto closed = backward_closed_form(s, n, kDefaultTailEps);
    if (!closed) break;
    const MeanRow formula = backward_row_by_formula(s, n, kDefaultTailEps);
    const double tol = kBackwardCheckTol + (s.finite_rows() ? 0.0 : kDefaultTailEps);
    if (max_coefficient_gap(*closed, formula) > tol)
      throw Error(Errc::InternalMismatch,
                  "closed-form backward row " + std::to_string(n) + " of " + s.name() +
                      " disagrees with the defining formula");
  }
  return out;
}

double backit_identity_residual(const MeanScheme& s, const OperatorModel& t, long long n,
                                double tail_eps) {
  const MeanScheme back = backward_iterate(s);
  const ComplexMatrix tn = apply_mean(s, t, n, 1.0, tail_eps);
  const ComplexMatrix bn = apply_mean(back, t, n, 1.0, tail_eps);
  const ComplexMatrix id = identity(t.dim());
  const ComplexMatrix lhs = bn * (t.matrix - id);
  const ComplexMatrix rhs = (tn - id) / first_moment(s, n);
  return op_norm(t, lhs - rhs);
}

Complex tau(const MeanScheme& s, long long n, Complex mu, double tail_eps) {
  const MeanRow row = scheme_row(s, n, tail_eps);
  Complex acc = 0.0;
  for (const auto& e : row.support) acc += e.t * std::pow(mu, static_cast<double>(e.j));
  return acc;
}

double block_identity_residual(const ComplexMatrix& a, const ComplexVector& b, Complex mu,
                               const MeanScheme& s, long long n, double tail_eps) {
  check_unimodular(mu);
  const Index d = a.rows();
  if (a.cols() != d || b.size() != d)
    throw Error(Errc::DimensionMismatch, "block identity needs square A and matching b");
  ComplexMatrix full = ComplexMatrix::Zero(d + 1, d + 1);
  full.topLeftCorner(d, d) = a;
  full.topRightCorner(d, 1) = b;
  full(d, d) = mu;
  const ComplexMatrix direct = apply_mean(s, make_operator(full), n, 1.0, tail_eps);

  const ComplexMatrix an = apply_mean(s, make_operator(a), n, 1.0, tail_eps);
  const Complex tn = tau(s, n, mu, tail_eps);
  const ComplexMatrix id = identity(d);
  const ComplexMatrix shifted = a - mu * id;

  ComplexVector corner;
  if (smallest_singular_value(shifted) > 1e-10 * std::max(1.0, largest_singular_value(shifted))) {
    corner = (an - tn * id) * shifted.partialPivLu().solve(b);
  } else {
    // D_0 = 0, D_{j+1} = A D_j + mu^j I, so that T^j has corner D_j b.
    const MeanRow row = scheme_row(s, n, tail_eps);
    ComplexMatrix dj = ComplexMatrix::Zero(d, d);
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    Complex mu_j = 1.0;
    long long j = 0;
    for (const auto& e : row.support) {
      while (j < e.j) {
        dj = a * dj + mu_j * id;
        mu_j *= mu;
        ++j;
      }
      acc += e.t * dj;
    }
    corner = acc * b;
  }
  ComplexMatrix block = ComplexMatrix::Zero(d + 1, d + 1);
  block.topLeftCorner(d, d) = an;
  block.topRightCorner(d, 1) = corner;
  block(d, d) = tn;
  return op_norm(direct - block);
}

double regularity_defect(const MeanScheme& s, const OperatorModel& t, long long n0, long long m,
                         const ComplexVector& x, long long n, double tail_eps) {
  if (n0 < 1 || m < 0) throw Error(Errc::InvalidArgument, "regularity needs n0 >= 1 and m >= 0");
  if (x.size() != t.dim()) throw Error(Errc::DimensionMismatch, "probe vector has wrong length");
  const ComplexVector a = t.matrix * (apply_mean(s, t, n, 1.0, tail_eps) * x);
  const ComplexVector b = apply_mean(s, t, n + n0, 1.0, tail_eps) * x;
  return vector_norm(t, a - b);
}

MeanSweep::MeanSweep(MeanScheme s, OperatorModel t, Complex lambda, double tail_eps)
    : scheme_(std::move(s)), op_(std::move(t)), lambda_(lambda), tail_eps_(tail_eps),
      n_(scheme_.min_n()) {
  check_unimodular(lambda);
  check_tail_eps(tail_eps);
  const Index d = op_.dim();
  if (const auto* c = std::get_if<scheme::Cesaro>(&scheme_.kind())) {
    levels_.assign(static_cast<std::size_t>(c->p + 1), identity(d));
    value_ = levels_.back();
  } else if (scheme_.is<scheme::IdentityPowers>()) {
    value_ = identity(d);
  } else if (scheme_.is<scheme::Zweier>()) {
    aux_ = scaled_apply(op_, lambda_, identity(d));
    value_ = 0.5 * (identity(d) + aux_);
  } else if (scheme_.is<scheme::Binomial>()) {
    value_ = identity(d);
  } else {
    recompute();
  }
}

void MeanSweep::recompute() { value_ = apply_mean(scheme_, op_, n_, lambda_, tail_eps_); }

void MeanSweep::advance() {
  if (!levels_.empty()) {
    const double n = static_cast<double>(n_);
    levels_[0] = scaled_apply(op_, lambda_, levels_[0]);
    for (std::size_t q = 1; q < levels_.size(); ++q) {
      const double qd = static_cast<double>(q);
      levels_[q] = ((n + 1.0) / (n + qd + 1.0)) * (levels_[q] + (qd / (n + 1.0)) * levels_[q - 1]);
    }
    value_ = levels_.back();
    ++n_;
  } else if (scheme_.is<scheme::IdentityPowers>()) {
    value_ = scaled_apply(op_, lambda_, value_);
    ++n_;
  } else if (scheme_.is<scheme::Zweier>()) {
    ComplexMatrix next = scaled_apply(op_, lambda_, aux_);
    value_ = 0.5 * (aux_ + next);
    aux_ = std::move(next);
    ++n_;
  } else if (scheme_.is<scheme::Binomial>()) {
    value_ = 0.5 * (scaled_apply(op_, lambda_, value_) + value_);
    ++n_;
  } else {
    ++n_;
    recompute();
  }
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view context) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(Errc::ConfigError, "bad number '" + std::string(text) + "' in " + std::string(context));
  return v;
}

}  // namespace

MeanScheme parse_scheme(std::string_view spec) {
  if (spec.starts_with("back:")) return backward_iterate(parse_scheme(spec.substr(5)));
  const auto parts = split(spec, ':');
  const std::string_view head = parts.front();
  auto bad = [&](const std::string& why) {
    return Error(Errc::ConfigError, "scheme '" + std::string(spec) + "': " + why);
  };
  auto no_options = [&] {
    if (parts.size() > 1) throw bad("takes no options");
  };
  if (head == "cesaro") {
    int p = 1;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (!parts[i].starts_with("p=")) throw bad("unknown option '" + std::string(parts[i]) + "'");
      const double v = parse_double(parts[i].substr(2), spec);
      if (v != std::floor(v) || v < 1 || v > 64) throw bad("p must be an integer in [1, 64]");
      p = static_cast<int>(v);
    }
    return MeanScheme::cesaro(p);
  }
  if (head == "abel") return no_options(), MeanScheme::abel();
  if (head == "zweier") return no_options(), MeanScheme::zweier();
  if (head == "binomial") return no_options(), MeanScheme::binomial();
  if (head == "powers") return no_options(), MeanScheme::identity_powers();
  if (head == "powseries") {
    std::vector<double> coeffs;
    bool repeat = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].starts_with("coeffs=")) {
        for (auto c : split(parts[i].substr(7), ',')) coeffs.push_back(parse_double(c, spec));
      } else if (parts[i] == "tail=repeat") {
        repeat = true;
      } else if (parts[i] == "tail=none") {
        repeat = false;
      } else {
        throw bad("unknown option '" + std::string(parts[i]) + "'");
      }
    }
    if (coeffs.empty()) throw bad("missing coeffs=");
    try {
      return MeanScheme::power_series(std::move(coeffs), repeat);
    } catch (const Error& e) {
      throw bad(e.what());
    }
  }
  throw bad("unknown scheme");
}

}  // namespace ergolab
