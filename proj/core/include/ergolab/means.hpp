#pragma once

// Summability schemes {t_nj} applied to the power sequence of an operator.
//
// A scheme produces, for each valid row index n, nonnegative weights t_nj
// summing to one. Applying row n to T gives T_n = sum_j t_nj T^j; applying
// it to lambda*T (|lambda| = 1) gives the rotated mean T_{n,lambda}.

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ergolab/linop.hpp"

namespace ergolab {

inline constexpr double kDefaultTailEps = 1e-12;

class MeanScheme;

namespace scheme {

struct Cesaro {
  int p = 1;
};
// Discretised Abel means: r = 1 - 1/n.
struct Abel {};
// T_n = (T^{n-1} + T^n) / 2.
struct Zweier {};
// T_n = 2^{-n} sum C(n,k) T^k.
struct Binomial {};
// T_n = F(r_n T) / F(r_n) with F = sum c_k z^k. When repeat_last is set the
// last coefficient repeats forever; otherwise F is a polynomial.
struct PowerSeries {
  std::vector<double> coeffs;
  bool repeat_last = false;
  std::vector<double> radii;  // r_n for n = min_n, min_n+1, ...; empty means 1 - 1/n
};
// T_n = T^n.
struct IdentityPowers {};
struct Backward {
  std::shared_ptr<const MeanScheme> base;
};

}  // namespace scheme

class MeanScheme {
 public:
  using Kind = std::variant<scheme::Cesaro, scheme::Abel, scheme::Zweier, scheme::Binomial,
                            scheme::PowerSeries, scheme::IdentityPowers, scheme::Backward>;

  static MeanScheme cesaro(int p);
  static MeanScheme abel();
  static MeanScheme zweier();
  static MeanScheme binomial();
  static MeanScheme power_series(std::vector<double> coeffs, bool repeat_last,
                                 std::vector<double> radii = {});
  static MeanScheme identity_powers();

  const Kind& kind() const { return kind_; }
  const std::string& name() const { return name_; }
  long long min_n() const { return min_n_; }
  bool finite_rows() const { return finite_rows_; }

  template <typename K>
  bool is() const {
    return std::holds_alternative<K>(kind_);
  }

 private:
  friend MeanScheme backward_iterate(const MeanScheme& s);
  MeanScheme(Kind kind, std::string name, long long min_n, bool finite_rows)
      : kind_(std::move(kind)), name_(std::move(name)), min_n_(min_n), finite_rows_(finite_rows) {}

  Kind kind_;
  std::string name_;
  long long min_n_ = 0;
  bool finite_rows_ = true;
};

struct RowEntry {
  long long j;
  double t;
};

struct MeanRow {
  long long n = 0;
  std::vector<RowEntry> support;  // strictly increasing j
  double tail_mass_bound = 0.0;

  double sum() const;
};

// Row n of the scheme. Infinite rows are cut at the first index whose tail
// mass drops below tail_eps; the weights are not renormalised.
MeanRow scheme_row(const MeanScheme& s, long long n, double tail_eps = kDefaultTailEps);

// sum_j j t_nj, in closed form where one is known.
double first_moment(const MeanScheme& s, long long n);

// sum_j t_nj (lambda T)^j.
ComplexMatrix apply_mean(const MeanScheme& s, const OperatorModel& t, long long n,
                         Complex lambda = 1.0, double tail_eps = kDefaultTailEps);

// The backward iterate s_nk = sum_{j>k} t_nj / sum_{j>=1} j t_nj. Closed forms
// are used for the known families and checked against the defining formula
// on the first rows; a mismatch throws InternalMismatch.
MeanScheme backward_iterate(const MeanScheme& s);

// Row n of the backward iterate of `base`, straight from the defining formula.
MeanRow backward_row_by_formula(const MeanScheme& base, long long n,
                                double tail_eps = kDefaultTailEps);

// || T_n^{(-1)} (T - I) - (sum j t_nj)^{-1} (T_n - I) ||
double backit_identity_residual(const MeanScheme& s, const OperatorModel& t, long long n,
                                double tail_eps = kDefaultTailEps);

// sum_j t_nj mu^j
Complex tau(const MeanScheme& s, long long n, Complex mu, double tail_eps = kDefaultTailEps);

// For T = [[A, b], [0, mu]], compares the mean of T with the block form
// [[A_n, (A_n - tau I)(A - mu I)^{-1} b], [0, tau]]. When A - mu I is singular
// the upper-right block is assembled from divided differences instead.
double block_identity_residual(const ComplexMatrix& a, const ComplexVector& b, Complex mu,
                               const MeanScheme& s, long long n,
                               double tail_eps = kDefaultTailEps);

// || T T_n x - T_{n+n0} x || in T's geometry. The caller supplies x already in
// the range of (T - I)^m; m is recorded only for reporting.
double regularity_defect(const MeanScheme& s, const OperatorModel& t, long long n0, long long m,
                         const ComplexVector& x, long long n, double tail_eps = kDefaultTailEps);

// Walks T_{min_n, lambda}, T_{min_n+1, lambda}, ... with incremental updates
// where the family allows it (Cesaro via the order recurrence, powers,
// Zweier, binomial) and falls back to apply_mean otherwise.
class MeanSweep {
 public:
  MeanSweep(MeanScheme s, OperatorModel t, Complex lambda = 1.0,
            double tail_eps = kDefaultTailEps);

  long long n() const { return n_; }
  const ComplexMatrix& value() const { return value_; }
  void advance();

 private:
  void recompute();

  MeanScheme scheme_;
  OperatorModel op_;
  Complex lambda_;
  double tail_eps_;
  long long n_;
  ComplexMatrix value_;
  std::vector<ComplexMatrix> levels_;  // Cesaro: M_n^{(q)}, q = 0..p
  ComplexMatrix aux_;                  // previous power (Zweier) or S (binomial)
};

// "cesaro:p=2", "abel", "zweier", "binomial", "powers",
// "powseries:coeffs=1,2,1[:tail=repeat]", and "back:<scheme>".
MeanScheme parse_scheme(std::string_view spec);

}  // namespace ergolab
