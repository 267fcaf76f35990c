#include <gtest/gtest.h>

#include <numbers>

#include "ergolab/examples.hpp"
#include "ergolab/rng.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ergolab::Error";
  return Errc::InternalMismatch;
}

Poly random_poly(Rng& rng, long long max_degree) {
  std::vector<Complex> c(static_cast<std::size_t>(rng.integer(0, max_degree) + 1));
  for (auto& v : c) v = rng.normal();
  return Poly(std::move(c));
}

Poly from(std::initializer_list<Complex> c) { return Poly(std::vector<Complex>(c)); }

Poly mz(const Poly& p) { return shift(p, 1); }

}  // namespace

TEST(Poly, ArithmeticAndMultiplier) {
  const Poly p = from({1.0, 2.0});
  const Poly q = from({0.0, 1.0, -1.0});
  const Poly pq = p * q;
  ASSERT_EQ(pq.degree(), 3);
  EXPECT_EQ(pq[1], Complex(1.0));
  EXPECT_EQ(pq[2], Complex(1.0));
  EXPECT_EQ(pq[3], Complex(-2.0));
  EXPECT_EQ((p + q)[2], Complex(-1.0));
  EXPECT_EQ(shift(p, 2)[3], Complex(2.0));
  EXPECT_EQ(one_minus_z_times(p)[2], Complex(-2.0));
  EXPECT_EQ(p[7], Complex(0.0));
  const Poly f = Poly::cesaro_multiplier(4);
  ASSERT_EQ(f.degree(), 4);
  for (long long k = 0; k <= 4; ++k) EXPECT_DOUBLE_EQ(f[k].real(), 0.2);
}

TEST(Norms, DirichletType) {
  EXPECT_NEAR(d_alpha_norm(from({1.0, 1.0}), 0.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(d_alpha_norm(Poly::monomial(9), 1.0), 1.0, 1e-15);
  for (double alpha : {-0.5, 0.0, 0.7, 2.0}) EXPECT_NEAR(d_alpha_norm(Poly::monomial(0), alpha), 1.0, 1e-15);
}

TEST(Norms, H1SmallCases) {
  EXPECT_NEAR(h1_norm(Poly::monomial(0)), std::sqrt(5.0), 1e-14);
  EXPECT_NEAR(h1_norm(Poly::monomial(1)), std::sqrt(10.0), 1e-14);
  for (long long k = 0; k <= 20; ++k) {
    const double v = h1_norm(Poly::monomial(k));
    EXPECT_NEAR(v * v, 1.0 + (k + 2.0) * (k + 2.0), 1e-11) << "k=" << k;
    EXPECT_NEAR(v, oracle::h1_norm_literal(Poly::monomial(k).coeffs), 1e-12);
  }
}

TEST(Norms, H1MatchesLiteralDoubleSum) {
  Rng rng(101);
  for (int i = 0; i < 50; ++i) {
    const Poly p = random_poly(rng, 24);
    const double ref = oracle::h1_norm_literal(p.coeffs);
    EXPECT_NEAR(h1_norm(p), ref, 1e-12 * ref);
  }
}

TEST(Norms, H1Star) {
  EXPECT_NEAR(h1_star_norm(Poly::monomial(0)), 1.0, 1e-15);
  EXPECT_NEAR(h1_star_norm(Poly::monomial(1)), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(h1_star_norm(from({1.0, 1.0})), 2.0, 1e-15);
  // Quadrature oracle: sum |p_k|^2 + mean |p'(z)(1 - z)|^2 on 512 nodes.
  Rng rng(55);
  for (int i = 0; i < 10; ++i) {
    const Poly p = random_poly(rng, 12);
    std::vector<Complex> dp;
    for (long long k = 1; k <= p.degree(); ++k) dp.push_back(static_cast<double>(k) * p[k]);
    double sq = 0.0;
    for (auto c : p.coeffs) sq += std::norm(c);
    double mean_sq = 0.0;
    for (int m = 0; m < 512; ++m) {
      const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * m / 512.0);
      mean_sq += std::norm(oracle::poly_eval(dp, z) * (1.0 - z)) / 512.0;
    }
    EXPECT_NEAR(h1_star_norm(p), std::sqrt(sq + mean_sq), 1e-12 * std::sqrt(sq + mean_sq));
  }
}

TEST(Gram, EntriesFromPolarization) {
  const auto g = h1_gram(3);
  EXPECT_DOUBLE_EQ(g.diag[0], 5.0);
  EXPECT_DOUBLE_EQ(g.diag[1], 10.0);
  EXPECT_DOUBLE_EQ(g.off[0], -3.0);
  const double both = std::pow(h1_norm(from({1.0, 1.0})), 2);
  const double off_by_polarization = (both - std::pow(h1_norm(Poly::monomial(0)), 2) -
                                      std::pow(h1_norm(Poly::monomial(1)), 2)) / 2.0;
  EXPECT_NEAR(g.off[0], off_by_polarization, 1e-12);
  EXPECT_EQ(error_code([] { h1_gram(0); }), Errc::BadDimension);
}

TEST(Gram, QuadraticFormIsTheNorm) {
  Rng rng(202);
  const auto g = h1_gram(16);
  const ComplexMatrix gm = g.matrix();
  const auto geo = g.geometry();
  for (int i = 0; i < 30; ++i) {
    const Poly p = random_poly(rng, 16);
    const ComplexVector x = p.vector(17);
    const double norm_sq = std::pow(h1_norm(p), 2);
    EXPECT_NEAR((x.adjoint() * gm * x)(0, 0).real(), norm_sq, 1e-10 * norm_sq);
    EXPECT_NEAR(geo.norm(x), h1_norm(p), 1e-10 * h1_norm(p));
    EXPECT_NEAR(std::abs(h1_inner(p, p) - norm_sq), 0.0, 1e-10 * norm_sq);
  }
}

TEST(Isometry, DirichletSecondDifferenceVanishes) {
  Rng rng(303);
  const auto d0 = [](const Poly& p) { return d_alpha_norm(p, 0.0); };
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(m_isometry_defect(d0, mz, 2, random_poly(rng, 10)), 0.0, 1e-10);
}

TEST(Isometry, H1IsAThreeIsometry) {
  // 26 - 3 * 17 + 3 * 10 - 5 = 0.
  EXPECT_NEAR(m_isometry_defect(h1_norm, mz, 3, Poly::monomial(0)), 0.0, 1e-12);
  Rng rng(404);
  for (int i = 0; i < 200; ++i) EXPECT_LE(std::abs(m_isometry_defect(h1_norm, mz, 3, random_poly(rng, 8))), 1e-9);
  // Not a 2-isometry: the second difference of ||z^k||^2 is 2.
  EXPECT_NEAR(m_isometry_defect(h1_norm, mz, 2, Poly::monomial(0)), 2.0, 1e-12);
}

TEST(Gap, SmallCases) {
  const auto a = shift_power_gap(Poly::monomial(0), 3);
  EXPECT_NEAR(a.lhs * a.lhs, 26.0, 1e-12);
  EXPECT_NEAR(a.rhs * a.rhs, 6.0, 1e-12);
  const auto b = shift_power_gap(Poly::monomial(0), 2);
  EXPECT_NEAR(b.lhs * b.lhs, 17.0, 1e-12);
  EXPECT_NEAR(b.rhs * b.rhs, 2.0, 1e-12);
  const auto c = shift_power_gap(from({1.0, 1.0}), 4);
  EXPECT_GE(c.lhs, c.rhs);
}

TEST(Gap, RandomInstancesHold) {
  Rng rng(505);
  for (int i = 0; i < 300; ++i) {
    const Poly f = random_poly(rng, 32);
    const long long n = rng.integer(2, 64);
    const auto g = shift_power_gap(f, n);
    EXPECT_GE(g.lhs, g.rhs - 1e-12);
    EXPECT_NEAR(g.lhs, h1_norm(shift(f, n)), 1e-12 * g.lhs);
  }
}

TEST(Pairing, ConstantsDecayLikeTwoOverN) {
  const Poly one = Poly::monomial(0);
  EXPECT_NEAR(std::abs(h1_mean_pairing(1, one, one) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h1_mean_pairing(9, one, one) - 0.2), 0.0, 1e-15);
  for (long long n = 1; n <= 199; ++n)
    EXPECT_NEAR(std::abs(h1_mean_pairing(n, one, one) - 2.0 / (n + 1.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(h1_mean_pairing(1, one, Poly::monomial(1)) - 3.5), 0.0, 1e-15);
}

TEST(MeanNorm, SmallCasesAndTruncation) {
  EXPECT_NEAR(h1_mean_norm(0, 16), 1.0, 1e-12);
  const double a = h1_mean_norm(1, 64);
  const double b = h1_mean_norm(1, 128);
  EXPECT_LT(std::abs(a - b) / b, 0.05);
  double sup = 0.0;
  for (long long n : {1LL, 2LL, 4LL, 8LL, 16LL, 32LL}) sup = std::max(sup, h1_mean_norm(n, 128));
  EXPECT_LE(a, sup + 1e-12);
  EXPECT_LE(sup, 10.0);
  EXPECT_EQ(error_code([] { h1_mean_norm(10, 30); }), Errc::BadTruncation);
}

TEST(XrNorm, Monomials) {
  EXPECT_NEAR(xr_norm(Poly::monomial(7), 0, 1024), 7.0, 1e-12);
  EXPECT_NEAR(xr_norm(Poly::monomial(5), 1, 1024), 20.0, 1e-12);
  EXPECT_NEAR(xr_norm(Poly::monomial(0), 2, 1024), 1.0, 1e-15);
  EXPECT_EQ(error_code([] { xr_norm(Poly::monomial(300), 0, 1024); }), Errc::TooFewNodes);
  EXPECT_EQ(xr_default_nodes(10), 1024);
  EXPECT_EQ(xr_default_nodes(1000), 8000);
}

TEST(XrNorm, MatchesDirectQuadrature) {
  Rng rng(606);
  for (int i = 0; i < 5; ++i) {
    const Poly f = random_poly(rng, 40);
    // r = 1: |f_0| + |f_1| + mean |f''|.
    std::vector<Complex> d2;
    for (long long k = 2; k <= f.degree(); ++k) d2.push_back(static_cast<double>(k * (k - 1)) * f[k]);
    const double ref = std::abs(f[0]) + std::abs(f[1]) +
                       oracle::circle_mean_abs([&](Complex z) { return oracle::poly_eval(d2, z); }, 2048);
    EXPECT_NEAR(xr_norm(f, 1, 2048), ref, 1e-10 * ref);
  }
}

TEST(CircleIntegral, MatchesDirectQuadrature) {
  const Poly f = Poly::cesaro_multiplier(20);
  std::vector<Complex> d1;
  for (long long k = 1; k <= 20; ++k) d1.push_back(static_cast<double>(k) * f[k]);
  const double rho = 0.95;
  const double ref =
      2.0 * std::numbers::pi * oracle::circle_mean_abs([&](Complex z) { return oracle::poly_eval(d1, rho * z); }, 1024);
  EXPECT_NEAR(derivative_circle_integral(f, 0, rho, 1024), ref, 1e-10 * ref);
}

TEST(LogFit, ExactLogarithm) {
  std::vector<GrowthPoint> pts;
  for (long long n = 2; n <= 1000; n *= 2) pts.push_back({n, 0.3 * std::log(static_cast<double>(n)) + 1.5});
  const auto fit = fit_log(pts, 2, 1000);
  EXPECT_NEAR(fit.slope, 0.3, 1e-12);
  EXPECT_NEAR(fit.intercept, 1.5, 1e-12);
  EXPECT_NEAR(fit.relative_residual, 0.0, 1e-12);
}

TEST(Shields, GridShape) {
  const auto g = shields_grid(4096);
  EXPECT_EQ(g.front(), 1);
  EXPECT_EQ(g.back(), 4096);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_LT(g[i - 1], g[i]);
}

TEST(Shields, PowerNormsAreExact) {
  for (int r : {0, 1, 2}) {
    const auto rep = shields_report(r, 256);
    for (const auto& pt : rep.power_norm.points) {
      double expected = 1.0;
      for (int j = 1; j <= r; ++j) expected *= 1.0 - static_cast<double>(j) / static_cast<double>(pt.n);
      EXPECT_NEAR(pt.value, expected, 1e-12) << "r=" << r << " n=" << pt.n;
    }
  }
}

TEST(Shields, MeanNormsGrowLogarithmically) {
  const auto rep = shields_report(0, 1024);
  EXPECT_GT(rep.log_fit.slope, 0.0);
  EXPECT_LE(rep.log_fit.relative_residual, 0.10);
  EXPECT_LE(rep.node_check, 1e-6);
  // Oracle for one sample: ||F_n||_0 = |F_n(0)| + mean |F_n'| by direct quadrature.
  const long long n = 64;
  const Poly f = Poly::cesaro_multiplier(n);
  std::vector<Complex> d1;
  for (long long k = 1; k <= n; ++k) d1.push_back(static_cast<double>(k) * f[k]);
  const double ref = std::abs(f[0]) + oracle::circle_mean_abs([&](Complex z) { return oracle::poly_eval(d1, z); }, 4096);
  const auto it = std::find_if(rep.mean_norm.points.begin(), rep.mean_norm.points.end(),
                               [&](const GrowthPoint& p) { return p.n == n; });
  ASSERT_NE(it, rep.mean_norm.points.end());
  EXPECT_NEAR(it->value, ref, 1e-9 * ref);
}
