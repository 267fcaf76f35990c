#include <gtest/gtest.h>

#include <numbers>

#include "ergolab/rng.hpp"
#include "ergolab/spectral.hpp"
#include "oracles.hpp"

using namespace ergolab;

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

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

OperatorModel scalar(Complex z) { return diagonal_operator({z}); }

}  // namespace

TEST(Grid, DyadicRadiiAndValidation) {
  const auto g = AnnulusGrid::dyadic(4, 16);
  ASSERT_EQ(g.radii.size(), 4u);
  EXPECT_DOUBLE_EQ(g.radii.front(), 1.5);
  EXPECT_DOUBLE_EQ(g.radii.back(), 1.0625);
  AnnulusGrid bad{{1.0}, 8};
  EXPECT_EQ(error_code([&] { bad.validate(); }), Errc::InvalidArgument);
  AnnulusGrid no_angles{{1.5}, 0};
  EXPECT_EQ(error_code([&] { no_angles.validate(); }), Errc::InvalidArgument);
}

TEST(Resolvent, ScalarAndJordan) {
  EXPECT_NEAR(resolvent_norm(scalar(0.0), 2.0), 0.5, 1e-15);
  // (J - 2I)^{-1} = [[-1, -1], [0, -1]].
  const ComplexMatrix r = resolvent(jordan_block(2, 1.0), 2.0);
  ComplexMatrix expected(2, 2);
  expected << -1.0, -1.0, 0.0, -1.0;
  EXPECT_LE(oracle::max_abs(r - expected), 1e-15);
  EXPECT_NEAR(resolvent_norm(jordan_block(2, 1.0), 2.0), kPhi, 1e-12);
  const Complex mu = std::polar(1.0, std::numbers::pi / 4.0);
  EXPECT_NEAR(resolvent_norm(scalar(mu), 1.5 * mu), 2.0, 1e-12);
}

TEST(Resolvent, OnSpectrumThrows) {
  EXPECT_EQ(error_code([] { resolvent(jordan_block(2, 1.0), 1.0); }), Errc::SingularResolvent);
}

TEST(Kreiss, ScalarOneAttainsOneOnTheRealAxis) {
  const auto f = kreiss_functional(scalar(1.0), 0, AnnulusGrid::dyadic(10, 64));
  EXPECT_NEAR(f.value, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(f.argmax.angle, 0.0);
}

TEST(Kreiss, JordanOrderZeroDoublesPerRefinement) {
  const auto grid = AnnulusGrid::dyadic(10, 128);
  const auto f = kreiss_functional(jordan_block(2, 1.0), 0, grid);
  ASSERT_EQ(f.profile.size(), 10u);
  // The coarsest step (radius 1.5 -> 1.25) is still pre-asymptotic; see the
  // acceptance run for the full table.
  for (std::size_t k = 2; k < f.profile.size(); ++k) {
    const double step = f.profile[k] / f.profile[k - 1];
    EXPECT_GE(step, 1.8) << "k=" << k;
    EXPECT_LE(step, 2.2) << "k=" << k;
  }
  // Oracle on the real axis: ||(J - rho)^{-1}|| with closed-form inverse.
  const double rho = grid.radii.back();
  ComplexMatrix inv(2, 2);
  inv << 1.0 / (1.0 - rho), -1.0 / ((1.0 - rho) * (1.0 - rho)), 0.0, 1.0 / (1.0 - rho);
  EXPECT_NEAR(f.profile.back(), (rho - 1.0) * oracle::spectral_norm(inv), 1e-9 * f.profile.back());
}

TEST(Kreiss, JordanOrderOneIsStable) {
  const auto t = jordan_block(2, 1.0);
  const double k6 = kreiss_functional(t, 1, AnnulusGrid::dyadic(6, 128)).value;
  const double k10 = kreiss_functional(t, 1, AnnulusGrid::dyadic(10, 128)).value;
  EXPECT_LT(std::abs(k10 - k6) / k6, 0.05);
}

TEST(PartialSums, ScalarCases) {
  const auto grid = AnnulusGrid::dyadic(10, 64);
  const auto one = partial_sum_functional(scalar(1.0), 0, 64, grid);
  EXPECT_LE(one.value, 1.0 + 1e-12);
  EXPECT_GT(one.value, 0.9);
  // Only the k = 0 term: (|l| - 1) / |l|, largest at the outermost radius.
  const auto zero = partial_sum_functional(scalar(0.0), 0, 16, grid);
  EXPECT_NEAR(zero.value, 0.5 / 1.5, 1e-12);
  const auto id = partial_sum_functional(make_operator(identity(2)), 0, 64, grid);
  EXPECT_NEAR(id.value, one.value, 1e-12);
}

TEST(MeanGrowth, ScalarOne) {
  const auto f = mean_growth_functional(scalar(1.0), 1, 0, 64, 32);
  EXPECT_NEAR(f.value, 1.0, 1e-12);
}

TEST(MeanGrowth, JordanOrderZeroGrowsLikeHalfN) {
  const auto f = mean_growth_functional(jordan_block(2, 1.0), 1, 0, 128, 32);
  EXPECT_GE(f.value, 60.0);
  // M_n(J) = [[1, n/2], [0, 1]] at lambda = 1.
  const double a = 64.0;
  EXPECT_NEAR(f.profile[127], (a + std::sqrt(a * a + 4.0)) / 2.0, 1e-9);
}

TEST(MeanGrowth, JordanOrderOnePlateaus) {
  const auto f = mean_growth_functional(jordan_block(2, 1.0), 1, 1, 512, 32);
  // n = 1 gives ||[[1, 1/2], [0, 1]]|| = (1 + sqrt 17) / 4, the global sup.
  EXPECT_NEAR(f.value, (1.0 + std::sqrt(17.0)) / 4.0, 1e-12);
  EXPECT_EQ(f.argmax.n, 1);
  EXPECT_LE(f.tail_value, 0.51);
  EXPECT_GE(f.tail_value, 0.5);
}

TEST(SeriesIdentity, ClosedFormCases) {
  EXPECT_LE(sw_identity_residual(scalar(0.0), 3, 1.0, 0.5, 200), 1e-12);
  EXPECT_LE(sw_identity_residual(make_operator(identity(1)), 1, 1.0, 0.5, sw_default_terms(0.5)), 1e-10);
  EXPECT_LE(sw_identity_residual(scalar(Complex(0, 1)), 2, 1.0, 0.5, 400), 1e-8);
  EXPECT_EQ(sw_default_terms(0.5), 80);
  EXPECT_EQ(sw_default_terms(0.75), 160);
}

TEST(SeriesIdentity, RandomInstances) {
  Rng rng(404);
  for (int i = 0; i < 20; ++i) {
    const auto t = random_operator(rng.integer(1, 5), rng.uniform(0.1, 1.0), 1000 + i);
    const int p = static_cast<int>(rng.integer(1, 3));
    const double rho = rng.uniform(0.1, 0.9);
    const Complex lambda = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    EXPECT_LE(sw_identity_residual(t, p, lambda, rho, sw_default_terms(rho)), 1e-8) << "instance " << i;
  }
}

TEST(SeriesIdentity, RejectsBadRadius) {
  EXPECT_EQ(error_code([] { sw_identity_residual(scalar(0.5), 1, 1.0, 0.95, 100); }), Errc::InvalidArgument);
  EXPECT_EQ(error_code([] { sw_identity_residual(scalar(1.5), 1, 1.0, 0.5, 100); }),
            Errc::SpectralRadiusTooLarge);
}

TEST(AbelSummation, HandArithmeticAndRandom) {
  // LHS 1 + 0.5 + 0.25 = 1.75 = 0.5 (1 + 2 * 0.5) + 3 * 0.25.
  EXPECT_LE(abel_summation_residual(scalar(1.0), 1.0, 0.5, 2), 1e-15);
  EXPECT_LE(abel_summation_residual(random_operator(4, 0.9, 8), 1.0, 1.0, 12), 1e-12);
  EXPECT_LE(abel_summation_residual(random_operator(4, 0.9, 8), Complex(0, 1), 0.7, 20), 1e-10);
}

TEST(MeanBound, ScalarsAndContraction) {
  const auto grid = AnnulusGrid::dyadic(8, 32);
  const auto one = kreiss_to_mean_bound_check(scalar(1.0), 0, 64, 32, grid);
  EXPECT_LE(one.constant, 1.0 + 1e-12);
  EXPECT_NEAR(one.max_ratio, 1.0 / ((2.0 * std::numbers::e - 1.0) * one.constant), 1e-12);
  EXPECT_LT(kreiss_to_mean_bound_check(scalar(0.0), 0, 64, 32, grid).max_ratio, 1.0);
  const auto shift = dirichlet_shift(1.0, 64, ShiftDirection::Backward);
  EXPECT_LT(kreiss_to_mean_bound_check(shift, 0, 64, 16, AnnulusGrid::dyadic(4, 16)).max_ratio, 1.0);
}
