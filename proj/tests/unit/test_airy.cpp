#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cornerlab/airy.hpp"
#include "cornerlab/quadrature.hpp"

using namespace cornerlab;

TEST(Airy, ClosedFormsAtZero) {
  EXPECT_NEAR(airy_ai(0), 0.3550280538878172, 1e-15);
  EXPECT_NEAR(airy_ai_prime(0), -0.2588194037928068, 1e-15);
}

TEST(Airy, SatisfiesOde) {
  const double h = 2e-4;
  for (double x = -10; x <= 8; x += 0.25) {
    const double second = (airy_ai(x + h) - 2 * airy_ai(x) + airy_ai(x - h)) / (h * h);
    EXPECT_NEAR(second, x * airy_ai(x), 1e-6) << x;
  }
}

TEST(Airy, RangeErrors) {
  EXPECT_THROW(airy_ai(-16), std::out_of_range);
  EXPECT_THROW(airy_ai_prime(10.5), std::out_of_range);
}

TEST(AiryKernel, DiagonalValue) {
  EXPECT_NEAR(airy_kernel(0, 0), 0.2588194037928068 * 0.2588194037928068, 1e-12);
  EXPECT_NEAR(extended_airy_kernel(0.3, 0, 0.3, 0), airy_kernel(0, 0), 1e-12);
}

TEST(AiryKernel, MatchesQuadrature) {
  for (double a : {-3.0, -0.5, 0.0, 1.2}) {
    for (double d : {0.0, 1e-5, 5e-4, 0.3}) {
      const double b = a + d;
      const double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double u) { return airy_ai(a + u) * airy_ai(b + u); }, 0.0, 9.5 - std::max(a, b), 15, 1e-13);
      EXPECT_NEAR(airy_kernel(a, b), direct, 1e-10) << a << " " << b;
    }
  }
}

TEST(AiryKernel, EqualTimeReductionAndSymmetry) {
  double worst = 0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double a = -4 + 0.7 * i, b = -4 + 0.7 * j;
      worst = std::max(worst, std::abs(extended_airy_kernel(0.2, a, 0.2, b) - airy_kernel(a, b)));
      EXPECT_NEAR(airy_kernel(a, b), airy_kernel(b, a), 1e-10);
    }
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(AiryKernel, ExtendedBranchesAgreeWithDirectQuadrature) {
  for (double ds : {0.3, 1.0, 2.0}) {
    for (double a : {-2.0, 0.0, 1.0}) {
      for (double b : {-1.0, 0.5}) {
        EXPECT_NEAR(extended_airy_kernel(0, a, ds, b), extended_airy_kernel_direct(0, a, ds, b), 1e-8)
            << ds << " " << a << " " << b;
      }
    }
  }
}

TEST(AiryKernel, ForwardBranchDecays) {
  EXPECT_LT(extended_airy_kernel(1.0, 0, 0, 0), airy_kernel(0, 0));
  EXPECT_GT(extended_airy_kernel(1.0, 0, 0, 0), 0);
}

TEST(Quadrature, GaussRulesIntegratePolynomials) {
  const auto gl = gauss_legendre(8, 0, 2);
  double s = 0;
  for (std::size_t k = 0; k < 8; ++k) s += gl.weights[k] * std::pow(gl.nodes[k], 15);
  EXPECT_NEAR(s, std::pow(2.0, 16) / 16, 1e-9);
  const auto lag = gauss_laguerre(10);
  double m = 0;
  for (std::size_t k = 0; k < 10; ++k) m += lag.weights[k] * std::pow(lag.nodes[k], 5);
  EXPECT_NEAR(m, 120, 1e-9);
}

TEST(Fredholm, DiscretizationShape) {
  const double times[] = {0.0, 0.5}, cutoffs[] = {-1.0, 2.0};
  const auto k = discretize_kernel(times, cutoffs, 30);
  EXPECT_EQ(k.size(), 60u);
  EXPECT_NEAR(k.cutoffs[1], 2.0, 0);
  EXPECT_THROW(discretize_kernel(times, std::span<const double>(cutoffs, 1), 30), std::invalid_argument);
}
