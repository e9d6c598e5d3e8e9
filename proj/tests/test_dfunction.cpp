#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "su11/dfunction.hpp"

namespace su11 {
namespace {

TEST(DFunction, SpinHalfGroundElement) {
  for (double tau : {0.0, 0.4, 2.0, 7.0}) {
    EXPECT_NEAR(dfunction_element(1, 0, 0, tau), 1.0 / std::cosh(0.5 * tau), 1e-14);
  }
}

TEST(DFunction, LowestWeightElement) {
  for (int twice_k : {1, 2, 3, 4, 7}) {
    for (double tau : {0.3, 1.1, 3.0}) {
      EXPECT_NEAR(dfunction_element(twice_k, 0, 0, tau),
                  std::pow(std::cosh(0.5 * tau), -twice_k), 1e-14);
    }
  }
}

TEST(DFunction, FirstColumnIsGeometric) {
  // d^k_{k+n, k}(tau) = sqrt(C(2k+n-1, n)) tanh^n(tau/2) / cosh^{2k}(tau/2).
  const int twice_k = 3;
  const double tau = 1.4;
  const double t = std::tanh(0.5 * tau);
  double binom = 1.0;
  for (int n = 0; n <= 8; ++n) {
    if (n > 0) binom *= (twice_k + n - 1.0) / n;
    const double expected = std::sqrt(binom) * std::pow(t, n) * std::pow(std::cosh(0.5 * tau), -twice_k);
    EXPECT_NEAR(std::abs(dfunction_element(twice_k, n, 0, tau)), expected, 1e-13);
  }
}

TEST(DFunction, TransposeSymmetry) {
  const DFunctionTable t = dfunction_closed(4, 1.7, 6);
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const double sign = ((a - b) % 2 == 0) ? 1.0 : -1.0;
      EXPECT_NEAR(t.values(a, b), sign * t.values(b, a), 1e-13);
    }
  }
}

TEST(DFunction, BlockAndClosedFormsAgree) {
  for (int twice_k : {1, 2, 5}) {
    for (double tau : {0.0, 0.5, 2.0, 3.5}) {
      const DFunctionTable a = dfunction(twice_k, tau, 8);
      const DFunctionTable b = dfunction_closed(twice_k, tau, 8);
      EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-10) << twice_k << ' ' << tau;
    }
  }
}

TEST(DFunction, ColumnsAreNormalized) {
  const double tau = 1.0;
  double sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double v = dfunction_element(2, n, 3, tau);
    sum += v * v;
  }
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(DFunction, LargeTauStaysFinite) {
  const double v = dfunction_element(3, 10, 4, 60.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_LT(std::abs(v), 1.0);
}

TEST(DFunction, CsvLayout) {
  std::ostringstream out;
  write_dfunction_csv(out, {dfunction_closed(2, 0.0, 1)});
  EXPECT_EQ(out.str(),
            "k,mu_prime,mu,tau,value\n"
            "1,1,1,0,1\n1,1,2,0,0\n1,2,1,0,0\n1,2,2,0,1\n");
}

}  // namespace
}  // namespace su11
