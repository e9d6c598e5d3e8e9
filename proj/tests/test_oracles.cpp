#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "su11/oracles.hpp"
#include "su11/wigner.hpp"

namespace su11 {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Tmsv, CutoffAndTail) {
  const double tau0 = 1.0;
  const int n = tmsv_cutoff(tau0, 1e-12);
  const double t2 = std::pow(std::tanh(0.5 * tau0), 2);
  EXPECT_LT(std::pow(t2, n + 1), 1e-12);
  EXPECT_GE(std::pow(t2, n), 1e-12);
  const TwoModeState s = tmsv_state(tau0, 0.0, n);
  EXPECT_NEAR(1.0 - norm(s) * norm(s), std::pow(t2, n + 1), 1e-15);
}

TEST(Tmsv, DiagonalProbabilities) {
  const TwoModeState s = tmsv_state(1.0, 0.5, 40);
  const double c2 = std::pow(std::cosh(0.5), -2);
  EXPECT_NEAR(std::norm(s(0, 0)), c2, 1e-15);
  EXPECT_NEAR(std::norm(s(1, 1)), c2 * std::pow(std::tanh(0.5), 2), 1e-15);
  EXPECT_NEAR(std::norm(s(0, 0)), 0.7864, 1e-4);
  EXPECT_NEAR(std::norm(s(1, 1)), 0.1680, 1e-4);
  EXPECT_EQ(s(1, 0), Complex(0.0));
}

TEST(ComposedTau, CollinearSqueezesAdd) {
  EXPECT_NEAR(composed_tau(SqueezeParam(0.7, 1.0), SqueezeParam(0.5, 1.0)), 1.2, 1e-9);
  EXPECT_NEAR(composed_tau(SqueezeParam(0.7, 1.0), SqueezeParam(0.5, 1.0 + kPi)), 0.2, 1e-9);
}

TEST(DisplacedTmsv, NormalizedFormIsADistribution) {
  const SqueezeParam p0(1.0, 0.3);
  const SqueezeParam p(0.8, 2.0);
  const std::vector<double> d = displaced_tmsv_distribution(p0, p, 200, Normalization::Normalized);
  EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
  const std::vector<double> pub = displaced_tmsv_distribution(p0, p, 200);
  EXPECT_NEAR(pub[3], 0.25 * d[3], 1e-15);
}

TEST(DisplacedTmsv, NormalizedFormMatchesPipeline) {
  const SqueezeParam p0(1.0, 0.0);
  for (const SqueezeParam& p : {SqueezeParam(0.5, 0.5), SqueezeParam(1.5, 2.5)}) {
    const std::vector<double> closed =
        displaced_tmsv_distribution(p0, p, 40, Normalization::Normalized);
    const std::vector<double> pipe = displaced_tmsv_pipeline(p0, p, 40);
    for (int n = 0; n <= 40; ++n) EXPECT_NEAR(closed[n], pipe[n], 1e-10) << n;
  }
}

TEST(VacuumSeries, LimitsAndPartialSums) {
  const SqueezeParam p(1.0, 0.0);
  const double x = std::pow(std::tanh(0.5), 2);
  EXPECT_NEAR(vacuum_wigner_closed(p), 1.0 / (1.0 + x), 1e-15);
  EXPECT_NEAR(vacuum_wigner_closed(p, std::nullopt, Normalization::Normalized),
              1.0 / std::cosh(1.0), 1e-15);
  EXPECT_NEAR(vacuum_wigner_closed(p, 1), 1.0 - x, 1e-15);
}

TEST(BiphotonSeries, PartialSumsConverge) {
  const SqueezeParam p(1.3, 0.0);
  const double full = biphoton_wigner_closed(p, std::nullopt, Normalization::Normalized);
  EXPECT_NEAR(biphoton_wigner_closed(p, 400, Normalization::Normalized), full, 1e-13);
  EXPECT_NEAR(biphoton_wigner_closed(SqueezeParam(0.0, 0.0)), -1.0, 1e-15);
  const double c2 = std::pow(std::cosh(0.65), -2);
  EXPECT_NEAR(full, c2 * biphoton_wigner_closed(p), 1e-14);
}

TEST(DenseSqueeze, UnitaryAndBounded) {
  const DenseSqueeze u(6, SqueezeParam(0.9, 1.2));
  const auto n = u.matrix().rows();
  EXPECT_EQ(n, 49);
  EXPECT_LT((u.matrix().adjoint() * u.matrix() - Eigen::MatrixXcd::Identity(n, n))
                .cwiseAbs()
                .maxCoeff(),
            1e-10);
  EXPECT_THROW(DenseSqueeze(DenseSqueeze::kMaxNMax + 1, SqueezeParam(1.0, 0.0)),
               std::invalid_argument);
}

TEST(DenseSqueeze, BruteForceMatchesBlockPipeline) {
  TwoModeState s(8);
  s(1, 0) = Complex(0.6, 0.0);
  s(3, 2) = Complex(0.0, 0.8);
  SqueezeOptions opts;
  opts.guard = 0;
  for (double tau : {0.3, 1.0}) {
    const SqueezeParam p(tau, 0.7);
    EXPECT_NEAR(brute_force_wigner(s, p), wigner_at(s, p, opts), 1e-12);
  }
}

TEST(DenseSqueeze, FactorTwoFormApproachesExact) {
  const TwoModeState s = TwoModeState::fock(1, 1, 1).embedded(30);
  const SqueezeParam p(0.3, 0.0);
  EXPECT_NEAR(dense_factor2_wigner(s, p), wigner_exact(s, p).value, 1e-9);
}

}  // namespace
}  // namespace su11
