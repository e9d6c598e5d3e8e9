#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "su11/oracles.hpp"
#include "su11/wigner.hpp"

namespace su11 {
namespace {

TwoModeState superposition() {
  TwoModeState s(3);
  s(1, 0) = Complex(0.6, 0.0);
  s(2, 1) = Complex(0.0, 0.48);
  s(0, 0) = Complex(0.64, 0.0);
  return s;
}

TEST(WignerOrigin, FockParity) {
  JointPhotonDistribution d;
  d.probabilities = Eigen::MatrixXd::Zero(3, 3);
  d.probabilities(0, 0) = 0.25;
  d.probabilities(1, 1) = 0.5;
  d.probabilities(2, 0) = 0.25;
  EXPECT_DOUBLE_EQ(wigner_origin(d), 0.25 - 0.5 + 0.25);
  EXPECT_DOUBLE_EQ(wigner_origin(d, IrrepSelector{1, std::nullopt}), -0.25);
}

TEST(WignerAt, VacuumIsSechTau) {
  for (double tau : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    EXPECT_NEAR(wigner_at(TwoModeState::vacuum(0), SqueezeParam(tau, 0.3)), 1.0 / std::cosh(tau),
                1e-12);
  }
  EXPECT_NEAR(wigner_at(TwoModeState::vacuum(0), SqueezeParam(1.0, 0.0)), 0.648054273663885,
              1e-12);
}

TEST(WignerAt, BiphotonMatchesSeries) {
  for (double tau : {0.0, 0.5, 1.0, 2.0}) {
    const SqueezeParam p(tau, 1.0);
    EXPECT_NEAR(wigner_at(TwoModeState::fock(1, 1, 1), p),
                biphoton_wigner_closed(p, std::nullopt, Normalization::Normalized), 1e-10);
  }
}

TEST(WignerAt, RejectsUnnormalizedInput) {
  TwoModeState s(1);
  s(0, 0) = 0.5;
  EXPECT_THROW(wigner_at(s, SqueezeParam(1.0, 0.0)), std::invalid_argument);
}

TEST(WignerExact, AgreesWithThePipeline) {
  const TwoModeState s = superposition();
  for (double tau : {0.0, 0.4, 1.3, 2.1}) {
    for (double chi : {0.0, 1.0, 3.0}) {
      const SqueezeParam p(tau, chi);
      const ExactWigner e = wigner_exact(s, p);
      EXPECT_NEAR(e.value, wigner_at(s, p), 1e-10);
      EXPECT_LT(e.imag_residue, 1e-12);
      const IrrepSelector sel{2, std::nullopt};
      SamplingOptions opts;
      opts.selector = sel;
      EXPECT_NEAR(wigner_exact(s, p, sel).value, sample_wigner(s, p, opts).value, 1e-10);
    }
  }
}

TEST(SampleWigner, ShotsGiveStandardError) {
  const TwoModeState s = TwoModeState::fock(1, 1, 1);
  const SqueezeParam p(0.7, 0.0);
  SamplingOptions opts;
  opts.shots = ShotConfig{20000, 3};
  const WignerSample a = sample_wigner(s, p, opts, 99);
  const WignerSample b = sample_wigner(s, p, opts, 99);
  EXPECT_EQ(a.value, b.value);
  EXPECT_GT(a.std_error, 0.0);
  EXPECT_NEAR(a.value, wigner_at(s, p), 5 * a.std_error);
}

TEST(SampleWigner, LossPullsTowardsOne) {
  // Full loss maps every state to vacuum counts, whose parity is +1.
  SamplingOptions opts;
  opts.detector = DetectorConfig{0.0, 0.0, std::nullopt, SaturationPolicy::Discard};
  EXPECT_NEAR(sample_wigner(TwoModeState::fock(1, 1, 1), SqueezeParam(0.5, 0.0), opts).value,
              1.0, 1e-12);
}

TEST(WignerGrid, IndependentOfThreadCount) {
  const TwoModeState s = superposition();
  const GridSpec g = GridSpec::hyperboloid({0.0, 0.5, 1.0, 1.5}, uniform_angles(5));
  SamplingOptions opts;
  opts.shots = ShotConfig{500, 42};
  const WignerField one = wigner_grid(s, g, opts, NoiseConfig{30.0, 5}, 1);
  const WignerField four = wigner_grid(s, g, opts, NoiseConfig{30.0, 5}, 4);
  EXPECT_EQ(one.values, four.values);
  EXPECT_EQ(one.shot_seed, std::optional<std::uint64_t>(42));
}

TEST(WignerGrid, ExactGridMatchesPointwise) {
  const TwoModeState s = superposition();
  const GridSpec g = GridSpec::hyperboloid({0.0, 0.8, 2.0}, uniform_angles(4));
  const WignerField f = wigner_grid(s, g);
  for (std::size_t i = 0; i < g.tau_values.size(); ++i) {
    for (std::size_t j = 0; j < g.chi_values.size(); ++j) {
      const SqueezeParam p(g.tau_values[i], g.chi_values[j]);
      EXPECT_NEAR(f.values(Eigen::Index(i), Eigen::Index(j)), wigner_exact(s, p).value, 1e-10);
      EXPECT_LT(f.truncation_tail(Eigen::Index(i), Eigen::Index(j)), 1e-8);
    }
  }
}

TEST(ResolutionTruncated, MatchesPartialSeries) {
  for (int n : {0, 3, 10}) {
    for (double tau : {0.5, 2.0, 3.5}) {
      const SqueezeParam p(tau, 0.0);
      EXPECT_NEAR(resolution_truncated_wigner(TwoModeState::vacuum(0), p, n),
                  vacuum_wigner_closed(p, n, Normalization::Normalized), 1e-12);
    }
  }
}

TEST(Wigner, BoundedByOne) {
  const TwoModeState s = superposition();
  for (double tau : {0.0, 1.0, 2.5}) {
    for (double chi : {0.0, 2.0, 5.0}) {
      EXPECT_LE(std::abs(wigner_exact(s, SqueezeParam(tau, chi)).value), 1.0 + 1e-12);
    }
  }
}

}  // namespace
}  // namespace su11
