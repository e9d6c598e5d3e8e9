#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "su11/field.hpp"
#include "su11/fock.hpp"
#include "su11/rng.hpp"

namespace su11 {

enum class SaturationPolicy { Discard, Clip };

/// Photon-number-resolving detector pair. Finite efficiency is modeled as a
/// beam splitter of transmittance eta in front of an ideal counter, which for
/// counting statistics is a binomial thinning of each mode.
struct DetectorConfig {
  double eta_a = 1.0;
  double eta_b = 1.0;
  /// Largest count the detector resolves; unset means unlimited.
  std::optional<int> n_resolve;
  SaturationPolicy policy = SaturationPolicy::Discard;
};

void validate(const DetectorConfig& cfg);

/// Additive Gaussian noise on the sampled field, sigma = max|W| / snr.
struct NoiseConfig {
  double snr = 30.0;
  std::uint64_t seed = 0;
};

/// Finite-statistics experiment: each point's histogram is a multinomial
/// draw of `shots` events.
struct ShotConfig {
  std::int64_t shots = 10000;
  std::uint64_t seed = 0;
};

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct ShotHistogram {
  CountMatrix counts;
  std::int64_t discarded = 0;
  std::int64_t shots = 0;
  /// Stream key the draw used.
  std::uint64_t key = 0;
};

/// Per-mode binomial thinning:
///   P'(m_a, m_b) = sum_{n_a >= m_a, n_b >= m_b}
///                  B(n_a, m_a; eta_a) B(n_b, m_b; eta_b) P(n_a, n_b).
/// Discarded mass passes through unchanged. Throws for eta outside [0, 1].
JointPhotonDistribution apply_loss(const JointPhotonDistribution& dist, double eta_a,
                                   double eta_b);

/// Detector range N. Discard moves probability with n_a > N or n_b > N into
/// discarded_mass; Clip records over-range counts at N. The output grid is
/// min(N, n_max) + 1 wide.
JointPhotonDistribution truncate_resolution(const JointPhotonDistribution& dist, int n_resolve,
                                            SaturationPolicy policy);

/// apply_loss followed by truncate_resolution when n_resolve is set.
JointPhotonDistribution apply_detector(const JointPhotonDistribution& dist,
                                       const DetectorConfig& cfg);

ShotHistogram sample_shots(const JointPhotonDistribution& dist, std::int64_t shots,
                           CounterRng& rng);
ShotHistogram sample_shots(const JointPhotonDistribution& dist, const ShotConfig& cfg);

/// Empirical frequencies; discarded events go to discarded_mass.
JointPhotonDistribution empirical_distribution(const ShotHistogram& hist);

struct ParityEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Mean of the per-event parity variable (+1, -1, or 0 for discarded or
/// unselected events) and its sample standard deviation over sqrt(shots).
ParityEstimate parity_from_histogram(const ShotHistogram& hist,
                                     const std::optional<IrrepSelector>& selector = {});

/// W'(i, j) = W(i, j) + g_ij, g_ij ~ N(0, sigma^2) with sigma = max|W| / snr.
/// Each point draws from its own stream derive_key(seed, tag, i, j).
WignerField add_gaussian_noise(const WignerField& field, const NoiseConfig& cfg);

/// Stream tags used to derive per-point keys.
inline constexpr std::uint64_t kShotStreamTag = 0x53484f54ULL;
inline constexpr std::uint64_t kNoiseStreamTag = 0x4e4f4953ULL;

}  // namespace su11
