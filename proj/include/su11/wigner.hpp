#pragma once

#include <cstdint>
#include <optional>

#include "su11/algebra.hpp"
#include "su11/detector.hpp"
#include "su11/field.hpp"
#include "su11/fock.hpp"

namespace su11 {

/// Parity-weighted sum sum (-1)^min(n_a, n_b) P(n_a, n_b). With a selector
/// only events inside that irrep contribute.
double wigner_origin(const JointPhotonDistribution& dist,
                     const std::optional<IrrepSelector>& selector = {});

/// W(zeta) = <psi| S(zeta) Pi S(-zeta) |psi>: squeeze the state by S(-zeta),
/// count photons, sum the parities. Ideal detectors.
double wigner_at(const TwoModeState& state, const SqueezeParam& p,
                 const SqueezeOptions& options = {});

/// Everything between the squeezer and the parity sum.
struct SamplingOptions {
  std::optional<DetectorConfig> detector;
  std::optional<ShotConfig> shots;
  std::optional<IrrepSelector> selector;
  SqueezeOptions squeeze;
};

struct WignerSample {
  double value = 0.0;
  /// Shot-noise standard error; 0 for exact distributions.
  double std_error = 0.0;
  double tail_mass = 0.0;
  bool tail_exceeded = false;
};

/// One simulated measurement at p. shot_key selects the sampling stream when
/// options.shots is set.
WignerSample sample_wigner(const TwoModeState& state, const SqueezeParam& p,
                           const SamplingOptions& options, std::uint64_t shot_key = 0);

/// Every grid point is an independent experiment, evaluated in parallel.
/// Shots at point (i, j) use derive_key(shots.seed, kShotStreamTag, i, j).
/// The output does not depend on the thread count.
WignerField wigner_grid(const TwoModeState& state, const GridSpec& grid,
                        const SamplingOptions& options = {},
                        const std::optional<NoiseConfig>& noise = {}, unsigned threads = 0);

/// Raw partial parity sum over n_a, n_b <= n_resolve, no renormalization.
/// The squeezed lattice is widened to at least n_resolve.
double resolution_truncated_wigner(const TwoModeState& state, const SqueezeParam& p,
                                   int n_resolve);

struct ExactWigner {
  double value = 0.0;
  /// |Im| of the complex expectation before it was stored as real.
  double imag_residue = 0.0;
};

/// <psi| S(2 zeta) Pi |psi> from the closed-form squeeze coefficients, with no
/// output truncation. With a selector, only the amplitudes inside that irrep
/// enter (the irrep-resolved Wigner function). Cost grows with the square of
/// the support per block, independent of tau.
ExactWigner wigner_exact(const TwoModeState& state, const SqueezeParam& p,
                         const std::optional<IrrepSelector>& selector = {});

}  // namespace su11
