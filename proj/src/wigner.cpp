#include "su11/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "parallel.hpp"

namespace su11 {

double wigner_origin(const JointPhotonDistribution& dist,
                     const std::optional<IrrepSelector>& selector) {
  const auto& pr = dist.probabilities;
  double sum = 0.0;
  for (int nb = 0; nb < pr.cols(); ++nb) {
    for (int na = 0; na < pr.rows(); ++na) {
      sum += parity_weight(na, nb, selector) * pr(na, nb);
    }
  }
  return sum;
}

namespace {

JointPhotonDistribution squeezed_distribution(const TwoModeState& squeezed) {
  JointPhotonDistribution dist;
  dist.probabilities = squeezed.amplitudes().cwiseAbs2();
  return dist;
}

WignerSample measure(const TwoModeState& squeezed, const SamplingOptions& options,
                     std::uint64_t shot_key) {
  JointPhotonDistribution dist = squeezed_distribution(squeezed);
  if (options.detector) dist = apply_detector(dist, *options.detector);
  WignerSample s;
  if (options.shots) {
    CounterRng rng(shot_key);
    const ShotHistogram hist = sample_shots(dist, options.shots->shots, rng);
    const ParityEstimate est = parity_from_histogram(hist, options.selector);
    s.value = est.estimate;
    s.std_error = est.std_error;
  } else {
    s.value = wigner_origin(dist, options.selector);
  }
  return s;
}

}  // namespace

double wigner_at(const TwoModeState& state, const SqueezeParam& p,
                 const SqueezeOptions& options) {
  const JointPhotonDistribution at_origin = photon_distribution(state);
  if (p.tau() == 0.0) return wigner_origin(at_origin);
  const SqueezeResult r = apply_squeeze(state, p, -1, options);
  return wigner_origin(squeezed_distribution(r.state));
}

WignerSample sample_wigner(const TwoModeState& state, const SqueezeParam& p,
                           const SamplingOptions& options, std::uint64_t shot_key) {
  photon_distribution(state);  // normalization check
  const SqueezeResult r = apply_squeeze(state, p, -1, options.squeeze);
  WignerSample s = measure(r.state, options, shot_key);
  s.tail_mass = r.tail_mass;
  s.tail_exceeded = r.tail_exceeded;
  return s;
}

WignerField wigner_grid(const TwoModeState& state, const GridSpec& grid,
                        const SamplingOptions& options, const std::optional<NoiseConfig>& noise,
                        unsigned threads) {
  validate(grid);
  photon_distribution(state);
  const int support = support_extent(state);
  const double tau_top = grid.tau_values.back();
  const bool automatic = options.squeeze.guard < 0;
  int guard = automatic ? default_guard(tau_top, support) : options.squeeze.guard;

  const std::size_t n_tau = grid.tau_values.size();
  const std::size_t n_chi = grid.chi_values.size();
  WignerField field;
  field.grid = grid;
  if (options.shots) field.shot_seed = options.shots->seed;

  for (int attempt = 0;; ++attempt) {
    const SqueezeEngine engine(state.n_max() + guard);
    field.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_tau),
                                         static_cast<Eigen::Index>(n_chi));
    field.truncation_tail = field.values;
    detail::parallel_for(
        n_tau * n_chi,
        [&](std::size_t flat) {
          const std::size_t i = flat / n_chi;
          const std::size_t j = flat % n_chi;
          const SqueezeParam p(grid.tau_values[i], grid.chi_values[j]);
          const TwoModeState squeezed = engine.apply(state, p, -1);
          const std::uint64_t key =
              options.shots ? derive_key(options.shots->seed, kShotStreamTag, i, j) : 0;
          const WignerSample s = measure(squeezed, options, key);
          const auto ii = static_cast<Eigen::Index>(i);
          const auto jj = static_cast<Eigen::Index>(j);
          field.values(ii, jj) = s.value;
          field.truncation_tail(ii, jj) = shell_mass(squeezed, tail_shell_width(guard));
        },
        threads);
    const bool exceeded = field.truncation_tail.maxCoeff() > options.squeeze.tail_tol;
    if (!automatic || !exceeded || attempt == kMaxGuardDoublings) break;
    guard *= 2;
  }

  if (noise) field = add_gaussian_noise(field, *noise);
  return field;
}

double resolution_truncated_wigner(const TwoModeState& state, const SqueezeParam& p,
                                   int n_resolve) {
  if (n_resolve < 0) throw std::invalid_argument("resolution_truncated_wigner: N must be >= 0");
  photon_distribution(state);
  SqueezeOptions opts;
  opts.guard = std::max(default_guard(p.tau(), support_extent(state)), n_resolve - state.n_max());
  const SqueezeResult r = apply_squeeze(state, p, -1, opts);
  const auto& a = r.state.amplitudes();
  double sum = 0.0;
  for (int nb = 0; nb <= n_resolve; ++nb) {
    for (int na = 0; na <= n_resolve; ++na) {
      sum += parity_sign(ModeOccupation{na, nb}) * std::norm(a(na, nb));
    }
  }
  return sum;
}

ExactWigner wigner_exact(const TwoModeState& state, const SqueezeParam& p,
                         const std::optional<IrrepSelector>& selector) {
  const int n = state.n_max();
  const SqueezeParam twice = p.doubled();
  const auto& a = state.amplitudes();
  Complex total = 0.0;

  for (int d = -n; d <= n; ++d) {
    const int abs_d = std::abs(d);
    const int a0 = std::max(d, 0);
    const int b0 = std::max(-d, 0);
    if (selector && !selector->contains(a0, b0)) continue;

    std::vector<int> levels;
    std::vector<Complex> amps;
    for (int m = 0; m + abs_d <= n; ++m) {
      const Complex c = a(m + a0, m + b0);
      if (c != Complex(0.0)) {
        levels.push_back(m);
        amps.push_back(c);
      }
    }
    for (std::size_t u = 0; u < levels.size(); ++u) {
      for (std::size_t v = 0; v < levels.size(); ++v) {
        const double parity = (levels[v] % 2 == 0) ? 1.0 : -1.0;
        total += std::conj(amps[u]) * amps[v] * parity *
                 squeeze_block_element_closed(abs_d, levels[u], levels[v], twice);
      }
    }
  }
  return {total.real(), std::abs(total.imag())};
}

}  // namespace su11
