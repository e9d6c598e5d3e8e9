#include "su11/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace su11 {

namespace {

void check_eta(double eta, const char* name) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

// B(m, n) = C(n, m) eta^m (1 - eta)^(n - m); columns sum to 1.
Eigen::MatrixXd binomial_matrix(int n_max, double eta) {
  const int n = n_max + 1;
  if (eta == 1.0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  if (eta == 0.0) {
    b.row(0).setOnes();
    return b;
  }
  const double log_eta = std::log(eta);
  const double log_loss = std::log1p(-eta);
  for (int col = 0; col < n; ++col) {
    for (int m = 0; m <= col; ++m) {
      const double log_c = std::lgamma(col + 1.0) - std::lgamma(m + 1.0) - std::lgamma(col - m + 1.0);
      b(m, col) = std::exp(log_c + m * log_eta + (col - m) * log_loss);
    }
  }
  return b;
}

}  // namespace

void validate(const DetectorConfig& cfg) {
  check_eta(cfg.eta_a, "eta_a");
  check_eta(cfg.eta_b, "eta_b");
  if (cfg.n_resolve && *cfg.n_resolve < 0) {
    throw std::invalid_argument("n_resolve must be >= 0");
  }
}

JointPhotonDistribution apply_loss(const JointPhotonDistribution& dist, double eta_a,
                                   double eta_b) {
  check_eta(eta_a, "eta_a");
  check_eta(eta_b, "eta_b");
  const int n = dist.n_max();
  JointPhotonDistribution out;
  out.discarded_mass = dist.discarded_mass;
  if (eta_a == 1.0 && eta_b == 1.0) {
    out.probabilities = dist.probabilities;
    return out;
  }
  const Eigen::MatrixXd ba = binomial_matrix(n, eta_a);
  const Eigen::MatrixXd bb = binomial_matrix(n, eta_b);
  out.probabilities = ba * dist.probabilities * bb.transpose();
  return out;
}

JointPhotonDistribution truncate_resolution(const JointPhotonDistribution& dist, int n_resolve,
                                            SaturationPolicy policy) {
  if (n_resolve < 0) throw std::invalid_argument("truncate_resolution: N must be >= 0");
  const int n = dist.n_max();
  const int keep = std::min(n, n_resolve);
  JointPhotonDistribution out;
  out.discarded_mass = dist.discarded_mass;
  out.probabilities = dist.probabilities.topLeftCorner(keep + 1, keep + 1);
  if (keep == n) return out;

  for (int nb = 0; nb <= n; ++nb) {
    for (int na = 0; na <= n; ++na) {
      if (na <= keep && nb <= keep) continue;
      const double p = dist.probabilities(na, nb);
      if (policy == SaturationPolicy::Discard) {
        out.discarded_mass += p;
      } else {
        out.probabilities(std::min(na, keep), std::min(nb, keep)) += p;
      }
    }
  }
  return out;
}

JointPhotonDistribution apply_detector(const JointPhotonDistribution& dist,
                                       const DetectorConfig& cfg) {
  validate(cfg);
  JointPhotonDistribution out = apply_loss(dist, cfg.eta_a, cfg.eta_b);
  if (cfg.n_resolve) out = truncate_resolution(out, *cfg.n_resolve, cfg.policy);
  return out;
}

ShotHistogram sample_shots(const JointPhotonDistribution& dist, std::int64_t shots,
                           CounterRng& rng) {
  if (shots < 1) throw std::invalid_argument("sample_shots: shots must be >= 1");
  const int n = dist.n_max() + 1;
  ShotHistogram hist;
  hist.counts = CountMatrix::Zero(n, n);
  hist.shots = shots;
  hist.key = rng.key();

  // Sequential conditional binomials over the cells (column-major), with the
  // discarded category last.
  std::int64_t remaining = shots;
  double mass_left = dist.total();
  for (int nb = 0; nb < n && remaining > 0; ++nb) {
    for (int na = 0; na < n && remaining > 0; ++na) {
      const double p = dist.probabilities(na, nb);
      if (p <= 0.0) continue;
      const double q = mass_left > 0.0 ? std::clamp(p / mass_left, 0.0, 1.0) : 1.0;
      std::binomial_distribution<std::int64_t> draw(remaining, q);
      const std::int64_t c = draw(rng);
      hist.counts(na, nb) = c;
      remaining -= c;
      mass_left -= p;
    }
  }
  hist.discarded = remaining;
  return hist;
}

ShotHistogram sample_shots(const JointPhotonDistribution& dist, const ShotConfig& cfg) {
  CounterRng rng(derive_key(cfg.seed, kShotStreamTag));
  return sample_shots(dist, cfg.shots, rng);
}

JointPhotonDistribution empirical_distribution(const ShotHistogram& hist) {
  JointPhotonDistribution out;
  const double total = static_cast<double>(hist.shots);
  out.probabilities = hist.counts.cast<double>() / total;
  out.discarded_mass = static_cast<double>(hist.discarded) / total;
  return out;
}

ParityEstimate parity_from_histogram(const ShotHistogram& hist,
                                     const std::optional<IrrepSelector>& selector) {
  if (hist.shots < 1) throw std::invalid_argument("parity_from_histogram: empty histogram");
  std::int64_t signed_sum = 0;
  std::int64_t weighted = 0;
  for (int nb = 0; nb < hist.counts.cols(); ++nb) {
    for (int na = 0; na < hist.counts.rows(); ++na) {
      const int w = parity_weight(na, nb, selector);
      signed_sum += w * hist.counts(na, nb);
      weighted += (w != 0) ? hist.counts(na, nb) : 0;
    }
  }
  const double n = static_cast<double>(hist.shots);
  ParityEstimate est;
  est.estimate = static_cast<double>(signed_sum) / n;
  if (hist.shots > 1) {
    const double var =
        (static_cast<double>(weighted) - n * est.estimate * est.estimate) / (n - 1.0);
    est.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return est;
}

WignerField add_gaussian_noise(const WignerField& field, const NoiseConfig& cfg) {
  if (!(cfg.snr > 0.0)) throw std::invalid_argument("add_gaussian_noise: snr must be > 0");
  WignerField out = field;
  out.noise_seed = cfg.seed;
  const double sigma = field.values.cwiseAbs().maxCoeff() / cfg.snr;
  if (sigma == 0.0) return out;
  for (Eigen::Index i = 0; i < field.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < field.values.cols(); ++j) {
      CounterRng rng(derive_key(cfg.seed, kNoiseStreamTag, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(j)));
      std::normal_distribution<double> g(0.0, sigma);
      out.values(i, j) += g(rng);
    }
  }
  return out;
}

}  // namespace su11
