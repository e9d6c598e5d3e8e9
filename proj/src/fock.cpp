#include "su11/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace su11 {

IrrepIndex irrep_of(ModeOccupation occ) {
  if (occ.na < 0 || occ.nb < 0) {
    throw std::invalid_argument("irrep_of: negative occupation");
  }
  const int diff = occ.na - occ.nb;
  IrrepIndex idx;
  idx.twice_k = std::abs(diff) + 1;
  idx.twice_mu = occ.na + occ.nb + 1;
  idx.branch = diff > 0 ? Branch::Plus : (diff < 0 ? Branch::Minus : Branch::Zero);
  return idx;
}

ModeOccupation occupation_of(const IrrepIndex& idx) {
  if (idx.twice_k < 1) {
    throw std::invalid_argument("occupation_of: k must be >= 1/2");
  }
  if (idx.twice_mu < idx.twice_k) {
    throw std::invalid_argument("occupation_of: mu < k");
  }
  if ((idx.twice_mu - idx.twice_k) % 2 != 0) {
    throw std::invalid_argument("occupation_of: mu - k is not an integer");
  }
  if ((idx.twice_k == 1) != (idx.branch == Branch::Zero)) {
    throw std::invalid_argument("occupation_of: branch must be 0 exactly when k = 1/2");
  }
  const int low = idx.level();
  const int high = low + idx.twice_k - 1;
  if (idx.branch == Branch::Minus) return {low, high};
  return {high, low};
}

TwoModeState::TwoModeState(int n_max) : n_max_(n_max) {
  if (n_max < 0) throw std::invalid_argument("TwoModeState: n_max must be >= 0");
  amps_ = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
}

TwoModeState::TwoModeState(int n_max, Eigen::MatrixXcd amplitudes)
    : n_max_(n_max), amps_(std::move(amplitudes)) {
  if (n_max < 0) throw std::invalid_argument("TwoModeState: n_max must be >= 0");
  if (amps_.rows() != n_max + 1 || amps_.cols() != n_max + 1) {
    throw std::invalid_argument("TwoModeState: amplitude grid must be (n_max+1) x (n_max+1)");
  }
}

TwoModeState TwoModeState::vacuum(int n_max) { return fock(0, 0, n_max); }

TwoModeState TwoModeState::fock(int na, int nb, int n_max) {
  if (na < 0 || nb < 0 || na > n_max || nb > n_max) {
    throw std::invalid_argument("TwoModeState::fock: occupation outside lattice");
  }
  TwoModeState s(n_max);
  s(na, nb) = 1.0;
  return s;
}

TwoModeState TwoModeState::embedded(int n_max) const {
  if (n_max < n_max_) {
    throw std::invalid_argument("TwoModeState::embedded: cannot shrink lattice");
  }
  TwoModeState out(n_max);
  out.amps_.topLeftCorner(n_max_ + 1, n_max_ + 1) = amps_;
  return out;
}

double norm(const TwoModeState& state) { return state.amplitudes().norm(); }

TwoModeState normalize(const TwoModeState& state) {
  const double n = norm(state);
  if (n == 0.0) throw std::domain_error("normalize: zero state");
  return TwoModeState(state.n_max(), state.amplitudes() / n);
}

int support_extent(const TwoModeState& state) {
  int extent = -1;
  const auto& a = state.amplitudes();
  for (int nb = 0; nb <= state.n_max(); ++nb) {
    for (int na = 0; na <= state.n_max(); ++na) {
      if (a(na, nb) != Complex(0.0)) extent = std::max(extent, std::max(na, nb));
    }
  }
  return extent;
}

void validate(const JointPhotonDistribution& dist, double tol) {
  if (dist.probabilities.rows() != dist.probabilities.cols()) {
    throw std::invalid_argument("distribution grid must be square");
  }
  if ((dist.probabilities.array() < 0.0).any() || dist.discarded_mass < 0.0) {
    throw std::invalid_argument("distribution has negative entries");
  }
  const double total = dist.total();
  if (std::abs(total - 1.0) > tol) {
    throw std::invalid_argument("distribution mass is " + std::to_string(total) + ", expected 1");
  }
}

JointPhotonDistribution photon_distribution(const TwoModeState& state) {
  const double n2 = state.amplitudes().squaredNorm();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw std::invalid_argument("photon_distribution: state is not normalized (norm^2 = " +
                                std::to_string(n2) + ")");
  }
  JointPhotonDistribution dist;
  dist.probabilities = state.amplitudes().cwiseAbs2();
  return dist;
}

}  // namespace su11
