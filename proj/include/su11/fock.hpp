#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

namespace su11 {

using Complex = std::complex<double>;

/// Photon numbers in modes a and b.
struct ModeOccupation {
  int na = 0;
  int nb = 0;

  friend bool operator==(const ModeOccupation&, const ModeOccupation&) = default;
};

/// sign(n_a - n_b). The (k, mu) labels forget which mode carries the excess,
/// so the branch is kept alongside them to make the map invertible.
enum class Branch : int { Minus = -1, Zero = 0, Plus = 1 };

/// Discrete-series label of a two-mode Fock state.
///
/// k and mu are half-integers and are stored doubled so all arithmetic stays
/// exact: twice_k = |n_a - n_b| + 1, twice_mu = n_a + n_b + 1.
struct IrrepIndex {
  int twice_k = 1;
  int twice_mu = 1;
  Branch branch = Branch::Zero;

  double k() const { return 0.5 * twice_k; }
  double mu() const { return 0.5 * twice_mu; }
  /// mu - k, the level inside the irrep (always an integer).
  int level() const { return (twice_mu - twice_k) / 2; }

  friend bool operator==(const IrrepIndex&, const IrrepIndex&) = default;
};

IrrepIndex irrep_of(ModeOccupation occ);

/// Inverse of irrep_of. Throws std::invalid_argument when the label does not
/// satisfy its invariants (mu < k, non-integer mu - k, branch inconsistent
/// with k).
ModeOccupation occupation_of(const IrrepIndex& idx);

/// SU(1,1) parity (-1)^(mu - k) = (-1)^min(n_a, n_b).
inline int parity_sign(ModeOccupation occ) {
  const int m = occ.na < occ.nb ? occ.na : occ.nb;
  return (m % 2 == 0) ? 1 : -1;
}

/// The same sign computed from the irrep labels; kept separate so the two
/// formulas can be checked against each other.
inline int parity_sign(const IrrepIndex& idx) {
  return (idx.level() % 2 == 0) ? 1 : -1;
}

/// Pure two-mode state on the square Fock lattice 0 <= n_a, n_b <= n_max.
/// amplitudes()(na, nb) = <na, nb|psi>.
class TwoModeState {
 public:
  TwoModeState() : TwoModeState(0) {}
  explicit TwoModeState(int n_max);
  TwoModeState(int n_max, Eigen::MatrixXcd amplitudes);

  static TwoModeState vacuum(int n_max);
  static TwoModeState fock(int na, int nb, int n_max);

  int n_max() const { return n_max_; }
  const Eigen::MatrixXcd& amplitudes() const { return amps_; }
  Eigen::MatrixXcd& amplitudes() { return amps_; }

  Complex operator()(int na, int nb) const { return amps_(na, nb); }
  Complex& operator()(int na, int nb) { return amps_(na, nb); }

  /// Copy onto a larger (or equal) lattice, zero padded.
  TwoModeState embedded(int n_max) const;

 private:
  int n_max_;
  Eigen::MatrixXcd amps_;
};

double norm(const TwoModeState& state);

/// Throws std::domain_error for the zero state.
TwoModeState normalize(const TwoModeState& state);

/// Largest max(n_a, n_b) over entries with nonzero amplitude, or -1 for the
/// zero state.
int support_extent(const TwoModeState& state);

/// Joint histogram P(n_a, n_b) plus the probability that fell outside the
/// detector's range and was thrown away.
struct JointPhotonDistribution {
  Eigen::MatrixXd probabilities;
  double discarded_mass = 0.0;

  int n_max() const { return static_cast<int>(probabilities.rows()) - 1; }
  double total() const { return probabilities.sum() + discarded_mass; }
};

/// Checks entries >= 0 and total() == 1 within tol; throws
/// std::invalid_argument otherwise.
void validate(const JointPhotonDistribution& dist, double tol = 1e-10);

inline constexpr double kNormTolerance = 1e-8;

/// |amplitude|^2 on every lattice site. Throws std::invalid_argument when the
/// state's squared norm is off 1 by more than kNormTolerance.
JointPhotonDistribution photon_distribution(const TwoModeState& state);

/// Post-selection on one irrep: keep events with |n_a - n_b| = 2k - 1,
/// optionally only one branch (sign of n_a - n_b).
struct IrrepSelector {
  int twice_k = 1;
  std::optional<Branch> branch;

  bool contains(int na, int nb) const {
    const int d = na - nb;
    if ((d < 0 ? -d : d) + 1 != twice_k) return false;
    if (!branch) return true;
    const Branch b = d > 0 ? Branch::Plus : (d < 0 ? Branch::Minus : Branch::Zero);
    return b == *branch;
  }
};

/// Weight of a detection event in the parity sum: parity_sign, or 0 when the
/// event falls outside the selected irrep.
inline int parity_weight(int na, int nb, const std::optional<IrrepSelector>& sel) {
  if (sel && !sel->contains(na, nb)) return 0;
  return parity_sign(ModeOccupation{na, nb});
}

}  // namespace su11
