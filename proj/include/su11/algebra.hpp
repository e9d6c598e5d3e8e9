#pragma once

#include <map>
#include <mutex>

#include <Eigen/Dense>

#include "su11/fock.hpp"

namespace su11 {

/// Point of the SU(1,1) phase space, zeta = (tau/2) e^{i chi}.
///
/// tau is the hyperbolic polar angle on the upper sheet of H2 and chi the
/// azimuth. chi is canonicalized to [0, 2 pi).
class SqueezeParam {
 public:
  SqueezeParam() = default;
  SqueezeParam(double tau, double chi);

  double tau() const { return tau_; }
  double chi() const { return chi_; }
  Complex zeta() const { return std::polar(0.5 * tau_, chi_); }

  /// The point with twice the squeezing, 2 zeta.
  SqueezeParam doubled() const { return {2.0 * tau_, chi_}; }

 private:
  double tau_ = 0.0;
  double chi_ = 0.0;
};

struct DiskPoint {
  Complex xi;
};

struct HyperboloidPoint {
  double n0 = 1.0;
  double n1 = 0.0;
  double n2 = 0.0;

  /// n0^2 - n1^2 - n2^2, which is 1 on H2.
  double minkowski_norm2() const { return n0 * n0 - n1 * n1 - n2 * n2; }
};

/// Stereographic image xi = tanh(tau/2) e^{i chi}.
DiskPoint to_disk(const SqueezeParam& p);
/// n = (cosh tau, sinh tau cos chi, sinh tau sin chi).
HyperboloidPoint to_hyperboloid(const SqueezeParam& p);
/// Inverse of to_disk; throws std::domain_error for |xi| >= 1.
SqueezeParam disk_to_param(const DiskPoint& x);

/// Generators restricted to one fixed photon-number difference d = n_a - n_b.
///
/// Basis index m = min(n_a, n_b) = 0..m_max, i.e. |k, mu = m + k> with
/// k = (|d| + 1)/2. The truncation drops K+ out of the top row, so the Casimir
/// identity only holds for m < m_max.
struct DifferenceBlock {
  int d = 0;
  int m_max = 0;
  Eigen::MatrixXcd K0;
  Eigen::MatrixXcd Kp;
  Eigen::MatrixXcd Km;

  int twice_k() const { return (d < 0 ? -d : d) + 1; }
};

DifferenceBlock block_generators(int d, int m_max);

/// exp(zeta K+ - zeta^* K-) on the block, via the Hermitian eigendecomposition
/// of i (zeta K+ - zeta^* K-).
Eigen::MatrixXcd squeeze_block_unitary(const DifferenceBlock& block, const SqueezeParam& p);

/// Guard band added on top of the input truncation before squeezing: the
/// larger of 3 sinh^2(tau/2)(m_support + 1) and the depth at which a
/// tanh^n(tau/2) fall-off reaches 1e-16 in probability, plus m_support.
/// At least 10.
int default_guard(double tau, int m_support);

/// Width of the outer shell watched for leakage: a quarter of the guard.
int tail_shell_width(int guard);

/// Applies S(+-zeta) block by block on a fixed output lattice n_out.
///
/// Inside a block of difference d the generator is similar to a real
/// symmetric tridiagonal matrix T_d (independent of tau and chi):
///   zeta K+ - zeta^* K- = Q (-i tau/2) T_d Q^dagger,
/// with Q = diag(e^{i m (chi + pi/2)}). T_d is diagonalized once per |d| and
/// reused for every squeeze parameter. Safe to share between threads.
class SqueezeEngine {
 public:
  explicit SqueezeEngine(int n_out);
  SqueezeEngine(const SqueezeEngine&) = delete;
  SqueezeEngine& operator=(const SqueezeEngine&) = delete;

  int n_out() const { return n_out_; }

  /// Diagonalize every block with |d| <= max_abs_d up front.
  void warm(int max_abs_d) const;

  /// exp(sign (zeta K+ - zeta^* K-)) on the difference-d block of the output
  /// lattice (size n_out - |d| + 1).
  Eigen::MatrixXcd block_unitary(int d, const SqueezeParam& p, int sign = 1) const;

  /// state.n_max() must not exceed n_out.
  TwoModeState apply(const TwoModeState& state, const SqueezeParam& p, int sign) const;

 private:
  struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  const Eigensystem& eigensystem(int abs_d) const;

  int n_out_;
  mutable std::mutex mutex_;
  mutable std::map<int, Eigensystem> cache_;
};

/// How often an automatic guard is doubled while the tail stays above
/// tail_tol.
inline constexpr int kMaxGuardDoublings = 3;

struct SqueezeOptions {
  /// < 0 selects default_guard(tau, support_extent(state)), doubled up to
  /// kMaxGuardDoublings times while the tail exceeds tail_tol.
  int guard = -1;
  /// Probability allowed in the outer guard shell before flagging.
  double tail_tol = 1e-8;
};

struct SqueezeResult {
  TwoModeState state;
  /// Output probability in the outer tail_shell_width(guard) rows.
  double tail_mass = 0.0;
  bool tail_exceeded = false;
  int guard = 0;
};

/// Probability in the outer shell max(n_a, n_b) > state.n_max() - width.
double shell_mass(const TwoModeState& state, int width);

/// S(sign * zeta)|psi> on the lattice n_max + guard. The photon-number
/// difference is conserved exactly.
SqueezeResult apply_squeeze(const TwoModeState& state, const SqueezeParam& p, int sign,
                            const SqueezeOptions& options = {});

/// <out|S(zeta)|in> from the normally ordered factorization
///   S = exp(xi K+) (1 - |xi|^2)^{K0} exp(-xi^* K-),
/// a finite sum with no truncation. Zero unless out and in share n_a - n_b.
Complex squeeze_matrix_element_closed(ModeOccupation out, ModeOccupation in,
                                      const SqueezeParam& p);

/// Same coefficient addressed by block: difference |d| = abs_d, levels
/// m_out, m_in. Real-valued up to the phase e^{i chi (m_out - m_in)}.
Complex squeeze_block_element_closed(int abs_d, int m_out, int m_in, const SqueezeParam& p);

}  // namespace su11
