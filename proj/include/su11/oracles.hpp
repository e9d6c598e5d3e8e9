#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "su11/algebra.hpp"
#include "su11/fock.hpp"

namespace su11 {

/// Two-mode squeezed vacuum: amplitude e^{i n chi0} tanh^n(tau0/2)/cosh(tau0/2)
/// on (n, n), n <= n_max. Not renormalized, so the missing tail is visible in
/// norm().
TwoModeState tmsv_state(double tau0, double chi0, int n_max);

/// Smallest n_max whose TMSV tail mass tanh^{2(n_max+1)}(tau0/2) is below tol.
int tmsv_cutoff(double tau0, double tol = 1e-12);

/// The published closed forms drop normalization factors. AsPublished
/// reproduces them as printed; Normalized restores the missing factor so the
/// result is a probability (or agrees with the operational Wigner function).
enum class Normalization { AsPublished, Normalized };

/// tau' of the composed squeeze S(zeta) S(zeta0), read off numerically as
/// |<0,0|S(zeta) S(zeta0)|0,0>| = 1/cosh(tau'/2) from products of d = 0 block
/// unitaries.
double composed_tau(const SqueezeParam& p0, const SqueezeParam& p);

/// Diagonal photon statistics P_n of S(zeta) S(zeta0)|0,0> from the closed
/// form
///   P_n = 1/(4 cosh^2(tau'/2)) |(1 + xi xi0^*)/(1 + xi^* xi0)|^2
///         |(xi0 + xi)/(1 + xi xi0^*)|^{2n},
/// n = 0..n_max. Normalized replaces the 1/4 by 1.
std::vector<double> displaced_tmsv_distribution(const SqueezeParam& p0, const SqueezeParam& p,
                                                int n_max,
                                                Normalization norm = Normalization::AsPublished);

/// Same statistics from the pipeline: apply_squeeze(tmsv, p, +1), read the
/// diagonal.
std::vector<double> displaced_tmsv_pipeline(const SqueezeParam& p0, const SqueezeParam& p,
                                            int n_max);

/// Vacuum Wigner function as the alternating series sum (-1)^n |xi|^{2n},
/// truncated after n = N when given (full sum 1/(1 + |xi|^2)). Normalized
/// multiplies each term by 1/cosh^2(tau/2), giving 1/cosh(tau) in full.
double vacuum_wigner_closed(const SqueezeParam& p, std::optional<int> n_resolve = {},
                            Normalization norm = Normalization::AsPublished);

/// Biphoton |1,1> series
///   1/cosh^2(tau/2) sum (-1)^n tanh^{2n}(tau/2) (n/sinh(tau/2) - sinh(tau/2))^2,
/// rearranged so tau -> 0 is finite. Normalized includes the extra
/// 1/cosh^2(tau/2) of the true squeeze coefficients.
double biphoton_wigner_closed(const SqueezeParam& p, std::optional<int> n_resolve = {},
                              Normalization norm = Normalization::AsPublished);

/// Dense exponential of the full two-mode generator zeta a^dag b^dag - zeta^* a b
/// on the (n_max + 1)^2 lattice, with no block decomposition. Index of
/// (n_a, n_b) is n_a (n_max + 1) + n_b.
class DenseSqueeze {
 public:
  static constexpr int kMaxNMax = 40;

  /// Throws std::invalid_argument for n_max > kMaxNMax.
  DenseSqueeze(int n_max, const SqueezeParam& p, int sign = 1);

  int n_max() const { return n_max_; }
  const Eigen::MatrixXcd& matrix() const { return u_; }

  TwoModeState apply(const TwoModeState& state) const;

 private:
  int n_max_;
  Eigen::MatrixXcd u_;
};

Eigen::MatrixXcd dense_generator(int n_max, const SqueezeParam& p);

/// Parity sum of exp(-G) psi on the state's own lattice (the oracle for
/// wigner_at with guard 0).
double brute_force_wigner(const TwoModeState& state, const SqueezeParam& p);
/// Reuses a precomputed exp(-G) (DenseSqueeze(n_max, p, -1)).
double brute_force_wigner(const DenseSqueeze& minus_zeta, const TwoModeState& state);

/// <psi| exp(2 G) Pi |psi> with dense matrices, G the generator at p.
double dense_factor2_wigner(const TwoModeState& state, const SqueezeParam& p);
/// Reuses a precomputed exp(2 G) (DenseSqueeze(n_max, p.doubled(), +1)).
double dense_factor2_wigner(const DenseSqueeze& plus_two_zeta, const TwoModeState& state);

}  // namespace su11
