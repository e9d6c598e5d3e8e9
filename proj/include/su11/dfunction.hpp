#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace su11 {

/// Hyperbolic d-functions d^k_{mu' mu}(tau) = <k, mu'| exp(i tau K2) |k, mu>.
///
/// K2 = (K+ - K-)/(2i), so exp(i tau K2) is the squeeze operator at real
/// positive zeta = tau/2. This fixes the sign convention:
/// d^{1/2}_{1/2,1/2}(tau) = 1/cosh(tau/2), and in general
/// d^k_{kk}(tau) = cosh^{-2k}(tau/2). The matrix is real and
/// d^k_{ab}(tau) = (-1)^{a-b} d^k_{ba}(tau).
struct DFunctionTable {
  int twice_k = 1;
  double tau = 0.0;
  /// values(i, j) = d^k_{k+i, k+j}(tau), levels 0..max_level.
  Eigen::MatrixXd values;

  int max_level() const { return static_cast<int>(values.rows()) - 1; }
};

/// Table from the exponential of the irrep block. The block is truncated at
/// max_level plus default_guard(tau, max_level), so it is accurate as long as
/// the guard holds the spread (tau up to a few units).
DFunctionTable dfunction(int twice_k, double tau, int max_level);

/// Single element from the finite closed-form sum; valid at any tau.
double dfunction_element(int twice_k, int level_out, int level_in, double tau);

/// Same table built element-wise from dfunction_element.
DFunctionTable dfunction_closed(int twice_k, double tau, int max_level);

/// CSV with header "k,mu_prime,mu,tau,value", one row per table entry.
void write_dfunction_csv(std::ostream& out, const std::vector<DFunctionTable>& tables);

}  // namespace su11
