#pragma once

#include <functional>
#include <iosfwd>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "su11/algebra.hpp"

namespace su11 {

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Product rule for int_0^{2 pi} dchi int_0^{tau_max} dtau sinh(tau) f.
///
/// The tau rule is Gauss-Legendre in u = tanh(tau/2), where
/// sinh(tau) dtau = 4u/(1-u^2)^2 du; tau_weights already include that factor.
/// For k >= 1 a product of two d-functions times this Jacobian is a
/// polynomial in u, so the tau rule is exact once it has enough nodes.
/// The chi rule is the uniform trapezoid.
struct QuadratureGrid {
  double tau_max = 0.0;
  std::vector<double> tau_nodes;
  std::vector<double> tau_weights;
  std::vector<double> chi_nodes;

  double chi_weight() const {
    return 2.0 * std::numbers::pi / static_cast<double>(chi_nodes.size());
  }
};

QuadratureGrid make_quadrature_grid(double tau_max, int n_tau, int n_chi);

/// Which argument the sampled Wigner function is evaluated at: Half uses
/// W(zeta/2) (tau/2 at node tau), Full uses W(zeta).
enum class ArgumentScaling { Half, Full };

/// Dual: solve the normal equations of the d-function basis for each
/// Fourier shift (Gram matrix from a reference rule). AsPublished: project on
/// (2k - 1) d^k_{mu' mu} directly.
enum class InversionKernel { Dual, AsPublished };

struct ReconstructionOptions {
  ArgumentScaling scaling = ArgumentScaling::Half;
  InversionKernel kernel = InversionKernel::Dual;
  /// Node count of the reference tau rule used for the Gram matrices.
  int gram_nodes = 256;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
};

/// rho(i, j) = <k, k+i| rho |k, k+j> for levels 0..max_level.
struct IrrepDensityBlock {
  int twice_k = 2;
  Eigen::MatrixXcd rho;
  /// max |rho - rho^dagger| before symmetrization.
  double hermiticity_defect = 0.0;
  /// Largest Gram-matrix condition estimate over the shifts (Dual only).
  double gram_condition = 0.0;

  int max_level() const { return static_cast<int>(rho.rows()) - 1; }
  double k() const { return 0.5 * twice_k; }
};

/// W as a function of the phase-space point.
using WignerEvaluator = std::function<double(const SqueezeParam&)>;

/// Recovers the irrep-k block from W sampled on the quadrature grid.
/// wigner should be the irrep-resolved Wigner function (only events with
/// |n_a - n_b| = 2k - 1 counted). Throws std::invalid_argument for k < 1.
IrrepDensityBlock reconstruct_irrep(const WignerEvaluator& wigner, int twice_k, int max_level,
                                    const QuadratureGrid& grid,
                                    const ReconstructionOptions& options = {});

/// Same, from W values already sampled at the grid's argument points
/// (values(i, j) at node tau_i (or tau_i/2 for Half) and chi_j).
IrrepDensityBlock reconstruct_irrep(const Eigen::MatrixXd& sampled, int twice_k, int max_level,
                                    const QuadratureGrid& grid,
                                    const ReconstructionOptions& options = {});

/// Phase-space point at which the sampled W is needed for node (i, j).
SqueezeParam sample_point(const QuadratureGrid& grid, std::size_t i, std::size_t j,
                          ArgumentScaling scaling);

struct OrthogonalityReport {
  int twice_k = 2;
  /// Pairs (mu' , mu) as levels, in the order used by residual's rows/cols.
  std::vector<std::pair<int, int>> pairs;
  /// residual(p, q) = sum_i w_i d_{p}(tau_i) d_{q}(tau_i) - delta_pq/(2k - 1).
  Eigen::MatrixXd residual;
  double max_abs = 0.0;
};

/// Quadrature check of int dtau sinh(tau) d^k_{a b} d^k_{c d} = delta/(2k - 1)
/// over all level pairs (a, b), (c, d) <= max_level. Throws for k < 1.
OrthogonalityReport orthogonality_residual(int twice_k, int max_level,
                                           const QuadratureGrid& grid);

/// CSV "k,mu,mu_prime,re,im" with rho(mu, mu').
void write_block_csv(std::ostream& out, const IrrepDensityBlock& block);

}  // namespace su11
