#include "su11/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "parallel.hpp"
#include "su11/csv.hpp"
#include "su11/dfunction.hpp"

namespace su11 {

namespace {

// (P_n(x), P_n'(x)) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = mid - half * x;
    rule.nodes[hi] = mid + half * x;
    rule.weights[lo] = half * w;
    rule.weights[hi] = half * w;
  }
  return rule;
}

QuadratureGrid make_quadrature_grid(double tau_max, int n_tau, int n_chi) {
  if (!(tau_max > 0.0) || !std::isfinite(tau_max)) {
    throw std::invalid_argument("make_quadrature_grid: tau_max must be finite and > 0");
  }
  if (n_tau < 1 || n_chi < 1) {
    throw std::invalid_argument("make_quadrature_grid: node counts must be >= 1");
  }
  QuadratureGrid grid;
  grid.tau_max = tau_max;
  const GaussLegendre rule = gauss_legendre(n_tau, 0.0, std::tanh(0.5 * tau_max));
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const double one_minus = 1.0 - u * u;
    grid.tau_nodes.push_back(2.0 * std::atanh(u));
    grid.tau_weights.push_back(rule.weights[i] * 4.0 * u / (one_minus * one_minus));
  }
  for (int j = 0; j < n_chi; ++j) {
    grid.chi_nodes.push_back(2.0 * std::numbers::pi * j / n_chi);
  }
  return grid;
}

SqueezeParam sample_point(const QuadratureGrid& grid, std::size_t i, std::size_t j,
                          ArgumentScaling scaling) {
  const double tau = grid.tau_nodes.at(i);
  return {scaling == ArgumentScaling::Half ? 0.5 * tau : tau, grid.chi_nodes.at(j)};
}

namespace {

void check_k(int twice_k, int max_level) {
  if (twice_k < 2) {
    throw std::invalid_argument("k = 1/2 is excluded: the (2k - 1) normalization vanishes");
  }
  if (max_level < 0) throw std::invalid_argument("max_level must be >= 0");
}

std::vector<Eigen::MatrixXd> dfunction_tables(int twice_k, int max_level,
                                              const std::vector<double>& taus) {
  std::vector<Eigen::MatrixXd> tables;
  tables.reserve(taus.size());
  for (double tau : taus) tables.push_back(dfunction_closed(twice_k, tau, max_level).values);
  return tables;
}

// F_s(tau_i) = (1/2 pi) int dchi W e^{-i s chi}, trapezoid.
Eigen::MatrixXcd fourier_coefficients(const Eigen::MatrixXd& sampled, const QuadratureGrid& grid,
                                      int max_shift) {
  const auto n_tau = static_cast<Eigen::Index>(grid.tau_nodes.size());
  const auto n_chi = static_cast<Eigen::Index>(grid.chi_nodes.size());
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(n_tau, 2 * max_shift + 1);
  for (int s = -max_shift; s <= max_shift; ++s) {
    for (Eigen::Index i = 0; i < n_tau; ++i) {
      Complex acc = 0.0;
      for (Eigen::Index j = 0; j < n_chi; ++j) {
        acc += sampled(i, j) * std::polar(1.0, -s * grid.chi_nodes[static_cast<std::size_t>(j)]);
      }
      f(i, s + max_shift) = acc / static_cast<double>(n_chi);
    }
  }
  return f;
}

double parity_of_level(int level) { return (level % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

IrrepDensityBlock reconstruct_irrep(const Eigen::MatrixXd& sampled, int twice_k, int max_level,
                                    const QuadratureGrid& grid,
                                    const ReconstructionOptions& options) {
  check_k(twice_k, max_level);
  if (sampled.rows() != static_cast<Eigen::Index>(grid.tau_nodes.size()) ||
      sampled.cols() != static_cast<Eigen::Index>(grid.chi_nodes.size())) {
    throw std::invalid_argument("reconstruct_irrep: sampled field does not match the grid");
  }
  const int levels = max_level + 1;
  const std::vector<Eigen::MatrixXd> d = dfunction_tables(twice_k, max_level, grid.tau_nodes);
  const Eigen::MatrixXcd f = fourier_coefficients(sampled, grid, max_level);
  const auto n_tau = grid.tau_nodes.size();

  IrrepDensityBlock block;
  block.twice_k = twice_k;
  block.rho = Eigen::MatrixXcd::Zero(levels, levels);

  if (options.kernel == InversionKernel::AsPublished) {
    // rho(mu', mu) = (-1)^{mu-k} (2k-1)/(2 pi) int W e^{i(mu'-mu)chi} d_{mu' mu} sinh.
    // The chi integral with e^{+i(mu'-mu)chi} is the coefficient at shift mu - mu'.
    for (int mp = 0; mp < levels; ++mp) {
      for (int m = 0; m < levels; ++m) {
        const int shift = m - mp;
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n_tau; ++i) {
          acc += grid.tau_weights[i] * d[i](mp, m) *
                 f(static_cast<Eigen::Index>(i), shift + max_level);
        }
        block.rho(mp, m) = parity_of_level(m) * (twice_k - 1.0) * acc;
      }
    }
  } else {
    const QuadratureGrid reference = make_quadrature_grid(grid.tau_max, options.gram_nodes, 1);
    const std::vector<Eigen::MatrixXd> d_ref =
        dfunction_tables(twice_k, max_level, reference.tau_nodes);
    for (int s = -max_level; s <= max_level; ++s) {
      // Levels i with i and i + s both in range; basis phi_i = d_{i+s, i}.
      const int first = std::max(0, -s);
      const int last = std::min(max_level, max_level - s);
      const int n = last - first + 1;
      Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
      for (std::size_t r = 0; r < reference.tau_nodes.size(); ++r) {
        for (int a = 0; a < n; ++a) {
          const double pa = d_ref[r](first + a + s, first + a);
          for (int b = 0; b < n; ++b) {
            gram(a, b) += reference.tau_weights[r] * pa * d_ref[r](first + b + s, first + b);
          }
        }
      }
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
      for (std::size_t i = 0; i < n_tau; ++i) {
        const Complex fi = f(static_cast<Eigen::Index>(i), s + max_level);
        for (int a = 0; a < n; ++a) {
          rhs(a) += grid.tau_weights[i] * d[i](first + a + s, first + a) * fi;
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
      block.gram_condition = std::max(block.gram_condition, cond);

      const Eigen::VectorXcd x = gram.cast<Complex>().ldlt().solve(rhs);
      for (int a = 0; a < n; ++a) {
        const int i = first + a;
        block.rho(i, i + s) = parity_of_level(i) * x(a);
      }
    }
  }

  block.hermiticity_defect = (block.rho - block.rho.adjoint()).cwiseAbs().maxCoeff();
  block.rho = (0.5 * (block.rho + block.rho.adjoint())).eval();
  return block;
}

IrrepDensityBlock reconstruct_irrep(const WignerEvaluator& wigner, int twice_k, int max_level,
                                    const QuadratureGrid& grid,
                                    const ReconstructionOptions& options) {
  check_k(twice_k, max_level);
  const std::size_t n_tau = grid.tau_nodes.size();
  const std::size_t n_chi = grid.chi_nodes.size();
  Eigen::MatrixXd sampled(static_cast<Eigen::Index>(n_tau), static_cast<Eigen::Index>(n_chi));
  detail::parallel_for(
      n_tau * n_chi,
      [&](std::size_t flat) {
        const std::size_t i = flat / n_chi;
        const std::size_t j = flat % n_chi;
        sampled(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            wigner(sample_point(grid, i, j, options.scaling));
      },
      options.threads);
  return reconstruct_irrep(sampled, twice_k, max_level, grid, options);
}

OrthogonalityReport orthogonality_residual(int twice_k, int max_level,
                                           const QuadratureGrid& grid) {
  check_k(twice_k, max_level);
  const std::vector<Eigen::MatrixXd> d = dfunction_tables(twice_k, max_level, grid.tau_nodes);
  OrthogonalityReport report;
  report.twice_k = twice_k;
  for (int a = 0; a <= max_level; ++a) {
    for (int b = 0; b <= max_level; ++b) report.pairs.emplace_back(a, b);
  }
  const auto n = static_cast<Eigen::Index>(report.pairs.size());
  report.residual = Eigen::MatrixXd::Zero(n, n);
  const double target = 1.0 / (twice_k - 1.0);
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto [a, b] = report.pairs[static_cast<std::size_t>(p)];
    for (Eigen::Index q = 0; q < n; ++q) {
      const auto [c, e] = report.pairs[static_cast<std::size_t>(q)];
      double acc = 0.0;
      for (std::size_t i = 0; i < grid.tau_nodes.size(); ++i) {
        acc += grid.tau_weights[i] * d[i](a, b) * d[i](c, e);
      }
      report.residual(p, q) = acc - (p == q ? target : 0.0);
    }
  }
  report.max_abs = report.residual.cwiseAbs().maxCoeff();
  return report;
}

void write_block_csv(std::ostream& out, const IrrepDensityBlock& block) {
  out << "k,mu,mu_prime,re,im\n";
  const double k = block.k();
  for (int i = 0; i <= block.max_level(); ++i) {
    for (int j = 0; j <= block.max_level(); ++j) {
      out << format_double(k) << ',' << format_double(k + i) << ',' << format_double(k + j)
          << ',' << format_double(block.rho(i, j).real()) << ','
          << format_double(block.rho(i, j).imag()) << '\n';
    }
  }
}

}  // namespace su11
