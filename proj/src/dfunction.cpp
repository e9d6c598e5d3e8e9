#include "su11/dfunction.hpp"

#include <ostream>
#include <stdexcept>

#include "su11/algebra.hpp"
#include "su11/csv.hpp"

namespace su11 {

namespace {

void check_args(int twice_k, double tau, int max_level) {
  if (twice_k < 1) throw std::invalid_argument("dfunction: k must be >= 1/2");
  if (!(tau >= 0.0)) throw std::invalid_argument("dfunction: tau must be >= 0");
  if (max_level < 0) throw std::invalid_argument("dfunction: mu_max must be >= k");
}

}  // namespace

DFunctionTable dfunction(int twice_k, double tau, int max_level) {
  check_args(twice_k, tau, max_level);
  const int m_max = std::max(1, max_level + default_guard(tau, max_level));
  const DifferenceBlock block = block_generators(twice_k - 1, m_max);
  const Eigen::MatrixXcd u = squeeze_block_unitary(block, SqueezeParam(tau, 0.0));
  DFunctionTable table{twice_k, tau, u.topLeftCorner(max_level + 1, max_level + 1).real()};
  return table;
}

double dfunction_element(int twice_k, int level_out, int level_in, double tau) {
  check_args(twice_k, tau, 0);
  return squeeze_block_element_closed(twice_k - 1, level_out, level_in, SqueezeParam(tau, 0.0))
      .real();
}

DFunctionTable dfunction_closed(int twice_k, double tau, int max_level) {
  check_args(twice_k, tau, max_level);
  DFunctionTable table{twice_k, tau, Eigen::MatrixXd(max_level + 1, max_level + 1)};
  for (int i = 0; i <= max_level; ++i) {
    for (int j = 0; j <= max_level; ++j) table.values(i, j) = dfunction_element(twice_k, i, j, tau);
  }
  return table;
}

void write_dfunction_csv(std::ostream& out, const std::vector<DFunctionTable>& tables) {
  out << "k,mu_prime,mu,tau,value\n";
  for (const auto& t : tables) {
    const double k = 0.5 * t.twice_k;
    for (int i = 0; i <= t.max_level(); ++i) {
      for (int j = 0; j <= t.max_level(); ++j) {
        out << format_double(k) << ',' << format_double(k + i) << ',' << format_double(k + j)
            << ',' << format_double(t.tau) << ',' << format_double(t.values(i, j)) << '\n';
      }
    }
  }
}

}  // namespace su11
