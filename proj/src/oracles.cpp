#include "su11/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace su11 {

TwoModeState tmsv_state(double tau0, double chi0, int n_max) {
  const SqueezeParam p0(tau0, chi0);
  const double t = std::tanh(0.5 * p0.tau());
  const double c = 1.0 / std::cosh(0.5 * p0.tau());
  TwoModeState s(n_max);
  double tn = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    s(n, n) = std::polar(tn * c, n * p0.chi());
    tn *= t;
  }
  return s;
}

int tmsv_cutoff(double tau0, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("tmsv_cutoff: tol must be in (0, 1)");
  const double t = std::tanh(0.5 * tau0);
  if (t == 0.0) return 0;
  const double n = std::log(tol) / (2.0 * std::log(t)) - 1.0;
  return std::max(0, static_cast<int>(std::ceil(n)));
}

namespace {

constexpr int kMaxCompositionLattice = 2000;

}  // namespace

double composed_tau(const SqueezeParam& p0, const SqueezeParam& p) {
  const int n_out = tmsv_cutoff(p0.tau() + p.tau(), 1e-16) + 10;
  if (n_out > kMaxCompositionLattice) {
    throw std::domain_error("composed_tau: squeezing too large for the composition lattice");
  }
  const SqueezeEngine engine(n_out);
  const TwoModeState once = engine.apply(TwoModeState::vacuum(n_out), p0, 1);
  const TwoModeState twice = engine.apply(once, p, 1);
  const double overlap = std::abs(twice(0, 0));
  return 2.0 * std::acosh(1.0 / overlap);
}

std::vector<double> displaced_tmsv_distribution(const SqueezeParam& p0, const SqueezeParam& p,
                                                int n_max, Normalization norm) {
  if (n_max < 0) throw std::invalid_argument("displaced_tmsv_distribution: n_max must be >= 0");
  const Complex xi0 = to_disk(p0).xi;
  const Complex xi = to_disk(p).xi;
  const double tau_c = composed_tau(p0, p);
  const double ch = std::cosh(0.5 * tau_c);
  const double prefactor = (norm == Normalization::AsPublished ? 0.25 : 1.0) / (ch * ch);
  const double phase_ratio = std::norm((1.0 + xi * std::conj(xi0)) / (1.0 + std::conj(xi) * xi0));
  const double base = std::norm((xi0 + xi) / (1.0 + xi * std::conj(xi0)));

  std::vector<double> out(static_cast<std::size_t>(n_max) + 1);
  double power = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    out[static_cast<std::size_t>(n)] = prefactor * phase_ratio * power;
    power *= base;
  }
  return out;
}

std::vector<double> displaced_tmsv_pipeline(const SqueezeParam& p0, const SqueezeParam& p,
                                            int n_max) {
  const TwoModeState tmsv = tmsv_state(p0.tau(), p0.chi(), tmsv_cutoff(p0.tau(), 1e-16));
  const SqueezeResult r = apply_squeeze(tmsv, p, 1);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int n = 0; n <= std::min(n_max, r.state.n_max()); ++n) {
    out[static_cast<std::size_t>(n)] = std::norm(r.state(n, n));
  }
  return out;
}

double vacuum_wigner_closed(const SqueezeParam& p, std::optional<int> n_resolve,
                            Normalization norm) {
  const double t = std::tanh(0.5 * p.tau());
  const double x = t * t;
  double sum = 1.0 / (1.0 + x);
  if (n_resolve) {
    if (*n_resolve < 0) throw std::invalid_argument("vacuum_wigner_closed: N must be >= 0");
    const double sign = (*n_resolve % 2 == 0) ? -1.0 : 1.0;  // (-x)^{N+1}
    sum = (1.0 - sign * std::pow(x, *n_resolve + 1)) / (1.0 + x);
  }
  return norm == Normalization::Normalized ? (1.0 - x) * sum : sum;
}

double biphoton_wigner_closed(const SqueezeParam& p, std::optional<int> n_resolve,
                              Normalization norm) {
  const double t = std::tanh(0.5 * p.tau());
  const double s = std::sinh(0.5 * p.tau());
  const double x = t * t;
  const double a = s * s;
  const double inv_cosh2 = 1.0 - x;

  // Terms n >= 1 written as (-1)^n x^{n-1} (n - a)^2 / cosh^2(tau/2).
  double tail = 0.0;
  if (n_resolve) {
    if (*n_resolve < 0) throw std::invalid_argument("biphoton_wigner_closed: N must be >= 0");
    double xn = 1.0;
    for (int n = 1; n <= *n_resolve; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      tail += sign * xn * (n - a) * (n - a);
      xn *= x;
    }
  } else {
    const double s0 = -1.0 / (1.0 + x);
    const double s1 = -1.0 / ((1.0 + x) * (1.0 + x));
    const double s2 = -(1.0 - x) / ((1.0 + x) * (1.0 + x) * (1.0 + x));
    tail = s2 - 2.0 * a * s1 + a * a * s0;
  }
  const double w = inv_cosh2 * (a + inv_cosh2 * tail);
  return norm == Normalization::Normalized ? inv_cosh2 * w : w;
}

Eigen::MatrixXcd dense_generator(int n_max, const SqueezeParam& p) {
  const int side = n_max + 1;
  const int dim = side * side;
  const Complex zeta = p.zeta();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (int na = 0; na < n_max; ++na) {
    for (int nb = 0; nb < n_max; ++nb) {
      const int from = na * side + nb;
      const int to = (na + 1) * side + (nb + 1);
      const double amp = std::sqrt(static_cast<double>(na + 1) * (nb + 1));
      g(to, from) += zeta * amp;              // zeta a^dag b^dag
      g(from, to) -= std::conj(zeta) * amp;   // -zeta^* a b
    }
  }
  return g;
}

DenseSqueeze::DenseSqueeze(int n_max, const SqueezeParam& p, int sign) : n_max_(n_max) {
  if (n_max < 0 || n_max > kMaxNMax) {
    throw std::invalid_argument("DenseSqueeze: n_max must be in [0, 40]");
  }
  const Eigen::MatrixXcd g = dense_generator(n_max, p) * static_cast<double>(sign >= 0 ? 1 : -1);
  u_ = g.exp();
}

namespace {

Eigen::VectorXcd flatten(const TwoModeState& s) {
  const int side = s.n_max() + 1;
  Eigen::VectorXcd v(side * side);
  for (int na = 0; na < side; ++na) {
    for (int nb = 0; nb < side; ++nb) v(na * side + nb) = s(na, nb);
  }
  return v;
}

double parity_of_index(int index, int side) {
  return parity_sign(ModeOccupation{index / side, index % side});
}

}  // namespace

TwoModeState DenseSqueeze::apply(const TwoModeState& state) const {
  if (state.n_max() != n_max_) throw std::invalid_argument("DenseSqueeze::apply: lattice mismatch");
  const Eigen::VectorXcd w = u_ * flatten(state);
  const int side = n_max_ + 1;
  TwoModeState out(n_max_);
  for (int i = 0; i < w.size(); ++i) out(i / side, i % side) = w(i);
  return out;
}

double brute_force_wigner(const TwoModeState& state, const SqueezeParam& p) {
  return brute_force_wigner(DenseSqueeze(state.n_max(), p, -1), state);
}

double brute_force_wigner(const DenseSqueeze& minus_zeta, const TwoModeState& state) {
  photon_distribution(state);
  if (state.n_max() != minus_zeta.n_max()) {
    throw std::invalid_argument("brute_force_wigner: lattice mismatch");
  }
  const Eigen::VectorXcd w = minus_zeta.matrix() * flatten(state);
  const int side = state.n_max() + 1;
  double sum = 0.0;
  for (int i = 0; i < w.size(); ++i) sum += parity_of_index(i, side) * std::norm(w(i));
  return sum;
}

double dense_factor2_wigner(const TwoModeState& state, const SqueezeParam& p) {
  return dense_factor2_wigner(DenseSqueeze(state.n_max(), p.doubled(), 1), state);
}

double dense_factor2_wigner(const DenseSqueeze& plus_two_zeta, const TwoModeState& state) {
  photon_distribution(state);
  if (state.n_max() != plus_two_zeta.n_max()) {
    throw std::invalid_argument("dense_factor2_wigner: lattice mismatch");
  }
  const Eigen::VectorXcd psi = flatten(state);
  const int side = state.n_max() + 1;
  Eigen::VectorXcd pi_psi = psi;
  for (int i = 0; i < psi.size(); ++i) pi_psi(i) *= parity_of_index(i, side);
  return psi.dot(plus_two_zeta.matrix() * pi_psi).real();
}

}  // namespace su11
