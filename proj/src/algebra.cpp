#include "su11/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace su11 {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double canonical_angle(double chi) {
  double c = std::fmod(chi, kTwoPi);
  if (c < 0.0) c += kTwoPi;
  if (c >= kTwoPi) c = 0.0;
  return c;
}

// <m+1|K+|m> inside the block of difference |d|: sqrt((n_a+1)(n_b+1)).
double raising_element(int abs_d, int m) {
  return std::sqrt(static_cast<double>(m + 1) * static_cast<double>(m + 1 + abs_d));
}

}  // namespace

SqueezeParam::SqueezeParam(double tau, double chi) : tau_(tau), chi_(canonical_angle(chi)) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("SqueezeParam: tau must be finite and >= 0");
  }
  if (!std::isfinite(chi)) throw std::invalid_argument("SqueezeParam: chi must be finite");
}

DiskPoint to_disk(const SqueezeParam& p) {
  return {std::polar(std::tanh(0.5 * p.tau()), p.chi())};
}

HyperboloidPoint to_hyperboloid(const SqueezeParam& p) {
  const double s = std::sinh(p.tau());
  return {std::cosh(p.tau()), s * std::cos(p.chi()), s * std::sin(p.chi())};
}

SqueezeParam disk_to_param(const DiskPoint& x) {
  const double r = std::abs(x.xi);
  if (!(r < 1.0)) throw std::domain_error("disk_to_param: |xi| must be < 1");
  if (r == 0.0) return {0.0, 0.0};
  return {2.0 * std::atanh(r), std::arg(x.xi)};
}

DifferenceBlock block_generators(int d, int m_max) {
  if (m_max < 1) throw std::invalid_argument("block_generators: m_max must be >= 1");
  const int abs_d = std::abs(d);
  const double k = 0.5 * (abs_d + 1);
  const int n = m_max + 1;
  DifferenceBlock b;
  b.d = d;
  b.m_max = m_max;
  b.K0 = Eigen::MatrixXcd::Zero(n, n);
  b.Kp = Eigen::MatrixXcd::Zero(n, n);
  for (int m = 0; m < n; ++m) b.K0(m, m) = m + k;
  for (int m = 0; m + 1 < n; ++m) b.Kp(m + 1, m) = raising_element(abs_d, m);
  b.Km = b.Kp.adjoint();
  return b;
}

Eigen::MatrixXcd squeeze_block_unitary(const DifferenceBlock& block, const SqueezeParam& p) {
  const Complex zeta = p.zeta();
  const Eigen::MatrixXcd generator = zeta * block.Kp - std::conj(zeta) * block.Km;
  // i * generator is Hermitian; symmetrize away rounding before solving.
  Eigen::MatrixXcd h = Complex(0.0, 1.0) * generator;
  h = 0.5 * (h + h.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  const Eigen::VectorXcd phases =
      solver.eigenvalues().unaryExpr([](double lam) { return std::polar(1.0, -lam); });
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

int default_guard(double tau, int m_support) {
  const int support = std::max(m_support, 0);
  const double s = std::sinh(0.5 * tau);
  const double spread = std::ceil(3.0 * s * s * (support + 1));
  // Squeezed amplitudes fall off like tanh^n(tau/2); reach 1e-16 in probability.
  const double t = std::tanh(0.5 * tau);
  const double geometric = t > 0.0 ? std::ceil(std::log(1e-16) / (2.0 * std::log(t))) + support : 0.0;
  return std::max(10, static_cast<int>(std::max(spread, geometric)));
}

int tail_shell_width(int guard) { return std::max(1, guard / 4); }

SqueezeEngine::SqueezeEngine(int n_out) : n_out_(n_out) {
  if (n_out < 0) throw std::invalid_argument("SqueezeEngine: n_out must be >= 0");
}

void SqueezeEngine::warm(int max_abs_d) const {
  for (int d = 0; d <= std::min(max_abs_d, n_out_); ++d) eigensystem(d);
}

const SqueezeEngine::Eigensystem& SqueezeEngine::eigensystem(int abs_d) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(abs_d);
  if (it != cache_.end()) return it->second;

  const int n = n_out_ - abs_d + 1;
  Eigensystem sys;
  if (n == 1) {
    sys.values = Eigen::VectorXd::Zero(1);
    sys.vectors = Eigen::MatrixXd::Identity(1, 1);
  } else {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int m = 0; m + 1 < n; ++m) sub(m) = raising_element(abs_d, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("SqueezeEngine: tridiagonal eigensolver failed");
    }
    sys.values = solver.eigenvalues();
    sys.vectors = solver.eigenvectors();
  }
  return cache_.emplace(abs_d, std::move(sys)).first->second;
}

Eigen::MatrixXcd SqueezeEngine::block_unitary(int d, const SqueezeParam& p, int sign) const {
  const int abs_d = std::abs(d);
  if (abs_d > n_out_) throw std::invalid_argument("block_unitary: |d| exceeds n_out");
  const Eigensystem& sys = eigensystem(abs_d);
  const int n = static_cast<int>(sys.values.size());
  const double half_tau = 0.5 * p.tau() * (sign >= 0 ? 1.0 : -1.0);
  Eigen::VectorXcd q(n);
  for (int m = 0; m < n; ++m) q(m) = std::polar(1.0, m * (p.chi() + 0.5 * std::numbers::pi));
  Eigen::VectorXcd e(n);
  for (int j = 0; j < n; ++j) e(j) = std::polar(1.0, -half_tau * sys.values(j));
  const Eigen::MatrixXcd v = sys.vectors.cast<Complex>();
  return q.asDiagonal() * (v * e.asDiagonal() * v.transpose()) * q.conjugate().asDiagonal();
}

TwoModeState SqueezeEngine::apply(const TwoModeState& state, const SqueezeParam& p,
                                  int sign) const {
  const int n_in = state.n_max();
  if (n_in > n_out_) throw std::invalid_argument("SqueezeEngine::apply: state exceeds n_out");
  TwoModeState out(n_out_);
  const double half_tau = 0.5 * p.tau() * (sign >= 0 ? 1.0 : -1.0);
  const double phase_step = p.chi() + 0.5 * std::numbers::pi;
  const auto& in = state.amplitudes();

  for (int d = -n_in; d <= n_in; ++d) {
    const int abs_d = std::abs(d);
    const int a0 = std::max(d, 0);
    const int b0 = std::max(-d, 0);
    const int len_in = n_in - abs_d + 1;

    bool any = false;
    for (int m = 0; m < len_in && !any; ++m) any = in(m + a0, m + b0) != Complex(0.0);
    if (!any) continue;

    if (p.tau() == 0.0) {
      for (int m = 0; m < len_in; ++m) out(m + a0, m + b0) = in(m + a0, m + b0);
      continue;
    }

    const Eigensystem& sys = eigensystem(abs_d);
    const int n = static_cast<int>(sys.values.size());

    // y = Q^dagger psi, split into real and imaginary parts so the real
    // eigenvector matrix can be used directly.
    Eigen::VectorXd yr(len_in), yi(len_in);
    for (int m = 0; m < len_in; ++m) {
      const Complex y = std::polar(1.0, -m * phase_step) * in(m + a0, m + b0);
      yr(m) = y.real();
      yi(m) = y.imag();
    }
    const auto head = sys.vectors.topRows(len_in);
    Eigen::VectorXd zr = head.transpose() * yr;
    Eigen::VectorXd zi = head.transpose() * yi;
    for (int j = 0; j < n; ++j) {
      const Complex z = Complex(zr(j), zi(j)) * std::polar(1.0, -half_tau * sys.values(j));
      zr(j) = z.real();
      zi(j) = z.imag();
    }
    const Eigen::VectorXd wr = sys.vectors * zr;
    const Eigen::VectorXd wi = sys.vectors * zi;
    for (int m = 0; m < n; ++m) {
      out(m + a0, m + b0) = std::polar(1.0, m * phase_step) * Complex(wr(m), wi(m));
    }
  }
  return out;
}

double shell_mass(const TwoModeState& state, int width) {
  const int n = state.n_max();
  const int start = std::max(0, n - width + 1);
  double mass = 0.0;
  const auto& a = state.amplitudes();
  for (int na = 0; na <= n; ++na) {
    for (int nb = 0; nb <= n; ++nb) {
      if (std::max(na, nb) >= start) mass += std::norm(a(na, nb));
    }
  }
  return mass;
}

SqueezeResult apply_squeeze(const TwoModeState& state, const SqueezeParam& p, int sign,
                            const SqueezeOptions& options) {
  const bool automatic = options.guard < 0;
  int guard = automatic ? default_guard(p.tau(), support_extent(state)) : options.guard;
  SqueezeResult r;
  for (int attempt = 0;; ++attempt) {
    SqueezeEngine engine(state.n_max() + guard);
    r.state = engine.apply(state, p, sign);
    r.guard = guard;
    r.tail_mass = shell_mass(r.state, tail_shell_width(guard));
    r.tail_exceeded = r.tail_mass > options.tail_tol;
    if (!automatic || !r.tail_exceeded || attempt == kMaxGuardDoublings) break;
    guard *= 2;
  }
  return r;
}

Complex squeeze_block_element_closed(int abs_d, int m_out, int m_in, const SqueezeParam& p) {
  if (abs_d < 0 || m_out < 0 || m_in < 0) {
    throw std::invalid_argument("squeeze_block_element_closed: negative index");
  }
  const double k = 0.5 * (abs_d + 1);
  const double t = std::tanh(0.5 * p.tau());
  // log(1 - |xi|^2) = -2 log cosh(tau/2), evaluated without cancellation.
  const double log_c = -2.0 * (0.5 * p.tau() + std::log1p(std::exp(-p.tau())) - std::log(2.0));
  const double log_t = t > 0.0 ? std::log(t) : 0.0;
  const double log_norm = 0.5 * (std::lgamma(m_out + 1.0) + std::lgamma(m_out + abs_d + 1.0) +
                                 std::lgamma(m_in + 1.0) + std::lgamma(m_in + abs_d + 1.0));
  double sum = 0.0;
  for (int j = 0; j <= std::min(m_in, m_out); ++j) {
    const int power = (m_out - j) + (m_in - j);
    if (power > 0 && t == 0.0) continue;
    const double log_term = log_norm - std::lgamma(m_out - j + 1.0) - std::lgamma(m_in - j + 1.0) -
                            std::lgamma(j + 1.0) - std::lgamma(j + abs_d + 1.0) +
                            (j + k) * log_c + power * log_t;
    const double sign = ((m_in - j) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::exp(log_term);
  }
  return std::polar(1.0, p.chi() * (m_out - m_in)) * sum;
}

Complex squeeze_matrix_element_closed(ModeOccupation out, ModeOccupation in,
                                      const SqueezeParam& p) {
  if (out.na - out.nb != in.na - in.nb) return 0.0;
  const int abs_d = std::abs(in.na - in.nb);
  return squeeze_block_element_closed(abs_d, std::min(out.na, out.nb), std::min(in.na, in.nb), p);
}

}  // namespace su11
