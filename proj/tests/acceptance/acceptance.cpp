#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "su11/algebra.hpp"
#include "su11/detector.hpp"
#include "su11/fock.hpp"
#include "su11/oracles.hpp"
#include "su11/reconstruction.hpp"
#include "su11/rng.hpp"
#include "su11/wigner.hpp"

namespace fs = std::filesystem;
using namespace su11;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

TwoModeState random_state(CounterRng& rng, int n_max, int max_photons) {
  std::normal_distribution<double> g;
  TwoModeState s(n_max);
  for (int a = 0; a <= n_max; ++a) {
    for (int b = 0; a + b <= max_photons && b <= n_max; ++b) s(a, b) = Complex(g(rng), g(rng));
  }
  return normalize(s);
}

Outcome parity_identity() {
  Stopwatch sw;
  int mismatches = 0;
  for (int na = 0; na <= 50; ++na) {
    for (int nb = 0; nb <= 50; ++nb) {
      const ModeOccupation occ{na, nb};
      if (parity_sign(irrep_of(occ)) != parity_sign(occ)) ++mismatches;
    }
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < 1.0,
          fmt("mismatches=%.0f over 51x51, %.3fs", mismatches, t)};
}

Outcome tmsv_preparation() {
  Stopwatch sw;
  const double tau0 = 1.0;
  SqueezeOptions opts;
  opts.guard = 40;
  const SqueezeResult r = apply_squeeze(TwoModeState::vacuum(0), SqueezeParam(tau0, 0.0), 1, opts);
  double err = 0.0;
  const double t = std::tanh(0.5 * tau0);
  const double c = std::cosh(0.5 * tau0);
  for (int a = 0; a <= 40; ++a) {
    for (int b = 0; b <= 40; ++b) {
      const Complex expected = a == b ? Complex(std::pow(t, a) / c) : Complex(0.0);
      err = std::max(err, std::abs(r.state(a, b) - expected));
    }
  }
  const double p00 = std::norm(r.state(0, 0));
  const double p11 = std::norm(r.state(1, 1));
  const bool rounded = std::abs(p00 - 0.7864) < 1e-4 && std::abs(p11 - 0.1680) < 1e-4;
  const double secs = sw.seconds();
  return {err < 1e-10 && rounded && secs < 1.0,
          fmt("max|amp err|=%.2e P00=%.6f P11=%.6f, %.3fs", err, p00, p11, secs)};
}

// 50 random states with at most 5 photons on n_max = 20, tau x chi sweep.
struct Sweep {
  std::vector<TwoModeState> states;
  std::vector<SqueezeParam> params;
};

Sweep make_sweep() {
  Sweep s;
  CounterRng rng(derive_key(2024, 3));
  for (int i = 0; i < 50; ++i) s.states.push_back(random_state(rng, 20, 5));
  for (double tau : {0.3, 1.0, 2.0}) {
    for (double chi : {0.0, kPi / 4, kPi}) s.params.emplace_back(tau, chi);
  }
  return s;
}

Outcome oracle_equivalence() {
  Stopwatch sw;
  const Sweep sweep = make_sweep();
  SqueezeOptions same_lattice;
  same_lattice.guard = 0;
  double err = 0.0;
  for (const SqueezeParam& p : sweep.params) {
    const DenseSqueeze minus(20, p, -1);
    for (const TwoModeState& s : sweep.states) {
      err = std::max(err, std::abs(wigner_at(s, p, same_lattice) - brute_force_wigner(minus, s)));
    }
  }
  const double t = sw.seconds();
  return {err < 1e-8 && t < 60.0, fmt("max|dW|=%.2e over 450 points, %.1fs", err, t)};
}

Outcome factor_two_identity() {
  const Sweep sweep = make_sweep();
  SqueezeOptions same_lattice;
  same_lattice.guard = 0;
  double dense_err = 0.0;
  double exact_err = 0.0;
  for (const SqueezeParam& p : sweep.params) {
    const DenseSqueeze plus_two(20, p.doubled(), 1);
    for (const TwoModeState& s : sweep.states) {
      dense_err = std::max(dense_err, std::abs(wigner_at(s, p, same_lattice) -
                                               dense_factor2_wigner(plus_two, s)));
      // Untruncated S(2 zeta) against the guarded pipeline.
      exact_err = std::max(exact_err, std::abs(wigner_at(s, p) - wigner_exact(s, p).value));
    }
  }
  return {dense_err < 1e-6 && exact_err < 1e-6,
          fmt("dense same-lattice max|dW|=%.2e, untruncated max|dW|=%.2e", dense_err, exact_err)};
}

Outcome origin_values() {
  const SqueezeParam origin(0.0, 0.0);
  const double vac = wigner_at(TwoModeState::vacuum(0), origin);
  const double bi = wigner_at(TwoModeState::fock(1, 1, 1), origin);
  const double vac_series = vacuum_wigner_closed(origin);
  const double bi_series = biphoton_wigner_closed(origin);
  return {vac == 1.0 && bi == -1.0 && vac_series == 1.0 && bi_series == -1.0,
          fmt("W_vac(0)=%.17g W_biphoton(0)=%.17g (series %.17g, %.17g)", vac, bi, vac_series,
              bi_series)};
}

Outcome resolution_thresholds() {
  const TwoModeState vac = TwoModeState::vacuum(0);
  double worst_below = 0.0;
  double best_above = 0.0;
  double tau_best = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double tau = 0.05 * i;
    const SqueezeParam p(tau, 0.0);
    const double diff = std::abs(resolution_truncated_wigner(vac, p, 10) -
                                 resolution_truncated_wigner(vac, p, 100));
    if (tau <= 2.3 + 1e-12) {
      worst_below = std::max(worst_below, diff);
    } else if (diff > best_above) {
      best_above = diff;
      tau_best = tau;
    }
  }
  return {worst_below < 0.01 && best_above > 0.01,
          fmt("max diff tau<=2.3: %.4f; max diff tau in (2.3,4]: %.4f at tau=%.2f", worst_below,
              best_above, tau_best)};
}

Outcome displaced_tmsv() {
  const std::vector<double> taus = {0.5, 1.0, 1.5};
  const std::vector<double> dchis = {0.0, kPi / 2, kPi};
  const double chi0 = 0.3;
  const int n_max = 60;
  double published = 0.0;
  double normalized = 0.0;
  for (double tau0 : taus) {
    for (double tau : taus) {
      for (double dchi : dchis) {
        const SqueezeParam p0(tau0, chi0);
        const SqueezeParam p(tau, chi0 + dchi);
        const std::vector<double> pipe = displaced_tmsv_pipeline(p0, p, n_max);
        const std::vector<double> pub = displaced_tmsv_distribution(p0, p, n_max);
        const std::vector<double> nrm =
            displaced_tmsv_distribution(p0, p, n_max, Normalization::Normalized);
        for (int n = 0; n <= n_max; ++n) {
          published = std::max(published, std::abs(pub[n] - pipe[n]));
          normalized = std::max(normalized, std::abs(nrm[n] - pipe[n]));
        }
      }
    }
  }
  return {published < 1e-6,
          fmt("printed form max|dP|=%.3e (sums to 1/4); with unit prefactor max|dP|=%.2e",
              published, normalized)};
}

Outcome noise_experiment() {
  Stopwatch sw;
  const TwoModeState tmsv = tmsv_state(3.0, 0.0, tmsv_cutoff(3.0));
  const GridSpec grid = GridSpec::hyperboloid(parse_range("0:2:9"), uniform_angles(16));
  SamplingOptions opts;
  opts.detector = DetectorConfig{1.0, 1.0, 100, SaturationPolicy::Discard};
  const WignerField ideal = wigner_grid(tmsv, grid, opts);
  const double ideal_min = ideal.values.minCoeff();
  int negative = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (add_gaussian_noise(ideal, NoiseConfig{30.0, seed}).values.minCoeff() < 0.0) ++negative;
  }
  const double t = sw.seconds();
  return {ideal_min >= 0.0 && negative >= 95 && t < 120.0,
          fmt("ideal min=%.4f; noisy min<0 in %.0f/100 seeds, %.1fs", ideal_min, negative, t)};
}

Outcome loss_laws() {
  CounterRng rng(derive_key(2024, 9));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double mass = 0.0;
  double comp = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n_max = 4 + i;
    JointPhotonDistribution d;
    d.probabilities = Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
    for (int a = 0; a <= n_max; ++a) {
      for (int b = 0; b <= n_max; ++b) d.probabilities(a, b) = -std::log(1.0 - u(rng));
    }
    d.probabilities /= d.probabilities.sum();
    const double e1a = u(rng), e1b = u(rng), e2a = u(rng), e2b = u(rng);
    const JointPhotonDistribution once = apply_loss(d, e1a, e1b);
    const JointPhotonDistribution twice = apply_loss(once, e2a, e2b);
    const JointPhotonDistribution direct = apply_loss(d, e1a * e2a, e1b * e2b);
    mass = std::max({mass, std::abs(once.total() - 1.0), std::abs(twice.total() - 1.0)});
    comp = std::max(comp, (twice.probabilities - direct.probabilities).cwiseAbs().maxCoeff());
  }
  return {mass < 1e-12 && comp < 1e-10,
          fmt("max|mass-1|=%.2e, max|composition diff|=%.2e", mass, comp)};
}

Outcome dfunction_orthogonality() {
  const QuadratureGrid grid = make_quadrature_grid(30.0, 128, 1);
  double worst = 0.0;
  std::string detail;
  for (int twice_k : {2, 3, 4}) {
    const OrthogonalityReport r = orthogonality_residual(twice_k, 3, grid);
    worst = std::max(worst, r.max_abs);
    detail += fmt("k=%.1f max|res|=%.3f diag00=%.3f; ", 0.5 * twice_k, r.max_abs,
                  r.residual(0, 0) + 1.0 / (twice_k - 1.0));
  }
  detail += "diagonal integrals equal 2/(2k-1)";
  return {worst < 1e-6, detail};
}

Outcome reconstruction_round_trip() {
  CounterRng rng(derive_key(2024, 11));
  std::normal_distribution<double> g;
  const IrrepSelector sel{2, Branch::Plus};
  const int levels = 5;
  std::vector<TwoModeState> states;
  for (int i = 0; i < 4; ++i) {
    TwoModeState s(levels);
    for (int m = 0; m < levels; ++m) s(m + 1, m) = Complex(g(rng), g(rng));
    states.push_back(normalize(s));
  }
  auto error_at = [&](int n_tau, int n_chi) {
    const QuadratureGrid grid = make_quadrature_grid(20.0, n_tau, n_chi);
    double err = 0.0;
    for (const TwoModeState& s : states) {
      const IrrepDensityBlock b = reconstruct_irrep(
          [&](const SqueezeParam& p) { return wigner_exact(s, p, sel).value; }, 2, levels - 1,
          grid);
      for (int i = 0; i < levels; ++i) {
        for (int j = 0; j < levels; ++j) {
          err = std::max(err, std::abs(b.rho(i, j) - s(i + 1, i) * std::conj(s(j + 1, j))));
        }
      }
    }
    return err;
  };
  const double main_err = error_at(64, 32);
  // Halving is required once the chi trapezoid separates every Fourier shift
  // of the block (n_chi >= 2 max_level + 1); coarser grids alias and are shown only.
  const int resolved_chi = 2 * (levels - 1) + 1;
  bool halves = true;
  std::string seq;
  double prev = -1.0;
  for (int n = 4; n <= 128; n *= 2) {
    const double e = error_at(n, n / 2);
    const bool resolved = n / 2 >= resolved_chi;
    const bool checked = n / 4 >= resolved_chi;
    if (checked && !(e <= 0.5 * prev || (prev <= 1e-12 && e <= 1e-12))) halves = false;
    seq += fmt(resolved ? " %.1e" : " (%.1e)", e);
    prev = e;
  }
  return {main_err < 1e-2 && halves,
          fmt("max entry error (64,32)=%.2e; ", main_err) +
              "(n_tau,n_chi)=(4,2)..(128,64), aliased grids in parentheses:" + seq};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "su11wig_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::map<std::string, std::string> configs = {
      {"wigner", R"json({"state": "tmsv(1.2,0.4)", "grid-tau": "0:1.5:4", "grid-chi": "6",
          "eta-a": "0.9", "eta-b": "0.85", "n-resolve": "30", "shots": "2000", "snr": "30",
          "seed": "424242"})json"},
      {"histogram", R"json({"state": "tmsv(1.2,0.4)", "tau": "0.8", "chi": "1",
          "eta-a": "0.9", "n-resolve": "30", "policy": "clip", "shots": "5000",
          "seed": "424242"})json"},
  };
  std::vector<std::string> runs;
  int failures = 0;
  for (const auto& [cmd, text] : configs) {
    runs.push_back(cmd);
    const fs::path cfg = root / (cmd + ".json");
    std::ofstream(cfg) << text;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / (cmd + std::to_string(rep));
      const std::string line = std::string("\"") + SU11WIG_PATH + "\" " + cmd + " --config \"" +
                               cfg.string() + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(line.c_str()) != 0) ++failures;
    }
  }
  int compared = 0;
  int differing = 0;
  for (const std::string& cmd : runs) {
    const fs::path a = root / (cmd + "0");
    const fs::path b = root / (cmd + "1");
    if (!fs::exists(a)) continue;
    for (const auto& entry : fs::directory_iterator(a)) {
      ++compared;
      const fs::path other = b / entry.path().filename();
      if (!fs::exists(other) || read_file(entry.path()) != read_file(other)) ++differing;
    }
  }
  fs::remove_all(root);
  return {failures == 0 && compared > 0 && differing == 0,
          fmt("%.0f files compared across 2 commands, %.0f differ, %.0f failed runs", compared,
              differing, failures)};
}

struct Criterion {
  std::string id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"AC1", "parity identity", parity_identity},
      {"AC2", "TMSV preparation", tmsv_preparation},
      {"AC3", "oracle equivalence", oracle_equivalence},
      {"AC4", "factor-2 identity", factor_two_identity},
      {"AC5", "vacuum/biphoton origin values", origin_values},
      {"AC6", "resolution thresholds", resolution_thresholds},
      {"AC7", "displaced-TMSV closed form", displaced_tmsv},
      {"AC8", "noise experiment", noise_experiment},
      {"AC9", "loss channel laws", loss_laws},
      {"AC10", "d-function orthogonality", dfunction_orthogonality},
      {"AC11", "reconstruction round trip", reconstruction_round_trip},
      {"AC12", "CLI determinism", cli_determinism},
  };
  std::map<std::string, bool> wanted;
  for (int i = 1; i < argc; ++i) wanted[argv[i]] = true;
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.name << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
