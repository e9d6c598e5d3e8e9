#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "su11/algebra.hpp"
#include "su11/csv.hpp"
#include "su11/detector.hpp"
#include "su11/dfunction.hpp"
#include "su11/field.hpp"
#include "su11/fock.hpp"
#include "su11/oracles.hpp"
#include "su11/reconstruction.hpp"
#include "su11/state_io.hpp"
#include "su11/wigner.hpp"

namespace su11::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest lattice the squeezing pipeline may allocate from the CLI.
constexpr int kMaxPipelineLattice = 2000;

struct Options {
  std::string state = "vacuum";
  int n_max = -1;
  std::string out = ".";
  std::uint64_t seed = 0;
  bool strict = false;

  std::string grid_tau = "0:2:9";
  int grid_chi = 8;
  std::string coords = "hyperboloid";
  std::string quadrature;

  double eta_a = 1.0;
  double eta_b = 1.0;
  int n_resolve = -1;
  std::string policy = "discard";
  double snr = 0.0;
  std::int64_t shots = 0;
  std::string irrep_k;
  std::string branch = "both";
  double tail_tol = 1e-8;

  double tau = 0.0;
  double chi = 0.0;

  std::string k = "1";
  int levels = 2;
  double tau_max = 20.0;
  int tau_nodes = 64;
  int chi_nodes = 32;
  std::string source = "exact";
  std::string field;
  std::string scaling = "half";
  std::string kernel = "dual";

  std::string oracle = "vacuum";
  double tol = 1e-6;
  std::string normalization = "normalized";

  std::string method = "block";
};

// ---------------------------------------------------------------- parsing

double parse_number(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw UsageError(what + ": '" + text + "' is not a number");
  return v;
}

/// "1", "1.5" or "3/2" to 2k.
int parse_twice_k(const std::string& text) {
  double k = 0.0;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    k = parse_number(text.substr(0, slash), "k") / parse_number(text.substr(slash + 1), "k");
  } else {
    k = parse_number(text, "k");
  }
  const double twice = 2.0 * k;
  if (std::abs(twice - std::round(twice)) > 1e-12 || twice < 1.0) {
    throw UsageError("k must be a positive half-integer, got '" + text + "'");
  }
  return static_cast<int>(std::round(twice));
}

std::optional<Branch> parse_branch(const std::string& b) {
  if (b == "both") return std::nullopt;
  if (b == "plus") return Branch::Plus;
  if (b == "minus") return Branch::Minus;
  throw UsageError("--branch must be plus, minus or both");
}

std::optional<IrrepSelector> selector_from(const Options& o) {
  if (o.irrep_k.empty()) return std::nullopt;
  IrrepSelector sel{parse_twice_k(o.irrep_k), parse_branch(o.branch)};
  if (sel.twice_k == 1 && sel.branch) sel.branch.reset();
  return sel;
}

struct PreparedState {
  TwoModeState state;
  std::string kind;
  double tau0 = 0.0;
  double chi0 = 0.0;
};

std::vector<double> preset_arguments(const std::smatch& m) {
  std::vector<double> args;
  std::stringstream ss(m[2].str());
  std::string item;
  while (std::getline(ss, item, ',')) args.push_back(parse_number(item, "--state argument"));
  return args;
}

PreparedState resolve_state(const Options& o) {
  PreparedState ps;
  static const std::regex preset(R"(^\s*(tmsv|fock)\s*\(([^)]*)\)\s*$)");
  std::smatch m;
  if (o.state == "vacuum") {
    ps.kind = "vacuum";
    ps.state = TwoModeState::vacuum(std::max(o.n_max, 0));
  } else if (o.state == "biphoton") {
    ps.kind = "biphoton";
    ps.state = TwoModeState::fock(1, 1, std::max(o.n_max, 1));
  } else if (std::regex_match(o.state, m, preset)) {
    const std::vector<double> args = preset_arguments(m);
    if (m[1] == "tmsv") {
      if (args.empty() || args.size() > 2) throw UsageError("tmsv takes (tau0) or (tau0, chi0)");
      ps.kind = "tmsv";
      ps.tau0 = args[0];
      ps.chi0 = args.size() > 1 ? args[1] : 0.0;
      if (!(ps.tau0 >= 0.0)) throw UsageError("tmsv: tau0 must be >= 0");
      const int n = o.n_max >= 0 ? o.n_max : tmsv_cutoff(ps.tau0, 1e-12);
      ps.state = tmsv_state(ps.tau0, ps.chi0, n);
    } else {
      if (args.size() != 2) throw UsageError("fock takes (na, nb)");
      const int na = static_cast<int>(args[0]);
      const int nb = static_cast<int>(args[1]);
      if (na != args[0] || nb != args[1] || na < 0 || nb < 0) {
        throw UsageError("fock: occupations must be nonnegative integers");
      }
      ps.kind = "fock";
      ps.state = TwoModeState::fock(na, nb, std::max({o.n_max, na, nb}));
    }
  } else if (fs::is_regular_file(o.state)) {
    ps.kind = "file";
    ps.state = read_state_file(o.state);
    if (o.n_max >= 0) {
      if (o.n_max < ps.state.n_max()) {
        throw UsageError("--n-max is smaller than the state file's n_max");
      }
      ps.state = ps.state.embedded(o.n_max);
    }
  } else {
    throw UsageError("--state '" + o.state +
                     "' is neither a preset (vacuum, biphoton, tmsv(t[,c]), fock(a,b)) nor a file");
  }
  return ps;
}

std::optional<DetectorConfig> detector_from(const Options& o) {
  if (o.eta_a == 1.0 && o.eta_b == 1.0 && o.n_resolve < 0) return std::nullopt;
  DetectorConfig cfg;
  cfg.eta_a = o.eta_a;
  cfg.eta_b = o.eta_b;
  if (o.n_resolve >= 0) cfg.n_resolve = o.n_resolve;
  if (o.policy == "discard") {
    cfg.policy = SaturationPolicy::Discard;
  } else if (o.policy == "clip") {
    cfg.policy = SaturationPolicy::Clip;
  } else {
    throw UsageError("--policy must be discard or clip");
  }
  validate(cfg);
  return cfg;
}

GridSpec grid_from(const Options& o) {
  if (!o.quadrature.empty()) {
    const std::vector<double> q = [&] {
      std::vector<double> v;
      std::stringstream ss(o.quadrature);
      std::string item;
      while (std::getline(ss, item, ':')) v.push_back(parse_number(item, "--quadrature"));
      return v;
    }();
    if (q.size() != 3) throw UsageError("--quadrature must look like tau_max:n_tau:n_chi");
    const QuadratureGrid qg =
        make_quadrature_grid(q[0], static_cast<int>(q[1]), static_cast<int>(q[2]));
    const ArgumentScaling scaling =
        o.scaling == "full" ? ArgumentScaling::Full : ArgumentScaling::Half;
    std::vector<double> taus;
    for (std::size_t i = 0; i < qg.tau_nodes.size(); ++i) {
      taus.push_back(sample_point(qg, i, 0, scaling).tau());
    }
    return GridSpec::hyperboloid(std::move(taus), qg.chi_nodes);
  }
  const std::vector<double> radial = parse_range(o.grid_tau);
  if (o.coords == "hyperboloid") return GridSpec::hyperboloid(radial, uniform_angles(o.grid_chi));
  if (o.coords == "disk") return GridSpec::disk(radial, uniform_angles(o.grid_chi));
  throw UsageError("--coords must be hyperboloid or disk");
}

void check_pipeline_budget(const TwoModeState& state, double tau_top) {
  const int n_out = state.n_max() + default_guard(tau_top, support_extent(state));
  if (n_out > kMaxPipelineLattice) {
    throw UsageError("squeezing up to tau = " + format_double(tau_top) +
                     " needs a Fock lattice of " + std::to_string(n_out) +
                     " photons; lower the range or use an exact evaluator");
  }
}

// ---------------------------------------------------------------- output

class Run {
 public:
  Run(std::string command, const Options& o, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), dir_(o.out), strict_(o.strict), out_(out), err_(err) {
    fs::create_directories(dir_);
    summary_["command"] = command_;
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir_ / name).string());
    f << content;
  }

  json& summary() { return summary_; }

  void warn(const std::string& message) {
    err_ << "warning: " << message << '\n';
    warnings_.push_back(message);
  }

  int finish(int code = kOk) {
    summary_["warnings"] = warnings_;
    write("summary.json", summary_.dump(2) + "\n");
    if (code == kOk && strict_ && !warnings_.empty()) return kNumericalWarning;
    return code;
  }

  std::ostream& out() { return out_; }

 private:
  std::string command_;
  fs::path dir_;
  bool strict_;
  std::ostream& out_;
  std::ostream& err_;
  json summary_;
  std::vector<std::string> warnings_;
};

std::string num(double v) { return format_double(v); }

// ---------------------------------------------------------------- commands

int cmd_prepare(const Options& o, Run& run) {
  const PreparedState ps = resolve_state(o);
  std::ostringstream s;
  write_state(s, ps.state);
  run.write("state.json", s.str());
  const double nrm = norm(ps.state);
  const double tail = std::max(0.0, 1.0 - nrm * nrm);
  run.out() << "norm " << num(nrm) << "\ntail_mass " << num(tail) << '\n';
  run.summary()["state"] = o.state;
  run.summary()["n_max"] = ps.state.n_max();
  run.summary()["norm"] = nrm;
  run.summary()["tail_mass"] = tail;
  if (std::abs(nrm * nrm - 1.0) > kNormTolerance) run.warn("state is not normalized");
  return run.finish();
}

int cmd_wigner(const Options& o, Run& run) {
  const PreparedState ps = resolve_state(o);
  const GridSpec grid = grid_from(o);
  check_pipeline_budget(ps.state, grid.tau_values.back());

  SamplingOptions sampling;
  sampling.detector = detector_from(o);
  sampling.selector = selector_from(o);
  sampling.squeeze.tail_tol = o.tail_tol;
  if (o.shots > 0) sampling.shots = ShotConfig{o.shots, o.seed};
  std::optional<NoiseConfig> noise;
  if (o.snr > 0.0) noise = NoiseConfig{o.snr, o.seed};

  const WignerField field = wigner_grid(ps.state, grid, sampling, noise);
  std::ostringstream csv;
  write_field_csv(csv, field);
  run.write("wigner.csv", csv.str());

  const double max_tail = field.truncation_tail.maxCoeff();
  run.summary()["points"] = grid.size();
  run.summary()["w_min"] = field.values.minCoeff();
  run.summary()["w_max"] = field.values.maxCoeff();
  run.summary()["max_tail"] = max_tail;
  run.summary()["seed"] = o.seed;
  if (max_tail > o.tail_tol) run.warn("truncation tail " + num(max_tail) + " exceeds tail_tol");
  run.out() << "wrote " << grid.size() << " points, W in [" << num(field.values.minCoeff())
            << ", " << num(field.values.maxCoeff()) << "]\n";
  return run.finish();
}

int cmd_histogram(const Options& o, Run& run) {
  const PreparedState ps = resolve_state(o);
  const SqueezeParam p(o.tau, o.chi);
  check_pipeline_budget(ps.state, p.tau());
  photon_distribution(ps.state);
  SqueezeOptions sq;
  sq.tail_tol = o.tail_tol;
  const SqueezeResult squeezed = apply_squeeze(ps.state, p, -1, sq);
  JointPhotonDistribution dist;
  dist.probabilities = squeezed.state.amplitudes().cwiseAbs2();
  if (auto det = detector_from(o)) dist = apply_detector(dist, *det);

  std::ostringstream csv;
  csv << "na,nb,count_or_prob\n";
  Eigen::MatrixXd diag_source;
  double w = 0.0;
  double discarded = dist.discarded_mass;
  if (o.shots > 0) {
    const ShotHistogram hist = sample_shots(dist, ShotConfig{o.shots, o.seed});
    for (int na = 0; na < hist.counts.rows(); ++na) {
      for (int nb = 0; nb < hist.counts.cols(); ++nb) {
        if (hist.counts(na, nb) != 0) csv << na << ',' << nb << ',' << hist.counts(na, nb) << '\n';
      }
    }
    const JointPhotonDistribution emp = empirical_distribution(hist);
    diag_source = emp.probabilities;
    discarded = emp.discarded_mass;
    w = parity_from_histogram(hist, selector_from(o)).estimate;
    run.summary()["shots"] = o.shots;
    run.summary()["seed"] = o.seed;
  } else {
    for (int na = 0; na <= dist.n_max(); ++na) {
      for (int nb = 0; nb <= dist.n_max(); ++nb) {
        const double v = dist.probabilities(na, nb);
        if (v != 0.0) csv << na << ',' << nb << ',' << num(v) << '\n';
      }
    }
    diag_source = dist.probabilities;
    w = wigner_origin(dist, selector_from(o));
  }
  run.write("histogram.csv", csv.str());
  if (ps.kind == "tmsv") {
    std::ostringstream d;
    d << "n,p\n";
    for (int n = 0; n < diag_source.rows(); ++n) d << n << ',' << num(diag_source(n, n)) << '\n';
    run.write("diagonal.csv", d.str());
  }
  run.summary()["tau"] = p.tau();
  run.summary()["chi"] = p.chi();
  run.summary()["discarded_mass"] = discarded;
  run.summary()["parity_sum"] = w;
  run.summary()["tail_mass"] = squeezed.tail_mass;
  if (squeezed.tail_exceeded) run.warn("truncation tail " + num(squeezed.tail_mass) + " exceeds tail_tol");
  run.out() << "parity sum " << num(w) << '\n';
  return run.finish();
}

int cmd_reconstruct(const Options& o, Run& run) {
  const int twice_k = parse_twice_k(o.k);
  if (twice_k < 2) throw UsageError("k = 1/2 cannot be reconstructed: (2k - 1) vanishes");
  const QuadratureGrid grid = make_quadrature_grid(o.tau_max, o.tau_nodes, o.chi_nodes);
  ReconstructionOptions ro;
  if (o.scaling == "half") {
    ro.scaling = ArgumentScaling::Half;
  } else if (o.scaling == "full") {
    ro.scaling = ArgumentScaling::Full;
  } else {
    throw UsageError("--scaling must be half or full");
  }
  if (o.kernel == "dual") {
    ro.kernel = InversionKernel::Dual;
  } else if (o.kernel == "published") {
    ro.kernel = InversionKernel::AsPublished;
  } else {
    throw UsageError("--kernel must be dual or published");
  }
  const IrrepSelector sel{twice_k, parse_branch(o.branch)};

  IrrepDensityBlock block;
  if (o.source == "field") {
    if (o.field.empty()) throw UsageError("--source field needs --field path");
    std::ifstream in(o.field);
    if (!in) throw UsageError("cannot open field file '" + o.field + "'");
    std::map<std::pair<double, double>, double> lookup;
    for (const FieldSample& s : read_field_csv(in)) lookup[{s.tau, s.chi}] = s.w;
    Eigen::MatrixXd sampled(grid.tau_nodes.size(), grid.chi_nodes.size());
    for (std::size_t i = 0; i < grid.tau_nodes.size(); ++i) {
      for (std::size_t j = 0; j < grid.chi_nodes.size(); ++j) {
        const SqueezeParam p = sample_point(grid, i, j, ro.scaling);
        auto it = lookup.find({p.tau(), p.chi()});
        if (it == lookup.end()) {
          throw UsageError("field file has no sample at tau=" + num(p.tau()) +
                           ", chi=" + num(p.chi()) +
                           " (sample it with wigner --quadrature and matching --scaling)");
        }
        sampled(i, j) = it->second;
      }
    }
    block = reconstruct_irrep(sampled, twice_k, o.levels, grid, ro);
  } else {
    const PreparedState ps = resolve_state(o);
    photon_distribution(ps.state);
    if (o.source == "exact") {
      double residue = 0.0;
      std::mutex m;
      block = reconstruct_irrep(
          [&](const SqueezeParam& p) {
            const ExactWigner w = wigner_exact(ps.state, p, sel);
            std::lock_guard<std::mutex> lock(m);
            residue = std::max(residue, w.imag_residue);
            return w.value;
          },
          twice_k, o.levels, grid, ro);
      run.summary()["imag_residue"] = residue;
      if (residue > 1e-12) run.warn("Wigner imaginary residue " + num(residue));
    } else if (o.source == "pipeline") {
      const double top = sample_point(grid, grid.tau_nodes.size() - 1, 0, ro.scaling).tau();
      check_pipeline_budget(ps.state, top);
      SamplingOptions sampling;
      sampling.selector = sel;
      block = reconstruct_irrep(
          [&](const SqueezeParam& p) { return sample_wigner(ps.state, p, sampling).value; },
          twice_k, o.levels, grid, ro);
    } else {
      throw UsageError("--source must be exact, pipeline or field");
    }
  }

  std::ostringstream csv;
  write_block_csv(csv, block);
  run.write("irrep_block.csv", csv.str());
  run.summary()["k"] = block.k();
  run.summary()["levels"] = o.levels;
  run.summary()["trace"] = block.rho.trace().real();
  run.summary()["hermiticity_defect"] = block.hermiticity_defect;
  if (ro.kernel == InversionKernel::Dual) run.summary()["gram_condition"] = block.gram_condition;
  run.out() << "trace " << num(block.rho.trace().real()) << '\n';
  return run.finish();
}

Normalization normalization_from(const Options& o) {
  if (o.normalization == "normalized") return Normalization::Normalized;
  if (o.normalization == "published") return Normalization::AsPublished;
  throw UsageError("--normalization must be normalized or published");
}

int cmd_compare_oracle(const Options& o, Run& run) {
  const GridSpec grid = grid_from(o);
  const Normalization norm = normalization_from(o);
  std::ostringstream csv;
  double max_diff = 0.0;
  auto row = [&](const std::vector<std::string>& cells, double diff) {
    for (std::size_t c = 0; c < cells.size(); ++c) csv << (c ? "," : "") << cells[c];
    csv << ',' << num(diff) << '\n';
    max_diff = std::max(max_diff, diff);
  };

  if (o.oracle == "vacuum" || o.oracle == "biphoton") {
    const bool vac = o.oracle == "vacuum";
    const TwoModeState state = vac ? TwoModeState::vacuum(0) : TwoModeState::fock(1, 1, 1);
    std::optional<int> n_res;
    if (o.n_resolve >= 0) n_res = o.n_resolve;
    check_pipeline_budget(state, std::max(grid.tau_values.back(), 0.0));
    csv << "tau,chi,pipeline,oracle,abs_diff\n";
    for (double tau : grid.tau_values) {
      for (double chi : grid.chi_values) {
        const SqueezeParam p(tau, chi);
        const double pipe = n_res ? resolution_truncated_wigner(state, p, *n_res) : wigner_at(state, p);
        const double ref = vac ? vacuum_wigner_closed(p, n_res, norm)
                               : biphoton_wigner_closed(p, n_res, norm);
        row({num(tau), num(chi), num(pipe), num(ref)}, std::abs(pipe - ref));
      }
    }
  } else if (o.oracle == "tmsv-distribution") {
    const PreparedState ps = resolve_state(o);
    if (ps.kind != "tmsv") throw UsageError("tmsv-distribution needs --state tmsv(tau0[,chi0])");
    const SqueezeParam p0(ps.tau0, ps.chi0);
    const int n_cmp = 20;
    csv << "tau,chi,n,pipeline,oracle,abs_diff\n";
    for (double tau : grid.tau_values) {
      for (double chi : grid.chi_values) {
        const SqueezeParam p(tau, chi);
        const std::vector<double> pipe = displaced_tmsv_pipeline(p0, p, n_cmp);
        const std::vector<double> ref = displaced_tmsv_distribution(p0, p, n_cmp, norm);
        for (int n = 0; n <= n_cmp; ++n) {
          const auto idx = static_cast<std::size_t>(n);
          row({num(tau), num(chi), std::to_string(n), num(pipe[idx]), num(ref[idx])},
              std::abs(pipe[idx] - ref[idx]));
        }
      }
    }
  } else if (o.oracle == "brute-force") {
    const PreparedState ps = resolve_state(o);
    if (ps.state.n_max() > DenseSqueeze::kMaxNMax) {
      throw UsageError("brute-force oracle supports n_max <= 40");
    }
    SqueezeOptions same_lattice;
    same_lattice.guard = 0;
    same_lattice.tail_tol = 1.0;
    csv << "tau,chi,pipeline,oracle,abs_diff\n";
    for (double tau : grid.tau_values) {
      for (double chi : grid.chi_values) {
        const SqueezeParam p(tau, chi);
        const double pipe = wigner_at(ps.state, p, same_lattice);
        const double ref = brute_force_wigner(ps.state, p);
        row({num(tau), num(chi), num(pipe), num(ref)}, std::abs(pipe - ref));
      }
    }
  } else {
    throw UsageError("--oracle must be vacuum, biphoton, tmsv-distribution or brute-force");
  }

  run.write("oracle_report.csv", csv.str());
  const bool pass = max_diff <= o.tol;
  run.summary()["oracle"] = o.oracle;
  run.summary()["normalization"] = o.normalization;
  run.summary()["max_abs_diff"] = max_diff;
  run.summary()["tol"] = o.tol;
  run.summary()["pass"] = pass;
  run.out() << "max |diff| " << num(max_diff) << (pass ? " <= " : " > ") << "tol " << num(o.tol)
            << '\n';
  return run.finish(pass ? kOk : kToleranceBreach);
}

int cmd_dfunction(const Options& o, Run& run) {
  const int twice_k = parse_twice_k(o.k);
  if (o.levels < 0) throw UsageError("--levels must be >= 0");
  std::vector<DFunctionTable> tables;
  for (double tau : parse_range(o.grid_tau)) {
    if (o.method == "block") {
      tables.push_back(dfunction(twice_k, tau, o.levels));
    } else if (o.method == "closed") {
      tables.push_back(dfunction_closed(twice_k, tau, o.levels));
    } else {
      throw UsageError("--method must be block or closed");
    }
  }
  std::ostringstream csv;
  write_dfunction_csv(csv, tables);
  run.write("dfunction.csv", csv.str());
  run.summary()["k"] = 0.5 * twice_k;
  run.summary()["tables"] = tables.size();
  run.out() << "wrote " << tables.size() << " tables\n";
  return run.finish();
}

// ---------------------------------------------------------------- wiring

struct Command {
  CLI::App* app;
  int (*handler)(const Options&, Run&);
};

void add_state(CLI::App* c, Options& o) {
  c->add_option("--state", o.state, "vacuum | biphoton | tmsv(tau0[,chi0]) | fock(na,nb) | file");
  c->add_option("--n-max", o.n_max, "truncation (default: preset-dependent)");
}

void add_grid(CLI::App* c, Options& o) {
  c->add_option("--grid-tau", o.grid_tau, "radial range start:stop:count");
  c->add_option("--grid-chi", o.grid_chi, "number of azimuths in [0, 2 pi)");
  c->add_option("--coords", o.coords, "hyperboloid (radial = tau) | disk (radial = |xi|)");
}

void add_detector(CLI::App* c, Options& o) {
  c->add_option("--eta-a", o.eta_a, "efficiency of detector a");
  c->add_option("--eta-b", o.eta_b, "efficiency of detector b");
  c->add_option("--n-resolve", o.n_resolve, "largest resolvable count (-1: unlimited)");
  c->add_option("--policy", o.policy, "discard | clip");
  c->add_option("--shots", o.shots, "events per point (0: exact distribution)");
  c->add_option("--irrep-k", o.irrep_k, "post-select |na - nb| = 2k - 1");
  c->add_option("--branch", o.branch, "plus | minus | both");
  c->add_option("--tail-tol", o.tail_tol, "truncation tail warning threshold");
}

std::vector<std::string> long_names(const CLI::Option* opt) { return opt->get_lnames(); }

// Flat JSON object -> argument list, skipping keys already given as flags.
std::vector<std::string> config_arguments(const std::string& path, const CLI::App* sub,
                                          const std::vector<std::string>& user_args) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  const std::vector<const CLI::Option*> options = sub->get_options();
  std::vector<std::string> args;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") continue;
    const bool known = std::any_of(options.begin(), options.end(),
                                   [&](const CLI::Option* opt) {
                                     const auto names = long_names(opt);
                                     return std::find(names.begin(), names.end(), key) != names.end();
                                   });
    if (!known) {
      throw UsageError("config key '" + key + "' is not an option of '" + sub->get_name() + "'");
    }
    const std::string flag = "--" + key;
    const bool given = std::any_of(user_args.begin(), user_args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      throw UsageError("config key '" + key + "' must be a string, number or boolean");
    }
  }
  return args;
}

json effective_config(const CLI::App* sub) {
  json cfg = json::object();
  cfg["command"] = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const auto names = long_names(opt);
    if (names.empty()) continue;
    const std::string& name = names.front();
    if (name == "help" || name == "config" || name == "out") continue;
    if (opt->get_items_expected_max() == 0) {
      cfg[name] = opt->count() > 0;
      continue;
    }
    const std::string value = opt->count() > 0 ? opt->results().front() : opt->get_default_str();
    cfg[name] = value;
  }
  return cfg;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Sampled SU(1,1) Wigner functions of two-mode states", "su11wig"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config_path;

  std::vector<Command> commands;
  auto make = [&](const char* name, const char* help, int (*handler)(const Options&, Run&)) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option("--config", config_path, "flat JSON file of option values (flags override)");
    c->add_option("--out", o.out, "output directory");
    c->add_option("--seed", o.seed, "64-bit seed for shots and noise");
    c->add_flag("--strict", o.strict, "exit 3 on numerical warnings");
    commands.push_back({c, handler});
    return c;
  };

  CLI::App* prepare = make("prepare", "write a state file", cmd_prepare);
  add_state(prepare, o);

  CLI::App* wigner = make("wigner", "sample W on a grid", cmd_wigner);
  add_state(wigner, o);
  add_grid(wigner, o);
  add_detector(wigner, o);
  wigner->add_option("--snr", o.snr, "additive Gaussian noise, sigma = max|W|/snr (0: off)");
  wigner->add_option("--quadrature", o.quadrature,
                     "sample the reconstruction nodes tau_max:n_tau:n_chi instead of the grid");
  wigner->add_option("--scaling", o.scaling, "half | full (with --quadrature)");

  CLI::App* histogram = make("histogram", "photon-count histogram at one point", cmd_histogram);
  add_state(histogram, o);
  add_detector(histogram, o);
  histogram->add_option("--tau", o.tau, "squeeze magnitude");
  histogram->add_option("--chi", o.chi, "squeeze phase");

  CLI::App* reconstruct = make("reconstruct", "recover one irrep block", cmd_reconstruct);
  add_state(reconstruct, o);
  reconstruct->add_option("--k", o.k, "Bargmann index (1, 3/2, 2, ...)");
  reconstruct->add_option("--levels", o.levels, "highest level mu - k");
  reconstruct->add_option("--tau-max", o.tau_max, "upper end of the tau integral");
  reconstruct->add_option("--tau-nodes", o.tau_nodes, "Gauss nodes in tau");
  reconstruct->add_option("--chi-nodes", o.chi_nodes, "trapezoid nodes in chi");
  reconstruct->add_option("--source", o.source, "exact | pipeline | field");
  reconstruct->add_option("--field", o.field, "wigner.csv sampled at the quadrature nodes");
  reconstruct->add_option("--scaling", o.scaling, "half | full");
  reconstruct->add_option("--kernel", o.kernel, "dual | published");
  reconstruct->add_option("--branch", o.branch, "plus | minus | both");

  CLI::App* compare = make("compare-oracle", "pipeline vs closed-form table", cmd_compare_oracle);
  add_state(compare, o);
  add_grid(compare, o);
  compare->add_option("--oracle", o.oracle, "vacuum | biphoton | tmsv-distribution | brute-force");
  compare->add_option("--tol", o.tol, "tolerance on max |diff| (exit 2 above)");
  compare->add_option("--normalization", o.normalization, "normalized | published");
  compare->add_option("--n-resolve", o.n_resolve, "partial sums up to N (vacuum, biphoton)");

  CLI::App* dfun = make("dfunction", "tabulate hyperbolic d-functions", cmd_dfunction);
  dfun->add_option("--k", o.k, "Bargmann index");
  dfun->add_option("--levels", o.levels, "highest level mu - k");
  dfun->add_option("--grid-tau", o.grid_tau, "tau range start:stop:count");
  dfun->add_option("--method", o.method, "block | closed");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    auto cfg_it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
      return a == "--config" || a.rfind("--config=", 0) == 0;
    });
    if (cfg_it != args.end() && !args.empty()) {
      std::string path;
      if (*cfg_it == "--config") {
        if (cfg_it + 1 == args.end()) throw UsageError("--config needs a path");
        path = *(cfg_it + 1);
      } else {
        path = cfg_it->substr(std::string("--config=").size());
      }
      const CLI::App* sub = app.get_subcommand_no_throw(args.front());
      if (sub == nullptr) throw UsageError("--config must follow a subcommand");
      const std::vector<std::string> extra = config_arguments(path, sub, args);
      args.insert(args.begin() + 1, extra.begin(), extra.end());
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  for (const Command& c : commands) {
    if (!c.app->parsed()) continue;
    try {
      Run run(c.app->get_name(), o, out, err);
      run.write("config.json", effective_config(c.app).dump(2) + "\n");
      return c.handler(o, run);
    } catch (const UsageError& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::runtime_error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::domain_error& e) {
      err << "error: " << e.what() << '\n';
      return kNumericalWarning;
    }
  }
  return kUsage;
}

}  // namespace su11::cli
