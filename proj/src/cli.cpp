#include "icps/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "icps/analysis.hpp"
#include "icps/errors.hpp"
#include "icps/output.hpp"
#include "icps/verify.hpp"

namespace icps::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct CommonOpts {
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = verify::kDefaultSeed;
  std::vector<std::string> tol_specs;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "write output to this file instead of stdout");
  cmd->add_option("--seed", opts.seed, "seed for randomized sweeps")->capture_default_str();
  cmd->add_option("--tol", opts.tol_specs,
                  "override a named tolerance as NAME=VALUE (repeatable; see `verify --help`)");
}

std::map<std::string, double> parse_tol_overrides(const std::vector<std::string>& specs) {
  std::map<std::string, double> overrides;
  for (const std::string& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("--tol expects NAME=VALUE, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(spec.substr(eq + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--tol: cannot parse value in '" + spec + "'");
    }
    if (used != spec.size() - eq - 1)
      throw std::invalid_argument("--tol: cannot parse value in '" + spec + "'");
    overrides[name] = value;
  }
  return overrides;
}

// theta0 may be given in radians or as a pi-fraction "p/q".
double resolve_theta0(double radians, const std::string& pi_frac) {
  if (pi_frac.empty()) return radians;
  long long p = 0, q = 0;
  char trailing = '\0';
  if (std::sscanf(pi_frac.c_str(), "%lld/%lld%c", &p, &q, &trailing) != 2 || q == 0)
    throw std::invalid_argument("--theta0-pi-frac expects a fraction p/q with q != 0, got '" +
                                pi_frac + "'");
  return kPi * static_cast<double>(p) / static_cast<double>(q);
}

// Inclusive grid lo, lo+step, ..., hi; the final point is snapped onto hi
// exactly when the range divides evenly.
std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be > 0");
  if (hi < lo) throw std::invalid_argument("grid upper bound must be >= lower bound");
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-6));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (long long i = 0; i <= count; ++i) {
    double v = lo + i * step;
    if (i == count && std::abs(v - hi) < step * 1e-9) v = hi;
    grid.push_back(std::min(v, hi));
  }
  return grid;
}

std::string join_ints(const std::vector<int>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

io::Json base_meta(const std::string& command, const CommonOpts& opts) {
  io::Json meta;
  meta["tool"] = "icps";
  meta["version"] = std::string(kVersion);
  meta["command"] = command;
  meta["seed"] = opts.seed;
  return meta;
}

// Overrides are consumed by verify and by var-scan's consistency gate; the
// other commands still reject unknown names instead of ignoring typos.
std::map<std::string, double> validated_tol_overrides(const CommonOpts& opts) {
  auto overrides = parse_tol_overrides(opts.tol_specs);
  for (const auto& [name, value] : overrides) verify::default_tolerance(name);
  return overrides;
}

int emit(const io::Document& doc, const CommonOpts& opts, std::ostream& out) {
  std::ofstream file;
  std::ostream* target = &out;
  if (!opts.out_path.empty()) {
    file.open(opts.out_path);
    if (!file) throw std::invalid_argument("cannot open output path '" + opts.out_path + "'");
    target = &file;
  }
  if (opts.format == "json")
    io::write_json(*target, doc);
  else
    io::write_csv(*target, doc);
  return 0;
}

// --- state ---------------------------------------------------------------

struct StateArgs {
  CommonOpts common;
  int cutoff = 1;
  double eta = 1.0;
  int branch = 0;
  double theta0 = 0.0;
  std::string theta0_pi_frac;
};

int cmd_state(const StateArgs& args, std::ostream& out) {
  validated_tol_overrides(args.common);
  const states::IcpsParams params{args.cutoff, args.eta, args.branch,
                                  resolve_theta0(args.theta0, args.theta0_pi_frac)};
  params.validate();

  const states::IcpsCoefficients coeffs = states::icps_coefficients(params.cutoff, params.eta);
  const states::IcpsEigenvalue rho = states::icps_eigenvalue(params);
  const fock::FockVector psi = states::icps_state(params);

  io::Document doc;
  doc.meta = base_meta("state", args.common);
  doc.meta["M"] = params.cutoff;
  doc.meta["eta"] = params.eta;
  doc.meta["m"] = params.branch;
  doc.meta["theta0"] = params.theta0;
  doc.meta["theta-m"] = params.theta_m();
  doc.meta["rho-modulus"] = coeffs.rho_modulus;
  doc.meta["rho-phase"] = params.theta_m();
  doc.meta["c0"] = coeffs.c0;
  doc.meta["eigenvalue-degenerate"] = rho.degenerate;

  io::Block block{"rows", {"n", "re_amp", "im_amp", "prob"}, {}};
  for (int n = 0; n < psi.dim(); ++n) {
    const fock::Complex amp = psi.amps(n);
    block.rows.push_back({{"n", n},
                          {"re_amp", amp.real()},
                          {"im_amp", amp.imag()},
                          {"prob", std::norm(amp)}});
  }
  doc.blocks.push_back(std::move(block));
  return emit(doc, args.common, out);
}

// --- q-scan ---------------------------------------------------------------

struct QScanArgs {
  CommonOpts common;
  std::vector<int> cutoffs = {1, 2, 3, 4, 5, 6, 7};
  double eta_min = 0.0, eta_max = 1.0, eta_step = 0.005;
};

int cmd_q_scan(const QScanArgs& args, std::ostream& out) {
  validated_tol_overrides(args.common);
  const std::vector<double> grid = make_grid(args.eta_min, args.eta_max, args.eta_step);
  const auto rows = analysis::q_scan(args.cutoffs, grid);

  io::Document doc;
  doc.meta = base_meta("q-scan", args.common);
  doc.meta["M-list"] = join_ints(args.cutoffs);
  doc.meta["eta-min"] = args.eta_min;
  doc.meta["eta-max"] = args.eta_max;
  doc.meta["eta-step"] = args.eta_step;
  doc.meta["points"] = rows.size();

  io::Block block{"rows", {"M", "eta", "Q", "vacuum_flag"}, {}};
  for (const auto& row : rows)
    block.rows.push_back(
        {{"M", row.cutoff}, {"eta", row.eta}, {"Q", row.q}, {"vacuum_flag", row.vacuum_flag}});
  doc.blocks.push_back(std::move(block));
  return emit(doc, args.common, out);
}

// --- var-scan ---------------------------------------------------------------

struct VarScanArgs {
  CommonOpts common;
  std::vector<int> cutoffs = {3, 7};
  double eta_min = 0.0, eta_max = 1.0, eta_step = 0.01;
  double theta_min = 0.0, theta_max = kPi / 2, theta_step = kPi / 100;
};

int cmd_var_scan(const VarScanArgs& args, std::ostream& out) {
  const std::vector<double> etas = make_grid(args.eta_min, args.eta_max, args.eta_step);
  const std::vector<double> thetas = make_grid(args.theta_min, args.theta_max, args.theta_step);

  const auto overrides = validated_tol_overrides(args.common);
  double gate_tol = analysis::kMomentConsistencyTol;
  if (auto it = overrides.find("moment-consistency"); it != overrides.end()) gate_tol = it->second;

  io::Document doc;
  doc.meta = base_meta("var-scan", args.common);
  doc.meta["M-list"] = join_ints(args.cutoffs);
  doc.meta["eta-min"] = args.eta_min;
  doc.meta["eta-max"] = args.eta_max;
  doc.meta["eta-step"] = args.eta_step;
  doc.meta["theta-min"] = args.theta_min;
  doc.meta["theta-max"] = args.theta_max;
  doc.meta["theta-step"] = args.theta_step;

  io::Block rows{"rows", {"M", "eta", "theta_m", "var_x", "var_p", "squeezed_x"}, {}};
  io::Block boundaries{"squeezing_boundaries", {"M", "theta_m", "eta0"}, {}};
  for (int M : args.cutoffs) {
    const analysis::VarianceSurface surface = analysis::variance_surface(M, etas, thetas, gate_tol);
    for (std::size_t i = 0; i < etas.size(); ++i)
      for (std::size_t j = 0; j < thetas.size(); ++j) {
        const double vx = surface.var_x[i * thetas.size() + j];
        const double vp = surface.var_p[i * thetas.size() + j];
        rows.rows.push_back({{"M", M},
                             {"eta", etas[i]},
                             {"theta_m", thetas[j]},
                             {"var_x", vx},
                             {"var_p", vp},
                             {"squeezed_x", vx < 0.5 - analysis::kSqueezeTol}});
      }
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      io::Json row{{"M", M}, {"theta_m", thetas[j]}};
      row["eta0"] = surface.eta0[j] ? io::Json(*surface.eta0[j]) : io::Json(nullptr);
      boundaries.rows.push_back(std::move(row));
    }
  }
  doc.blocks.push_back(std::move(rows));
  doc.blocks.push_back(std::move(boundaries));
  return emit(doc, args.common, out);
}

// --- verify ---------------------------------------------------------------

struct VerifyArgs {
  CommonOpts common;
  int max_cutoff = 40;
  bool with_oracle = false;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out) {
  verify::Options options;
  options.seed = args.common.seed;
  options.max_cutoff = args.max_cutoff;
  options.with_oracle = args.with_oracle;
  options.tolerance_overrides = validated_tol_overrides(args.common);

  const std::vector<verify::SuiteResult> results = verify::run_suites(options);
  const bool all_passed =
      std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });

  io::Document doc;
  doc.meta = base_meta("verify", args.common);
  doc.meta["M-max"] = args.max_cutoff;
  doc.meta["oracle"] = args.with_oracle;
  doc.meta["passed"] = all_passed;
  io::Block block{"suites",
                  {"suite", "samples", "max_residual", "tolerance", "passed", "worst_case"},
                  {}};
  for (const auto& r : results)
    block.rows.push_back({{"suite", r.name},
                          {"samples", r.samples},
                          {"max_residual", r.max_residual},
                          {"tolerance", r.tolerance},
                          {"passed", r.passed},
                          {"worst_case", r.worst_case}});
  doc.blocks.push_back(std::move(block));

  const bool json_to_stdout = args.common.format == "json" && args.common.out_path.empty();
  if (!json_to_stdout) {
    for (const auto& r : results) {
      out << (r.passed ? "[PASS] " : "[FAIL] ") << std::left << std::setw(22) << r.name
          << " samples=" << std::setw(6) << r.samples << " max_residual=" << io::fmt(r.max_residual)
          << " tol=" << io::fmt(r.tolerance) << "\n";
      if (!r.passed) out << "       worst case: " << r.worst_case << "\n";
    }
    out << (all_passed ? "all suites passed" : "VERIFICATION FAILED") << "\n";
  }
  if (json_to_stdout || !args.common.out_path.empty()) {
    CommonOpts json_opts = args.common;
    json_opts.format = "json";
    emit(doc, json_opts, out);
  }
  return all_passed ? 0 : 2;
}

// --- limits ---------------------------------------------------------------

struct LimitsArgs {
  CommonOpts common;
  double lam = 1.0;
  double theta0 = 0.0;
  std::string theta0_pi_frac;
  std::vector<int> cutoffs = {25, 50, 100, 200};
  int pb_cutoff = 7;
  int pb_branch = 0;
  double eta_min = 0.9, eta_max = 1.0, eta_step = 0.005;
};

int cmd_limits(const LimitsArgs& args, std::ostream& out) {
  validated_tol_overrides(args.common);
  if (!(args.lam > 0.0)) throw std::invalid_argument("--lambda must be > 0");
  const double theta0 = resolve_theta0(args.theta0, args.theta0_pi_frac);
  const std::vector<double> eta_grid = make_grid(args.eta_min, args.eta_max, args.eta_step);

  io::Document doc;
  doc.meta = base_meta("limits", args.common);
  doc.meta["lambda"] = args.lam;
  doc.meta["theta0"] = theta0;
  doc.meta["M-list"] = join_ints(args.cutoffs);
  doc.meta["pb-M"] = args.pb_cutoff;
  doc.meta["pb-m"] = args.pb_branch;
  doc.meta["eta-min"] = args.eta_min;
  doc.meta["eta-max"] = args.eta_max;
  doc.meta["eta-step"] = args.eta_step;
  doc.meta["reference-1-over-e"] = 1.0 / std::numbers::e;

  // Phase-state block: overlap with the equal-weight phase state as eta
  // approaches 1.
  const fock::FockVector pb = states::pb_phase_state(args.pb_cutoff, args.pb_branch, theta0);
  io::Block pb_block{"pb_limit", {"M", "m", "eta", "fidelity"}, {}};
  for (double eta : eta_grid) {
    const fock::FockVector psi = states::icps_state({args.pb_cutoff, eta, args.pb_branch, theta0});
    pb_block.rows.push_back({{"M", args.pb_cutoff},
                             {"m", args.pb_branch},
                             {"eta", eta},
                             {"fidelity", std::abs(fock::inner(pb, psi))}});
  }
  doc.blocks.push_back(std::move(pb_block));

  // Coherent block: eta chosen per cutoff so the eigenvalue modulus matches
  // lam sqrt(M); overlap with the truncated coherent state of amplitude
  // lam e^{i theta0}.
  analysis::CoherentLimitSpec spec;
  spec.lam = args.lam;
  spec.theta0 = theta0;
  spec.cutoffs = args.cutoffs;
  spec = analysis::coherent_limit_probe(std::move(spec));
  io::Block coh_block{"coherent_limit", {"M", "eta", "fidelity", "skipped"}, {}};
  for (std::size_t k = 0; k < spec.cutoffs.size(); ++k) {
    io::Json row{{"M", spec.cutoffs[k]}};
    row["eta"] = spec.skipped[k] ? io::Json(nullptr) : io::Json(spec.etas[k]);
    row["fidelity"] = spec.skipped[k] ? io::Json(nullptr) : io::Json(spec.fidelities[k]);
    row["skipped"] = spec.skipped[k];
    coh_block.rows.push_back(std::move(row));
  }
  doc.blocks.push_back(std::move(coh_block));

  // ((M+1)!)^{1/(M+1)}/(M+1), the ratio that fixes the large-M coherent
  // amplitude; it converges to 1/e.
  io::Block ratio_block{"factorial_root_ratio", {"M", "ratio"}, {}};
  for (int M : {1000, 10000})
    ratio_block.rows.push_back({{"M", M}, {"ratio", analysis::factorial_root_ratio(M)}});
  doc.blocks.push_back(std::move(ratio_block));

  return emit(doc, args.common, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"icps: intermediate coherent-phase states on truncated Fock spaces"};
  app.require_subcommand(1);

  StateArgs state_args;
  CLI::App* state = app.add_subcommand("state", "construct one state and emit its amplitudes");
  state->add_option("--M", state_args.cutoff, "Fock cutoff M")->required();
  state->add_option("--eta", state_args.eta, "interpolation parameter in [0,1]")->required();
  state->add_option("--m", state_args.branch, "branch index in [0,M]")->capture_default_str();
  auto* st_theta = state->add_option("--theta0", state_args.theta0, "reference phase in radians")
                       ->capture_default_str();
  state->add_option("--theta0-pi-frac", state_args.theta0_pi_frac, "theta0 as a fraction p/q of pi")
      ->excludes(st_theta);
  add_common(state, state_args.common);

  QScanArgs q_args;
  CLI::App* qscan = app.add_subcommand("q-scan", "Mandel Q over an (M, eta) grid");
  qscan->add_option("--M-list", q_args.cutoffs, "cutoffs to scan")
      ->delimiter(',')
      ->capture_default_str();
  qscan->add_option("--eta-min", q_args.eta_min)->capture_default_str();
  qscan->add_option("--eta-max", q_args.eta_max)->capture_default_str();
  qscan->add_option("--eta-step", q_args.eta_step)->capture_default_str();
  add_common(qscan, q_args.common);

  VarScanArgs var_args;
  CLI::App* varscan =
      app.add_subcommand("var-scan", "quadrature variances over an (eta, theta_m) grid");
  varscan->add_option("--M-list", var_args.cutoffs, "cutoffs to scan")
      ->delimiter(',')
      ->capture_default_str();
  varscan->add_option("--eta-min", var_args.eta_min)->capture_default_str();
  varscan->add_option("--eta-max", var_args.eta_max)->capture_default_str();
  varscan->add_option("--eta-step", var_args.eta_step)->capture_default_str();
  varscan->add_option("--theta-min", var_args.theta_min)->capture_default_str();
  varscan->add_option("--theta-max", var_args.theta_max)->capture_default_str();
  varscan->add_option("--theta-step", var_args.theta_step)->capture_default_str();
  add_common(varscan, var_args.common);

  VerifyArgs verify_args;
  std::string verify_desc = "run the randomized invariant suites and report residuals; suites:";
  for (const std::string& name : verify::suite_names())
    verify_desc += " " + name + " (tol " + io::fmt(verify::default_tolerance(name)) + ")";
  CLI::App* verify_cmd = app.add_subcommand("verify", verify_desc);
  verify_cmd->add_option("--M-max", verify_args.max_cutoff, "largest cutoff in the residual sweep")
      ->capture_default_str();
  verify_cmd->add_flag("--oracle", verify_args.with_oracle,
                       "also compare closed-form eigenvalues against dense diagonalization");
  add_common(verify_cmd, verify_args.common);

  LimitsArgs limits_args;
  CLI::App* limits = app.add_subcommand(
      "limits", "phase-state and coherent-state limit fidelities, plus the factorial-root ratio");
  limits->add_option("--lambda", limits_args.lam, "target coherent amplitude modulus")
      ->capture_default_str();
  auto* li_theta = limits->add_option("--theta0", limits_args.theta0, "reference phase in radians")
                       ->capture_default_str();
  limits->add_option("--theta0-pi-frac", limits_args.theta0_pi_frac,
                     "theta0 as a fraction p/q of pi")
      ->excludes(li_theta);
  limits->add_option("--M-list", limits_args.cutoffs, "cutoffs for the coherent-limit block")
      ->delimiter(',')
      ->capture_default_str();
  limits->add_option("--pb-M", limits_args.pb_cutoff, "cutoff for the phase-state block")
      ->capture_default_str();
  limits->add_option("--pb-m", limits_args.pb_branch, "branch for the phase-state block")
      ->capture_default_str();
  limits->add_option("--eta-min", limits_args.eta_min)->capture_default_str();
  limits->add_option("--eta-max", limits_args.eta_max)->capture_default_str();
  limits->add_option("--eta-step", limits_args.eta_step)->capture_default_str();
  add_common(limits, limits_args.common);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("icps");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() != 0) err << "error: " << e.what() << "\n";
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;  // any parse failure is an input contract violation
  }

  try {
    if (state->parsed()) return cmd_state(state_args, out);
    if (qscan->parsed()) return cmd_q_scan(q_args, out);
    if (varscan->parsed()) return cmd_var_scan(var_args, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_args, out);
    if (limits->parsed()) return cmd_limits(limits_args, out);
    err << "error: no command given\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const consistency_error& e) {
    err << "internal consistency error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace icps::cli
