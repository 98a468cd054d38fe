#include "icps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "icps/analysis.hpp"
#include "icps/states.hpp"

namespace icps::verify {

namespace {

constexpr double kPi = std::numbers::pi;

// mt19937_64 with an explicit uniform mapping, so draws do not depend on the
// standard library's distribution implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return (gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }
  // Interior eta draw: keeps clear of the closed-form endpoint branches,
  // which are covered by dedicated unit tests.
  double eta_interior() { return uniform(1e-9, 1.0 - 1e-9); }

 private:
  std::mt19937_64 gen_;
};

struct Tracker {
  double max_residual = 0.0;
  std::size_t samples = 0;
  std::string worst_case;

  void record(double value, const std::string& label) {
    ++samples;
    if (value > max_residual || samples == 1) {
      max_residual = value;
      worst_case = label;
    }
  }
};

std::string param_label(const states::IcpsParams& p) {
  std::ostringstream os;
  os << "M=" << p.cutoff << " eta=" << p.eta << " m=" << p.branch << " theta0=" << p.theta0;
  return os.str();
}

SuiteResult finish(const std::string& name, const Tracker& t, double tol) {
  return {name, t.samples, t.max_residual, tol, t.max_residual <= tol, t.worst_case};
}

SuiteResult suite_binomial_ladder(Rng& rng, double tol) {
  Tracker t;
  for (int i = 0; i < 100; ++i) {
    const int M = rng.uniform_int(1, 30);
    const double eta = rng.eta_interior();
    std::ostringstream label;
    label << "M=" << M << " eta=" << eta;
    t.record(analysis::binomial_ladder_check(M, eta), label.str());
  }
  return finish("binomial-ladder", t, tol);
}

SuiteResult suite_eigen_residual(Rng& rng, int max_cutoff, double tol) {
  Tracker t;
  for (int M = 1; M <= max_cutoff; ++M) {
    for (int draw = 0; draw < 20; ++draw) {
      const double eta = rng.eta_interior();
      const double theta0 = rng.uniform(0.0, 2.0 * kPi);
      const fock::LinearOperator op = states::icps_operator(M, eta, theta0);
      for (int m = 0; m <= M; ++m) {
        const states::IcpsParams params{M, eta, m, theta0};
        const fock::FockVector psi = states::icps_state(params);
        const fock::Complex rho = states::icps_eigenvalue(params).value;
        const double residual = (op.entries * psi.amps - rho * psi.amps).norm();
        t.record(residual, param_label(params));
      }
    }
  }
  return finish("icps-eigen-residual", t, tol);
}

SuiteResult suite_route_equivalence(Rng& rng, double tol) {
  Tracker t;
  for (int i = 0; i < 200; ++i) {
    const int M = rng.uniform_int(1, 20);
    const states::IcpsParams params{M, rng.eta_interior(), rng.uniform_int(0, M),
                                    rng.uniform(0.0, 2.0 * kPi)};
    const fock::FockVector a = states::icps_state(params);
    const fock::FockVector b = states::icps_via_displacement(params);
    const double dev = (a.amps - b.amps).cwiseAbs().maxCoeff();
    t.record(dev, param_label(params));
  }
  return finish("route-equivalence", t, tol);
}

SuiteResult suite_quadrature_symmetry(Rng& rng, double tol) {
  Tracker t;
  for (int i = 0; i < 200; ++i) {
    const int M = rng.uniform_int(1, 30);
    const double eta = rng.uniform(0.0, 1.0);
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    auto report = [&](double angle) {
      return analysis::quadrature_variances_closed({M, eta, 0, angle});
    };
    const auto base = report(theta);
    const double swap_dev = std::abs(base.var_x - report(theta + kPi / 2).var_p);
    const double period_dev = std::abs(base.var_x - report(theta + kPi).var_x);
    const double mirror_dev =
        std::abs(report(kPi / 2 + theta).var_x - report(kPi / 2 - theta).var_x);
    std::ostringstream label;
    label << "M=" << M << " eta=" << eta << " theta=" << theta;
    t.record(std::max({swap_dev, period_dev, mirror_dev}), label.str());
  }
  return finish("quadrature-symmetry", t, tol);
}

SuiteResult suite_moment_consistency(Rng& rng, double tol) {
  Tracker t;
  for (int i = 0; i < 200; ++i) {
    const int M = rng.uniform_int(1, 40);
    const states::IcpsParams params{M, rng.uniform(0.0, 1.0), rng.uniform_int(0, M),
                                    rng.uniform(0.0, 2.0 * kPi)};

    const analysis::MomentReport closed = analysis::mandel_q(M, params.eta);
    const analysis::MomentReport viaop = analysis::moments_via_operators(params);
    double dev = std::max(std::abs(closed.mean_n - viaop.mean_n),
                          std::abs(closed.mean_n2 - viaop.mean_n2));
    if (!closed.vacuum_flag && !viaop.vacuum_flag) dev = std::max(dev, std::abs(closed.q - viaop.q));

    const auto qc = analysis::quadrature_variances_closed(params);
    const auto qm = analysis::quadrature_variances_matrix(params);
    dev = std::max({dev, std::abs(qc.var_x - qm.var_x), std::abs(qc.var_p - qm.var_p)});

    t.record(dev, param_label(params));
  }
  return finish("moment-consistency", t, tol);
}

SuiteResult suite_spectral_set(Rng& rng, int max_cutoff, double tol) {
  Tracker t;
  for (int M = 1; M <= std::min(10, max_cutoff); ++M) {
    for (int draw = 0; draw < 3; ++draw) {
      const double eta = rng.eta_interior();
      const double theta0 = rng.uniform(0.0, 2.0 * kPi);
      const auto pairs = fock::dense_eig(states::icps_operator(M, eta, theta0));

      std::vector<fock::Complex> numeric;
      numeric.reserve(pairs.size());
      for (const auto& p : pairs) numeric.push_back(p.value);

      double worst = 0.0;
      for (int m = 0; m <= M; ++m) {
        const fock::Complex rho = states::icps_eigenvalue({M, eta, m, theta0}).value;
        auto nearest = std::min_element(numeric.begin(), numeric.end(),
                                        [&](const fock::Complex& a, const fock::Complex& b) {
                                          return std::abs(a - rho) < std::abs(b - rho);
                                        });
        worst = std::max(worst, std::abs(*nearest - rho));
        numeric.erase(nearest);  // multiset match: each eigenvalue used once
      }
      std::ostringstream label;
      label << "M=" << M << " eta=" << eta << " theta0=" << theta0;
      t.record(worst, label.str());
    }
  }
  return finish("spectral-set", t, tol);
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tolerances = {
      {"binomial-ladder", 1e-11},   {"icps-eigen-residual", 1e-10},
      {"route-equivalence", 1e-12}, {"quadrature-symmetry", 1e-12},
      {"moment-consistency", 1e-11}, {"spectral-set", 1e-9},
  };
  return tolerances;
}

}  // namespace

double default_tolerance(const std::string& suite) {
  const auto& tolerances = default_tolerances();
  auto it = tolerances.find(suite);
  if (it == tolerances.end())
    throw std::invalid_argument("unknown verification suite '" + suite + "'");
  return it->second;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, tol] : default_tolerances()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<SuiteResult> run_suites(const Options& options) {
  if (options.max_cutoff < 1) throw std::invalid_argument("verify: M-max must be >= 1");
  for (const auto& [name, tol] : options.tolerance_overrides) {
    default_tolerance(name);  // validates the name
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance for '" + name + "' must be > 0");
  }

  auto tol = [&](const std::string& name) {
    auto it = options.tolerance_overrides.find(name);
    return it != options.tolerance_overrides.end() ? it->second : default_tolerance(name);
  };

  Rng rng(options.seed);
  std::vector<SuiteResult> results;
  results.push_back(suite_binomial_ladder(rng, tol("binomial-ladder")));
  results.push_back(suite_eigen_residual(rng, options.max_cutoff, tol("icps-eigen-residual")));
  results.push_back(suite_route_equivalence(rng, tol("route-equivalence")));
  results.push_back(suite_quadrature_symmetry(rng, tol("quadrature-symmetry")));
  results.push_back(suite_moment_consistency(rng, tol("moment-consistency")));
  if (options.with_oracle)
    results.push_back(suite_spectral_set(rng, options.max_cutoff, tol("spectral-set")));
  return results;
}

}  // namespace icps::verify
