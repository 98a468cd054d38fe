#include "icps/states.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace icps::states {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must lie in [0,1], got " + std::to_string(eta));
}

void check_cutoff(int M) {
  if (M < 1) throw std::invalid_argument("cutoff M must be >= 1, got " + std::to_string(M));
}

// Cumulative log F(k)! for k = 0..M in one sweep.
std::vector<double> log_f_factorial_table(int M, double eta) {
  std::vector<double> table(M + 1, 0.0);
  for (int k = 1; k <= M; ++k) table[k] = table[k - 1] + std::log(f_weight(k, M, eta));
  return table;
}

}  // namespace

double IcpsParams::theta_m() const { return 2.0 * kPi * branch / (cutoff + 1) + theta0; }

void IcpsParams::validate() const {
  check_cutoff(cutoff);
  check_eta(eta);
  if (branch < 0 || branch > cutoff)
    throw std::invalid_argument("branch m must lie in [0," + std::to_string(cutoff) + "], got " +
                                std::to_string(branch));
  if (!std::isfinite(theta0)) throw std::invalid_argument("theta0 must be finite");
}

double f_weight(int n, int M, double eta) {
  check_cutoff(M);
  check_eta(eta);
  if (n < 1 || n > M)
    throw std::invalid_argument("f_weight: n must lie in [1," + std::to_string(M) + "], got " +
                                std::to_string(n));
  return std::sqrt(1.0 - eta) * std::sqrt(static_cast<double>(n) * (M - n + 1)) + std::sqrt(eta);
}

double log_f_factorial(int n, int M, double eta) {
  check_cutoff(M);
  check_eta(eta);
  if (n < 0 || n > M)
    throw std::invalid_argument("log_f_factorial: n must lie in [0," + std::to_string(M) +
                                "], got " + std::to_string(n));
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) sum += std::log(f_weight(k, M, eta));
  return sum;
}

IcpsCoefficients icps_coefficients(int M, double eta) {
  check_cutoff(M);
  check_eta(eta);

  IcpsCoefficients coeffs;
  coeffs.log_weights.assign(M + 1, 0.0);
  coeffs.d.assign(M + 1, 0.0);

  if (eta == 0.0) {
    // All eigenvalues collapse to 0 and the state degenerates to the vacuum.
    for (int n = 1; n <= M; ++n) coeffs.log_weights[n] = -kInf;
    coeffs.d[0] = 1.0;
    coeffs.c0 = 1.0;
    coeffs.rho_modulus = 0.0;
    return coeffs;
  }

  if (eta == 1.0) {
    // Equal weights: the phase-state endpoint. log_weights stay 0.
    const double amp = 1.0 / std::sqrt(static_cast<double>(M + 1));
    coeffs.d.assign(M + 1, amp);
    coeffs.c0 = amp;
    coeffs.rho_modulus = 1.0;
    return coeffs;
  }

  const std::vector<double> lff = log_f_factorial_table(M, eta);
  const double log_rho_pow = 0.5 * std::log(eta) + lff[M];  // log of rho_modulus^{M+1}
  coeffs.rho_modulus = std::exp(log_rho_pow / (M + 1));

  double shift = -kInf;
  for (int n = 0; n <= M; ++n) {
    coeffs.log_weights[n] = static_cast<double>(n) / (M + 1) * log_rho_pow - lff[n];
    shift = std::max(shift, coeffs.log_weights[n]);
  }

  double sum_sq = 0.0;
  for (int n = 0; n <= M; ++n) {
    coeffs.d[n] = std::exp(coeffs.log_weights[n] - shift);
    sum_sq += coeffs.d[n] * coeffs.d[n];
  }
  const double inv_norm = 1.0 / std::sqrt(sum_sq);
  for (int n = 0; n <= M; ++n) coeffs.d[n] *= inv_norm;
  coeffs.c0 = coeffs.d[0];
  return coeffs;
}

IcpsEigenvalue icps_eigenvalue(const IcpsParams& params) {
  params.validate();
  if (params.eta == 0.0) return {Complex(0.0, 0.0), true};
  const IcpsCoefficients coeffs = icps_coefficients(params.cutoff, params.eta);
  return {std::polar(coeffs.rho_modulus, params.theta_m()), false};
}

fock::LinearOperator icps_operator(int M, double eta, double theta0) {
  check_cutoff(M);
  check_eta(eta);
  const fock::Matrix e = fock::exp_phase(M + 1, theta0).entries;
  const fock::Matrix j = fock::j_plus(M).entries;
  return {std::sqrt(eta) * e + std::sqrt(1.0 - eta) * j};
}

FockVector icps_state(const IcpsParams& params) {
  params.validate();
  const IcpsCoefficients coeffs = icps_coefficients(params.cutoff, params.eta);
  const double theta = params.theta_m();
  fock::Vector amps(params.cutoff + 1);
  for (int n = 0; n <= params.cutoff; ++n) amps(n) = std::polar(coeffs.d[n], n * theta);
  return {std::move(amps)};
}

FockVector icps_via_displacement(const IcpsParams& params) {
  params.validate();
  if (params.eta == 0.0)
    throw std::invalid_argument("icps_via_displacement: series collapses at eta = 0; use icps_state");

  const int M = params.cutoff;
  const IcpsEigenvalue rho = icps_eigenvalue(params);

  // x = rho * diag(sqrt(n)/F(n)) a^dag, a pure raising ladder.
  fock::Matrix ladder = fock::creation(M + 1).entries;
  for (int n = 1; n <= M; ++n)
    ladder.row(n) *= rho.value * std::sqrt(static_cast<double>(n)) / f_weight(n, M, params.eta);
  const fock::LinearOperator x{std::move(ladder)};

  FockVector term{fock::Vector::Zero(M + 1)};
  term.amps(0) = 1.0;
  fock::Vector acc = term.amps;
  for (int k = 1; k <= M; ++k) {
    term = x.apply(term);
    term.amps /= static_cast<double>(k);
    acc += term.amps;
  }
  acc /= acc.norm();  // positive rescale: this is C0 of the series prefactor
  return {std::move(acc)};
}

FockVector pb_phase_state(int M, int m, double theta0) {
  if (M < 0) throw std::invalid_argument("pb_phase_state: M must be >= 0");
  if (m < 0 || m > M)
    throw std::invalid_argument("pb_phase_state: m must lie in [0," + std::to_string(M) +
                                "], got " + std::to_string(m));
  const double theta = 2.0 * kPi * m / (M + 1) + theta0;
  const double amp = 1.0 / std::sqrt(static_cast<double>(M + 1));
  fock::Vector amps(M + 1);
  for (int n = 0; n <= M; ++n) amps(n) = std::polar(amp, n * theta);
  return {std::move(amps)};
}

FockVector binomial_state(int M, double eta) {
  if (M < 0) throw std::invalid_argument("binomial_state: M must be >= 0");
  check_eta(eta);
  fock::Vector amps = fock::Vector::Zero(M + 1);
  if (eta == 0.0) {
    amps(0) = 1.0;
  } else if (eta == 1.0) {
    amps(M) = 1.0;
  } else {
    const double log_eta = std::log(eta), log_comp = std::log1p(-eta);
    const double lgM = std::lgamma(M + 1.0);
    for (int n = 0; n <= M; ++n) {
      const double log_binom = lgM - std::lgamma(n + 1.0) - std::lgamma(M - n + 1.0);
      amps(n) = std::exp(0.5 * (log_binom + n * log_eta + (M - n) * log_comp));
    }
  }
  return {std::move(amps)};
}

TruncatedCoherent coherent_state_truncated(Complex amplitude, int dim) {
  if (dim < 1) throw std::invalid_argument("coherent_state_truncated: dim must be >= 1");

  const double mod = std::abs(amplitude);
  if (mod == 0.0) {
    fock::Vector amps = fock::Vector::Zero(dim);
    amps(0) = 1.0;
    return {{std::move(amps)}, 0.0};
  }

  const double mu = mod * mod;  // Poisson mean of the photon number
  const double log_mod = std::log(mod);
  const double phase = std::arg(amplitude);

  std::vector<double> log_mag(dim);
  double shift = -kInf;
  for (int n = 0; n < dim; ++n) {
    log_mag[n] = -0.5 * mu + n * log_mod - 0.5 * std::lgamma(n + 1.0);
    shift = std::max(shift, log_mag[n]);
  }

  double head = 0.0;
  fock::Vector amps(dim);
  for (int n = 0; n < dim; ++n) {
    const double mag = std::exp(log_mag[n] - shift);
    head += mag * mag;
    amps(n) = std::polar(mag, n * phase);
  }
  amps /= std::sqrt(head);

  // Upper-tail Poisson mass sum_{n >= dim} e^{-mu} mu^n / n!, accumulated
  // forward so values far below 1 ulp of 1 are still resolved.
  double tail = 0.0;
  double term = std::exp(-mu + dim * std::log(mu) - std::lgamma(dim + 1.0));
  for (int n = dim; term > 0.0; ++n) {
    tail += term;
    if (n > mu && term < tail * 1e-18) break;
    if (n > dim + 1000000) break;
    term *= mu / (n + 1);
  }
  return {{std::move(amps)}, tail};
}

IcpsParams time_evolve(const IcpsParams& params, double omega, double t) {
  params.validate();
  double theta = std::fmod(params.theta0 - omega * t, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  IcpsParams evolved = params;
  evolved.theta0 = theta;
  return evolved;
}

}  // namespace icps::states
