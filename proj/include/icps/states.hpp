#pragma once

#include <vector>

#include "icps/fock.hpp"

namespace icps::states {

using fock::Complex;
using fock::FockVector;

// Parameters identifying one intermediate coherent-phase state: Fock cutoff
// M >= 1, interpolation parameter eta in [0,1], branch index m in [0,M]
// selecting one of the M+1 eigenvalue branches, and reference phase theta0.
struct IcpsParams {
  int cutoff = 1;       // M
  double eta = 1.0;
  int branch = 0;       // m
  double theta0 = 0.0;  // radians, stored unreduced

  // Branch phase theta_m = 2 pi m/(M+1) + theta0.
  double theta_m() const;
  void validate() const;  // throws std::invalid_argument on any violated bound
};

// Positive recursion weight F(n) = sqrt(1-eta) sqrt(n(M-n+1)) + sqrt(eta),
// 1 <= n <= M.
double f_weight(int n, int M, double eta);

// log of the running product F(n)F(n-1)...F(1), with the empty product
// (n = 0) equal to 0. Log domain keeps the library correct far beyond the
// M ~ 150 where the raw product overflows a double.
double log_f_factorial(int n, int M, double eta);

// Amplitude profile of an ICPS, independent of the branch index.
//   log_weights[n] = log[(sqrt(eta) F(M)!)^{n/(M+1)} / F(n)!]
//   d[n]           = c0 * exp(log_weights[n]), normalized: sum d[n]^2 = 1
//   c0             = the n = 0 amplitude (positive root convention)
//   rho_modulus    = (sqrt(eta) F(M)!)^{1/(M+1)}, the common eigenvalue
//                    modulus of all M+1 branches
// At eta = 0 the profile collapses to the vacuum: d = (1,0,...,0),
// rho_modulus = 0 and log_weights[n>0] = -infinity.
struct IcpsCoefficients {
  std::vector<double> log_weights;
  std::vector<double> d;
  double c0 = 1.0;
  double rho_modulus = 0.0;
};

IcpsCoefficients icps_coefficients(int M, double eta);

// Eigenvalue rho_m = rho_modulus e^{i theta_m} of the branch selected by
// params. At eta = 0 all branches collapse to 0 and `degenerate` is set.
struct IcpsEigenvalue {
  Complex value;
  bool degenerate = false;
};

IcpsEigenvalue icps_eigenvalue(const IcpsParams& params);

// The defining operator sqrt(eta) e^{i Phi} + sqrt(1-eta) J_M^+ whose
// eigenvectors the ICPS are.
fock::LinearOperator icps_operator(int M, double eta, double theta0);

// Recursion-form constructor: amps[n] = d[n] e^{i n theta_m}. amps[0] is
// real positive; normalized within 1e-12.
FockVector icps_state(const IcpsParams& params);

// Independent construction route: the truncated displacement series
// sum_{k=0}^{M} x^k/k! |0>, where one application of x maps
// |n-1> -> rho_m (n/F(n)) |n>, followed by a positive rescale to unit norm.
// Evaluated in the linear domain with actual operator applications, so it
// shares no code path with icps_state; the two must agree elementwise within
// 1e-12. Rejects eta = 0, where the series collapses (use icps_state).
FockVector icps_via_displacement(const IcpsParams& params);

// Equal-weight phase state: amps[n] = e^{i n theta_m}/sqrt(M+1). M >= 0.
FockVector pb_phase_state(int M, int m, double theta0);

// Binomial state: amps[n] = sqrt(binom(M,n) eta^n (1-eta)^{M-n}), real and
// nonnegative, evaluated through log-gamma. M >= 0.
FockVector binomial_state(int M, double eta);

// Coherent state cut at |dim-1>. The discarded upper tail is summed
// directly (term by term, no cancellation against 1) and reported before
// the kept amplitudes are renormalized.
struct TruncatedCoherent {
  FockVector state;
  double tail_mass = 0.0;
};

TruncatedCoherent coherent_state_truncated(Complex amplitude, int dim);

// Free evolution for time t at frequency omega maps a branch state onto the
// state with theta0 shifted by -omega t. The returned theta0 is reduced to
// [0, 2pi); everywhere else angles stay unreduced.
IcpsParams time_evolve(const IcpsParams& params, double omega, double t);

}  // namespace icps::states
