#pragma once

#include <optional>
#include <vector>

#include "icps/states.hpp"

namespace icps::analysis {

using states::IcpsParams;

// <N> below this is treated as the vacuum, where Mandel's ratio is 0/0 and
// the statistics are Poissonian by convention.
inline constexpr double kVacuumMeanTol = 1e-12;

// Margin on the 1/2 vacuum-variance boundary when flagging squeezing.
inline constexpr double kSqueezeTol = 1e-12;

// Allowed disagreement between the closed-form moment sums and the operator
// matrix route; anything larger signals a transcription bug in one of them.
inline constexpr double kMomentConsistencyTol = 1e-11;

struct MomentReport {
  double mean_n = 0.0;   // <N>
  double mean_n2 = 0.0;  // <N^2>
  double q = 0.0;        // (<N^2> - <N>^2)/<N> - 1, or 0 when vacuum_flag
  bool vacuum_flag = false;
};

struct QuadratureReport {
  double var_x = 0.5;
  double var_p = 0.5;
  double theta_m = 0.0;
  bool squeezed_x = false;  // var_x < 1/2 - kSqueezeTol
  bool squeezed_p = false;
};

// Photon statistics of every branch with the given (M, eta); the branch
// index and theta0 never enter, which is what makes Q branch-independent.
MomentReport mandel_q(int M, double eta);

// Same moments via expectation values of the N and N^2 matrices on the
// constructed state; the independent route used by the verification suites.
MomentReport moments_via_operators(const IcpsParams& params);

// Quadrature variances evaluated twice -- once from the closed-form sums
// over the amplitude profile, once from quadrature matrices on a
// zero-padded space (padding keeps a a^dag intact on the support of the
// state) -- and cross-checked within tol before the closed-form values are
// returned. Throws consistency_error on disagreement.
QuadratureReport quadrature_variances(const IcpsParams& params,
                                      double tol = kMomentConsistencyTol);

// The two routes individually, for tests and verification sweeps.
QuadratureReport quadrature_variances_closed(const IcpsParams& params);
QuadratureReport quadrature_variances_matrix(const IcpsParams& params);

struct QScanRow {
  int cutoff;
  double eta;
  double q;
  bool vacuum_flag;
};

// Q over a (M, eta) grid, cutoff outer / eta inner, deterministic order.
std::vector<QScanRow> q_scan(const std::vector<int>& cutoffs, const std::vector<double>& eta_grid);

// var_x over an (eta, theta_m) grid for one cutoff, plus the squeezing
// boundary eta0 per theta column: the largest eta with var_x < 1/2,
// linearly interpolated between grid points (empty when the column is never
// squeezed; the top grid value when squeezing persists at the grid edge).
struct VarianceSurface {
  int cutoff = 0;
  std::vector<double> etas;
  std::vector<double> thetas;
  std::vector<double> var_x;  // row-major: var_x[i*thetas.size() + j] at (etas[i], thetas[j])
  std::vector<double> var_p;
  std::vector<std::optional<double>> eta0;  // one per theta column

  double at(std::size_t eta_idx, std::size_t theta_idx) const {
    return var_x[eta_idx * thetas.size() + theta_idx];
  }
};

VarianceSurface variance_surface(int M, const std::vector<double>& eta_grid,
                                 const std::vector<double>& theta_grid,
                                 double tol = kMomentConsistencyTol);

// Refined squeezing boundary at a fixed theta_m: coarse 0.01 grid, then
// bisection to width 1e-8. Empty when var_x never dips below 1/2.
std::optional<double> squeezing_boundary(int M, double theta);

// Coherent-limit probe: for each cutoff, eta is chosen self-consistently so
// that rho_modulus = lam sqrt(M), and the overlap with the truncated
// coherent state of amplitude lam e^{i theta0} is recorded. Entries whose
// implied eta falls outside (0,1) are marked skipped, never dropped.
struct CoherentLimitSpec {
  double lam = 1.0;  // target coherent amplitude modulus, > 0
  double theta0 = 0.0;
  std::vector<int> cutoffs;
  // filled by coherent_limit_probe, aligned 1:1 with cutoffs:
  std::vector<double> fidelities;
  std::vector<double> etas;
  std::vector<bool> skipped;
};

CoherentLimitSpec coherent_limit_probe(CoherentLimitSpec spec);

// ((M+1)!)^{1/(M+1)} / (M+1), evaluated through log-gamma. Tends to 1/e;
// reported by the limits scan alongside the coherent-limit fidelities.
double factorial_root_ratio(int M);

// || (sqrt(eta) N + sqrt(1-eta) J^+) psi - sqrt(eta) M psi ||_2 for the
// binomial state psi, the ladder identity those states satisfy.
double binomial_ladder_check(int M, double eta);

}  // namespace icps::analysis
