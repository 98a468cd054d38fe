#include "icps/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "icps/errors.hpp"

namespace icps::analysis {

namespace {

struct QuadSums {
  double sn = 0.0;  // sum n d_n^2
  double s1 = 0.0;  // sum sqrt(n+1) d_n d_{n+1}
  double s2 = 0.0;  // sum sqrt((n+1)(n+2)) d_n d_{n+2}
};

QuadSums quad_sums(const std::vector<double>& d) {
  const int M = static_cast<int>(d.size()) - 1;
  QuadSums s;
  for (int n = 0; n <= M; ++n) s.sn += n * d[n] * d[n];
  for (int n = 0; n + 1 <= M; ++n) s.s1 += std::sqrt(n + 1.0) * d[n] * d[n + 1];
  for (int n = 0; n + 2 <= M; ++n) s.s2 += std::sqrt((n + 1.0) * (n + 2.0)) * d[n] * d[n + 2];
  return s;
}

MomentReport report_from_moments(double mean, double mean2) {
  MomentReport r;
  r.mean_n = mean;
  r.mean_n2 = mean2;
  if (mean < kVacuumMeanTol) {
    r.vacuum_flag = true;
    r.q = 0.0;
  } else {
    r.q = (mean2 - mean * mean) / mean - 1.0;
  }
  return r;
}

std::string describe(const IcpsParams& p) {
  std::ostringstream os;
  os << "(M=" << p.cutoff << ", eta=" << p.eta << ", m=" << p.branch << ", theta0=" << p.theta0
     << ")";
  return os.str();
}

// Embed the state two levels up so a a^dag acts untruncated on its support;
// the quadrature second moments are otherwise clipped at the cutoff.
fock::FockVector padded(const fock::FockVector& psi, int pad = 2) {
  fock::Vector amps = fock::Vector::Zero(psi.dim() + pad);
  amps.head(psi.dim()) = psi.amps;
  return {std::move(amps)};
}

}  // namespace

MomentReport mandel_q(int M, double eta) {
  const states::IcpsCoefficients coeffs = states::icps_coefficients(M, eta);
  double mean = 0.0, mean2 = 0.0;
  for (int n = 0; n <= M; ++n) {
    const double p = coeffs.d[n] * coeffs.d[n];
    mean += n * p;
    mean2 += static_cast<double>(n) * n * p;
  }
  return report_from_moments(mean, mean2);
}

MomentReport moments_via_operators(const IcpsParams& params) {
  const fock::FockVector psi = states::icps_state(params);
  const fock::LinearOperator num = fock::number_op(psi.dim());
  const fock::FockVector npsi = num.apply(psi);
  const double mean = fock::inner(psi, npsi).real();
  const double mean2 = npsi.amps.squaredNorm();  // N is Hermitian: <N^2> = ||N psi||^2
  return report_from_moments(mean, mean2);
}

QuadratureReport quadrature_variances_closed(const IcpsParams& params) {
  params.validate();
  const states::IcpsCoefficients coeffs = states::icps_coefficients(params.cutoff, params.eta);
  const QuadSums s = quad_sums(coeffs.d);
  const double theta = params.theta_m();
  const double c = std::cos(theta), sn = std::sin(theta), c2 = std::cos(2.0 * theta);

  QuadratureReport r;
  r.theta_m = theta;
  r.var_x = 0.5 + s.sn + c2 * s.s2 - 2.0 * (c * s.s1) * (c * s.s1);
  r.var_p = 0.5 + s.sn - c2 * s.s2 - 2.0 * (sn * s.s1) * (sn * s.s1);
  r.squeezed_x = r.var_x < 0.5 - kSqueezeTol;
  r.squeezed_p = r.var_p < 0.5 - kSqueezeTol;
  return r;
}

QuadratureReport quadrature_variances_matrix(const IcpsParams& params) {
  params.validate();
  const fock::FockVector psi = padded(states::icps_state(params));
  const int dim = psi.dim();
  const fock::LinearOperator x = fock::quadrature_x(dim);
  const fock::LinearOperator p = fock::quadrature_p(dim);

  const fock::FockVector xpsi = x.apply(psi);
  const fock::FockVector ppsi = p.apply(psi);
  const double mean_x = fock::inner(psi, xpsi).real();
  const double mean_p = fock::inner(psi, ppsi).real();

  QuadratureReport r;
  r.theta_m = params.theta_m();
  r.var_x = xpsi.amps.squaredNorm() - mean_x * mean_x;
  r.var_p = ppsi.amps.squaredNorm() - mean_p * mean_p;
  r.squeezed_x = r.var_x < 0.5 - kSqueezeTol;
  r.squeezed_p = r.var_p < 0.5 - kSqueezeTol;
  return r;
}

QuadratureReport quadrature_variances(const IcpsParams& params, double tol) {
  const QuadratureReport closed = quadrature_variances_closed(params);
  const QuadratureReport matrix = quadrature_variances_matrix(params);
  const double dev = std::max(std::abs(closed.var_x - matrix.var_x),
                              std::abs(closed.var_p - matrix.var_p));
  if (dev > tol) {
    std::ostringstream os;
    os << "quadrature_variances: closed-form and matrix routes disagree by " << dev << " at "
       << describe(params) << " (var_x " << closed.var_x << " vs " << matrix.var_x << ", var_p "
       << closed.var_p << " vs " << matrix.var_p << ")";
    throw consistency_error(os.str());
  }
  return closed;
}

std::vector<QScanRow> q_scan(const std::vector<int>& cutoffs, const std::vector<double>& eta_grid) {
  std::vector<QScanRow> rows;
  rows.reserve(cutoffs.size() * eta_grid.size());
  for (int M : cutoffs)
    for (double eta : eta_grid) {
      const MomentReport r = mandel_q(M, eta);
      rows.push_back({M, eta, r.q, r.vacuum_flag});
    }
  return rows;
}

VarianceSurface variance_surface(int M, const std::vector<double>& eta_grid,
                                 const std::vector<double>& theta_grid, double tol) {
  if (eta_grid.empty() || theta_grid.empty())
    throw std::invalid_argument("variance_surface: grids must be nonempty");

  VarianceSurface surface;
  surface.cutoff = M;
  surface.etas = eta_grid;
  surface.thetas = theta_grid;
  surface.var_x.resize(eta_grid.size() * theta_grid.size());
  surface.var_p.resize(surface.var_x.size());

  for (std::size_t i = 0; i < eta_grid.size(); ++i)
    for (std::size_t j = 0; j < theta_grid.size(); ++j) {
      const QuadratureReport r = quadrature_variances({M, eta_grid[i], 0, theta_grid[j]}, tol);
      surface.var_x[i * theta_grid.size() + j] = r.var_x;
      surface.var_p[i * theta_grid.size() + j] = r.var_p;
    }

  surface.eta0.resize(theta_grid.size());
  for (std::size_t j = 0; j < theta_grid.size(); ++j) {
    std::optional<double> boundary;
    for (std::size_t i = eta_grid.size(); i-- > 0;) {
      if (surface.at(i, j) < 0.5) {
        if (i + 1 == eta_grid.size()) {
          boundary = eta_grid[i];  // squeezed at the top edge of the grid
        } else {
          const double v0 = surface.at(i, j), v1 = surface.at(i + 1, j);
          boundary = eta_grid[i] + (0.5 - v0) * (eta_grid[i + 1] - eta_grid[i]) / (v1 - v0);
        }
        break;
      }
    }
    surface.eta0[j] = boundary;
  }
  return surface;
}

std::optional<double> squeezing_boundary(int M, double theta) {
  auto var_at = [&](double eta) {
    return quadrature_variances_closed({M, eta, 0, theta}).var_x;
  };

  // Coarse sweep top-down for the last squeezed node, then bisect.
  constexpr double kStep = 0.01;
  int last_squeezed = -1;
  for (int i = 100; i >= 0; --i) {
    if (var_at(i * kStep) < 0.5) {
      last_squeezed = i;
      break;
    }
  }
  if (last_squeezed < 0) return std::nullopt;
  if (last_squeezed == 100) return 1.0;

  double lo = last_squeezed * kStep;        // squeezed
  double hi = (last_squeezed + 1) * kStep;  // not squeezed
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (var_at(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CoherentLimitSpec coherent_limit_probe(CoherentLimitSpec spec) {
  if (!(spec.lam > 0.0))
    throw std::invalid_argument("coherent_limit_probe: lam must be > 0");

  const std::size_t count = spec.cutoffs.size();
  spec.fidelities.assign(count, std::numeric_limits<double>::quiet_NaN());
  spec.etas.assign(count, 0.0);
  spec.skipped.assign(count, false);

  for (std::size_t k = 0; k < count; ++k) {
    const int M = spec.cutoffs[k];
    if (M < 1) throw std::invalid_argument("coherent_limit_probe: cutoffs must be >= 1");

    // Self-consistent inversion of rho_modulus(M, eta) = lam sqrt(M):
    //   (1/2) log eta = (M+1) log(lam sqrt(M)) - log F(M)!,
    // iterated because F depends weakly on eta. eta -> 0 fast with M, so the
    // half-log form avoids underflow until eta itself is subnormal.
    const double target = (M + 1) * std::log(spec.lam * std::sqrt(static_cast<double>(M)));
    double half_log_eta = target - states::log_f_factorial(M, M, 0.0);
    double eta = 0.0;
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      eta = std::exp(2.0 * half_log_eta);
      if (!(eta > 0.0) || eta >= 1.0) break;
      const double next = target - states::log_f_factorial(M, M, eta);
      if (std::abs(next - half_log_eta) < 1e-13 * std::max(1.0, std::abs(half_log_eta))) {
        half_log_eta = next;
        eta = std::exp(2.0 * half_log_eta);
        ok = eta > 0.0 && eta < 1.0;
        break;
      }
      half_log_eta = next;
    }
    if (!ok) {
      spec.skipped[k] = true;
      continue;
    }

    spec.etas[k] = eta;
    const fock::FockVector state = states::icps_state({M, eta, 0, spec.theta0});
    const states::TruncatedCoherent coh =
        states::coherent_state_truncated(std::polar(spec.lam, spec.theta0), M + 1);
    spec.fidelities[k] = std::abs(fock::inner(coh.state, state));
  }
  return spec;
}

double factorial_root_ratio(int M) {
  if (M < 0) throw std::invalid_argument("factorial_root_ratio: M must be >= 0");
  const double n = M + 1.0;
  return std::exp(std::lgamma(n + 1.0) / n) / n;
}

double binomial_ladder_check(int M, double eta) {
  if (M < 1) throw std::invalid_argument("binomial_ladder_check: M must be >= 1");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("binomial_ladder_check: eta must lie in (0,1)");

  const fock::FockVector psi = states::binomial_state(M, eta);
  const fock::Matrix op = std::sqrt(eta) * fock::number_op(M + 1).entries +
                          std::sqrt(1.0 - eta) * fock::j_plus(M).entries;
  return (op * psi.amps - std::sqrt(eta) * M * psi.amps).norm();
}

}  // namespace icps::analysis
