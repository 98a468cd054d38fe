#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace icps::fock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kNormTol = 1e-12;

// Largest dimension accepted by the dense eigendecomposition oracle. All
// desk-scale cross-checks use M <= 40, so (M+1) <= 64 is plenty.
inline constexpr int kEigMaxDim = 64;

// State vector on the truncated Fock space spanned by |0>..|M>. amps[n] is
// the amplitude of |n>.
struct FockVector {
  Vector amps;

  int dim() const { return static_cast<int>(amps.size()); }
  int max_number() const { return dim() - 1; }  // the cutoff M
  double norm() const { return amps.norm(); }
  bool is_normalized(double tol = kNormTol) const;
};

// <a|b>, conjugate-linear in the first argument.
Complex inner(const FockVector& a, const FockVector& b);

// Dense complex square matrix acting on a FockVector of matching dimension.
struct LinearOperator {
  Matrix entries;

  int dim() const { return static_cast<int>(entries.rows()); }
  LinearOperator adjoint() const { return {entries.adjoint()}; }
  FockVector apply(const FockVector& psi) const;
};

struct EigenPair {
  Complex value;
  FockVector vector;  // unit norm
  double residual;    // ||A v - value v||_2, recomputed, never assumed
};

// Ladder and field operators on the (dim)-dimensional truncated space.
// a|n> = sqrt(n)|n-1>; the builders are exact up to representation of the
// real square roots.
LinearOperator annihilation(int dim);
LinearOperator creation(int dim);
LinearOperator number_op(int dim);

// Unitary exponential phase operator: |n> -> |n-1> for n > 0, and the cyclic
// wrap |0> -> e^{i dim theta0}|dim-1>.
LinearOperator exp_phase(int dim, double theta0);

// su(2) raising operator sqrt(M-N) a on the (M+1)-dimensional space:
// |n> -> sqrt(n(M-n+1))|n-1>. M >= 1; the M = 0 operator is degenerate and
// rejected.
LinearOperator j_plus(int M);
LinearOperator j_minus(int M);  // adjoint of j_plus; exposed for completeness

// x = (a^dag + a)/sqrt(2), p = i(a^dag - a)/sqrt(2). Hermitian by
// construction with no rounding in the symmetrization.
LinearOperator quadrature_x(int dim);
LinearOperator quadrature_p(int dim);

// <psi|A|psi>. psi is expected normalized; dimensions must match.
Complex expectation(const LinearOperator& op, const FockVector& psi);

// Full eigendecomposition of a small dense complex matrix, used as the
// brute-force oracle against closed-form spectra. Pairs are returned sorted
// by eigenvalue phase angle in [0, 2pi), then modulus (stable, so ties keep
// the solver's order). Every returned residual is checked against
// 1e-9 * ||A||_F; a convergence failure or residual violation throws rather
// than returning silent garbage.
std::vector<EigenPair> dense_eig(const LinearOperator& op);

}  // namespace icps::fock
