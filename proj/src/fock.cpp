#include "icps/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "icps/errors.hpp"

namespace icps::fock {

namespace {

void require_dim(int dim) {
  if (dim < 1) throw std::invalid_argument("operator dimension must be >= 1, got " + std::to_string(dim));
}

}  // namespace

bool FockVector::is_normalized(double tol) const {
  return std::abs(amps.squaredNorm() - 1.0) <= tol;
}

Complex inner(const FockVector& a, const FockVector& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("inner: dimension mismatch " + std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
  return a.amps.dot(b.amps);
}

FockVector LinearOperator::apply(const FockVector& psi) const {
  if (psi.dim() != dim())
    throw std::invalid_argument("apply: dimension mismatch " + std::to_string(psi.dim()) + " vs " +
                                std::to_string(dim()));
  return {entries * psi.amps};
}

LinearOperator annihilation(int dim) {
  require_dim(dim);
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {std::move(a)};
}

LinearOperator creation(int dim) { return annihilation(dim).adjoint(); }

LinearOperator number_op(int dim) {
  require_dim(dim);
  Matrix n = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return {std::move(n)};
}

LinearOperator exp_phase(int dim, double theta0) {
  require_dim(dim);
  Matrix e = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) e(n - 1, n) = 1.0;
  e(dim - 1, 0) = std::polar(1.0, dim * theta0);
  return {std::move(e)};
}

LinearOperator j_plus(int M) {
  if (M < 1) throw std::invalid_argument("j_plus: M must be >= 1, got " + std::to_string(M));
  Matrix j = Matrix::Zero(M + 1, M + 1);
  for (int n = 1; n <= M; ++n) j(n - 1, n) = std::sqrt(static_cast<double>(n) * (M - n + 1));
  return {std::move(j)};
}

LinearOperator j_minus(int M) { return j_plus(M).adjoint(); }

LinearOperator quadrature_x(int dim) {
  const double s = 1.0 / std::numbers::sqrt2;
  LinearOperator a = annihilation(dim);
  return {s * (a.entries.adjoint() + a.entries)};
}

LinearOperator quadrature_p(int dim) {
  const Complex is(0.0, 1.0 / std::numbers::sqrt2);
  LinearOperator a = annihilation(dim);
  return {is * (a.entries.adjoint() - a.entries)};
}

Complex expectation(const LinearOperator& op, const FockVector& psi) {
  if (psi.dim() != op.dim())
    throw std::invalid_argument("expectation: dimension mismatch " + std::to_string(psi.dim()) +
                                " vs " + std::to_string(op.dim()));
  return psi.amps.dot(op.entries * psi.amps);
}

std::vector<EigenPair> dense_eig(const LinearOperator& op) {
  const int d = op.dim();
  require_dim(d);
  if (d > kEigMaxDim)
    throw std::invalid_argument("dense_eig: dim " + std::to_string(d) + " exceeds oracle cap " +
                                std::to_string(kEigMaxDim));

  Eigen::ComplexEigenSolver<Matrix> solver(op.entries, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw consistency_error("dense_eig: QR iteration did not converge for dim " + std::to_string(d));

  const double residual_bound = 1e-9 * op.entries.norm();  // Frobenius norm

  std::vector<EigenPair> pairs;
  pairs.reserve(d);
  for (int k = 0; k < d; ++k) {
    Vector v = solver.eigenvectors().col(k);
    v /= v.norm();
    const Complex lambda = solver.eigenvalues()(k);
    const double residual = (op.entries * v - lambda * v).norm();
    if (residual > residual_bound) {
      std::ostringstream os;
      os << "dense_eig: residual " << residual << " exceeds bound " << residual_bound;
      throw consistency_error(os.str());
    }
    pairs.push_back({lambda, {std::move(v)}, residual});
  }

  auto phase_key = [](const Complex& z) {
    double a = std::arg(z);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    return a;
  };
  std::stable_sort(pairs.begin(), pairs.end(), [&](const EigenPair& lhs, const EigenPair& rhs) {
    const double pl = phase_key(lhs.value), pr = phase_key(rhs.value);
    if (pl != pr) return pl < pr;
    return std::abs(lhs.value) < std::abs(rhs.value);
  });
  return pairs;
}

}  // namespace icps::fock
