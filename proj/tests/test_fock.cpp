#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <doctest.h>

#include "icps/errors.hpp"
#include "icps/fock.hpp"

using namespace icps;
using fock::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& gen) { return (gen() >> 11) * 0x1.0p-53; }

}  // namespace

TEST_CASE("annihilation matrix elements") {
  CHECK_THROWS_AS(fock::annihilation(0), std::invalid_argument);

  const auto a1 = fock::annihilation(1);
  CHECK(a1.entries.norm() == 0.0);  // no lowering possible in a 1-dim space

  const auto a3 = fock::annihilation(3);
  CHECK(a3.entries(0, 1) == Complex(1.0));
  CHECK(a3.entries(1, 2) == Complex(std::sqrt(2.0)));
  CHECK(a3.entries(0, 0) == Complex(0.0));
  CHECK(a3.entries(2, 1) == Complex(0.0));

  fock::FockVector two{fock::Vector::Zero(3)};
  two.amps(2) = 1.0;
  const fock::FockVector lowered = a3.apply(two);
  CHECK(lowered.amps(0) == Complex(0.0));
  CHECK(lowered.amps(1) == Complex(std::sqrt(2.0)));
  CHECK(lowered.amps(2) == Complex(0.0));
}

TEST_CASE("creation and number relations") {
  const auto num3 = fock::number_op(3);
  CHECK(num3.entries(0, 0) == Complex(0.0));
  CHECK(num3.entries(1, 1) == Complex(1.0));
  CHECK(num3.entries(2, 2) == Complex(2.0));

  CHECK(fock::creation(2).entries(1, 0) == Complex(1.0));

  // a^dag a = N to machine precision (sqrt(n)^2 rounds off the integer by
  // a few ulps, so the bound scales with n)
  for (int dim : {1, 2, 5, 16, 64}) {
    const auto a = fock::annihilation(dim);
    const fock::Matrix lhs = a.entries.adjoint() * a.entries;
    const fock::Matrix num = fock::number_op(dim).entries;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        CHECK(std::abs(lhs(r, c) - num(r, c)) <= 4e-16 * (1.0 + std::abs(num(r, c))));
  }
}

TEST_CASE("exp_phase structure and unitarity") {
  const auto e1 = fock::exp_phase(1, 0.7);
  CHECK(std::abs(e1.entries(0, 0) - std::polar(1.0, 0.7)) < 1e-16);

  const auto e3 = fock::exp_phase(3, 0.0);
  fock::Matrix cyclic = fock::Matrix::Zero(3, 3);
  cyclic(0, 1) = 1.0;
  cyclic(1, 2) = 1.0;
  cyclic(2, 0) = 1.0;
  CHECK((e3.entries - cyclic).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 gen(12345);
  for (int dim = 1; dim <= 64; ++dim) {
    for (int rep = 0; rep < 2; ++rep) {
      const double theta0 = uniform(gen) * 2.0 * kPi;
      const auto u = fock::exp_phase(dim, theta0);
      const fock::Matrix gram = u.entries.adjoint() * u.entries;
      const double dev = (gram - fock::Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
      CHECK(dev < 1e-14);
    }
  }
}

TEST_CASE("j_plus matrix elements") {
  CHECK_THROWS_AS(fock::j_plus(0), std::invalid_argument);

  const auto j1 = fock::j_plus(1);
  CHECK(j1.entries(0, 1) == Complex(1.0));
  CHECK(j1.entries.cwiseAbs().sum() == 1.0);

  const auto j3 = fock::j_plus(3);
  CHECK(j3.entries(0, 1) == Complex(std::sqrt(3.0)));
  CHECK(j3.entries(1, 2) == Complex(2.0));
  CHECK(j3.entries(2, 3) == Complex(std::sqrt(3.0)));

  fock::FockVector vac{fock::Vector::Zero(2)};
  vac.amps(0) = 1.0;
  CHECK(fock::j_plus(1).apply(vac).amps.norm() == 0.0);

  for (int M : {1, 4})
    CHECK((fock::j_minus(M).entries - fock::j_plus(M).entries.adjoint()).cwiseAbs().maxCoeff() ==
          0.0);

  // j_plus is sqrt(M - N) composed with the annihilation ladder, up to the
  // relative rounding of the two square-root evaluations
  for (int M : {1, 2, 7, 23}) {
    fock::Matrix sqrt_gap = fock::Matrix::Zero(M + 1, M + 1);
    for (int n = 0; n <= M; ++n) sqrt_gap(n, n) = std::sqrt(static_cast<double>(M - n));
    const fock::Matrix composed = sqrt_gap * fock::annihilation(M + 1).entries;
    const fock::Matrix jp = fock::j_plus(M).entries;
    for (int r = 0; r <= M; ++r)
      for (int c = 0; c <= M; ++c)
        CHECK(std::abs(composed(r, c) - jp(r, c)) <= 1e-15 * (1.0 + std::abs(jp(r, c))));
  }
}

TEST_CASE("quadrature operators") {
  const auto x2 = fock::quadrature_x(2);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CHECK(std::abs(x2.entries(0, 1) - Complex(inv_sqrt2)) < 1e-16);
  CHECK(std::abs(x2.entries(1, 0) - Complex(inv_sqrt2)) < 1e-16);
  CHECK(x2.entries(0, 0) == Complex(0.0));

  for (int dim : {2, 3, 9}) {
    const auto x = fock::quadrature_x(dim);
    const auto p = fock::quadrature_p(dim);
    CHECK((x.entries - x.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((p.entries - p.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);

    fock::FockVector vac{fock::Vector::Zero(dim)};
    vac.amps(0) = 1.0;
    const Complex x2_vac = fock::expectation({fock::Matrix(x.entries * x.entries)}, vac);
    CHECK(std::abs(x2_vac - Complex(0.5)) < 1e-15);
  }
}

TEST_CASE("truncated commutator [x,p]") {
  for (int dim : {2, 8, 64}) {
    const auto x = fock::quadrature_x(dim);
    const auto p = fock::quadrature_p(dim);
    const fock::Matrix comm = x.entries * p.entries - p.entries * x.entries;
    const Complex i_unit(0.0, 1.0);
    for (int n = 0; n < dim - 1; ++n) CHECK(std::abs(comm(n, n) - i_unit) < 1e-13);
    // the bottom-right corner carries the truncation artifact -i*(dim-1)
    CHECK(std::abs(comm(dim - 1, dim - 1) + i_unit * (dim - 1.0)) < 1e-12);
  }
}

TEST_CASE("expectation values") {
  fock::FockVector two{fock::Vector::Zero(4)};
  two.amps(2) = 1.0;
  CHECK(std::abs(fock::expectation(fock::number_op(4), two) - Complex(2.0)) < 1e-15);

  fock::FockVector vac{fock::Vector::Zero(4)};
  vac.amps(0) = 1.0;
  CHECK(std::abs(fock::expectation(fock::quadrature_x(4), vac)) == 0.0);

  // equal-weight phase state has mean photon number M/2
  const int M = 9;
  fock::FockVector pb{fock::Vector::Constant(M + 1, Complex(1.0 / std::sqrt(M + 1.0)))};
  const Complex mean = fock::expectation(fock::number_op(M + 1), pb);
  CHECK(std::abs(mean - Complex(M / 2.0)) < 1e-13);
  CHECK(std::abs(mean.imag()) < 1e-12);

  CHECK_THROWS_AS(fock::expectation(fock::number_op(3), two), std::invalid_argument);
}

TEST_CASE("dense_eig identity and cyclic spectra") {
  CHECK_THROWS_AS(fock::dense_eig({fock::Matrix::Zero(65, 65)}), std::invalid_argument);

  const auto id_pairs = fock::dense_eig({fock::Matrix::Identity(5, 5)});
  REQUIRE(id_pairs.size() == 5);
  for (const auto& pair : id_pairs) CHECK(std::abs(pair.value - Complex(1.0)) < 1e-12);

  // eigenvalues of the theta0 = 0 cyclic shift are the 4th roots of unity
  const auto pairs = fock::dense_eig(fock::exp_phase(4, 0.0));
  REQUIRE(pairs.size() == 4);
  std::vector<Complex> expected = {Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1)};
  for (const Complex& root : expected) {
    double best = 1e9;
    for (const auto& pair : pairs) best = std::min(best, std::abs(pair.value - root));
    CHECK(best < 1e-12);
  }
}

TEST_CASE("dense_eig residual contract and ordering") {
  std::mt19937_64 gen(777);
  for (int rep = 0; rep < 8; ++rep) {
    const int dim = 2 + static_cast<int>(uniform(gen) * 30);
    fock::Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = Complex(uniform(gen) - 0.5, uniform(gen) - 0.5);

    const auto pairs = fock::dense_eig({a});
    REQUIRE(static_cast<int>(pairs.size()) == dim);

    const double bound = 1e-9 * a.norm();
    double prev_phase = -1.0;
    for (const auto& pair : pairs) {
      CHECK(pair.vector.is_normalized());
      const double recomputed = (a * pair.vector.amps - pair.value * pair.vector.amps).norm();
      CHECK(recomputed <= bound);
      CHECK(recomputed == doctest::Approx(pair.residual).epsilon(1e-9));

      double phase = std::arg(pair.value);
      if (phase < 0.0) phase += 2.0 * kPi;
      CHECK(phase >= prev_phase);
      prev_phase = phase;
    }
  }
}
