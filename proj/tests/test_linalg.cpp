#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "magdde/errors.hpp"
#include "magdde/linalg.hpp"

using namespace magdde;

namespace {

Matrix random_matrix(int n, double norm1, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m * (norm1 / m.cwiseAbs().colwise().sum().maxCoeff());
}

double rel_err(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("expm of simple matrices") {
  CHECK(linalg::expm(Matrix::Zero(4, 4)) == Matrix::Identity(4, 4));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.7;
  d(1, 1) = -3.2;
  const Matrix e = linalg::expm(d);
  CHECK(std::abs(e(0, 0) / std::exp(0.7) - 1.0) <= 1e-15);
  CHECK(std::abs(e(1, 1) / std::exp(-3.2) - 1.0) <= 1e-15);
  CHECK(e(0, 1) == 0.0);

  Matrix n = Matrix::Zero(2, 2);
  n(0, 1) = 1.0;
  const Matrix en = linalg::expm(n);
  CHECK(en(0, 0) == 1.0);
  CHECK(en(0, 1) == 1.0);
  CHECK(en(1, 0) == 0.0);
  CHECK(en(1, 1) == 1.0);
}

TEST_CASE("expm rejects bad input") {
  CHECK_THROWS_AS(linalg::expm(Matrix::Zero(2, 3)), std::invalid_argument);
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(linalg::expm(m), std::invalid_argument);
  m(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(linalg::expm(m), std::invalid_argument);
}

TEST_CASE("expm scaling identity") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix m = random_matrix(10, 1.0, seed);
    const Matrix half = linalg::expm(0.5 * m);
    CHECK(rel_err(linalg::expm(m), half * half) <= 1e-13);
  }
}

TEST_CASE("expm times expm of the negative is the identity") {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const double norm = 0.5 + static_cast<double>(seed - 10);  // up to 9.5
    const Matrix m = random_matrix(8, norm, seed);
    CHECK((linalg::expm(m) * linalg::expm(-m) - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("expm agrees with an independent Pade implementation") {
  for (double norm : {1e-6, 1e-3, 0.1, 1.0, 5.0, 30.0, 200.0}) {
    const Matrix m = random_matrix(12, norm, static_cast<std::uint64_t>(norm * 1000) + 7);
    const Matrix oracle = m.exp();
    CHECK(rel_err(linalg::expm(m), oracle) <= 1e-12);
  }
}

TEST_CASE("expm plan follows the theta table") {
  CHECK(linalg::expm_plan(0.0).degree == 1);
  CHECK(linalg::expm_plan(0.0).squarings == 0);
  CHECK(linalg::expm_plan(1e-5).degree == 4);
  CHECK(linalg::expm_plan(0.2).degree == 12);
  CHECK(linalg::expm_plan(1.0).degree == 18);
  CHECK(linalg::expm_plan(1.0).squarings == 0);
  const auto big = linalg::expm_plan(1000.0);
  CHECK(big.degree == 18);
  CHECK(big.squarings == static_cast<int>(std::ceil(std::log2(1000.0 / linalg::kTaylorStages[5].theta))));
}

TEST_CASE("expm keeps the collocation block pattern") {
  // Leading d rows nonzero only in the first d columns, as in the
  // quasilinear coefficient matrix.
  const int d = 3, n = 15;
  Matrix m = random_matrix(n, 4.0, 99);
  m.topRightCorner(d, n - d).setZero();
  const Matrix e = linalg::expm(m);
  CHECK(e.topRightCorner(d, n - d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("expm action matches the full exponential") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (double norm : {0.0, 1e-8, 0.3, 2.0, 40.0, 500.0}) {
    const Matrix m = random_matrix(20, norm, 31);
    Vector v(20);
    for (auto& x : v) x = g(rng);
    const Vector full = linalg::expm(m) * v;
    const Vector act = linalg::expm_action(m, v);
    CHECK((act - full).norm() <= 1e-12 * std::max(1.0, full.norm()));
  }
}

TEST_CASE("commutator identities") {
  const Matrix a = random_matrix(5, 2.0, 1);
  const Matrix b = random_matrix(5, 2.0, 2);
  CHECK(linalg::commutator(a, a).cwiseAbs().maxCoeff() == 0.0);
  CHECK(linalg::commutator(Matrix::Identity(5, 5), b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((linalg::commutator(a, b) + linalg::commutator(b, a)).cwiseAbs().maxCoeff() == 0.0);

  Matrix e = Matrix::Zero(2, 2), f = Matrix::Zero(2, 2);
  e(0, 1) = 1.0;
  f(1, 0) = 1.0;
  const Matrix h = linalg::commutator(e, f);
  CHECK(h(0, 0) == 1.0);
  CHECK(h(1, 1) == -1.0);
  CHECK(h(0, 1) == 0.0);
  CHECK(h(1, 0) == 0.0);
  CHECK_THROWS_AS(linalg::commutator(a, Matrix::Zero(4, 4)), std::invalid_argument);
}

TEST_CASE("eigenvalues sorted by modulus then real then imaginary part") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 1;
  d(2, 2) = 2;
  const auto ev = linalg::eigenvalues(d);
  REQUIRE(ev.size() == 3);
  CHECK(ev[0].real() == doctest::Approx(3.0));
  CHECK(ev[1].real() == doctest::Approx(2.0));
  CHECK(ev[2].real() == doctest::Approx(1.0));

  Matrix r = Matrix::Zero(2, 2);
  r(0, 1) = -1;
  r(1, 0) = 1;
  const auto rot = linalg::eigenvalues(r);
  CHECK(std::abs(rot[0] - std::complex<double>(0, 1)) <= 1e-15);
  CHECK(std::abs(rot[1] - std::complex<double>(0, -1)) <= 1e-15);

  // Companion matrix of (x-1)(x-2)(x-3).
  Matrix c = Matrix::Zero(3, 3);
  c(0, 0) = 6;
  c(0, 1) = -11;
  c(0, 2) = 6;
  c(1, 0) = 1;
  c(2, 1) = 1;
  const auto roots = linalg::eigenvalues(c);
  CHECK(std::abs(roots[0] - 3.0) <= 1e-12);
  CHECK(std::abs(roots[1] - 2.0) <= 1e-12);
  CHECK(std::abs(roots[2] - 1.0) <= 1e-12);
}

TEST_CASE("sort breaks modulus ties deterministically") {
  ComplexSpectrum v{{-1, 0}, {0, -1}, {1, 0}, {0, 1}, {0.6, -0.8}, {0.6, 0.8}};
  linalg::sort_spectrum(v);
  const ComplexSpectrum expected{{1, 0}, {0.6, 0.8}, {0.6, -0.8}, {0, 1}, {0, -1}, {-1, 0}};
  CHECK(v == expected);
}

TEST_CASE("eigenvalues agree with trace and determinant") {
  for (int n = 2; n <= 12; ++n) {
    const Matrix m = random_matrix(n, 3.0, 100 + n);
    const auto ev = linalg::eigenvalues(m);
    REQUIRE(static_cast<int>(ev.size()) == n);
    std::complex<double> sum = 0.0, prod = 1.0;
    for (const auto& z : ev) {
      sum += z;
      prod *= z;
    }
    const double det = m.partialPivLu().determinant();
    CHECK(std::abs(sum - m.trace()) <= 1e-10 * m.norm());
    CHECK(std::abs(prod.imag()) <= 1e-8 * std::abs(det));
    CHECK(std::abs(prod.real() - det) <= 1e-8 * std::abs(det));
  }
}

TEST_CASE("eigenvalues reject non-square input") {
  CHECK_THROWS_AS(linalg::eigenvalues(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("norm estimate bounds the spectral norm") {
  const Matrix m = random_matrix(9, 4.0, 8);
  const double two = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
  CHECK(linalg::norm2_estimate(m) >= two * (1 - 1e-14));
}
