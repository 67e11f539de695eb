#include "magdde/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "magdde/errors.hpp"

namespace magdde::linalg {

namespace {

// Paterson–Stockmeyer evaluation of sum_{k=0}^{degree} x^k / k!.
Matrix taylor_polynomial(const Matrix& x, int degree) {
  const Eigen::Index n = x.rows();
  std::vector<double> coeff(degree + 1);
  coeff[0] = 1.0;
  for (int k = 1; k <= degree; ++k) coeff[k] = coeff[k - 1] / k;

  const int block = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(degree)))));
  std::vector<Matrix> powers;  // powers[k] = x^k, k = 0..block
  powers.reserve(block + 1);
  powers.push_back(Matrix::Identity(n, n));
  powers.push_back(x);
  for (int k = 2; k <= block; ++k) powers.push_back(powers[k - 1] * x);

  auto chunk = [&](int first, int last) {
    Matrix acc = Matrix::Zero(n, n);
    for (int k = first; k <= last; ++k) acc.noalias() += coeff[k] * powers[k - first];
    return acc;
  };

  // Highest chunk first; the top chunk may hold up to `block` powers.
  int top = (degree / block) * block;
  Matrix result = chunk(top, degree);
  for (int start = top - block; start >= 0; start -= block) {
    Matrix next = chunk(start, start + block - 1);
    next.noalias() += result * powers[block];
    result = std::move(next);
  }
  return result;
}

// Backward-error thresholds theta_m, m = 1..55, for the truncated Taylor
// series at unit round-off 2^-53.
constexpr double kActionThetas[] = {
    2.220446049250313e-16, 2.580956802971767e-08, 1.386347866119121e-05, 3.397168839976962e-04,
    2.400876357887274e-03, 9.065656407595102e-03, 2.384455532500274e-02, 4.991228871115323e-02,
    8.957760203223343e-02, 1.441829761614378e-01, 2.142358068451711e-01, 2.996158913811580e-01,
    3.997775336316795e-01, 5.139146936124294e-01, 6.410835233041199e-01, 7.802874256626574e-01,
    9.305328460786568e-01, 1.090863719290036e+00, 1.260381060642639e+00, 1.438252596804337e+00,
    1.623715950235821e+00, 1.816077816215086e+00, 2.014710780944616e+00, 2.219048869365090e+00,
    2.428582524442826e+00, 2.642853457459435e+00, 2.861449633934264e+00, 3.084000544989162e+00,
    3.310172839890271e+00, 3.539666348743689e+00, 3.772210495681751e+00, 4.007561086118040e+00,
    4.245497442579696e+00, 4.485819859447368e+00, 4.728347345793539e+00, 4.972915626191982e+00,
    5.219375371084058e+00, 5.467590630524544e+00, 5.717437447572013e+00, 5.968802630041849e+00,
    6.221582661689891e+00, 6.475682736079984e+00, 6.731015898381024e+00, 6.987502282130630e+00,
    7.245068429597951e+00, 7.503646685788864e+00, 7.763174657377987e+00, 8.023594728939980e+00,
    8.284853629803917e+00, 8.546902045684933e+00, 8.809694269971322e+00, 9.073187890176145e+00,
    9.337343505612013e+00, 9.602124472826556e+00, 9.867496675753401e+00,
};

int spectrum_order(const std::complex<double>& a, const std::complex<double>& b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma > mb ? -1 : 1;
  if (a.real() != b.real()) return a.real() > b.real() ? -1 : 1;
  if (a.imag() != b.imag()) return a.imag() > b.imag() ? -1 : 1;
  return 0;
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }

double norm2_estimate(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const double n1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = m.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * ninf);
}

ExpmPlan expm_plan(double norm1) {
  for (const auto& stage : kTaylorStages) {
    if (norm1 <= stage.theta) return {stage.degree, 0};
  }
  const auto& last = kTaylorStages[std::size(kTaylorStages) - 1];
  const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / last.theta))));
  return {last.degree, s};
}

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("expm: matrix must be square, got " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
  if (!m.allFinite()) throw std::invalid_argument("expm: matrix has non-finite entries");
  const Eigen::Index n = m.rows();
  if (n == 0) return Matrix(0, 0);

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return Matrix::Identity(n, n);

  const ExpmPlan plan = expm_plan(norm1);
  Matrix scaled = m;
  if (plan.squarings > 0) scaled *= std::ldexp(1.0, -plan.squarings);
  Matrix result = taylor_polynomial(scaled, plan.degree);
  for (int i = 0; i < plan.squarings; ++i) result = result * result;
  return result;
}

Vector expm_action(const Matrix& m, const Vector& v) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm_action: matrix must be square");
  if (v.size() != m.cols()) throw std::invalid_argument("expm_action: vector length does not match matrix");
  if (!m.allFinite() || !v.allFinite()) throw std::invalid_argument("expm_action: non-finite input");
  const double norm1 = m.size() == 0 ? 0.0 : m.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 == 0.0) return v;

  int degree = 0;
  long steps = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= static_cast<int>(std::size(kActionThetas)); ++k) {
    const double s = std::max(1.0, std::ceil(norm1 / kActionThetas[k - 1]));
    if (k * s < best_cost) {
      best_cost = k * s;
      degree = k;
      steps = static_cast<long>(s);
    }
  }

  // Past this many matrix-vector products, forming exp(M) is cheaper (and
  // keeps the work bounded for huge norms).
  const double dense_cost = static_cast<double>(expm_plan(norm1).squarings + 6) * static_cast<double>(m.rows());
  if (best_cost > dense_cost) return expm(m) * v;

  const double tol = std::ldexp(1.0, -53);
  Vector f = v;
  Vector b = v;
  for (long i = 0; i < steps; ++i) {
    double previous = b.lpNorm<Eigen::Infinity>();
    for (int k = 1; k <= degree; ++k) {
      b = (m * b) / (static_cast<double>(steps) * k);
      const double current = b.lpNorm<Eigen::Infinity>();
      f += b;
      if (previous + current <= tol * f.lpNorm<Eigen::Infinity>()) break;
      previous = current;
    }
    b = f;
  }
  return f;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("commutator: operands must be square of equal dimension");
  }
  Matrix out = a * b;
  out.noalias() -= b * a;
  return out;
}

void sort_spectrum(ComplexSpectrum& values) {
  std::stable_sort(values.begin(), values.end(),
                   [](const auto& a, const auto& b) { return spectrum_order(a, b) < 0; });
}

ComplexSpectrum eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (!m.allFinite()) throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  if (m.rows() == 0) return {};

  Eigen::EigenSolver<Matrix> solver;
  solver.setMaxIterations(40 * static_cast<Eigen::Index>(m.rows()));
  solver.compute(m, /*computeEigenvectors=*/false);
  const auto& raw = solver.eigenvalues();
  ComplexSpectrum values(raw.data(), raw.data() + raw.size());
  if (solver.info() != Eigen::Success) {
    throw NumericalFailure("eigenvalues: QR iteration did not converge within " +
                               std::to_string(40 * m.rows()) + " iterations",
                           std::move(values));
  }
  sort_spectrum(values);
  return values;
}

}  // namespace magdde::linalg
