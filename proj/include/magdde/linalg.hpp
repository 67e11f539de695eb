#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace magdde {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Eigenvalues sorted by modulus, then real part, then imaginary part, all
/// descending.
using ComplexSpectrum = std::vector<std::complex<double>>;

namespace linalg {

/// Taylor degrees and the matching backward-error thresholds on ||M||_1.
/// theta_m is the largest x with sum_{k>m} |c_k| x^{k-1} <= 2^-53, where
/// c_k are the coefficients of log(e^{-x} T_m(x)).
struct TaylorStage {
  int degree;
  double theta;
};
inline constexpr TaylorStage kTaylorStages[] = {
    {1, 2.220446049250313e-16}, {2, 2.580956802971767e-08}, {4, 3.397168839976962e-04},
    {8, 4.991228871115323e-02}, {12, 2.996158913811580e-01}, {18, 1.090863719290036e+00},
};

/// Degree and squaring count expm() uses for a matrix of the given 1-norm.
struct ExpmPlan {
  int degree;
  int squarings;
};
ExpmPlan expm_plan(double norm1);

/// Matrix exponential by scaling and squaring around a truncated Taylor
/// polynomial. Throws std::invalid_argument for non-square or non-finite input.
Matrix expm(const Matrix& m);

/// exp(M) v without forming exp(M): truncated Taylor series applied to v
/// in s sub-steps of M/s, with the degree m <= 55 and s chosen to minimise
/// the number of products m*s subject to ||M||_1 / s <= theta_m. The series
/// stops early once two consecutive terms fall below unit round-off. Falls
/// back to expm(M) v when that needs fewer flops.
Vector expm_action(const Matrix& m, const Vector& v);

/// AB - BA.
Matrix commutator(const Matrix& a, const Matrix& b);

/// All eigenvalues of a real square matrix, counted with multiplicity and
/// sorted per ComplexSpectrum. Throws NumericalFailure if the QR iteration
/// does not converge.
ComplexSpectrum eigenvalues(const Matrix& m);

/// In-place sort into the ComplexSpectrum order.
void sort_spectrum(ComplexSpectrum& values);

/// sqrt(||M||_1 ||M||_inf), an upper bound on the spectral norm.
double norm2_estimate(const Matrix& m);

bool all_finite(const Matrix& m);

}  // namespace linalg
}  // namespace magdde
