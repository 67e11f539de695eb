#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "magdde/dde.hpp"

namespace magdde::models {

struct BenchmarkProblem {
  std::string name;
  dde::Problem problem;
  /// Exact solution x(t), when known in closed form.
  std::function<Vector(double)> exact;
  std::optional<std::complex<double>> reference_multiplier;
  /// Where the reference data comes from.
  std::string provenance;
  /// Block-0 components sum to a conserved total (SIR-like).
  bool conservative = false;
  /// Component compared against the reference in error metrics.
  int solution_component = 0;
  /// Parameters the problem was built with, after defaults.
  std::map<std::string, double> parameters;
};

/// x'(t) = cos(t) x(t) - exp(sin t + cos t) x(t - pi/2), exact solution
/// exp(sin t) cos t, period 2 pi, multiplier 1.
BenchmarkProblem example1_scalar_periodic();

/// x'' + (delta + epsilon cos t) x = b x(t - 2 pi) in first-order form with
/// state (x, x'), tau = T = 2 pi, history phi(t) = (t, 1). The delayed term
/// enters the x'' row, so B = [[0, 0], [b, 0]].
BenchmarkProblem example2_delayed_mathieu(double delta = 1.5, double epsilon = 0.5, double b = -0.2);

/// Critical b for delta = 2, epsilon = 1, where 1 is a characteristic
/// multiplier. A complex pair of modulus ~1.416 still dominates there.
inline constexpr double kMathieuCriticalB = 0.7068337166604264;

/// z'(t) = -log(z(t - pi/2)) z(t), exact solution exp(sin t).
BenchmarkProblem example3_scalar_nonlinear();

struct SirScenario {
  double alpha = 0.0;
  double beta = 1.0;
  double gamma = 1.0;
  double tau = 1.0;
  double s0 = 0.7;
  double i0 = 0.2;
  double r0 = 0.1;
  /// I history is i0 + history_slope * t on [-tau, 0]; S and R stay at s0, r0.
  double history_slope = -0.5;
};

/// Delayed SIR model with incidence q(I) = beta I / (1 + alpha I) on the
/// delayed infective count.
BenchmarkProblem example4_delayed_sir(const SirScenario& scenario = {});

/// Coefficient matrix of the SIR model for a delayed state (S, I, R).
Matrix sir_matrix(const SirScenario& scenario, const Vector& delayed);

/// Builds a builtin by CLI name (`example1`, `mathieu`, `nonlinear-scalar`,
/// `sir`) with parameter overrides. Unknown names or parameters throw
/// std::invalid_argument.
BenchmarkProblem make_builtin(const std::string& name, const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_names();

/// True iff off-diagonals are >= 0, diagonals <= 0 and every column sums to
/// zero within `tol`.
bool is_graph_laplacian(const Matrix& a, double tol = 0.0);

}  // namespace magdde::models
