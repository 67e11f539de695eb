#pragma once

#include <functional>
#include <string>

#include "magdde/linalg.hpp"

namespace magdde {

/// Receives non-fatal diagnostics. A handler may throw to turn a warning
/// into an error.
using WarningHandler = std::function<void(const std::string&)>;

namespace magnus {

/// Coefficient matrix of y' = A(t) y.
struct MatrixEvaluator {
  int dimension = 0;
  std::function<Matrix(double)> eval;

  Matrix operator()(double t) const;
};

enum class Order { Second = 2, Fourth = 4, Sixth = 6 };

/// Parses 2, 4 or 6; throws std::invalid_argument otherwise.
Order order_from_int(int order);

/// The truncated Magnus exponent Omega^{[2p]}(h) over [t_k, t_k + h].
///
/// Second order is the exponential midpoint rule. Fourth order uses the two
/// Gauss–Legendre nodes and a single commutator. Sixth order uses three
/// Gauss–Legendre nodes and three commutators.
Matrix exponent(const MatrixEvaluator& a, double t_k, double h, Order order);

/// True when h * ||A(t_k + h/2)||_2 stays below pi, the sufficient condition
/// for convergence of the underlying series.
bool within_convergence_bound(const MatrixEvaluator& a, double t_k, double h);

/// One step y_{k+1} = exp(Omega) y_k.
Vector step(const MatrixEvaluator& a, double t_k, double h, const Vector& y_k, Order order,
            const WarningHandler& on_warning = {});

/// One step Y_{k+1} = exp(Omega) Y_k for a matrix-valued state.
Matrix step_matrix(const MatrixEvaluator& a, double t_k, double h, const Matrix& y_k, Order order,
                   const WarningHandler& on_warning = {});

}  // namespace magnus
}  // namespace magdde
