#pragma once

#include <functional>

#include "magdde/linalg.hpp"

namespace magdde::magnus_nonlinear {

/// Coefficient matrix of the autonomous quasilinear system y' = A(y) y.
struct StateMatrixEvaluator {
  int dimension = 0;
  std::function<Matrix(const Vector&)> eval;

  Matrix operator()(const Vector& y) const;
};

enum class Order { Second = 2, Third = 3 };

Order order_from_int(int order);

/// True iff rows [0, d) of m vanish outside columns [0, d). This is the
/// pattern of the discretized quasilinear coefficient matrix, and it is closed
/// under sums, products, commutators and the exponential.
bool structure_check(const Matrix& m, int d);

/// One explicit Magnus step for y' = A(y) y.
///
/// Order 2 (trapezoidal):  u = hA(y_k),  v = (u + hA(e^u y_k)) / 2,  y_{k+1} = e^v y_k.
/// Order 3 uses the four-stage Q_1..Q_4 sequence with one commutator [Q_1, Q_2].
///
/// If `structure_block` > 0, debug builds assert that every intermediate
/// exponent passes structure_check(., structure_block).
Vector step(const StateMatrixEvaluator& a, double h, const Vector& y_k, Order order, int structure_block = 0);

}  // namespace magdde::magnus_nonlinear
