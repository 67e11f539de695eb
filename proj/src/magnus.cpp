#include "magdde/magnus.hpp"

#include "magdde/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace magdde::magnus {

namespace {

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("magnus step: h must be positive and finite");
}

// Omega plus the convergence-guard warning, shared by the vector and matrix
// steppers.
Matrix guarded_exponent(const MatrixEvaluator& a, double t_k, double h, Order order,
                        const WarningHandler& on_warning) {
  check_step(h);
  if (on_warning && !within_convergence_bound(a, t_k, h)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "Magnus step at t=" << t_k << " with h=" << h
        << " exceeds the convergence bound h*||A(mid)||_2 < pi";
    on_warning(msg.str());
  }
  Matrix omega = exponent(a, t_k, h, order);
  if (!omega.allFinite()) throw NumericalFailure("magnus step: non-finite exponent at t=" + std::to_string(t_k));
  return omega;
}

}  // namespace

Matrix MatrixEvaluator::operator()(double t) const {
  Matrix m = eval(t);
  if (m.rows() != dimension || m.cols() != dimension) {
    throw std::invalid_argument("matrix evaluator returned " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected dimension " + std::to_string(dimension));
  }
  if (!m.allFinite()) throw std::invalid_argument("matrix evaluator returned non-finite entries at t=" + std::to_string(t));
  return m;
}

Order order_from_int(int order) {
  switch (order) {
    case 2: return Order::Second;
    case 4: return Order::Fourth;
    case 6: return Order::Sixth;
    default:
      throw std::invalid_argument("Magnus order " + std::to_string(order) + " not admissible (use 2, 4 or 6)");
  }
}

Matrix exponent(const MatrixEvaluator& a, double t_k, double h, Order order) {
  check_step(h);
  switch (order) {
    case Order::Second:
      return h * a(t_k + h / 2.0);

    case Order::Fourth: {
      const double offset = std::numbers::sqrt3 / 6.0;
      const Matrix a1 = a(t_k + (0.5 - offset) * h);
      const Matrix a2 = a(t_k + (0.5 + offset) * h);
      return (h / 2.0) * (a1 + a2) - (h * h * std::numbers::sqrt3 / 12.0) * linalg::commutator(a1, a2);
    }

    case Order::Sixth: {
      const double sqrt15 = std::sqrt(15.0);
      const double offset = sqrt15 / 10.0;
      const Matrix a1 = a(t_k + (0.5 - offset) * h);
      const Matrix a2 = a(t_k + 0.5 * h);
      const Matrix a3 = a(t_k + (0.5 + offset) * h);

      const Matrix alpha1 = h * a2;
      const Matrix alpha2 = (sqrt15 * h / 3.0) * (a3 - a1);
      const Matrix alpha3 = (10.0 * h / 3.0) * (a3 - 2.0 * a2 + a1);

      const Matrix c1 = linalg::commutator(alpha1, alpha2);
      const Matrix c2 = (-1.0 / 60.0) * linalg::commutator(alpha1, 2.0 * alpha3 + c1);
      return alpha1 + alpha3 / 12.0 + linalg::commutator(-20.0 * alpha1 - alpha3 + c1, alpha2 + c2) / 240.0;
    }
  }
  throw std::invalid_argument("unknown Magnus order");
}

bool within_convergence_bound(const MatrixEvaluator& a, double t_k, double h) {
  return h * linalg::norm2_estimate(a(t_k + h / 2.0)) < std::numbers::pi;
}

Vector step(const MatrixEvaluator& a, double t_k, double h, const Vector& y_k, Order order,
            const WarningHandler& on_warning) {
  if (y_k.size() != a.dimension) throw std::invalid_argument("magnus step: state length does not match dimension");
  return linalg::expm_action(guarded_exponent(a, t_k, h, order, on_warning), y_k);
}

Matrix step_matrix(const MatrixEvaluator& a, double t_k, double h, const Matrix& y_k, Order order,
                   const WarningHandler& on_warning) {
  if (y_k.rows() != a.dimension) throw std::invalid_argument("magnus step: state rows do not match dimension");
  return linalg::expm(guarded_exponent(a, t_k, h, order, on_warning)) * y_k;
}

}  // namespace magdde::magnus
