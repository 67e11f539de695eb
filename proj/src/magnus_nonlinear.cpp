#include "magdde/magnus_nonlinear.hpp"

#include "magdde/errors.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace magdde::magnus_nonlinear {

namespace {

#ifndef NDEBUG
void assert_structure(const Matrix& m, int block) {
  if (block > 0) assert(structure_check(m, block) && "intermediate Magnus exponent lost the block structure");
}
#else
void assert_structure(const Matrix&, int) {}
#endif

Vector apply_exp(const Matrix& exponent, const Vector& y) {
  if (!exponent.allFinite()) throw NumericalFailure("nonlinear magnus step: non-finite stage exponent");
  Vector out = linalg::expm_action(exponent, y);
  if (!out.allFinite()) throw NumericalFailure("nonlinear magnus step: stage exponential overflowed");
  return out;
}

}  // namespace

Matrix StateMatrixEvaluator::operator()(const Vector& y) const {
  Matrix m = eval(y);
  if (m.rows() != dimension || m.cols() != dimension) {
    throw std::invalid_argument("state matrix evaluator returned " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected dimension " + std::to_string(dimension));
  }
  if (!m.allFinite()) throw std::invalid_argument("state matrix evaluator returned non-finite entries");
  return m;
}

Order order_from_int(int order) {
  switch (order) {
    case 2: return Order::Second;
    case 3: return Order::Third;
    default:
      throw std::invalid_argument("nonlinear Magnus order " + std::to_string(order) + " not admissible (use 2 or 3)");
  }
}

bool structure_check(const Matrix& m, int d) {
  if (m.rows() != m.cols()) throw std::invalid_argument("structure_check: matrix must be square");
  if (d < 1 || m.rows() < d || m.rows() % d != 0) {
    throw std::invalid_argument("structure_check: dimension " + std::to_string(m.rows()) +
                                " is not a positive multiple of block size " + std::to_string(d));
  }
  const Eigen::Index rest = m.cols() - d;
  if (rest == 0) return true;
  return (m.topRightCorner(d, rest).array() == 0.0).all();
}

Vector step(const StateMatrixEvaluator& a, double h, const Vector& y_k, Order order, int structure_block) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("nonlinear magnus step: h must be positive and finite");
  if (y_k.size() != a.dimension) throw std::invalid_argument("nonlinear magnus step: state length does not match dimension");

  switch (order) {
    case Order::Second: {
      const Matrix u = h * a(y_k);
      assert_structure(u, structure_block);
      const Matrix v = 0.5 * (u + h * a(apply_exp(u, y_k)));
      assert_structure(v, structure_block);
      return apply_exp(v, y_k);
    }

    case Order::Third: {
      const Matrix q1 = h * a(y_k);
      const Matrix q2 = h * a(apply_exp(0.5 * q1, y_k)) - q1;
      const Matrix u1 = 0.5 * q1 + 0.25 * q2;
      const Matrix u2 = q1 + q2;
      const Matrix q3 = -u2 + h * a(apply_exp(u1, y_k));
      const Matrix q4 = -u2 - q2 + h * a(apply_exp(u2, y_k));
      const Matrix u3 = u2 + (2.0 / 3.0) * q3 + (1.0 / 6.0) * q4 - (1.0 / 6.0) * linalg::commutator(q1, q2);
      for (const Matrix* m : {&q1, &q2, &q3, &q4, &u1, &u2, &u3}) assert_structure(*m, structure_block);
      return apply_exp(u3, y_k);
    }
  }
  throw std::invalid_argument("unknown nonlinear Magnus order");
}

}  // namespace magdde::magnus_nonlinear
