#pragma once

#include <span>
#include <vector>

#include "magdde/linalg.hpp"

namespace magdde::spectral {

/// Chebyshev points t_j = cos(j*pi/N), j = 0..N, in descending order.
std::vector<double> chebyshev_nodes(int n);

/// Spectral differentiation matrix on the Chebyshev points of [-1, 1].
/// Off-diagonal entries use the closed form; each diagonal entry is the
/// negative sum of the rest of its row.
Matrix differentiation_matrix(int n);

/// Collocation grid on the delay interval [-tau, 0]. Node j of the shifted
/// grid is theta_j = (t_j - 1) * tau / 2, so theta_0 = 0 and theta_N = -tau.
/// Every block-structured state vector in the library follows this order.
/// Immutable after construction.
class ChebyshevGrid {
 public:
  ChebyshevGrid(int n, double tau);

  int intervals() const noexcept { return n_; }
  int size() const noexcept { return n_ + 1; }
  double delay() const noexcept { return tau_; }

  const std::vector<double>& reference_nodes() const noexcept { return reference_; }
  const std::vector<double>& shifted_nodes() const noexcept { return shifted_; }
  /// D on [-1, 1]; the operator on [-tau, 0] is (2/tau) * D.
  const Matrix& diff_matrix() const noexcept { return diff_; }
  Matrix scaled_diff_matrix() const { return (2.0 / tau_) * diff_; }

  /// Barycentric weights (-1)^j * delta_j with delta_0 = delta_N = 1/2.
  const std::vector<double>& barycentric_weights() const noexcept { return weights_; }

 private:
  int n_;
  double tau_;
  std::vector<double> reference_;
  std::vector<double> shifted_;
  std::vector<double> weights_;
  Matrix diff_;
};

/// Evaluates the Chebyshev interpolant of block-structured samples at time t.
///
/// Block j of `values` (d consecutive entries) is the sample at abscissa
/// `anchor + theta_j`, where `anchor` is the time the state refers to (i*tau
/// for the state at the end of interval i). t must lie in
/// [anchor - tau, anchor]; anything else throws std::out_of_range.
Vector interpolate(std::span<const double> values, const ChebyshevGrid& grid, double anchor, double t);

}  // namespace magdde::spectral
