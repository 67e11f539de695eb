#include "magdde/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace magdde::spectral {

std::vector<double> chebyshev_nodes(int n) {
  if (n < 1) throw std::invalid_argument("chebyshev_nodes: N must be >= 1 (grid needs at least 2 nodes)");
  std::vector<double> nodes(n + 1);
  for (int j = 0; j <= n; ++j) nodes[j] = std::cos(j * std::numbers::pi / n);
  // Pin the symmetric entries so the grid is exactly antisymmetric.
  nodes[0] = 1.0;
  nodes[n] = -1.0;
  for (int j = 0; j < (n + 1) / 2; ++j) nodes[n - j] = -nodes[j];
  if (n % 2 == 0) nodes[n / 2] = 0.0;
  return nodes;
}

Matrix differentiation_matrix(int n) {
  const std::vector<double> t = chebyshev_nodes(n);
  Matrix d = Matrix::Zero(n + 1, n + 1);
  auto c = [n](int j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  for (int j = 0; j <= n; ++j) {
    double row_sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (k == j) continue;
      const double sign = ((j + k) % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = (c(j) / c(k)) * sign / (t[j] - t[k]);
      row_sum += d(j, k);
    }
    d(j, j) = -row_sum;
  }
  return d;
}

ChebyshevGrid::ChebyshevGrid(int n, double tau) : n_(n), tau_(tau) {
  if (n < 1) throw std::invalid_argument("ChebyshevGrid: N must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("ChebyshevGrid: delay must be positive and finite");
  reference_ = chebyshev_nodes(n);
  shifted_.resize(n + 1);
  for (int j = 0; j <= n; ++j) shifted_[j] = (reference_[j] - 1.0) * tau / 2.0;
  shifted_[0] = 0.0;
  shifted_[n] = -tau;
  weights_.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double delta = (j == 0 || j == n) ? 0.5 : 1.0;
    weights_[j] = (j % 2 == 0 ? 1.0 : -1.0) * delta;
  }
  diff_ = differentiation_matrix(n);
}

Vector interpolate(std::span<const double> values, const ChebyshevGrid& grid, double anchor, double t) {
  const int nodes = grid.size();
  if (values.size() % nodes != 0 || values.empty()) {
    throw std::invalid_argument("interpolate: state length " + std::to_string(values.size()) +
                                " is not a multiple of the node count " + std::to_string(nodes));
  }
  const std::size_t d = values.size() / nodes;
  const double tau = grid.delay();
  const double slack = 1e-14 * tau;
  if (!(t >= anchor - tau - slack && t <= anchor + slack)) {
    throw std::out_of_range("interpolate: t = " + std::to_string(t) + " outside [" + std::to_string(anchor - tau) +
                            ", " + std::to_string(anchor) + "]");
  }
  const auto& theta = grid.shifted_nodes();
  const auto& w = grid.barycentric_weights();
  Vector out = Vector::Zero(static_cast<Eigen::Index>(d));

  for (int j = 0; j < nodes; ++j) {
    if (std::abs(t - (anchor + theta[j])) < 1e-14 * tau) {
      for (std::size_t c = 0; c < d; ++c) out[c] = values[j * d + c];
      return out;
    }
  }
  double denom = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double q = w[j] / (t - (anchor + theta[j]));
    denom += q;
    for (std::size_t c = 0; c < d; ++c) out[c] += q * values[j * d + c];
  }
  return out / denom;
}

}  // namespace magdde::spectral
