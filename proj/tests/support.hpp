#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "magdde/linalg.hpp"

namespace test {

inline magdde::Matrix random_matrix(int n, double norm1, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  magdde::Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g(rng);
  return m * (norm1 / m.cwiseAbs().colwise().sum().maxCoeff());
}

// Least-squares slope of -log(err) against log(x), skipping errors at or
// below the floor.
inline double fitted_order(const std::vector<double>& x, const std::vector<double>& err, double floor) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(err[i] > floor)) continue;
    const double lx = std::log(x[i]), ly = std::log(err[i]);
    n += 1;
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  if (n < 2) return NAN;
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Root of lambda + exp(-lambda) = 0 near the start value, by Newton.
inline std::complex<double> newton_characteristic_root(std::complex<double> z) {
  for (int i = 0; i < 100; ++i) {
    const std::complex<double> f = z + std::exp(-z);
    const std::complex<double> df = 1.0 - std::exp(-z);
    const std::complex<double> dz = f / df;
    z -= dz;
    if (std::abs(dz) < 1e-16 * std::abs(z)) break;
  }
  return z;
}

}  // namespace test
