#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>
#include <complex>

namespace magdde {

/// Raised when an iteration fails to converge or a non-finite value shows up
/// mid-integration. Carries whatever partial result the failing routine had.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
  NumericalFailure(const std::string& what, std::vector<std::complex<double>> partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}

  const std::vector<std::complex<double>>& partial() const noexcept { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

}  // namespace magdde
