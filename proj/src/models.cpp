#include "magdde/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "magdde/errors.hpp"

namespace magdde::models {

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }
Vector scalar_vector(double v) { return Vector::Constant(1, v); }

std::string format_params(const std::string& name, const std::map<std::string, double>& params) {
  std::ostringstream out;
  out.precision(17);
  out << name << "(";
  bool first = true;
  for (const auto& [key, value] : params) {
    out << (first ? "" : ",") << key << "=" << value;
    first = false;
  }
  out << ")";
  return out.str();
}

double take(std::map<std::string, double>& remaining, const std::string& key, double fallback) {
  auto it = remaining.find(key);
  if (it == remaining.end()) return fallback;
  const double v = it->second;
  remaining.erase(it);
  return v;
}

}  // namespace

BenchmarkProblem example1_scalar_periodic() {
  auto exact = [](double t) { return scalar_vector(std::exp(std::sin(t)) * std::cos(t)); };
  dde::LinearDDEProblem p;
  p.dimension = 1;
  p.tau = std::numbers::pi / 2.0;
  p.a = [](double t) { return scalar(std::cos(t)); };
  p.b = [](double t) { return scalar(-std::exp(std::sin(t) + std::cos(t))); };
  p.phi = exact;
  p.period = 2.0 * std::numbers::pi;
  p.description = "example1()";

  BenchmarkProblem out;
  out.name = "example1";
  out.problem = std::move(p);
  out.exact = exact;
  out.reference_multiplier = std::complex<double>(1.0, 0.0);
  out.provenance = "exact solution exp(sin t) cos t is periodic, so mu = 1 is a characteristic multiplier";
  return out;
}

BenchmarkProblem example2_delayed_mathieu(double delta, double epsilon, double b) {
  dde::LinearDDEProblem p;
  p.dimension = 2;
  p.tau = 2.0 * std::numbers::pi;
  p.a = [delta, epsilon](double t) {
    Matrix a(2, 2);
    a << 0.0, 1.0, -(delta + epsilon * std::cos(t)), 0.0;
    return a;
  };
  p.b = [b](double) {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = b;
    return m;
  };
  p.phi = [](double t) {
    Vector v(2);
    v << t, 1.0;
    return v;
  };
  p.period = 2.0 * std::numbers::pi;
  const std::map<std::string, double> params{{"b", b}, {"delta", delta}, {"epsilon", epsilon}};
  p.description = format_params("mathieu", params);

  BenchmarkProblem out;
  out.name = "mathieu";
  out.problem = std::move(p);
  out.parameters = params;
  if (delta == 1.5 && epsilon == 0.5 && b == -0.2) {
    out.reference_multiplier =
        std::complex<double>(0.22751840350292177638239482513, 1.417175174215530683457881875737);
    out.provenance = "Floquet reference multiplier for delta=1.5, epsilon=0.5, b=-0.2 (30 digits)";
  } else if (delta == 2.0 && epsilon == 1.0 && b == kMathieuCriticalB) {
    out.reference_multiplier = std::complex<double>(1.0, 0.0);
    out.provenance = "critical b for delta=2, epsilon=1: a characteristic multiplier equals 1";
  } else {
    out.provenance = "no reference data for these parameters";
  }
  return out;
}

BenchmarkProblem example3_scalar_nonlinear() {
  auto exact = [](double t) { return scalar_vector(std::exp(std::sin(t))); };
  dde::QuasilinearDDEProblem p;
  p.dimension = 1;
  p.tau = std::numbers::pi / 2.0;
  p.a = [](const Vector& delayed) {
    if (!(delayed[0] > 0.0)) {
      throw NumericalFailure("nonlinear-scalar: log of non-positive delayed state " + std::to_string(delayed[0]));
    }
    return scalar(-std::log(delayed[0]));
  };
  p.phi = exact;
  p.description = "nonlinear-scalar()";

  BenchmarkProblem out;
  out.name = "nonlinear-scalar";
  out.problem = std::move(p);
  out.exact = exact;
  out.provenance = "exact solution exp(sin t)";
  return out;
}

Matrix sir_matrix(const SirScenario& s, const Vector& delayed) {
  if (delayed.size() != 3) throw std::invalid_argument("sir_matrix: delayed state must be (S, I, R)");
  const double infective = delayed[1];
  const double q = s.beta * infective / (1.0 + s.alpha * infective);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = -q;
  a(1, 0) = q;
  a(1, 1) = -s.gamma;
  a(2, 1) = s.gamma;
  return a;
}

BenchmarkProblem example4_delayed_sir(const SirScenario& s) {
  if (!(s.beta > 0.0)) throw std::invalid_argument("sir: beta must be positive");
  if (!(s.gamma > 0.0)) throw std::invalid_argument("sir: gamma must be positive");
  if (!(s.tau > 0.0)) throw std::invalid_argument("sir: tau must be positive");

  dde::QuasilinearDDEProblem p;
  p.dimension = 3;
  p.tau = s.tau;
  p.a = [s](const Vector& delayed) { return sir_matrix(s, delayed); };
  p.phi = [s](double t) {
    Vector v(3);
    v << s.s0, s.i0 + s.history_slope * t, s.r0;
    return v;
  };
  const std::map<std::string, double> params{{"R0", s.r0},         {"S0", s.s0},       {"I0", s.i0},
                                             {"alpha", s.alpha},   {"beta", s.beta},   {"gamma", s.gamma},
                                             {"tau", s.tau},       {"history_slope", s.history_slope}};
  p.description = format_params("sir", params);

  BenchmarkProblem out;
  out.name = "sir";
  out.problem = std::move(p);
  out.conservative = true;
  out.parameters = params;
  out.provenance = "no closed-form solution; total population S+I+R is conserved";
  if (s.alpha != 0.0 && s.alpha != 1.0) out.provenance += "; alpha outside {0, 1} (non-standard incidence)";
  return out;
}

BenchmarkProblem make_builtin(const std::string& name, const std::map<std::string, double>& params) {
  std::map<std::string, double> remaining = params;
  BenchmarkProblem out;
  if (name == "example1") {
    out = example1_scalar_periodic();
  } else if (name == "mathieu") {
    const double delta = take(remaining, "delta", 1.5);
    const double epsilon = take(remaining, "epsilon", 0.5);
    const double b = take(remaining, "b", -0.2);
    out = example2_delayed_mathieu(delta, epsilon, b);
  } else if (name == "nonlinear-scalar") {
    out = example3_scalar_nonlinear();
  } else if (name == "sir") {
    SirScenario s;
    s.alpha = take(remaining, "alpha", s.alpha);
    s.beta = take(remaining, "beta", s.beta);
    s.gamma = take(remaining, "gamma", s.gamma);
    s.tau = take(remaining, "tau", s.tau);
    s.s0 = take(remaining, "S0", s.s0);
    s.i0 = take(remaining, "I0", s.i0);
    s.r0 = take(remaining, "R0", s.r0);
    s.history_slope = take(remaining, "history_slope", s.history_slope);
    out = example4_delayed_sir(s);
  } else {
    throw std::invalid_argument("unknown problem '" + name + "' (builtins: example1, mathieu, nonlinear-scalar, sir)");
  }
  if (!remaining.empty()) {
    throw std::invalid_argument("problem '" + name + "' has no parameter '" + remaining.begin()->first + "'");
  }
  return out;
}

std::vector<std::string> builtin_names() { return {"example1", "mathieu", "nonlinear-scalar", "sir"}; }

bool is_graph_laplacian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index l = 0; l < a.cols(); ++l) {
    double column = 0.0;
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      if (k == l ? a(k, l) > tol : a(k, l) < -tol) return false;
      column += a(k, l);
    }
    if (std::abs(column) > tol) return false;
  }
  return true;
}

}  // namespace magdde::models
