#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "magdde/linalg.hpp"
#include "magdde/magnus.hpp"
#include "magdde/spectral.hpp"

namespace magdde::dde {

using TimeMatrix = std::function<Matrix(double)>;
using StateMatrix = std::function<Matrix(const Vector&)>;
using History = std::function<Vector(double)>;

/// x'(t) = A(t) x(t) + B(t) x(t - tau),  x = phi on [-tau, 0].
struct LinearDDEProblem {
  int dimension = 1;
  double tau = 1.0;
  TimeMatrix a;
  TimeMatrix b;
  History phi;
  /// Period of A and B, asserted by the caller; required for monodromy().
  std::optional<double> period;
  std::string description;
};

/// x'(t) = A(x(t - tau)) x(t),  x = phi on [-tau, 0].
struct QuasilinearDDEProblem {
  int dimension = 1;
  double tau = 1.0;
  StateMatrix a;
  History phi;
  std::string description;
};

using Problem = std::variant<LinearDDEProblem, QuasilinearDDEProblem>;

/// Big ODE produced by the collocation: dimension d(N+1), block j of every
/// state approximates x(t + theta_j).
struct DiscretizedSystem {
  spectral::ChebyshevGrid grid;
  int dimension;
  Vector phi_n;

  int big_dimension() const { return dimension * grid.size(); }
};

/// Coefficient matrix at time t: leading d rows hold A(t) in the first block
/// column and B(t) in the last, the rest is (2/tau) (D kron I_d) minus its
/// first d rows.
Matrix assemble_linear(const LinearDDEProblem& problem, const spectral::ChebyshevGrid& grid, double t);

/// As assemble_linear with A evaluated at the last block of u_n and no B.
Matrix assemble_quasilinear(const QuasilinearDDEProblem& problem, const spectral::ChebyshevGrid& grid, const Vector& u_n);

DiscretizedSystem discretize(const LinearDDEProblem& problem, int n);
DiscretizedSystem discretize(const QuasilinearDDEProblem& problem, int n);

struct SolveOptions {
  int n = 20;
  /// Steps per tau-interval.
  int m = 32;
  /// 2/4/6 for linear problems, 2/3 for quasilinear ones.
  int order = 4;
  double t_final = 1.0;
  bool store_steps = false;
  /// Resume from a stored state at t = start_interval * tau instead of phi_N.
  int start_interval = 0;
  std::optional<Vector> initial_state;
  WarningHandler on_warning;
};

struct StepRecord {
  double time;
  Vector state;
};

struct IntervalRecord {
  int index;  // state refers to t_end; index i means [(i-1)tau, i tau] for full intervals
  double t_start;
  double t_end;
  int steps;
  Vector state;
  std::vector<StepRecord> step_states;  // filled only with store_steps
};

struct Trajectory {
  spectral::ChebyshevGrid grid;
  int dimension;
  int n;
  int m;
  int order;
  std::string description;
  std::uint64_t description_hash;
  Vector initial_state;
  double t_initial;
  std::vector<IntervalRecord> intervals;

  /// Times t_end + theta_j of every node of an interval, j = 0..N.
  std::vector<double> node_times(const IntervalRecord& interval) const;
  /// Solution at time t, interpolated within the interval whose window
  /// [t_end - tau, t_end] contains it. Throws std::out_of_range otherwise.
  Vector evaluate(double t) const;
};

/// Method of steps: integrates the discretized system interval by interval
/// with step tau/M, chaining each final state into the next interval.
/// A final partial interval gets ceil(M * fraction) equal steps.
Trajectory solve(const Problem& problem, const SolveOptions& options);

struct MonodromyOptions {
  int n = 20;
  int m = 32;
  int order = 6;
  /// Propagate over periods * T.
  int periods = 1;
  WarningHandler on_warning;
};

struct MonodromyResult {
  Matrix monodromy;
  ComplexSpectrum multipliers;
  int n;
  int m;
  int order;
};

/// Fundamental matrix of the discretized system at t = periods * T from
/// Y(0) = I, with step boundaries on every multiple of tau, plus its sorted
/// eigenvalues (the characteristic multipliers).
MonodromyResult monodromy(const LinearDDEProblem& problem, const MonodromyOptions& options);

enum class Stability { Stable, Unstable, Marginal };

Stability stability_verdict(const MonodromyResult& result, double tol);
const char* to_string(Stability s);

/// Mean absolute error (1/(N+1)) sum_j |x_c(t_end + theta_j) - (U_N)_{j,c}|
/// over the nodes of one state vector, for within-block component c.
double mean_error(const Vector& state, const spectral::ChebyshevGrid& grid, double t_end,
                  const std::function<Vector(double)>& reference, int component = 0);

/// Chunks [t_start, t_end] with step counts used by solve() and monodromy().
struct Segment {
  int index;
  double t_start;
  double t_end;
  int steps;
};
std::vector<Segment> plan_segments(double tau, int m, int start_interval, double t_final);

}  // namespace magdde::dde
