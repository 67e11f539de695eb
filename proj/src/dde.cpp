#include "magdde/dde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "magdde/errors.hpp"
#include "magdde/magnus_nonlinear.hpp"

namespace magdde::dde {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void check_grid(double tau, const spectral::ChebyshevGrid& grid) {
  if (grid.delay() != tau) {
    throw std::invalid_argument("grid delay " + std::to_string(grid.delay()) + " does not match problem delay " +
                                std::to_string(tau));
  }
}

Matrix checked_block(const Matrix& m, int d, const char* what) {
  if (m.rows() != d || m.cols() != d) {
    throw std::invalid_argument(std::string(what) + " returned " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!m.allFinite()) throw NumericalFailure(std::string(what) + " returned non-finite entries");
  return m;
}

// (2/tau) (D kron I_d) with its first d rows zeroed.
Matrix spectral_part(const spectral::ChebyshevGrid& grid, int d) {
  const int nodes = grid.size();
  const Matrix scaled = grid.scaled_diff_matrix();
  Matrix big = Matrix::Zero(nodes * d, nodes * d);
  for (int j = 1; j < nodes; ++j) {
    for (int k = 0; k < nodes; ++k) {
      for (int c = 0; c < d; ++c) big(j * d + c, k * d + c) = scaled(j, k);
    }
  }
  return big;
}

void validate_common(int d, double tau) {
  if (d < 1) throw std::invalid_argument("problem dimension must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("delay tau must be positive and finite");
}

Vector sample_history(const History& phi, const spectral::ChebyshevGrid& grid, int d) {
  if (!phi) throw std::invalid_argument("problem has no initial function");
  Vector out(d * grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const Vector v = phi(grid.shifted_nodes()[j]);
    if (v.size() != d) throw std::invalid_argument("initial function returned a vector of the wrong length");
    if (!v.allFinite()) throw NumericalFailure("initial function returned non-finite values");
    out.segment(j * d, d) = v;
  }
  return out;
}

// Collects convergence-guard hits so one summary warning is emitted per call.
struct GuardTally {
  int hits = 0;
  int steps = 0;
  double first_time = 0.0;

  WarningHandler handler() {
    return [this](const std::string&) {
      if (hits == 0) first_time = current_time;
      ++hits;
    };
  }
  void flush(const WarningHandler& sink, const char* what) const {
    if (!sink || hits == 0) return;
    std::ostringstream msg;
    msg << what << ": " << hits << " of " << steps
        << " Magnus steps exceed the convergence bound h*||A(mid)||_2 < pi (first at t=" << first_time << ")";
    sink(msg.str());
  }
  double current_time = 0.0;
};

}  // namespace

Matrix assemble_linear(const LinearDDEProblem& problem, const spectral::ChebyshevGrid& grid, double t) {
  validate_common(problem.dimension, problem.tau);
  check_grid(problem.tau, grid);
  const int d = problem.dimension;
  Matrix big = spectral_part(grid, d);
  big.topLeftCorner(d, d) = checked_block(problem.a(t), d, "A(t)");
  const Matrix b = problem.b ? checked_block(problem.b(t), d, "B(t)") : Matrix::Zero(d, d);
  big.topRightCorner(d, d) += b;
  return big;
}

Matrix assemble_quasilinear(const QuasilinearDDEProblem& problem, const spectral::ChebyshevGrid& grid,
                            const Vector& u_n) {
  validate_common(problem.dimension, problem.tau);
  check_grid(problem.tau, grid);
  const int d = problem.dimension;
  if (u_n.size() != d * grid.size()) throw std::invalid_argument("assemble_quasilinear: state has the wrong length");
  Matrix big = spectral_part(grid, d);
  big.topLeftCorner(d, d) = checked_block(problem.a(u_n.tail(d)), d, "A(x)");
  return big;
}

DiscretizedSystem discretize(const LinearDDEProblem& problem, int n) {
  validate_common(problem.dimension, problem.tau);
  spectral::ChebyshevGrid grid(n, problem.tau);
  Vector phi_n = sample_history(problem.phi, grid, problem.dimension);
  return {std::move(grid), problem.dimension, std::move(phi_n)};
}

DiscretizedSystem discretize(const QuasilinearDDEProblem& problem, int n) {
  validate_common(problem.dimension, problem.tau);
  spectral::ChebyshevGrid grid(n, problem.tau);
  Vector phi_n = sample_history(problem.phi, grid, problem.dimension);
  return {std::move(grid), problem.dimension, std::move(phi_n)};
}

std::vector<Segment> plan_segments(double tau, int m, int start_interval, double t_final) {
  if (m < 1) throw std::invalid_argument("steps per interval M must be >= 1");
  if (start_interval < 0) throw std::invalid_argument("start interval must be >= 0");
  const double t0 = start_interval * tau;
  if (!(t_final > t0) || !std::isfinite(t_final)) {
    throw std::invalid_argument("t_final must be finite and greater than the start time " + std::to_string(t0));
  }
  double span = (t_final - t0) / tau;
  const double nearest = std::round(span);
  bool snapped = false;
  if (nearest >= 1.0 && std::abs(span - nearest) <= 1e-9 * nearest) {
    span = nearest;
    snapped = true;
  }
  const int full = static_cast<int>(std::floor(span));
  std::vector<Segment> segments;
  segments.reserve(full + 1);
  for (int k = 1; k <= full; ++k) {
    const int index = start_interval + k;
    segments.push_back({index, (index - 1) * tau, index * tau, m});
  }
  const double fraction = span - full;
  if (!snapped && fraction > 0.0) {
    const int index = start_interval + full + 1;
    const int steps = std::max(1, static_cast<int>(std::ceil(m * fraction)));
    segments.push_back({index, (start_interval + full) * tau, t_final, steps});
  }
  return segments;
}

std::vector<double> Trajectory::node_times(const IntervalRecord& interval) const {
  std::vector<double> times(grid.size());
  for (int j = 0; j < grid.size(); ++j) times[j] = interval.t_end + grid.shifted_nodes()[j];
  return times;
}

Vector Trajectory::evaluate(double t) const {
  const double tau = grid.delay();
  for (auto it = intervals.rbegin(); it != intervals.rend(); ++it) {
    if (t <= it->t_end + 1e-14 * tau && t >= it->t_end - tau - 1e-14 * tau) {
      return spectral::interpolate({it->state.data(), static_cast<std::size_t>(it->state.size())}, grid, it->t_end, t);
    }
  }
  return spectral::interpolate({initial_state.data(), static_cast<std::size_t>(initial_state.size())}, grid, t_initial,
                               t);
}

Trajectory solve(const Problem& problem, const SolveOptions& options) {
  const bool linear = std::holds_alternative<LinearDDEProblem>(problem);
  const int d = linear ? std::get<LinearDDEProblem>(problem).dimension : std::get<QuasilinearDDEProblem>(problem).dimension;
  const double tau = linear ? std::get<LinearDDEProblem>(problem).tau : std::get<QuasilinearDDEProblem>(problem).tau;
  const std::string& description =
      linear ? std::get<LinearDDEProblem>(problem).description : std::get<QuasilinearDDEProblem>(problem).description;
  validate_common(d, tau);
  if (options.n < 1) throw std::invalid_argument("number of Chebyshev intervals N must be >= 1");

  // Validate the order up front so a bad pairing fails before any work.
  std::optional<magnus::Order> linear_order;
  std::optional<magnus_nonlinear::Order> nonlinear_order;
  if (linear) {
    linear_order = magnus::order_from_int(options.order);
  } else {
    nonlinear_order = magnus_nonlinear::order_from_int(options.order);
  }

  const std::vector<Segment> segments = plan_segments(tau, options.m, options.start_interval, options.t_final);

  spectral::ChebyshevGrid grid(options.n, tau);
  const int big = d * grid.size();
  Vector state;
  if (options.initial_state) {
    if (options.initial_state->size() != big) throw std::invalid_argument("initial state has the wrong length");
    state = *options.initial_state;
  } else {
    if (options.start_interval != 0) throw std::invalid_argument("resuming past interval 0 requires an initial state");
    state = linear ? sample_history(std::get<LinearDDEProblem>(problem).phi, grid, d)
                   : sample_history(std::get<QuasilinearDDEProblem>(problem).phi, grid, d);
  }

  Trajectory out{grid,        d,     options.n, options.m, options.order, description, fnv1a(description),
                 state,       options.start_interval * tau, {}};
  out.intervals.reserve(segments.size());

  const Matrix base = spectral_part(grid, d);
  magnus::MatrixEvaluator linear_eval;
  magnus_nonlinear::StateMatrixEvaluator nonlinear_eval;
  if (linear) {
    const auto& p = std::get<LinearDDEProblem>(problem);
    linear_eval = {big, [&p, &base, d](double t) {
                     Matrix m = base;
                     m.topLeftCorner(d, d) = checked_block(p.a(t), d, "A(t)");
                     if (p.b) m.topRightCorner(d, d) += checked_block(p.b(t), d, "B(t)");
                     return m;
                   }};
  } else {
    const auto& p = std::get<QuasilinearDDEProblem>(problem);
    nonlinear_eval = {big, [&p, &base, d](const Vector& u) {
                        Matrix m = base;
                        m.topLeftCorner(d, d) = checked_block(p.a(u.tail(d)), d, "A(x)");
                        return m;
                      }};
  }

  GuardTally tally;
  const WarningHandler guard = options.on_warning ? tally.handler() : WarningHandler{};

  for (const Segment& seg : segments) {
    IntervalRecord record{seg.index, seg.t_start, seg.t_end, seg.steps, {}, {}};
    const double h = (seg.t_end - seg.t_start) / seg.steps;
    for (int k = 0; k < seg.steps; ++k) {
      const double t_k = seg.t_start + k * h;
      tally.current_time = t_k;
      ++tally.steps;
      auto where = [&] {
        std::ostringstream msg;
        msg << "interval " << seg.index << " at step " << k << " (t=" << t_k << ")";
        return msg.str();
      };
      try {
        if (linear) {
          state = magnus::step(linear_eval, t_k, h, state, *linear_order, guard);
        } else {
          state = magnus_nonlinear::step(nonlinear_eval, h, state, *nonlinear_order, d);
        }
      } catch (const NumericalFailure& e) {
        throw NumericalFailure(std::string(e.what()) + " in " + where());
      }
      if (!state.allFinite()) throw NumericalFailure("non-finite state in " + where());
      if (options.store_steps) record.step_states.push_back({k + 1 == seg.steps ? seg.t_end : t_k + h, state});
    }
    record.state = state;
    out.intervals.push_back(std::move(record));
  }
  tally.flush(options.on_warning, "solve");
  return out;
}

MonodromyResult monodromy(const LinearDDEProblem& problem, const MonodromyOptions& options) {
  validate_common(problem.dimension, problem.tau);
  if (!problem.period || !(*problem.period > 0.0)) throw std::invalid_argument("monodromy requires a positive period");
  if (options.periods < 1) throw std::invalid_argument("number of periods must be >= 1");
  if (options.n < 1) throw std::invalid_argument("number of Chebyshev intervals N must be >= 1");
  const magnus::Order order = magnus::order_from_int(options.order);
  const int d = problem.dimension;
  const std::vector<Segment> segments = plan_segments(problem.tau, options.m, 0, options.periods * *problem.period);

  spectral::ChebyshevGrid grid(options.n, problem.tau);
  const int big = d * grid.size();
  const Matrix base = spectral_part(grid, d);
  const magnus::MatrixEvaluator eval{big, [&problem, &base, d](double t) {
                                       Matrix m = base;
                                       m.topLeftCorner(d, d) = checked_block(problem.a(t), d, "A(t)");
                                       if (problem.b) m.topRightCorner(d, d) += checked_block(problem.b(t), d, "B(t)");
                                       return m;
                                     }};

  GuardTally tally;
  const WarningHandler guard = options.on_warning ? tally.handler() : WarningHandler{};
  Matrix y = Matrix::Identity(big, big);
  for (const Segment& seg : segments) {
    const double h = (seg.t_end - seg.t_start) / seg.steps;
    for (int k = 0; k < seg.steps; ++k) {
      const double t_k = seg.t_start + k * h;
      tally.current_time = t_k;
      ++tally.steps;
      y = magnus::step_matrix(eval, t_k, h, y, order, guard);
    }
    if (!y.allFinite()) {
      throw NumericalFailure("non-finite fundamental matrix after interval " + std::to_string(seg.index));
    }
  }
  tally.flush(options.on_warning, "monodromy");

  MonodromyResult result{y, linalg::eigenvalues(y), options.n, options.m, options.order};
  return result;
}

Stability stability_verdict(const MonodromyResult& result, double tol) {
  double dominant = 0.0;
  for (const auto& mu : result.multipliers) dominant = std::max(dominant, std::abs(mu));
  if (dominant < 1.0 - tol) return Stability::Stable;
  if (dominant > 1.0 + tol) return Stability::Unstable;
  return Stability::Marginal;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "unknown";
}

double mean_error(const Vector& state, const spectral::ChebyshevGrid& grid, double t_end,
                  const std::function<Vector(double)>& reference, int component) {
  const int nodes = grid.size();
  if (state.size() % nodes != 0) throw std::invalid_argument("mean_error: state length is not a multiple of N+1");
  const int d = static_cast<int>(state.size() / nodes);
  if (component < 0 || component >= d) throw std::invalid_argument("mean_error: component out of range");
  double sum = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const Vector exact = reference(t_end + grid.shifted_nodes()[j]);
    sum += std::abs(exact[component] - state[j * d + component]);
  }
  return sum / nodes;
}

}  // namespace magdde::dde
