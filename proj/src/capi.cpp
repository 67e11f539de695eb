#include "magdde/magdde.h"

#include <exception>
#include <map>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "magdde/dde.hpp"
#include "magdde/errors.hpp"
#include "magdde/models.hpp"

struct magdde_problem {
  magdde::models::BenchmarkProblem bench;
};

struct magdde_trajectory {
  magdde::dde::Trajectory trajectory;
};

struct magdde_monodromy {
  magdde::dde::MonodromyResult result;
};

namespace {

thread_local std::string g_last_error;

// Thrown out of a warning handler when the C callback asks to abort.
struct WarningAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

magdde_status fail(magdde_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename F>
magdde_status guarded(F&& body) {
  try {
    body();
    return MAGDDE_OK;
  } catch (const WarningAbort& e) {
    return fail(MAGDDE_WARNING_AS_ERROR, e.what());
  } catch (const magdde::NumericalFailure& e) {
    return fail(MAGDDE_NUMERICAL_FAILURE, e.what());
  } catch (const std::out_of_range& e) {
    return fail(MAGDDE_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(MAGDDE_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MAGDDE_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(MAGDDE_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(MAGDDE_INTERNAL_ERROR, "unknown error");
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_len(size_t got, size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": buffer length " + std::to_string(got) + ", expected " +
                                std::to_string(want));
  }
}

magdde::WarningHandler wrap_warning(magdde_warning_fn fn, void* user) {
  if (!fn) return {};
  return [fn, user](const std::string& message) {
    if (fn(message.c_str(), user) != 0) throw WarningAbort("warning treated as error: " + message);
  };
}

const magdde::dde::IntervalRecord& interval_at(const magdde_trajectory* t, size_t k) {
  require(t != nullptr, "null trajectory");
  if (k >= t->trajectory.intervals.size()) {
    throw std::out_of_range("interval " + std::to_string(k) + " out of range (have " +
                            std::to_string(t->trajectory.intervals.size()) + ")");
  }
  return t->trajectory.intervals[k];
}

void copy_out(const magdde::Vector& v, double* out, size_t len, const char* what) {
  require(out != nullptr, "null output buffer");
  require_len(len, static_cast<size_t>(v.size()), what);
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i];
}

magdde_status run_solve(const magdde_problem* problem, const magdde_solve_options* options, int start_interval,
                        const double* state, size_t len, magdde_trajectory** out) {
  return guarded([&] {
    require(problem && options && out, "null argument");
    *out = nullptr;
    magdde::dde::SolveOptions opts;
    opts.n = options->n;
    opts.m = options->m;
    opts.order = options->order;
    opts.t_final = options->t_final;
    opts.store_steps = options->store_steps != 0;
    opts.start_interval = start_interval;
    opts.on_warning = wrap_warning(options->on_warning, options->warning_user);
    if (state) opts.initial_state = Eigen::Map<const magdde::Vector>(state, static_cast<Eigen::Index>(len));
    auto result = std::make_unique<magdde_trajectory>(magdde_trajectory{magdde::dde::solve(problem->bench.problem, opts)});
    *out = result.release();
  });
}

}  // namespace

extern "C" {

const char* magdde_version(void) { return "1.0.0"; }

const char* magdde_last_error(void) { return g_last_error.c_str(); }

const char* magdde_status_name(magdde_status status) {
  switch (status) {
    case MAGDDE_OK: return "ok";
    case MAGDDE_INVALID_ARGUMENT: return "invalid argument";
    case MAGDDE_OUT_OF_RANGE: return "out of range";
    case MAGDDE_NUMERICAL_FAILURE: return "numerical failure";
    case MAGDDE_WARNING_AS_ERROR: return "warning treated as error";
    case MAGDDE_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

magdde_status magdde_problem_create(const char* name, const char* const* keys, const double* values, size_t count,
                                    magdde_problem** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    require(count == 0 || (keys != nullptr && values != nullptr), "null parameter arrays");
    std::map<std::string, double> params;
    for (size_t i = 0; i < count; ++i) {
      require(keys[i] != nullptr, "null parameter key");
      params[keys[i]] = values[i];
    }
    auto p = std::make_unique<magdde_problem>(magdde_problem{magdde::models::make_builtin(name, params)});
    *out = p.release();
  });
}

void magdde_problem_destroy(magdde_problem* problem) { delete problem; }

magdde_status magdde_problem_get_info(const magdde_problem* problem, magdde_problem_info* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    const auto& b = problem->bench;
    magdde_problem_info info{};
    if (const auto* lin = std::get_if<magdde::dde::LinearDDEProblem>(&b.problem)) {
      info.dimension = lin->dimension;
      info.tau = lin->tau;
      info.has_period = lin->period.has_value();
      info.period = lin->period.value_or(0.0);
    } else {
      const auto& q = std::get<magdde::dde::QuasilinearDDEProblem>(b.problem);
      info.dimension = q.dimension;
      info.tau = q.tau;
      info.quasilinear = 1;
    }
    info.has_exact = static_cast<bool>(b.exact);
    info.has_reference_multiplier = b.reference_multiplier.has_value();
    if (b.reference_multiplier) {
      info.reference_re = b.reference_multiplier->real();
      info.reference_im = b.reference_multiplier->imag();
    }
    info.conservative = b.conservative;
    info.solution_component = b.solution_component;
    *out = info;
  });
}

const char* magdde_problem_description(const magdde_problem* problem) {
  if (!problem) return "";
  return std::visit([](const auto& p) -> const std::string& { return p.description; }, problem->bench.problem).c_str();
}

const char* magdde_problem_provenance(const magdde_problem* problem) {
  return problem ? problem->bench.provenance.c_str() : "";
}

magdde_status magdde_problem_exact(const magdde_problem* problem, double t, double* out, size_t len) {
  return guarded([&] {
    require(problem != nullptr, "null problem");
    if (!problem->bench.exact) throw std::invalid_argument("problem '" + problem->bench.name + "' has no exact solution");
    copy_out(problem->bench.exact(t), out, len, "exact solution");
  });
}

void magdde_solve_options_init(magdde_solve_options* options) {
  if (!options) return;
  *options = magdde_solve_options{20, 32, 4, 1.0, 0, nullptr, nullptr};
}

magdde_status magdde_solve(const magdde_problem* problem, const magdde_solve_options* options,
                           magdde_trajectory** out) {
  return run_solve(problem, options, 0, nullptr, 0, out);
}

magdde_status magdde_solve_resume(const magdde_problem* problem, const magdde_solve_options* options,
                                  int start_interval, const double* state, size_t len, magdde_trajectory** out) {
  if (!state) return fail(MAGDDE_INVALID_ARGUMENT, "null initial state");
  return run_solve(problem, options, start_interval, state, len, out);
}

void magdde_trajectory_destroy(magdde_trajectory* trajectory) { delete trajectory; }

size_t magdde_trajectory_state_size(const magdde_trajectory* t) {
  return t ? static_cast<size_t>(t->trajectory.initial_state.size()) : 0;
}

size_t magdde_trajectory_interval_count(const magdde_trajectory* t) {
  return t ? t->trajectory.intervals.size() : 0;
}

magdde_status magdde_trajectory_interval(const magdde_trajectory* t, size_t k, magdde_interval_info* out) {
  return guarded([&] {
    require(out != nullptr, "null output");
    const auto& rec = interval_at(t, k);
    *out = magdde_interval_info{rec.index, rec.t_start, rec.t_end, rec.steps, rec.step_states.size()};
  });
}

magdde_status magdde_trajectory_state(const magdde_trajectory* t, size_t k, double* out, size_t len) {
  return guarded([&] { copy_out(interval_at(t, k).state, out, len, "state"); });
}

magdde_status magdde_trajectory_initial_state(const magdde_trajectory* t, double* out, size_t len) {
  return guarded([&] {
    require(t != nullptr, "null trajectory");
    copy_out(t->trajectory.initial_state, out, len, "initial state");
  });
}

magdde_status magdde_trajectory_node_times(const magdde_trajectory* t, size_t k, double* out, size_t len) {
  return guarded([&] {
    const auto times = t ? t->trajectory.node_times(interval_at(t, k)) : std::vector<double>{};
    require(out != nullptr, "null output buffer");
    require_len(len, times.size(), "node times");
    std::copy(times.begin(), times.end(), out);
  });
}

magdde_status magdde_trajectory_step(const magdde_trajectory* t, size_t k, size_t step, double* time, double* out,
                                     size_t len) {
  return guarded([&] {
    const auto& rec = interval_at(t, k);
    if (step >= rec.step_states.size()) {
      throw std::out_of_range("step " + std::to_string(step) + " not stored for interval " + std::to_string(k));
    }
    require(time != nullptr, "null time output");
    *time = rec.step_states[step].time;
    copy_out(rec.step_states[step].state, out, len, "step state");
  });
}

magdde_status magdde_trajectory_evaluate(const magdde_trajectory* t, double time, double* out, size_t len) {
  return guarded([&] {
    require(t != nullptr, "null trajectory");
    copy_out(t->trajectory.evaluate(time), out, len, "solution");
  });
}

magdde_status magdde_trajectory_mean_error(const magdde_trajectory* t, const magdde_problem* problem, size_t k,
                                           int component, double* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    if (!problem->bench.exact) throw std::invalid_argument("problem '" + problem->bench.name + "' has no exact solution");
    const auto& rec = interval_at(t, k);
    *out = magdde::dde::mean_error(rec.state, t->trajectory.grid, rec.t_end, problem->bench.exact, component);
  });
}

void magdde_monodromy_options_init(magdde_monodromy_options* options) {
  if (!options) return;
  *options = magdde_monodromy_options{20, 32, 6, 1, nullptr, nullptr};
}

magdde_status magdde_monodromy_compute(const magdde_problem* problem, const magdde_monodromy_options* options,
                                       magdde_monodromy** out) {
  return guarded([&] {
    require(problem && options && out, "null argument");
    *out = nullptr;
    const auto* lin = std::get_if<magdde::dde::LinearDDEProblem>(&problem->bench.problem);
    if (!lin) throw std::invalid_argument("multipliers require a linear periodic problem");
    magdde::dde::MonodromyOptions opts;
    opts.n = options->n;
    opts.m = options->m;
    opts.order = options->order;
    opts.periods = options->periods;
    opts.on_warning = wrap_warning(options->on_warning, options->warning_user);
    auto result = std::make_unique<magdde_monodromy>(magdde_monodromy{magdde::dde::monodromy(*lin, opts)});
    *out = result.release();
  });
}

void magdde_monodromy_destroy(magdde_monodromy* result) { delete result; }

size_t magdde_monodromy_size(const magdde_monodromy* r) {
  return r ? static_cast<size_t>(r->result.monodromy.rows()) : 0;
}

magdde_status magdde_monodromy_matrix(const magdde_monodromy* r, double* out, size_t len) {
  return guarded([&] {
    require(r && out, "null argument");
    const auto& m = r->result.monodromy;
    require_len(len, static_cast<size_t>(m.size()), "monodromy matrix");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  });
}

magdde_status magdde_monodromy_multipliers(const magdde_monodromy* r, double* re, double* im, size_t len) {
  return guarded([&] {
    require(r && re && im, "null argument");
    const auto& mu = r->result.multipliers;
    require_len(len, mu.size(), "multipliers");
    for (size_t i = 0; i < mu.size(); ++i) {
      re[i] = mu[i].real();
      im[i] = mu[i].imag();
    }
  });
}

magdde_status magdde_monodromy_verdict(const magdde_monodromy* r, double tol, magdde_stability* out) {
  return guarded([&] {
    require(r && out, "null argument");
    require(tol >= 0.0, "tolerance must be >= 0");
    switch (magdde::dde::stability_verdict(r->result, tol)) {
      case magdde::dde::Stability::Stable: *out = MAGDDE_STABLE; break;
      case magdde::dde::Stability::Unstable: *out = MAGDDE_UNSTABLE; break;
      case magdde::dde::Stability::Marginal: *out = MAGDDE_MARGINAL; break;
    }
  });
}

}  // extern "C"
