// Command-line driver for the magdde solver. Talks to the library only
// through the C interface in magdde/magdde.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "magdde/magdde.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct ProblemDeleter {
  void operator()(magdde_problem* p) const { magdde_problem_destroy(p); }
};
struct TrajectoryDeleter {
  void operator()(magdde_trajectory* t) const { magdde_trajectory_destroy(t); }
};
struct MonodromyDeleter {
  void operator()(magdde_monodromy* m) const { magdde_monodromy_destroy(m); }
};
using ProblemPtr = std::unique_ptr<magdde_problem, ProblemDeleter>;
using TrajectoryPtr = std::unique_ptr<magdde_trajectory, TrajectoryDeleter>;
using MonodromyPtr = std::unique_ptr<magdde_monodromy, MonodromyDeleter>;

// Carries the exit code out of deeply nested command code.
struct CommandError {
  int exit_code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& message) { throw CommandError{kExitUsage, message}; }

void check(magdde_status status, const std::string& context) {
  if (status == MAGDDE_OK) return;
  const int code = (status == MAGDDE_NUMERICAL_FAILURE || status == MAGDDE_WARNING_AS_ERROR) ? kExitNumerical
                   : (status == MAGDDE_INTERNAL_ERROR)                                       ? kExitNumerical
                                                                                              : kExitUsage;
  throw CommandError{code, context + ": " + magdde_last_error()};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  std::string problem = "example1";
  std::vector<std::string> params;
  int n = 20;
  int m = 32;
  std::optional<int> order;
  std::optional<double> t_final;
  std::optional<int> periods;
  std::string out;
  bool store_steps = false;
  bool warn_as_error = false;
  int jobs = 1;
  double tol = 1e-9;
  std::vector<int> m_list;
  std::vector<int> n_list;
  std::string metric;
  double floor = 1e-13;
  int rank = 0;
};

struct Resolved {
  ProblemPtr problem;
  magdde_problem_info info{};
  int order = 0;
  double t_final = 0.0;
  std::string horizon_note;
};

int warning_to_stderr(const char* message, void* user) {
  const bool as_error = user != nullptr && *static_cast<const bool*>(user);
  std::cerr << (as_error ? "error: " : "warning: ") << message << "\n";
  return as_error ? 1 : 0;
}

Resolved resolve(const RunConfig& cfg, bool needs_horizon) {
  if (cfg.n < 1) usage_error("--N must be >= 1 (got " + std::to_string(cfg.n) + ")");
  if (cfg.m < 1) usage_error("--M must be >= 1 (got " + std::to_string(cfg.m) + ")");
  if (cfg.jobs < 1) usage_error("--jobs must be >= 1");

  std::vector<std::string> keys;
  std::vector<double> values;
  for (const auto& kv : cfg.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) usage_error("--param expects key=value, got '" + kv + "'");
    keys.push_back(kv.substr(0, eq));
    try {
      std::size_t used = 0;
      values.push_back(std::stod(kv.substr(eq + 1), &used));
      if (used != kv.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      usage_error("--param " + keys.back() + ": value '" + kv.substr(eq + 1) + "' is not a number");
    }
  }
  std::vector<const char*> key_ptrs;
  for (const auto& k : keys) key_ptrs.push_back(k.c_str());

  Resolved r;
  magdde_problem* raw = nullptr;
  check(magdde_problem_create(cfg.problem.c_str(), key_ptrs.data(), values.data(), keys.size(), &raw), "--problem");
  r.problem.reset(raw);
  check(magdde_problem_get_info(r.problem.get(), &r.info), "problem info");

  if (r.info.quasilinear) {
    r.order = cfg.order.value_or(3);
    if (r.order != 2 && r.order != 3) {
      usage_error("--order " + std::to_string(r.order) + " not admissible for quasilinear problems (admissible: 2, 3)");
    }
  } else {
    r.order = cfg.order.value_or(6);
    if (r.order != 2 && r.order != 4 && r.order != 6) {
      usage_error("--order " + std::to_string(r.order) + " not admissible for linear problems (admissible: 2, 4, 6)");
    }
  }

  if (needs_horizon) {
    if (cfg.t_final && cfg.periods) usage_error("--t-final and --periods are mutually exclusive");
    const double unit = r.info.has_period ? r.info.period : r.info.tau;
    if (cfg.t_final) {
      if (!(*cfg.t_final > 0.0)) usage_error("--t-final must be positive");
      r.t_final = *cfg.t_final;
      // Snap values typed to a few digits (e.g. 6.2832 for 2*pi) onto the
      // interval grid instead of adding a sliver interval.
      const double intervals = r.t_final / r.info.tau;
      const double nearest = std::round(intervals);
      if (nearest >= 1.0 && std::abs(intervals - nearest) < 1e-4 && std::abs(intervals - nearest) > 0.0) {
        r.t_final = nearest * r.info.tau;
        r.horizon_note = "t-final snapped from " + fmt(*cfg.t_final) + " to " + fmt(r.t_final) + " (" +
                         std::to_string(static_cast<long>(nearest)) + " delay intervals)";
      }
    } else {
      const int periods = cfg.periods.value_or(1);
      if (periods < 1) usage_error("--periods must be >= 1");
      r.t_final = periods * unit;
    }
  }
  return r;
}

// Fully resolved configuration, echoed as the CSV comment header.
std::string header(const std::string& command, const RunConfig& cfg, const Resolved& r,
                   const std::vector<std::pair<std::string, std::string>>& extra) {
  std::ostringstream h;
  h << "# magdde " << command << " (library " << magdde_version() << ")\n";
  h << "# problem = " << cfg.problem << "\n";
  h << "# description = " << magdde_problem_description(r.problem.get()) << "\n";
  h << "# provenance = " << magdde_problem_provenance(r.problem.get()) << "\n";
  h << "# dimension = " << r.info.dimension << "\n";
  h << "# tau = " << fmt(r.info.tau) << "\n";
  if (r.info.has_period) h << "# period = " << fmt(r.info.period) << "\n";
  h << "# N = " << cfg.n << "\n";
  h << "# M = " << cfg.m << "\n";
  h << "# order = " << r.order << "\n";
  if (r.t_final > 0.0) h << "# t_final = " << fmt(r.t_final) << "\n";
  if (!r.horizon_note.empty()) h << "# note = " << r.horizon_note << "\n";
  h << "# store_steps = " << (cfg.store_steps ? "true" : "false") << "\n";
  h << "# warn_as_error = " << (cfg.warn_as_error ? "true" : "false") << "\n";
  for (const auto& [k, v] : extra) h << "# " << k << " = " << v << "\n";
  return h.str();
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::out | std::ios::trunc);
      if (!file_) usage_error("--out: cannot open '" + path + "' for writing");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

TrajectoryPtr run_solve(const Resolved& r, const RunConfig& cfg, int n, int m, int order, double t_final,
                        bool store_steps) {
  magdde_solve_options opts;
  magdde_solve_options_init(&opts);
  opts.n = n;
  opts.m = m;
  opts.order = order;
  opts.t_final = t_final;
  opts.store_steps = store_steps ? 1 : 0;
  opts.on_warning = warning_to_stderr;
  opts.warning_user = const_cast<bool*>(&cfg.warn_as_error);
  magdde_trajectory* raw = nullptr;
  check(magdde_solve(r.problem.get(), &opts, &raw), "solve");
  return TrajectoryPtr(raw);
}

MonodromyPtr run_monodromy(const Resolved& r, const RunConfig& cfg, int n, int m, int order, int periods) {
  magdde_monodromy_options opts;
  magdde_monodromy_options_init(&opts);
  opts.n = n;
  opts.m = m;
  opts.order = order;
  opts.periods = periods;
  opts.on_warning = warning_to_stderr;
  opts.warning_user = const_cast<bool*>(&cfg.warn_as_error);
  magdde_monodromy* raw = nullptr;
  check(magdde_monodromy_compute(r.problem.get(), &opts, &raw), "multipliers");
  return MonodromyPtr(raw);
}

std::vector<double> state_of(const magdde_trajectory* t, std::size_t k) {
  std::vector<double> s(magdde_trajectory_state_size(t));
  check(magdde_trajectory_state(t, k, s.data(), s.size()), "trajectory state");
  return s;
}

int cmd_solve(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true);
  const auto traj = run_solve(r, cfg, cfg.n, cfg.m, r.order, r.t_final, cfg.store_steps);
  const int d = r.info.dimension;
  const std::size_t nodes = static_cast<std::size_t>(cfg.n) + 1;

  Output out(cfg.out);
  auto& os = out.stream();
  os << header("solve", cfg, r, {{"intervals", std::to_string(magdde_trajectory_interval_count(traj.get()))}});
  os << "interval,node_index,time,component_index,value\n";
  std::vector<double> times(nodes);
  for (std::size_t k = 0; k < magdde_trajectory_interval_count(traj.get()); ++k) {
    magdde_interval_info info;
    check(magdde_trajectory_interval(traj.get(), k, &info), "interval");
    check(magdde_trajectory_node_times(traj.get(), k, times.data(), nodes), "node times");
    const auto state = state_of(traj.get(), k);
    for (std::size_t j = 0; j < nodes; ++j) {
      for (int c = 0; c < d; ++c) {
        os << info.index << ',' << j << ',' << fmt(times[j]) << ',' << c << ',' << fmt(state[j * d + c]) << '\n';
      }
    }
  }

  if (cfg.store_steps) {
    if (cfg.out.empty()) usage_error("--store-steps needs --out (steps are written to <out>.steps.csv)");
    Output steps(cfg.out + ".steps.csv");
    auto& ss = steps.stream();
    ss << header("solve (per-step states)", cfg, r, {});
    ss << "interval,step,time,node_index,component_index,value\n";
    std::vector<double> s(magdde_trajectory_state_size(traj.get()));
    for (std::size_t k = 0; k < magdde_trajectory_interval_count(traj.get()); ++k) {
      magdde_interval_info info;
      check(magdde_trajectory_interval(traj.get(), k, &info), "interval");
      for (std::size_t step = 0; step < info.stored_steps; ++step) {
        double t = 0.0;
        check(magdde_trajectory_step(traj.get(), k, step, &t, s.data(), s.size()), "step");
        for (std::size_t j = 0; j < nodes; ++j)
          for (int c = 0; c < d; ++c)
            ss << info.index << ',' << step + 1 << ',' << fmt(t) << ',' << j << ',' << c << ',' << fmt(s[j * d + c])
               << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_multipliers(const RunConfig& cfg) {
  if (cfg.t_final) usage_error("multipliers: use --periods, not --t-final");
  Resolved r = resolve(cfg, false);
  if (r.info.quasilinear || !r.info.has_period) usage_error("multipliers: problem '" + cfg.problem + "' is not linear periodic");
  const int periods = cfg.periods.value_or(1);
  if (periods < 1) usage_error("--periods must be >= 1");
  if (!(cfg.tol >= 0.0)) usage_error("--tol must be >= 0");
  r.t_final = periods * r.info.period;

  const auto result = run_monodromy(r, cfg, cfg.n, cfg.m, r.order, periods);
  const std::size_t count = magdde_monodromy_size(result.get());
  std::vector<double> re(count), im(count);
  check(magdde_monodromy_multipliers(result.get(), re.data(), im.data(), count), "multipliers");
  magdde_stability verdict;
  check(magdde_monodromy_verdict(result.get(), cfg.tol, &verdict), "verdict");
  const char* verdict_name = verdict == MAGDDE_STABLE ? "stable" : verdict == MAGDDE_UNSTABLE ? "unstable" : "marginal";

  Output out(cfg.out);
  auto& os = out.stream();
  os << header("multipliers", cfg, r,
               {{"periods", std::to_string(periods)}, {"tol", fmt(cfg.tol)}, {"verdict", verdict_name},
                {"multipliers", std::to_string(count)}});
  os << "rank,re,im,modulus\n";
  for (std::size_t i = 0; i < count; ++i) {
    os << i + 1 << ',' << fmt(re[i]) << ',' << fmt(im[i]) << ',' << fmt(std::hypot(re[i], im[i])) << '\n';
  }
  std::cerr << "stability: " << verdict_name << " (max |mu| = " << fmt(count ? std::hypot(re[0], im[0]) : 0.0)
            << ", tol = " << fmt(cfg.tol) << ")\n";
  return kExitOk;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

int cmd_convergence(const RunConfig& cfg) {
  if (!cfg.m_list.empty() && !cfg.n_list.empty()) usage_error("convergence: give --M-list or --N-list, not both");
  const bool vary_m = cfg.n_list.empty();
  std::vector<int> values = vary_m ? cfg.m_list : cfg.n_list;
  if (values.empty()) values = {4, 8, 16, 32, 64};
  for (int v : values)
    if (v < 1) usage_error(std::string("convergence: ") + (vary_m ? "--M-list" : "--N-list") + " entries must be >= 1");

  Resolved r = resolve(cfg, true);

  std::string metric = cfg.metric;
  if (metric.empty()) metric = r.info.has_exact ? "solution" : (r.info.has_reference_multiplier ? "multiplier" : "solution");
  if (metric != "solution" && metric != "multiplier") usage_error("--metric must be 'solution' or 'multiplier'");
  if (metric == "multiplier" && (r.info.quasilinear || !r.info.has_reference_multiplier)) {
    usage_error("convergence: problem '" + cfg.problem + "' has no reference multiplier");
  }
  const bool self_reference = metric == "solution" && !r.info.has_exact;
  const int comp = r.info.solution_component;
  const int d = r.info.dimension;
  const int periods = cfg.periods.value_or(1);
  if (metric == "multiplier") {
    if (cfg.t_final) usage_error("convergence --metric multiplier: use --periods, not --t-final");
    r.t_final = periods * r.info.period;
  }

  std::string reference_label;
  if (cfg.rank < 0) usage_error("--rank must be >= 1");
  if (cfg.rank > 0 && metric != "multiplier") usage_error("--rank applies to --metric multiplier only");
  if (metric == "multiplier") {
    reference_label = std::string(cfg.rank > 0 ? "rank " + std::to_string(cfg.rank) + " multiplier" : "nearest multiplier") +
                      " vs reference multiplier " + fmt(r.info.reference_re) + (r.info.reference_im < 0 ? "" : "+") +
                      fmt(r.info.reference_im) + "i (" + magdde_problem_provenance(r.problem.get()) + ")";
  } else if (self_reference) {
    reference_label = r.info.quasilinear ? "self-reference: order 3, 4x finer M, same N (NOT an exact solution)"
                                         : "self-reference: order 6, 4x finer M, 2x N (NOT an exact solution)";
  } else {
    reference_label = "builtin exact solution";
  }

  std::vector<double> errors(values.size(), 0.0);
  std::vector<std::string> failures(values.size());
  auto work = [&](std::size_t i) {
    try {
      const int n = vary_m ? cfg.n : values[i];
      const int m = vary_m ? values[i] : cfg.m;
      if (metric == "multiplier") {
        const auto res = run_monodromy(r, cfg, n, m, r.order, periods);
        const std::size_t count = magdde_monodromy_size(res.get());
        std::vector<double> re(count), im(count);
        check(magdde_monodromy_multipliers(res.get(), re.data(), im.data(), count), "multipliers");
        if (cfg.rank > 0) {
          const std::size_t k = static_cast<std::size_t>(cfg.rank) - 1;
          if (k >= count) throw CommandError{kExitUsage, "--rank " + std::to_string(cfg.rank) + " exceeds multiplier count"};
          errors[i] = std::hypot(re[k] - r.info.reference_re, im[k] - r.info.reference_im);
          return;
        }
        double best = INFINITY;
        for (std::size_t k = 0; k < count; ++k)
          best = std::min(best, std::hypot(re[k] - r.info.reference_re, im[k] - r.info.reference_im));
        errors[i] = best;
        return;
      }
      const auto traj = run_solve(r, cfg, n, m, r.order, r.t_final, false);
      const std::size_t last = magdde_trajectory_interval_count(traj.get()) - 1;
      if (!self_reference) {
        check(magdde_trajectory_mean_error(traj.get(), r.problem.get(), last, comp, &errors[i]), "mean error");
        return;
      }
      const int ref_n = r.info.quasilinear ? n : 2 * n;
      const int ref_order = r.info.quasilinear ? 3 : 6;
      const auto ref = run_solve(r, cfg, ref_n, 4 * m, ref_order, r.t_final, false);
      const auto state = state_of(traj.get(), last);
      std::vector<double> times(n + 1);
      check(magdde_trajectory_node_times(traj.get(), last, times.data(), times.size()), "node times");
      std::vector<double> x(d);
      double sum = 0.0;
      for (int j = 0; j <= n; ++j) {
        check(magdde_trajectory_evaluate(ref.get(), times[j], x.data(), x.size()), "reference evaluation");
        sum += std::abs(x[comp] - state[j * d + comp]);
      }
      errors[i] = sum / (n + 1);
    } catch (const CommandError& e) {
      failures[i] = e.message;
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), values.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < values.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < values.size(); i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures)
    if (!f.empty()) throw CommandError{kExitNumerical, f};

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (errors[i] > cfg.floor) {
      lx.push_back(std::log(static_cast<double>(values[i])));
      ly.push_back(std::log(errors[i]));
    }
  }
  // Error decreases with M (or N), so report the slope as a positive order.
  const double fitted = lx.size() >= 2 ? -least_squares_slope(lx, ly) : NAN;

  Output out(cfg.out);
  auto& os = out.stream();
  os << header("convergence", cfg, r,
               {{"vary", vary_m ? "M" : "N"}, {"metric", metric}, {"reference", reference_label},
                {"component", std::to_string(comp)}, {"floor", fmt(cfg.floor)}, {"jobs", std::to_string(cfg.jobs)}});
  os << (vary_m ? "M" : "N") << ",error,local_slope\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    os << values[i] << ',' << fmt(errors[i]) << ',';
    if (i > 0 && errors[i] > 0.0 && errors[i - 1] > 0.0) {
      os << fmt(-std::log(errors[i] / errors[i - 1]) / std::log(static_cast<double>(values[i]) / values[i - 1]));
    } else {
      os << "nan";
    }
    os << '\n';
  }
  os << "# fitted_slope = " << fmt(fitted) << " (least squares over " << lx.size() << " points above floor)\n";
  std::cerr << "fitted slope: " << fmt(fitted) << "\n";
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg) {
  const Resolved r = resolve(cfg, true);
  if (!r.info.conservative) usage_error("audit: problem '" + cfg.problem + "' is not flagged conservative");
  const auto traj = run_solve(r, cfg, cfg.n, cfg.m, r.order, r.t_final, false);
  const int d = r.info.dimension;
  const int nodes = cfg.n + 1;

  Output out(cfg.out);
  auto& os = out.stream();
  os << header("audit", cfg, r, {{"total", "sum of block-0 components of phi(0)"}});
  os << "interval,t_end,boundary_error,mean_node_error,min_component\n";

  // The conserved total is fixed by the history value at t = 0.
  std::vector<double> x0(magdde_trajectory_state_size(traj.get()));
  check(magdde_trajectory_initial_state(traj.get(), x0.data(), x0.size()), "initial state");
  double total = 0.0;
  for (int c = 0; c < d; ++c) total += x0[c];

  for (std::size_t k = 0; k < magdde_trajectory_interval_count(traj.get()); ++k) {
    magdde_interval_info info;
    check(magdde_trajectory_interval(traj.get(), k, &info), "interval");
    const auto s = state_of(traj.get(), k);
    double boundary = 0.0, mean = 0.0, min_component = INFINITY;
    for (int j = 0; j < nodes; ++j) {
      double sum = 0.0;
      for (int c = 0; c < d; ++c) {
        sum += s[j * d + c];
        min_component = std::min(min_component, s[j * d + c]);
      }
      const double err = std::abs(sum - total);
      if (j == 0) boundary = err;
      mean += err;
    }
    mean /= nodes;
    os << info.index << ',' << fmt(info.t_end) << ',' << fmt(boundary) << ',' << fmt(mean) << ','
       << fmt(min_component) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnus integrators for linear and quasilinear delay differential equations"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.set_config("--config", "", "Key-value config file mirroring the flags (flags override it)");
  app.add_option("--problem", cfg.problem, "Builtin problem: example1, mathieu, nonlinear-scalar, sir")
      ->capture_default_str();
  app.add_option("--param", cfg.params, "Problem parameter override key=value (repeatable)");
  app.add_option("--N", cfg.n, "Chebyshev intervals (N+1 nodes)")->capture_default_str();
  app.add_option("--M", cfg.m, "Steps per delay interval")->capture_default_str();
  app.add_option("--order", cfg.order, "Magnus order (2/4/6 linear, 2/3 quasilinear; default 6 or 3)");
  app.add_option("--t-final", cfg.t_final, "Final time");
  app.add_option("--periods", cfg.periods, "Horizon in periods (delay intervals for aperiodic problems)");
  app.add_option("--out", cfg.out, "Output CSV path (default stdout)");
  app.add_flag("--store-steps", cfg.store_steps, "Also write every step state to <out>.steps.csv");
  app.add_flag("--warn-as-error", cfg.warn_as_error, "Abort on solver warnings");
  app.add_option("--jobs", cfg.jobs, "Worker threads for convergence runs")->capture_default_str();
  app.add_option("--tol", cfg.tol, "Stability verdict tolerance")->capture_default_str();
  app.add_option("--M-list", cfg.m_list, "Comma-separated M values for convergence")->delimiter(',');
  app.add_option("--N-list", cfg.n_list, "Comma-separated N values for convergence")->delimiter(',');
  app.add_option("--metric", cfg.metric, "Convergence metric: solution or multiplier");
  app.add_option("--rank", cfg.rank, "Multiplier rank compared with the reference (default: nearest)");
  app.add_option("--floor", cfg.floor, "Errors at or below this are left out of the slope fit")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Integrate and write the node values of every delay interval");
  auto* multipliers = app.add_subcommand("multipliers", "Monodromy matrix eigenvalues and stability verdict");
  auto* convergence = app.add_subcommand("convergence", "Error versus M (or N) with fitted slope");
  auto* audit = app.add_subcommand("audit", "Per-interval conservation and positivity audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(cfg);
    if (*multipliers) return cmd_multipliers(cfg);
    if (*convergence) return cmd_convergence(cfg);
    if (*audit) return cmd_audit(cfg);
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  }
  return kExitUsage;
}
