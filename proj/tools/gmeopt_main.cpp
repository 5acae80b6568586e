// Command-line front end: `solve` runs a single model instance from a
// problem file; `poisson` and `declip` run the seeded experiment scenarios
// and emit CSV.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gmeopt/csv.hpp"
#include "gmeopt/errors.hpp"
#include "gmeopt/harness.hpp"
#include "gmeopt/problem_io.hpp"
#include "gmeopt/solver.hpp"

namespace {

using namespace gmeopt;

struct TraceWriter {
  std::ofstream out;
  long objective_every = 100;
  const GmeProblem* problem = nullptr;

  explicit TraceWriter(const std::string& path) : out(path) {
    if (!out) throw InputError("cannot open trace file: " + path);
    out << "iteration,residual_h,residual_p,objective\n";
  }
  void row(long iter, const SolverState& h, double res_h, double res_p) {
    out << iter << ',' << format_double(res_h) << ',' << format_double(res_p) << ',';
    if (problem && objective_every > 0 && iter % objective_every == 0)
      out << format_double(evaluate_objective(*problem, h.x).total);
    out << '\n';
  }
};

int run_solve(const std::string& config_path, const std::optional<std::string>& out_path,
              const std::optional<std::string>& trace_path, std::optional<double> mu_override,
              std::optional<double> theta_override, double tol, long max_iter) {
  ProblemSpec spec = read_problem_file(config_path);
  if (mu_override) spec.mu = *mu_override;
  if (theta_override) {
    if (spec.b.mode == "design_scalar" || spec.b.mode == "design_inverse")
      spec.b.theta = *theta_override;
    else
      throw ParameterError("--theta only applies to designed GME matrices");
  }

  AssembledProblem ap = assemble(spec);
  if (ap.design_degenerate)
    std::cerr << "note: GME design degenerated to the zero map (convex model)\n";
  if (!ap.problem.existence.certified())
    std::cerr << "warning: minimizer existence not certified; solving anyway\n";

  SolverParams prm = default_params(ap.problem, tol, max_iter);
  SolveOptions opts;
  opts.allow_uncertified_existence = true;
  std::optional<TraceWriter> trace;
  if (trace_path) {
    trace.emplace(*trace_path);
    trace->problem = &ap.problem;
    opts.record_pnorm = true;
    opts.monitor_every = 1;
    opts.monitor = [&](long k, const SolverState& h, double rh, double rp) {
      trace->row(k, h, rh, rp);
    };
  }

  SolveResult sol = solve(ap.problem, prm, initial_state(ap.problem), opts);
  ObjectiveBreakdown obj = evaluate_objective(ap.problem, sol.x);

  std::cout << "converged = " << (sol.converged ? "yes" : "no") << '\n'
            << "iterations = " << sol.iterations << '\n'
            << "residual = "
            << format_double(sol.residual_h.empty() ? 0.0 : sol.residual_h.back()) << '\n'
            << "objective = " << format_double(obj.total) << '\n'
            << "fidelity = " << format_double(obj.fidelity) << '\n'
            << "regularizer = " << format_double(obj.regularizer) << '\n'
            << "feasible = " << (obj.feasible ? "yes" : "no") << '\n';

  if (out_path) {
    Mat row(1, sol.x.size());
    row.row(0) = sol.x;
    write_matrix_csv(*out_path, row);
  }
  return sol.converged ? 0 : 1;
}

std::vector<double> parse_mu_flag(const std::string& text) {
  const Vec v = parse_vector(text);
  std::vector<double> mus(v.data(), v.data() + v.size());
  for (double m : mus)
    if (!(m > 0)) throw InputError("--mu values must be positive");
  return mus;
}

template <typename Config, typename RunFn, typename WriteFn>
int run_scenario(Config cfg, const std::optional<std::string>& out_path,
                 const std::optional<std::string>& trace_path, RunFn&& run, WriteFn&& write) {
  auto rows = run(cfg);
  if (out_path) {
    std::ofstream f(*out_path);
    if (!f) throw InputError("cannot open output file: " + *out_path);
    write(f, rows);
  } else {
    write(std::cout, rows);
  }
  (void)trace_path;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GME-regularized convex estimation: solver and experiment runners"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path, trace_path;
  std::optional<double> mu_single, theta_flag;
  std::optional<std::string> mu_list;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> trials_flag, threads_flag;
  double tol_solve = 1e-6;
  long max_iter_solve = 1000000;

  auto* solve_cmd = app.add_subcommand("solve", "solve a single instance from a problem file");
  solve_cmd->add_option("--config", config_path, "problem file")->required();
  solve_cmd->add_option("--out", out_path, "write the solution vector as CSV");
  solve_cmd->add_option("--trace", trace_path, "write per-iteration residual CSV");
  solve_cmd->add_option("--mu", mu_single, "override the regularization weight");
  solve_cmd->add_option("--theta", theta_flag, "override the GME design strength");
  solve_cmd->add_option("--tol", tol_solve, "stopping residual");
  solve_cmd->add_option("--max-iter", max_iter_solve, "iteration cap");

  auto add_scenario_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "scenario config file (key = value lines)");
    cmd->add_option("--out", out_path, "output CSV path (default: stdout)");
    cmd->add_option("--trace", trace_path, "trace CSV of the first cell's solve");
    cmd->add_option("--seed", seed_flag, "base seed");
    cmd->add_option("--theta", theta_flag, "GME strength (0 = convex model)");
    cmd->add_option("--mu", mu_list, "comma-separated mu grid");
    cmd->add_option("--trials", trials_flag, "number of trials");
    cmd->add_option("--threads", threads_flag, "worker threads (0 = hardware)");
  };
  auto* poisson_cmd = app.add_subcommand("poisson", "piecewise-constant Poisson denoising scenario");
  add_scenario_flags(poisson_cmd);
  auto* declip_cmd = app.add_subcommand("declip", "simultaneous declipping and denoising scenario");
  add_scenario_flags(declip_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) {
      return run_solve(config_path, out_path, trace_path, mu_single, theta_flag, tol_solve,
                       max_iter_solve);
    }
    if (poisson_cmd->parsed()) {
      PoissonConfig cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw InputError("cannot open config: " + config_path);
        cfg = parse_poisson_config(f);
      }
      if (seed_flag) cfg.seed = *seed_flag;
      if (theta_flag) cfg.theta = *theta_flag;
      if (mu_list) cfg.mu_grid = parse_mu_flag(*mu_list);
      if (trials_flag) cfg.trials = *trials_flag;
      if (threads_flag) cfg.threads = *threads_flag;

      if (trace_path) {
        const Vec xstar = gen_piecewise_constant(cfg.n, cfg.seed);
        const Vec y = sample_poisson(xstar, cfg.seed + 1);
        PoissonInstance inst = make_poisson_instance(y, cfg.mu_grid.front(), cfg.theta,
                                                     cfg.delta_lo, cfg.delta_hi);
        SolverParams prm = default_params(inst.problem, cfg.tol, cfg.max_iter);
        TraceWriter trace(*trace_path);
        trace.problem = &inst.problem;
        SolveOptions opts;
        opts.record_pnorm = true;
        opts.monitor_every = 1;
        opts.monitor = [&](long k, const SolverState& h, double rh, double rp) {
          trace.row(k, h, rh, rp);
        };
        solve(inst.problem, prm, initial_state(inst.problem), opts);
      }
      return run_scenario(cfg, out_path, trace_path, run_poisson_experiment,
                          [](std::ostream& os, const std::vector<PoissonRow>& rows) {
                            write_poisson_csv(os, rows);
                          });
    }
    if (declip_cmd->parsed()) {
      DeclipConfig cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw InputError("cannot open config: " + config_path);
        cfg = parse_declip_config(f);
      }
      if (seed_flag) cfg.seed = *seed_flag;
      if (theta_flag) cfg.theta = *theta_flag;
      if (mu_list) cfg.mu_grid = parse_mu_flag(*mu_list);
      if (trials_flag) cfg.trials = *trials_flag;
      if (threads_flag) cfg.threads = *threads_flag;

      if (trace_path) {
        const Vec xstar = gen_dct_sparse(cfg.n, cfg.sparsity, cfg.seed);
        const double sigma = snr_to_sigma(xstar, cfg.snr_db);
        const Vec y = clip_observe(xstar, cfg.clip_level, sigma, cfg.seed + 1);
        DeclipInstance inst = make_declip_instance(y, cfg.clip_level, sigma,
                                                   cfg.varpi_factor * sigma,
                                                   cfg.mu_grid.front(), cfg.theta);
        SolverParams prm = default_params(inst.problem, cfg.tol, cfg.max_iter);
        TraceWriter trace(*trace_path);
        trace.problem = &inst.problem;
        SolveOptions opts;
        opts.record_pnorm = true;
        opts.monitor_every = 1;
        opts.monitor = [&](long k, const SolverState& h, double rh, double rp) {
          trace.row(k, h, rh, rp);
        };
        solve(inst.problem, prm, initial_state(inst.problem), opts);
      }
      return run_scenario(cfg, out_path, trace_path, run_declip_experiment,
                          [](std::ostream& os, const std::vector<DeclipRow>& rows) {
                            write_declip_csv(os, rows);
                          });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
