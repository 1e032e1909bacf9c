// Batch front-end: risk-neutral tracking experiments, gradient certification,
// rate checks, and the scalar line-search demo. Emits CSV and plain-text
// reports only; plotting is left to external tools.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sgpc/armijo.hpp"
#include "sgpc/benchmark.hpp"
#include "sgpc/csv_io.hpp"
#include "sgpc/optimizer.hpp"

namespace fs = std::filesystem;
using namespace sgpc;

namespace {

std::string lambda_tag(double lambda) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", lambda);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file " + path.string());
  return os;
}

struct RunOptions {
  std::uint64_t seed = 10;
  int ndiv = 10;
  int nsaa = 200;
  long iters = 300;
  std::vector<double> lambdas{1.0, 0.1, 0.01};
  double theta = 0.0;  // 0 = default 2/lambda
  double s = 1.0;
  long cadence = 1;
  std::string out = "out";
};

int cmd_run(const RunOptions& opt) {
  fs::create_directories(opt.out);

  ProblemSpec base = make_benchmark_problem(opt.ndiv, 1.0);
  SplitMix64 field_stream = derive_stream(opt.seed, /*tag=*/1);
  const SaaSet saa = make_saa_set(base.kl, opt.nsaa, field_stream);

  for (double lambda : opt.lambdas) {
    const std::string tag = lambda_tag(lambda);
    const fs::path traj_path = fs::path(opt.out) / ("trajectory_lambda" + tag + ".csv");
    const fs::path rate_path = fs::path(opt.out) / ("rate_lambda" + tag + ".txt");
    const fs::path fields_path = fs::path(opt.out) / ("fields_lambda" + tag + ".csv");
    try {
      RunConfig config;
      config.problem = base;
      config.problem.lambda = lambda;
      config.schedule.theta = opt.theta > 0.0 ? opt.theta : 2.0 / lambda;
      config.schedule.s = opt.s;
      config.n_iters = opt.iters;
      config.saa = saa;
      config.initial_control = Eigen::VectorXd::Ones(base.space->mesh().n_nodes());
      config.cadence = opt.cadence;
      config.seed = opt.seed;

      std::cout << "lambda=" << tag << ": running " << opt.iters << " iterations (theta="
                << config.schedule.theta << ", s=" << config.schedule.s << ")\n";
      const Trajectory traj = run_sgd(config);

      {
        auto os = open_output(traj_path);
        write_trajectory_csv(os, traj);
      }
      {
        const RateVerdict verdict = rate_check(traj);
        const BoundednessReport bounds =
            boundedness_monitor(traj, config.problem, saa, /*probe_count=*/5);
        auto os = open_output(rate_path);
        os << "rate_verdict " << (verdict.pass ? "PASS" : "FAIL") << '\n'
           << "early_median " << format_double(verdict.early_median) << '\n'
           << "late_median " << format_double(verdict.late_median) << '\n'
           << "max_control_norm " << format_double(bounds.max_control_norm) << '\n'
           << "gamma_probe " << format_double(bounds.gamma_probe) << '\n'
           << "min_angle_inner " << format_double(bounds.min_angle_inner) << '\n'
           << "growth_flagged " << (bounds.growth_flagged ? 1 : 0) << '\n';
        std::cout << "lambda=" << tag << ": rate " << (verdict.pass ? "PASS" : "FAIL")
                  << ", final min grad^2 = "
                  << format_double(traj.records.back().min_grad_norm_sq) << '\n';
      }
      {
        // final state solved at the sample drawn in the last iteration
        const RandomSample& last_sample =
            saa.samples[static_cast<std::size_t>(traj.records.back().sample_index)];
        const StateSolveReport state = solve_state(*base.space, config.problem.kl, last_sample,
                                                   traj.final_control, config.problem.tolerances);
        auto os = open_output(fields_path);
        write_fields_csv(os, base.space->mesh(), traj.final_control, state.y);
      }
    } catch (const std::exception& e) {
      std::error_code ec;
      fs::remove(traj_path, ec);
      fs::remove(rate_path, ec);
      fs::remove(fields_path, ec);
      std::cerr << "error (lambda=" << tag << "): " << e.what() << '\n';
      return 1;
    }
  }
  return 0;
}

struct GradCheckOptions {
  std::uint64_t seed = 10;
  int ndiv = 6;
  double lambda = 0.1;
  int n_controls = 5;
  int n_samples = 3;
  int n_directions = 5;
  bool inject_sign_flip = false;  // test hook: corrupt the gradient on purpose
};

int cmd_grad_check(const GradCheckOptions& opt) {
  SolverTolerances tol;
  tol.newton_tol = 1e-12;
  ProblemSpec spec = make_benchmark_problem(opt.ndiv, opt.lambda, tol);
  const int n_nodes = spec.space->mesh().n_nodes();

  SplitMix64 rng = derive_stream(opt.seed, /*tag=*/4);
  const double fd_step = 1e-4;
  double worst = 0.0;

  for (int ic = 0; ic < opt.n_controls; ++ic) {
    Eigen::VectorXd u(n_nodes);
    for (int a = 0; a < n_nodes; ++a) u[a] = rng.uniform_pm1();
    for (int is = 0; is < opt.n_samples; ++is) {
      const RandomSample sample = draw_sample(rng, spec.kl);
      Eigen::VectorXd g = stochastic_gradient(spec, u, sample);
      if (opt.inject_sign_flip) g = -g;
      for (int id = 0; id < opt.n_directions; ++id) {
        Eigen::VectorXd d(n_nodes);
        for (int a = 0; a < n_nodes; ++a) d[a] = rng.uniform_pm1();
        d /= l2_norm(*spec.space, d);
        const double fd = (objective_sample(spec, u + fd_step * d, sample) -
                           objective_sample(spec, u - fd_step * d, sample)) /
                          (2.0 * fd_step);
        const double directional = l2_inner(*spec.space, g, d);
        const double rel = std::abs(directional - fd) / std::max(1.0, std::abs(fd));
        worst = std::max(worst, rel);
      }
    }
  }
  std::cout << "worst relative error " << format_double(worst) << '\n';
  const bool pass = worst < 1e-5;
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : 1;
}

int cmd_rate_check(const std::string& input, long cadence) {
  std::ifstream is(input);
  if (!is) {
    std::cerr << "cannot open " << input << '\n';
    return 1;
  }
  const Trajectory traj = read_trajectory_csv(is, cadence);
  const RateVerdict verdict = rate_check(traj);
  std::cout << "early_median " << format_double(verdict.early_median) << '\n'
            << "late_median " << format_double(verdict.late_median) << '\n'
            << (verdict.pass ? "PASS" : "FAIL") << '\n';
  return verdict.pass ? 0 : 1;
}

struct ArmijoOptions {
  double beta = 1.0;
  double shrink = 0.5;
  double c = 0.5;
  double epsilon = 0.1;
  long iters = 10000;
  std::uint64_t seed = 10;
  double rm_theta = 0.5;
  double rm_s = 1.0;
  std::string out;
};

int cmd_armijo(const ArmijoOptions& opt) {
  const ArmijoParams params{opt.beta, opt.shrink, opt.c};
  const double alpha = armijo_step_size(params);
  const EscapeReport report = simulate_armijo(params, opt.epsilon, opt.iters, opt.seed);
  const std::vector<double> rm = simulate_rm_1d(opt.rm_theta, opt.rm_s, opt.iters, opt.seed);

  std::cout << "alpha " << format_double(alpha) << '\n'
            << "escape_violations " << report.violations << '\n'
            << "inside_fraction " << format_double(report.inside_fraction) << '\n'
            << "armijo_final_abs_u " << format_double(std::abs(report.final_u)) << '\n'
            << "rm_final_abs_u " << format_double(std::abs(rm.back())) << '\n';

  if (!opt.out.empty()) {
    fs::create_directories(opt.out);
    auto os = open_output(fs::path(opt.out) / "rm_trajectory.csv");
    os << "iter,t_n,u\n";
    for (std::size_t n = 1; n < rm.size(); ++n)
      os << n << ',' << format_double(opt.rm_theta / std::pow(double(n), opt.rm_s)) << ','
         << format_double(rm[n]) << '\n';
  }
  return report.violations == 0 ? 0 : 1;
}

struct DeterministicOptions {
  int ndiv = 10;
  double lambda = 0.01;
  long iters = 5000;
  double theta = 0.0;
  double s = 1.0;
  std::string out = "out";
};

int cmd_deterministic(const DeterministicOptions& opt) {
  fs::create_directories(opt.out);
  RunConfig config;
  config.problem = make_benchmark_problem(opt.ndiv, opt.lambda);
  config.schedule.theta = opt.theta > 0.0 ? opt.theta : 2.0 / opt.lambda;
  config.schedule.s = opt.s;
  config.n_iters = opt.iters;
  config.initial_control = Eigen::VectorXd::Ones(config.problem.space->mesh().n_nodes());
  config.store_controls = false;

  const Trajectory traj = run_deterministic(config);
  const IterationRecord& last = traj.records.back();
  const bool reached = last.min_grad_norm_sq <= config.deterministic_grad_tol;
  std::cout << "iterations " << traj.records.size() << '\n'
            << "min_grad_norm_sq " << format_double(last.min_grad_norm_sq) << '\n';
  if (opt.iters > 1)
    std::cout << "terminated_below_threshold " << (reached ? 1 : 0) << '\n';

  auto os = open_output(fs::path(opt.out) / "deterministic_trajectory.csv");
  write_trajectory_csv(os, traj);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"risk-neutral PDE-constrained stochastic gradient experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "INI-style config file with one [subcommand] section per command; "
                 "command-line flags win");

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "stochastic gradient experiment over a lambda grid");
  run->add_option("--seed", run_opt.seed);
  run->add_option("--ndiv", run_opt.ndiv)->check(CLI::PositiveNumber);
  run->add_option("--nsaa", run_opt.nsaa)->check(CLI::PositiveNumber);
  run->add_option("--iters", run_opt.iters)->check(CLI::PositiveNumber);
  run->add_option("--lambda", run_opt.lambdas)->delimiter(',');
  run->add_option("--theta", run_opt.theta, "step scale, default 2/lambda");
  run->add_option("--s", run_opt.s, "step exponent");
  run->add_option("--cadence", run_opt.cadence)->check(CLI::PositiveNumber);
  run->add_option("--out", run_opt.out);

  GradCheckOptions gc_opt;
  auto* gc = app.add_subcommand("grad-check", "adjoint gradient vs finite differences");
  gc->add_option("--seed", gc_opt.seed);
  gc->add_option("--ndiv", gc_opt.ndiv)->check(CLI::PositiveNumber);
  gc->add_option("--lambda", gc_opt.lambda);
  gc->add_flag("--inject-sign-flip", gc_opt.inject_sign_flip)->group("");

  std::string rc_input;
  long rc_cadence = 1;
  auto* rc = app.add_subcommand("rate-check", "rate verdict for an existing trajectory CSV");
  rc->add_option("--in", rc_input)->required();
  rc->add_option("--cadence", rc_cadence)->check(CLI::PositiveNumber);

  ArmijoOptions ar_opt;
  auto* ar = app.add_subcommand("armijo-demo", "scalar line-search failure demonstration");
  ar->add_option("--beta", ar_opt.beta);
  ar->add_option("--t", ar_opt.shrink);
  ar->add_option("--c", ar_opt.c);
  ar->add_option("--eps", ar_opt.epsilon);
  ar->add_option("--iters", ar_opt.iters)->check(CLI::PositiveNumber);
  ar->add_option("--seed", ar_opt.seed);
  ar->add_option("--theta", ar_opt.rm_theta);
  ar->add_option("--s", ar_opt.rm_s);
  ar->add_option("--out", ar_opt.out);

  DeterministicOptions det_opt;
  auto* det = app.add_subcommand("deterministic", "gradient descent baseline, fluctuation off");
  det->add_option("--ndiv", det_opt.ndiv)->check(CLI::PositiveNumber);
  det->add_option("--lambda", det_opt.lambda);
  det->add_option("--iters", det_opt.iters)->check(CLI::PositiveNumber);
  det->add_option("--theta", det_opt.theta);
  det->add_option("--s", det_opt.s);
  det->add_option("--out", det_opt.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opt);
    if (gc->parsed()) return cmd_grad_check(gc_opt);
    if (rc->parsed()) return cmd_rate_check(rc_input, rc_cadence);
    if (ar->parsed()) return cmd_armijo(ar_opt);
    if (det->parsed()) return cmd_deterministic(det_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
