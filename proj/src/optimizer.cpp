#include "sgpc/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sgpc {

double StepSchedule::step(long n) const {
  if (n < 1) throw std::invalid_argument("StepSchedule::step: n must be >= 1");
  return theta / std::pow(static_cast<double>(n), s);
}

ScheduleReport validate_schedule(const StepSchedule& schedule, long horizon) {
  if (!(schedule.theta > 0.0))
    throw std::invalid_argument("validate_schedule: theta must be positive");
  if (!(schedule.s > 0.0)) throw std::invalid_argument("validate_schedule: s must be positive");
  if (horizon < 10) throw std::invalid_argument("validate_schedule: horizon must be >= 10");

  ScheduleReport report;
  report.horizon = horizon;
  report.step_sum_diverges = schedule.s <= 1.0;
  report.square_sum_converges = schedule.s > 0.5;
  report.rm_valid = schedule.rm_valid();
  report.rate_condition = schedule.rate_condition_valid();
  double cum = 0.0;
  for (long n = 1; n <= horizon; ++n) {
    const double t = schedule.step(n);
    cum += t;
    report.partial_step_sum = cum;
    report.partial_square_sum += t * t;
    report.partial_ratio_sum += t / cum;
  }
  return report;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty range");
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return (v.size() % 2 == 1) ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

void require_finite(double x, const char* what, long iter) {
  if (!std::isfinite(x))
    throw std::runtime_error(std::string("run_sgd: non-finite ") + what + " at iteration " +
                             std::to_string(iter));
}

Trajectory run_loop(const RunConfig& config, bool deterministic) {
  if (!config.schedule.rm_valid() && !deterministic)
    throw std::invalid_argument("run_sgd: step schedule violates the Robbins-Monro conditions");
  if (config.n_iters < 1) throw std::invalid_argument("run_sgd: n_iters must be >= 1");
  if (config.cadence < 1) throw std::invalid_argument("run_sgd: cadence must be >= 1");

  const ProblemSpec& spec = config.problem;
  const FemSpace& space = *spec.space;
  if (config.initial_control.size() != space.mesh().n_nodes())
    throw std::invalid_argument("run_sgd: initial control does not match the mesh");

  // The deterministic baseline runs on the zero-fluctuation coefficient.
  SaaSet deterministic_set;
  if (deterministic) {
    RandomSample zero;
    zero.xi = Eigen::VectorXd::Zero(spec.kl.n_terms);
    zero.seed_id = 0;
    deterministic_set.samples.push_back(std::move(zero));
  }
  const SaaSet& saa = deterministic ? deterministic_set : config.saa;
  if (saa.size() < 1) throw std::invalid_argument("run_sgd: empty SAA set");

  SplitMix64 index_stream = derive_stream(config.seed, /*tag=*/2);
  SaaWorkspace workspace;
  workspace.states.resize(static_cast<std::size_t>(saa.size()));
  workspace.stiffnesses.resize(static_cast<std::size_t>(saa.size()));
  auto cached_stiffness = [&](std::size_t idx) -> const SparseMatrix* {
    if (workspace.stiffnesses[idx].nonZeros() == 0)
      workspace.stiffnesses[idx] =
          assemble_sample_stiffness(space, spec.kl, saa.samples[idx]);
    return &workspace.stiffnesses[idx];
  };

  Trajectory traj;
  traj.records.reserve(static_cast<std::size_t>(config.n_iters));
  Eigen::VectorXd u = config.initial_control;

  double cum_step = 0.0;
  double min_grad_sq = std::numeric_limits<double>::infinity();
  double last_j_saa = 0.0, last_grad_sq = 0.0;
  bool have_full = false;

  for (long n = 1; n <= config.n_iters; ++n) {
    const auto tick = std::chrono::steady_clock::now();
    const double t_n = config.schedule.step(n);
    const long i_n =
        deterministic ? 0 : static_cast<long>(index_stream.uniform_index(saa.size()));

    IterationRecord rec;
    rec.iter = n;
    rec.t_n = t_n;
    rec.sample_index = i_n;
    rec.u_norm = l2_norm(space, u);
    require_finite(rec.u_norm, "control norm", n);

    const bool fresh = ((n - 1) % config.cadence) == 0;
    Eigen::VectorXd update_gradient;
    if (fresh) {
      double obj_sum = 0.0;
      Eigen::VectorXd grad_sum = Eigen::VectorXd::Zero(space.mesh().n_nodes());
      for (int i = 0; i < saa.size(); ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const Eigen::VectorXd* warm =
            workspace.states[idx].size() > 0 ? &workspace.states[idx] : nullptr;
        SampleEvaluation eval;
        try {
          eval = evaluate_sample(spec, u, saa.samples[idx], warm, cached_stiffness(idx));
        } catch (const std::exception& e) {
          throw std::runtime_error("run_sgd: iteration " + std::to_string(n) + ", sample " +
                                   std::to_string(i) + ": " + e.what());
        }
        obj_sum += eval.objective;
        grad_sum += eval.gradient;
        if (i == i_n) update_gradient = eval.gradient;
        workspace.states[idx] = std::move(eval.state);
      }
      last_j_saa = obj_sum / saa.size();
      const double g = l2_norm(space, grad_sum / saa.size());
      last_grad_sq = g * g;
      min_grad_sq = std::min(min_grad_sq, last_grad_sq);
      have_full = true;
    } else {
      const std::size_t idx = static_cast<std::size_t>(i_n);
      const Eigen::VectorXd* warm =
          workspace.states[idx].size() > 0 ? &workspace.states[idx] : nullptr;
      SampleEvaluation eval;
      try {
        eval = evaluate_sample(spec, u, saa.samples[idx], warm, cached_stiffness(idx));
      } catch (const std::exception& e) {
        throw std::runtime_error("run_sgd: iteration " + std::to_string(n) + ", sample " +
                                 std::to_string(i_n) + ": " + e.what());
      }
      update_gradient = eval.gradient;
      workspace.states[idx] = std::move(eval.state);
    }

    if (config.bias_schedule) {
      // recompute the update gradient at the decaying inner tolerance
      ProblemSpec biased = spec;
      biased.tolerances.newton_tol =
          config.bias_tol0 / (static_cast<double>(n) * static_cast<double>(n));
      update_gradient =
          stochastic_gradient(biased, u, saa.samples[static_cast<std::size_t>(i_n)]);
    }

    cum_step += t_n;
    rec.j_saa = last_j_saa;
    rec.grad_norm_sq = last_grad_sq;
    rec.min_grad_norm_sq = min_grad_sq;
    rec.cum_step_sum = cum_step;
    rec.fresh_full_gradient = fresh;
    require_finite(rec.j_saa, "objective", n);
    require_finite(rec.grad_norm_sq, "gradient norm", n);

    if (config.store_controls) traj.controls.push_back(u);

    u -= t_n * update_gradient;
    require_finite(u.norm(), "updated control", n);

    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - tick)
                      .count();
    traj.records.push_back(rec);

    if (deterministic && have_full && min_grad_sq <= config.deterministic_grad_tol) break;
  }

  traj.final_control = std::move(u);
  return traj;
}

}  // namespace

Trajectory run_sgd(const RunConfig& config) { return run_loop(config, false); }

Trajectory run_deterministic(const RunConfig& config) { return run_loop(config, true); }

RateVerdict rate_check(const Trajectory& trajectory) {
  std::vector<double> products;
  for (const IterationRecord& rec : trajectory.records)
    if (rec.fresh_full_gradient) products.push_back(rec.min_grad_norm_sq * rec.cum_step_sum);
  if (products.size() < 20)
    throw std::invalid_argument("rate_check: needs at least 20 full-gradient records");

  const std::size_t k = products.size();
  const std::size_t early_lo = k * 5 / 100;
  const std::size_t early_hi = std::max(early_lo + 1, k * 15 / 100);
  const std::size_t late_lo = k - std::max<std::size_t>(1, k * 10 / 100);

  RateVerdict verdict;
  verdict.early_median = median({products.begin() + static_cast<long>(early_lo),
                                 products.begin() + static_cast<long>(early_hi)});
  verdict.late_median =
      median({products.begin() + static_cast<long>(late_lo), products.end()});
  verdict.pass = verdict.late_median <= 0.5 * verdict.early_median;
  verdict.product_series = std::move(products);
  return verdict;
}

BoundednessReport boundedness_monitor(const Trajectory& trajectory, const ProblemSpec& spec,
                                      const SaaSet& saa, int probe_count) {
  BoundednessReport report;
  if (trajectory.records.empty()) return report;

  std::vector<double> norms;
  norms.reserve(trajectory.records.size());
  for (const IterationRecord& rec : trajectory.records) norms.push_back(rec.u_norm);
  report.max_control_norm = *std::max_element(norms.begin(), norms.end());
  const double final_norm = norms.back();
  report.growth_flagged =
      final_norm > 0.0 && final_norm >= report.max_control_norm && final_norm > 2.0 * median(norms);

  report.gamma_probe = 4.0 * report.max_control_norm * report.max_control_norm;
  report.min_angle_inner = std::numeric_limits<double>::infinity();
  if (probe_count > 0 && !trajectory.controls.empty() && report.gamma_probe > 0.0) {
    const std::size_t stride =
        std::max<std::size_t>(1, trajectory.controls.size() / static_cast<std::size_t>(probe_count));
    const double target_norm = std::sqrt(report.gamma_probe);
    for (std::size_t i = 0; i < trajectory.controls.size() &&
         report.angle_probes.size() < static_cast<std::size_t>(probe_count); i += stride) {
      const Eigen::VectorXd& u = trajectory.controls[i];
      const double norm = l2_norm(*spec.space, u);
      if (norm == 0.0) continue;
      const Eigen::VectorXd scaled = (target_norm / norm) * u;
      const double inner = l2_inner(*spec.space, saa_gradient(spec, scaled, saa), scaled);
      report.angle_probes.push_back(inner);
      report.min_angle_inner = std::min(report.min_angle_inner, inner);
    }
  }
  if (report.angle_probes.empty()) report.min_angle_inner = 0.0;
  return report;
}

}  // namespace sgpc
