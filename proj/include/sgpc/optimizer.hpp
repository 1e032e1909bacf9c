#ifndef SGPC_OPTIMIZER_HPP
#define SGPC_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "sgpc/oracle.hpp"

namespace sgpc {

/// Step sizes t_n = theta / n^s.
struct StepSchedule {
  double theta = 1.0;
  double s = 1.0;

  double step(long n) const;
  /// Divergent step sum with convergent square sum: s in (1/2, 1].
  bool rm_valid() const { return theta > 0.0 && s > 0.5 && s <= 1.0; }
  /// Divergence of sum t_j / (t_1 + ... + t_j), required by the rate bound.
  /// Holds for the same power-schedule range.
  bool rate_condition_valid() const { return rm_valid(); }
};

struct ScheduleReport {
  bool rm_valid = false;
  bool step_sum_diverges = false;
  bool square_sum_converges = false;
  bool rate_condition = false;
  long horizon = 0;
  double partial_step_sum = 0.0;
  double partial_square_sum = 0.0;
  double partial_ratio_sum = 0.0;  // sum of t_j / (t_1+...+t_j)
};

ScheduleReport validate_schedule(const StepSchedule& schedule, long horizon);

struct IterationRecord {
  long iter = 0;
  double t_n = 0.0;
  double j_saa = 0.0;
  double grad_norm_sq = 0.0;
  double min_grad_norm_sq = 0.0;
  double cum_step_sum = 0.0;
  double u_norm = 0.0;
  long sample_index = -1;
  double wall_ms = 0.0;
  bool fresh_full_gradient = false;  // SAA gradient recomputed at this iterate
};

struct Trajectory {
  std::vector<IterationRecord> records;
  Eigen::VectorXd final_control;
  std::vector<Eigen::VectorXd> controls;  // iterates, present when stored
};

struct RunConfig {
  ProblemSpec problem;
  StepSchedule schedule;
  long n_iters = 300;
  SaaSet saa;
  Eigen::VectorXd initial_control;
  long cadence = 1;  // SAA full gradient every cadence iterations
  std::uint64_t seed = 10;
  bool store_controls = true;
  /// Termination threshold on min ||grad||^2 for the deterministic run.
  double deterministic_grad_tol = 1e-8;
  /// Optional decaying inner tolerance newton_tol_n = bias_tol0 / n^2 for the
  /// single-sample solves, exercising a summable-bias regime.
  bool bias_schedule = false;
  double bias_tol0 = 1e-6;
};

/// u_{n+1} = u_n - t_n G(u_n, xi_{i_n}) with i_n drawn uniformly (with
/// replacement) from the frozen SAA set. SAA objective/gradient recorded on
/// cadence iterations. Throws on solver failure or non-finite records.
Trajectory run_sgd(const RunConfig& config);

/// Plain gradient descent on the zero-fluctuation coefficient; terminates
/// early once min ||grad||^2 <= deterministic_grad_tol.
Trajectory run_deterministic(const RunConfig& config);

struct RateVerdict {
  bool pass = false;
  double early_median = 0.0;
  double late_median = 0.0;
  std::vector<double> product_series;  // (running min grad^2) * (cum step sum)
};

/// Finite-horizon surrogate for the o(1/sum t_j) rate claim: PASS when the
/// median of the product series over the last 10% of full-gradient records is
/// at most half the median over records 5%-15%. Needs >= 20 such records.
RateVerdict rate_check(const Trajectory& trajectory);

struct BoundednessReport {
  double max_control_norm = 0.0;
  double gamma_probe = 0.0;
  std::vector<double> angle_probes;  // (grad, u) inner products at rescaled iterates
  double min_angle_inner = 0.0;
  bool growth_flagged = false;
};

/// Diagnostic only, never fails a run. Probes the angle condition
/// inf_{||u||^2 >= gamma} (grad j(u), u) >= 0 at iterates rescaled to
/// ||u||^2 = gamma_probe = 4 max_n ||u_n||^2. Requires stored controls for
/// the probes; without them only the norm statistics are reported.
BoundednessReport boundedness_monitor(const Trajectory& trajectory, const ProblemSpec& spec,
                                      const SaaSet& saa, int probe_count);

}  // namespace sgpc

#endif
