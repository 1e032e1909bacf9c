#include "sgpc/benchmark.hpp"

namespace sgpc {

double benchmark_target(const Eigen::Vector2d& x) {
  return 60.0 + 160.0 * (x.x() * (x.x() - 1.0) + x.y() * (x.y() - 1.0));
}

ProblemSpec make_benchmark_problem(int n_div, double lambda, const SolverTolerances& tol) {
  ProblemSpec spec;
  spec.kl = build_kl_spec(20, 0.5, 1.0);
  spec.space = std::make_shared<FemSpace>(build_mesh(n_div));
  spec.y_target = interpolate(spec.space->mesh(), benchmark_target).values;
  spec.lambda = lambda;
  spec.tolerances = tol;
  return spec;
}

}  // namespace sgpc
