#ifndef SGPC_BENCHMARK_HPP
#define SGPC_BENCHMARK_HPP

#include "sgpc/oracle.hpp"

namespace sgpc {

/// Tracking target y_D(x) = 60 + 160 (x1 (x1 - 1) + x2 (x2 - 1)).
double benchmark_target(const Eigen::Vector2d& x);

/// Model problem used throughout: 20-term KL coefficient with l = 0.5 and
/// a0 = 1 on the unit square, P1 elements on a uniform mesh with n_div
/// squares per side, quadratic tracking of benchmark_target.
ProblemSpec make_benchmark_problem(int n_div, double lambda,
                                   const SolverTolerances& tol = SolverTolerances{});

}  // namespace sgpc

#endif
