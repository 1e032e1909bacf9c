#ifndef SGPC_ARMIJO_HPP
#define SGPC_ARMIJO_HPP

#include <cstdint>
#include <vector>

#include "sgpc/rng.hpp"

namespace sgpc {

/// Scalar testbed J(u,xi) = (u+xi)^2 with xi = +-1 drawn fairly. Armijo
/// backtracking on the single-sample objective keeps a fixed effective step
/// and therefore never settles near the minimizer u = 0, while Robbins-Monro
/// steps do converge.

struct ArmijoParams {
  double beta = 1.0;    // initial trial step
  double shrink = 0.5;  // backtracking factor t in (0,1)
  double c = 0.5;       // sufficient-decrease parameter in (0,1)
};

/// Closed-form Armijo step: alpha = beta * shrink^m for the smallest integer
/// m >= 0 with beta * shrink^m <= 1 - c. For this quadratic the sufficient-
/// decrease test is equivalent to that inequality, so alpha is the same at
/// every iterate.
double armijo_step_size(const ArmijoParams& params);

struct ArmijoStep {
  double alpha;
  double u_next;
};

ArmijoStep armijo_step(double u, double xi, const ArmijoParams& params);

struct EscapeReport {
  long iters = 0;
  long violations = 0;        // iterates inside the eps-ball whose successor stayed inside
  double inside_fraction = 0.0;
  double final_u = 0.0;
};

/// Runs Armijo-stepped SGD and checks, for every n with |u_n| < epsilon, that
/// |u_{n+1}| > epsilon. Requires epsilon < alpha / (1 - alpha).
EscapeReport simulate_armijo(const ArmijoParams& params, double epsilon, long n_iters,
                             std::uint64_t seed, double u1 = 1.0);

/// Robbins-Monro iteration u_{n+1} = u_n - (theta/n^s) 2 (u_n + xi_n) on the
/// same problem; returns u_1, ..., u_{n_iters+1}. with_noise=false forces
/// xi_n = 0, exposing the deterministic contraction.
std::vector<double> simulate_rm_1d(double theta, double s, long n_iters, std::uint64_t seed,
                                   double u1 = 1.0, bool with_noise = true);

}  // namespace sgpc

#endif
