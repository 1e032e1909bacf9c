#include "sgpc/armijo.hpp"

#include <cmath>
#include <stdexcept>

namespace sgpc {

double armijo_step_size(const ArmijoParams& params) {
  if (!(params.beta > 0.0)) throw std::invalid_argument("armijo: beta must be positive");
  if (!(params.shrink > 0.0 && params.shrink < 1.0))
    throw std::invalid_argument("armijo: shrink factor must lie in (0,1)");
  if (!(params.c > 0.0 && params.c < 1.0))
    throw std::invalid_argument("armijo: c must lie in (0,1)");

  double alpha = params.beta;
  while (alpha > 1.0 - params.c) alpha *= params.shrink;
  return alpha;
}

ArmijoStep armijo_step(double u, double xi, const ArmijoParams& params) {
  const double alpha = armijo_step_size(params);
  return {alpha, u - alpha * 2.0 * (u + xi)};
}

EscapeReport simulate_armijo(const ArmijoParams& params, double epsilon, long n_iters,
                             std::uint64_t seed, double u1) {
  const double alpha = armijo_step_size(params);
  if (!(epsilon > 0.0 && epsilon < alpha / (1.0 - alpha)))
    throw std::invalid_argument("simulate_armijo: need 0 < epsilon < alpha/(1-alpha)");
  if (n_iters < 1) throw std::invalid_argument("simulate_armijo: n_iters must be >= 1");

  SplitMix64 rng = derive_stream(seed, /*tag=*/3);
  EscapeReport report;
  report.iters = n_iters;
  double u = u1;
  long inside = 0;
  for (long n = 1; n <= n_iters; ++n) {
    const bool was_inside = std::abs(u) < epsilon;
    if (was_inside) ++inside;
    u = armijo_step(u, rng.sign_flip(), params).u_next;
    if (was_inside && std::abs(u) <= epsilon) ++report.violations;
  }
  report.inside_fraction = static_cast<double>(inside) / static_cast<double>(n_iters);
  report.final_u = u;
  return report;
}

std::vector<double> simulate_rm_1d(double theta, double s, long n_iters, std::uint64_t seed,
                                   double u1, bool with_noise) {
  if (!(theta > 0.0 && s > 0.5 && s <= 1.0))
    throw std::invalid_argument("simulate_rm_1d: schedule violates the Robbins-Monro conditions");
  if (n_iters < 1) throw std::invalid_argument("simulate_rm_1d: n_iters must be >= 1");

  SplitMix64 rng = derive_stream(seed, /*tag=*/3);
  std::vector<double> trajectory;
  trajectory.reserve(static_cast<std::size_t>(n_iters) + 1);
  double u = u1;
  trajectory.push_back(u);
  for (long n = 1; n <= n_iters; ++n) {
    const double t_n = theta / std::pow(static_cast<double>(n), s);
    u -= t_n * 2.0 * (u + (with_noise ? rng.sign_flip() : 0.0));
    trajectory.push_back(u);
  }
  return trajectory;
}

}  // namespace sgpc
