#ifndef SGPC_KL_FIELD_HPP
#define SGPC_KL_FIELD_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "sgpc/rng.hpp"

namespace sgpc {

/// One retained term of the truncated Karhunen-Loeve expansion of the
/// diffusion coefficient: eigenvalue eta_{j,k} = 1/4 exp(-pi (j^2+k^2) l^2)
/// with eigenfunction phi_{j,k}(x) = 2 cos(j pi x2) cos(k pi x1).
struct KlEigenpair {
  double eigenvalue;
  int j;
  int k;
};

/// Truncated KL expansion a(x,xi) = a0 + sum_i sqrt(eta_i) phi_i(x) xi^i,
/// eigenpairs sorted by descending eigenvalue, ties broken by ascending (j,k).
struct KlSpec {
  double a0;
  int n_terms;
  double correlation_length;
  std::vector<KlEigenpair> eigenpairs;
};

/// One coefficient realization: n_terms uniform draws in [-1,1].
struct RandomSample {
  Eigen::VectorXd xi;
  std::int64_t seed_id = -1;
};

/// Both uniform ellipticity lower bounds for the coefficient. c_conservative
/// follows from |phi_i| <= 2 and |xi^i| <= 1, i.e. a0 - sum 2 sqrt(eta_i);
/// c_loose is a0 - sum exp(-pi (j^2+k^2) l^2). c_conservative is the one that
/// actually bounds every realization; c_loose is retained for reporting.
struct EllipticityBounds {
  double c_loose;
  double c_conservative;
};

/// Enumerates index pairs (j,k) >= (1,1), keeps the n_terms largest
/// eigenvalues. Throws std::invalid_argument on bad parameters or when the
/// truncation would destroy uniform ellipticity (a0 - sum 2 sqrt(eta) <= 0).
KlSpec build_kl_spec(int n_terms, double correlation_length, double a0);

/// Point evaluation of the realized coefficient; x in the closed unit square.
double evaluate_coefficient(const KlSpec& spec, const RandomSample& sample,
                            const Eigen::Vector2d& x);

EllipticityBounds ellipticity_bounds(const KlSpec& spec);

/// The rigorous uniform lower bound used by all diagnostics
/// (= EllipticityBounds::c_conservative). Throws std::domain_error if no
/// positive bound exists.
double tight_lower_bound(const KlSpec& spec);

/// n_terms independent uniforms on [-1,1], consumed in component order.
RandomSample draw_sample(SplitMix64& rng, const KlSpec& spec);

}  // namespace sgpc

#endif
