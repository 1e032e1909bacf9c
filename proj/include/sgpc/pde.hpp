#ifndef SGPC_PDE_HPP
#define SGPC_PDE_HPP

#include <functional>
#include <vector>

#include "sgpc/kl_field.hpp"
#include "sgpc/mesh.hpp"

namespace sgpc {

/// Pointwise semilinear term and its derivative. Only the quintic y^5 is
/// shipped, but assembly is written against this interface.
struct PointwiseNonlinearity {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

inline PointwiseNonlinearity quintic_term() {
  return {[](double y) { return y * y * y * y * y; },
          [](double y) { return 5.0 * y * y * y * y; }};
}

struct SolverTolerances {
  double newton_tol = 1e-10;
  int newton_max_iters = 60;
  double linear_tol = 1e-14;
  double damping_shrink = 0.5;
  double damping_min = 9.5367431640625e-7;  // 2^-20
};

struct StateSolveReport {
  Eigen::VectorXd y;
  int newton_iters = 0;
  double final_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history;  // dual norms of accepted iterates, strictly decreasing
};

struct BoundDiagnostic {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// Load vector F_a = int N(y) phi_a using the 3-point edge-midpoint rule.
Eigen::VectorXd semilinear_load(const MeshTopology& mesh, const Eigen::VectorXd& y,
                                const PointwiseNonlinearity& term);

/// Jacobian block W_ab = int N'(y) phi_a phi_b, same quadrature, so W is the
/// exact derivative of semilinear_load.
SparseMatrix semilinear_jacobian(const MeshTopology& mesh, const Eigen::VectorXd& y,
                                 const PointwiseNonlinearity& term);

/// Stiffness assembled for one coefficient realization.
SparseMatrix assemble_sample_stiffness(const FemSpace& space, const KlSpec& kl,
                                       const RandomSample& sample);

/// Damped Newton solve of A y + M y + F(y) = M u, residual measured in the
/// M^-1 dual norm. warm_start, when given, seeds the iteration. Throws on
/// non-convergence or linear-solver breakdown.
StateSolveReport solve_state(const FemSpace& space, const SparseMatrix& stiffness,
                             const Eigen::VectorXd& u, const SolverTolerances& tol,
                             const Eigen::VectorXd* warm_start = nullptr);

StateSolveReport solve_state(const FemSpace& space, const KlSpec& kl, const RandomSample& sample,
                             const Eigen::VectorXd& u, const SolverTolerances& tol,
                             const Eigen::VectorXd* warm_start = nullptr);

/// Solves (A + M + W(N'(y))) p = -M (y - y_target) by direct factorization.
Eigen::VectorXd solve_adjoint(const FemSpace& space, const SparseMatrix& stiffness,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& y_target);

Eigen::VectorXd solve_adjoint(const FemSpace& space, const KlSpec& kl, const RandomSample& sample,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& y_target);

/// Energy estimate: min(C,1) ||y||_H1 <= ||u||_L2 with C the conservative
/// ellipticity bound; satisfied up to the slack factor (1 + slack).
BoundDiagnostic check_energy_bound(const FemSpace& space, const KlSpec& kl,
                                   const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                                   double slack = 0.05);

/// Lipschitz estimate: ||y1-y2||_H1 <= C^-1 ||u1-u2||_L2, same slack policy.
BoundDiagnostic check_state_lipschitz(const FemSpace& space, const KlSpec& kl,
                                      const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                                      const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                                      double slack = 0.05);

}  // namespace sgpc

#endif
