#include "sgpc/pde.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgpc {

namespace {

// local edge midpoints: midpoint m pairs local vertices (m, m+1 mod 3)
constexpr int kMidA[3] = {0, 1, 2};
constexpr int kMidB[3] = {1, 2, 0};

double triangle_area(const MeshTopology& mesh, int t) {
  const auto tri = mesh.triangles.row(t);
  const Eigen::Vector2d p0 = mesh.nodes.row(tri[0]);
  const Eigen::Vector2d p1 = mesh.nodes.row(tri[1]);
  const Eigen::Vector2d p2 = mesh.nodes.row(tri[2]);
  return 0.5 * ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
}

}  // namespace

Eigen::VectorXd semilinear_load(const MeshTopology& mesh, const Eigen::VectorXd& y,
                                const PointwiseNonlinearity& term) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.n_nodes());
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double w = triangle_area(mesh, t) / 3.0;
    const auto tri = mesh.triangles.row(t);
    for (int m = 0; m < 3; ++m) {
      const int a = tri[kMidA[m]], b = tri[kMidB[m]];
      const double n_mid = term.value(0.5 * (y[a] + y[b]));
      // phi_a = phi_b = 1/2 at the shared edge midpoint
      load[a] += w * n_mid * 0.5;
      load[b] += w * n_mid * 0.5;
    }
  }
  return load;
}

SparseMatrix semilinear_jacobian(const MeshTopology& mesh, const Eigen::VectorXd& y,
                                 const PointwiseNonlinearity& term) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 12);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const double w = triangle_area(mesh, t) / 3.0;
    const auto tri = mesh.triangles.row(t);
    for (int m = 0; m < 3; ++m) {
      const int a = tri[kMidA[m]], b = tri[kMidB[m]];
      const double dn_mid = term.derivative(0.5 * (y[a] + y[b]));
      const double entry = w * dn_mid * 0.25;
      triplets.emplace_back(a, a, entry);
      triplets.emplace_back(b, b, entry);
      triplets.emplace_back(a, b, entry);
      triplets.emplace_back(b, a, entry);
    }
  }
  SparseMatrix jac(mesh.n_nodes(), mesh.n_nodes());
  jac.setFromTriplets(triplets.begin(), triplets.end());
  return jac;
}

SparseMatrix assemble_sample_stiffness(const FemSpace& space, const KlSpec& kl,
                                       const RandomSample& sample) {
  return assemble_stiffness(space.mesh(), [&](const Eigen::Vector2d& x) {
    return evaluate_coefficient(kl, sample, x);
  });
}

StateSolveReport solve_state(const FemSpace& space, const SparseMatrix& stiffness,
                             const Eigen::VectorXd& u, const SolverTolerances& tol,
                             const Eigen::VectorXd* warm_start) {
  const MeshTopology& mesh = space.mesh();
  if (u.size() != mesh.n_nodes())
    throw std::invalid_argument("solve_state: control does not match the mesh");
  const PointwiseNonlinearity term = quintic_term();
  const Eigen::VectorXd rhs = space.mass() * u;

  StateSolveReport report;
  report.y = warm_start ? *warm_start : Eigen::VectorXd::Zero(mesh.n_nodes());

  auto residual = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return stiffness * y + space.mass() * y + semilinear_load(mesh, y, term) - rhs;
  };

  Eigen::VectorXd r = residual(report.y);
  double r_norm = dual_norm(space, r);
  report.residual_history.push_back(r_norm);
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  while (r_norm > tol.newton_tol) {
    if (report.newton_iters >= tol.newton_max_iters) {
      report.final_residual = r_norm;
      throw std::runtime_error("solve_state: Newton did not converge within iteration cap");
    }
    const SparseMatrix jac =
        stiffness + space.mass() + semilinear_jacobian(mesh, report.y, term);
    ldlt.compute(jac);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("solve_state: linear solver breakdown");
    const Eigen::VectorXd step = ldlt.solve(-r);

    // residual-monotone backtracking
    double alpha = 1.0;
    Eigen::VectorXd y_try = report.y + step;
    Eigen::VectorXd r_try = residual(y_try);
    double r_try_norm = dual_norm(space, r_try);
    while (r_try_norm >= r_norm && alpha > tol.damping_min) {
      alpha *= tol.damping_shrink;
      y_try = report.y + alpha * step;
      r_try = residual(y_try);
      r_try_norm = dual_norm(space, r_try);
    }
    if (r_try_norm >= r_norm)
      throw std::runtime_error("solve_state: damping failed to reduce the residual");
    report.y = std::move(y_try);
    r = std::move(r_try);
    r_norm = r_try_norm;
    report.residual_history.push_back(r_norm);
    ++report.newton_iters;
  }
  report.final_residual = r_norm;
  report.converged = true;
  return report;
}

StateSolveReport solve_state(const FemSpace& space, const KlSpec& kl, const RandomSample& sample,
                             const Eigen::VectorXd& u, const SolverTolerances& tol,
                             const Eigen::VectorXd* warm_start) {
  return solve_state(space, assemble_sample_stiffness(space, kl, sample), u, tol, warm_start);
}

Eigen::VectorXd solve_adjoint(const FemSpace& space, const SparseMatrix& stiffness,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& y_target) {
  const MeshTopology& mesh = space.mesh();
  if (y.size() != mesh.n_nodes() || y_target.size() != mesh.n_nodes())
    throw std::invalid_argument("solve_adjoint: operand does not match the mesh");
  const SparseMatrix system =
      stiffness + space.mass() + semilinear_jacobian(mesh, y, quintic_term());
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(system);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve_adjoint: linear solver breakdown");
  if ((ldlt.vectorD().array() <= 0.0).any())
    throw std::runtime_error("solve_adjoint: indefinite adjoint system");
  const Eigen::VectorXd rhs = -(space.mass() * (y - y_target));
  return ldlt.solve(rhs);
}

Eigen::VectorXd solve_adjoint(const FemSpace& space, const KlSpec& kl, const RandomSample& sample,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& y_target) {
  return solve_adjoint(space, assemble_sample_stiffness(space, kl, sample), y, y_target);
}

BoundDiagnostic check_energy_bound(const FemSpace& space, const KlSpec& kl,
                                   const Eigen::VectorXd& y, const Eigen::VectorXd& u,
                                   double slack) {
  const double c = std::min(tight_lower_bound(kl), 1.0);
  BoundDiagnostic d;
  d.lhs = c * h1_norm(space, y);
  d.rhs = l2_norm(space, u);
  d.satisfied = d.lhs <= d.rhs * (1.0 + slack);
  return d;
}

BoundDiagnostic check_state_lipschitz(const FemSpace& space, const KlSpec& kl,
                                      const Eigen::VectorXd& y1, const Eigen::VectorXd& y2,
                                      const Eigen::VectorXd& u1, const Eigen::VectorXd& u2,
                                      double slack) {
  const double c = std::min(tight_lower_bound(kl), 1.0);
  BoundDiagnostic d;
  d.lhs = h1_norm(space, y1 - y2);
  d.rhs = l2_norm(space, u1 - u2) / c;
  d.satisfied = d.lhs <= d.rhs * (1.0 + slack);
  return d;
}

}  // namespace sgpc
