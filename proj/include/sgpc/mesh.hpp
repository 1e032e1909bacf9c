#ifndef SGPC_MESH_HPP
#define SGPC_MESH_HPP

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>

namespace sgpc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Uniform triangulation of the unit square: n_div squares per side, each
/// split along the lower-left-to-upper-right diagonal. Nodes are ordered
/// row-major, y-row by y-row, x ascending within a row.
struct MeshTopology {
  int n_div = 0;
  Eigen::Matrix<double, Eigen::Dynamic, 2> nodes;
  Eigen::Matrix<int, Eigen::Dynamic, 3> triangles;  // positive orientation

  int n_nodes() const { return static_cast<int>(nodes.rows()); }
  int n_triangles() const { return static_cast<int>(triangles.rows()); }
  double mesh_size() const { return 1.0 / n_div; }
};

MeshTopology build_mesh(int n_div);

/// Nodal coefficients of a continuous piecewise-linear function.
struct FeFunction {
  Eigen::VectorXd values;
  const MeshTopology* mesh = nullptr;
};

/// M_ab = int phi_a phi_b, exact for P1.
SparseMatrix assemble_mass(const MeshTopology& mesh);

/// A_ab = int a grad phi_a . grad phi_b with the coefficient evaluated at
/// triangle centroids. Throws std::domain_error if the coefficient is not
/// strictly positive at some quadrature point.
SparseMatrix assemble_stiffness(const MeshTopology& mesh,
                                const std::function<double(const Eigen::Vector2d&)>& coeff);

FeFunction interpolate(const MeshTopology& mesh,
                       const std::function<double(const Eigen::Vector2d&)>& f);

/// Mesh plus the assembled operators every solve needs: mass matrix, the
/// unit-coefficient stiffness, and a cached mass factorization for dual norms.
/// Immutable after construction and shareable.
class FemSpace {
 public:
  explicit FemSpace(MeshTopology mesh);

  const MeshTopology& mesh() const { return mesh_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& unit_stiffness() const { return unit_stiffness_; }

  /// Solves M x = r (for residual dual norms and Riesz maps).
  Eigen::VectorXd mass_solve(const Eigen::VectorXd& r) const;

 private:
  MeshTopology mesh_;
  SparseMatrix mass_;
  SparseMatrix unit_stiffness_;
  Eigen::SimplicialLDLT<SparseMatrix> mass_ldlt_;
};

double l2_inner(const FemSpace& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double l2_norm(const FemSpace& space, const Eigen::VectorXd& v);
/// Discrete H1 norm through the unit-coefficient stiffness: sqrt(v'(A+M)v).
double h1_norm(const FemSpace& space, const Eigen::VectorXd& v);
/// Max absolute nodal value.
double linf_norm(const Eigen::VectorXd& v);
/// sqrt(r' M^-1 r), the discrete dual norm used for Newton residuals.
double dual_norm(const FemSpace& space, const Eigen::VectorXd& r);

}  // namespace sgpc

#endif
