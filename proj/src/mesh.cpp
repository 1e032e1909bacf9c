#include "sgpc/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgpc {

MeshTopology build_mesh(int n_div) {
  if (n_div < 1) throw std::invalid_argument("build_mesh: n_div must be >= 1");

  MeshTopology mesh;
  mesh.n_div = n_div;
  const int np = n_div + 1;
  mesh.nodes.resize(np * np, 2);
  const double h = 1.0 / n_div;
  for (int iy = 0; iy < np; ++iy)
    for (int ix = 0; ix < np; ++ix) {
      const int a = iy * np + ix;
      mesh.nodes(a, 0) = ix * h;
      mesh.nodes(a, 1) = iy * h;
    }

  mesh.triangles.resize(2 * n_div * n_div, 3);
  int t = 0;
  for (int iy = 0; iy < n_div; ++iy)
    for (int ix = 0; ix < n_div; ++ix) {
      const int v00 = iy * np + ix;
      const int v10 = v00 + 1;
      const int v01 = v00 + np;
      const int v11 = v01 + 1;
      // split along the v00-v11 diagonal, both triangles counter-clockwise
      mesh.triangles.row(t++) << v00, v10, v11;
      mesh.triangles.row(t++) << v00, v11, v01;
    }
  return mesh;
}

namespace {

struct TriangleGeometry {
  double area;
  Eigen::Matrix<double, 3, 2> grads;  // constant P1 basis gradients
  Eigen::Vector2d centroid;
};

TriangleGeometry triangle_geometry(const MeshTopology& mesh, int t) {
  const auto tri = mesh.triangles.row(t);
  const Eigen::Vector2d p0 = mesh.nodes.row(tri[0]);
  const Eigen::Vector2d p1 = mesh.nodes.row(tri[1]);
  const Eigen::Vector2d p2 = mesh.nodes.row(tri[2]);
  const Eigen::Vector2d e1 = p1 - p0, e2 = p2 - p0;
  const double det = e1.x() * e2.y() - e1.y() * e2.x();

  TriangleGeometry g;
  g.area = 0.5 * det;
  // grad phi_i = perpendicular of the opposite edge / (2 area)
  g.grads.row(0) = Eigen::RowVector2d(p1.y() - p2.y(), p2.x() - p1.x()) / det;
  g.grads.row(1) = Eigen::RowVector2d(p2.y() - p0.y(), p0.x() - p2.x()) / det;
  g.grads.row(2) = Eigen::RowVector2d(p0.y() - p1.y(), p1.x() - p0.x()) / det;
  g.centroid = (p0 + p1 + p2) / 3.0;
  return g;
}

}  // namespace

SparseMatrix assemble_mass(const MeshTopology& mesh) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    const auto tri = mesh.triangles.row(t);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        triplets.emplace_back(tri[a], tri[b], g.area / 12.0 * (a == b ? 2.0 : 1.0));
  }
  SparseMatrix m(mesh.n_nodes(), mesh.n_nodes());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix assemble_stiffness(const MeshTopology& mesh,
                                const std::function<double(const Eigen::Vector2d&)>& coeff) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.n_triangles()) * 9);
  for (int t = 0; t < mesh.n_triangles(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    const double a_c = coeff(g.centroid);
    if (!(a_c > 0.0))
      throw std::domain_error("assemble_stiffness: non-positive coefficient at quadrature point");
    const auto tri = mesh.triangles.row(t);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        triplets.emplace_back(tri[a], tri[b], a_c * g.area * g.grads.row(a).dot(g.grads.row(b)));
  }
  SparseMatrix m(mesh.n_nodes(), mesh.n_nodes());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

FeFunction interpolate(const MeshTopology& mesh,
                       const std::function<double(const Eigen::Vector2d&)>& f) {
  FeFunction v;
  v.mesh = &mesh;
  v.values.resize(mesh.n_nodes());
  for (int a = 0; a < mesh.n_nodes(); ++a) v.values[a] = f(mesh.nodes.row(a));
  return v;
}

FemSpace::FemSpace(MeshTopology mesh)
    : mesh_(std::move(mesh)),
      mass_(assemble_mass(mesh_)),
      unit_stiffness_(assemble_stiffness(mesh_, [](const Eigen::Vector2d&) { return 1.0; })) {
  mass_ldlt_.compute(mass_);
  if (mass_ldlt_.info() != Eigen::Success)
    throw std::runtime_error("FemSpace: mass matrix factorization failed");
}

Eigen::VectorXd FemSpace::mass_solve(const Eigen::VectorXd& r) const {
  return mass_ldlt_.solve(r);
}

double l2_inner(const FemSpace& space, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != space.mesh().n_nodes() || b.size() != space.mesh().n_nodes())
    throw std::invalid_argument("l2_inner: operand does not match the mesh");
  return a.dot(space.mass() * b);
}

double l2_norm(const FemSpace& space, const Eigen::VectorXd& v) {
  return std::sqrt(std::max(0.0, l2_inner(space, v, v)));
}

double h1_norm(const FemSpace& space, const Eigen::VectorXd& v) {
  if (v.size() != space.mesh().n_nodes())
    throw std::invalid_argument("h1_norm: operand does not match the mesh");
  return std::sqrt(std::max(0.0, v.dot(space.unit_stiffness() * v) + v.dot(space.mass() * v)));
}

double linf_norm(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

double dual_norm(const FemSpace& space, const Eigen::VectorXd& r) {
  return std::sqrt(std::max(0.0, r.dot(space.mass_solve(r))));
}

}  // namespace sgpc
