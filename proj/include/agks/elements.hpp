#pragma once

#include "agks/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace agks {

enum class ElementKind { HCT, Morley };

inline const char* to_string(ElementKind k) {
  return k == ElementKind::HCT ? "hct" : "morley";
}

/// Contrast m >= 1 and Poisson ratio sigma in (0, 1/2).
struct MaterialParams {
  double contrast = 1.0;
  double sigma = 0.3;
  void validate() const;
};

/// Per-element matrices for the plate bilinear form
///   a(u,v) = alpha * int_T [ sigma lap(u) lap(v)
///            + (1-sigma)(u_xx v_xx + u_yy v_yy + 2 u_xy v_xy) ]
/// plus the H^2-seminorm Gram matrix and the unit-load vector.
struct LocalMatrix {
  Eigen::MatrixXd stiffness;  // 12x12 (HCT) or 6x6 (Morley), symmetric PSD
  Eigen::MatrixXd h2_gram;    // element H^2-seminorm Gram matrix (alpha = 1)
  Eigen::VectorXd load;       // int_T phi_i
};

/// Element geometry with globally oriented edge normals.  edge_normal[k]
/// belongs to the edge joining verts[k] and verts[(k+1)%3]; the caller is
/// responsible for using the same normal on both elements sharing an edge.
struct ElementGeometry {
  std::array<Eigen::Vector2d, 3> verts;
  std::array<Eigen::Vector2d, 3> edge_normals;

  static ElementGeometry from_mesh(const MeshLevel& mesh, int tri);
};

/// Local DOF order: Morley [u0,u1,u2, d0,d1,d2];
/// HCT [u0,ux0,uy0, u1,ux1,uy1, u2,ux2,uy2, d0,d1,d2].
/// Throws std::invalid_argument for degenerate triangles.
LocalMatrix local_stiffness(ElementKind kind, const ElementGeometry& geom,
                            double alpha, double sigma);

/// Local interpolant DOF values of 1, x, y (columns), used for kernel tests
/// and the rigid-mode basis e_H.
Eigen::MatrixXd local_linear_interpolants(ElementKind kind, const ElementGeometry& geom);

/// Point evaluation of the nodal basis of one element, used by the
/// intergrid transfer and by diagnostics.  For HCT the point is located in
/// the matching subtriangle automatically.
class ElementBasis {
 public:
  ElementBasis(ElementKind kind, const ElementGeometry& geom);
  int size() const { return kind_ == ElementKind::HCT ? 12 : 6; }
  Eigen::VectorXd values(const Eigen::Vector2d& p) const;
  Eigen::MatrixXd gradients(const Eigen::Vector2d& p) const;  // size() x 2

 private:
  int locate_subtri(const Eigen::Vector2d& p) const;
  ElementKind kind_;
  std::array<Eigen::Vector2d, 3> verts_;
  Eigen::Vector2d centroid_;
  double scale_ = 1.0;
  Eigen::MatrixXd coeffs_;  // monomial coefficients per basis function
};

/// Point evaluator for the composite HCT cubic of one element.  Subtriangle
/// j spans the centroid and vertices j, (j+1)%3.
class HctFunction {
 public:
  HctFunction(const ElementGeometry& geom, Eigen::VectorXd dof);
  double value(const Eigen::Vector2d& p, int subtri) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p, int subtri) const;

 private:
  Eigen::Vector2d centroid_;
  double scale_ = 1.0;
  Eigen::VectorXd coeffs_;  // 30 composite-cubic coefficients
};

enum class DofKind : char { VertexValue, VertexDx, VertexDy, EdgeNormal };

/// Global numbering of the free system.  Clamped boundary conditions
/// (u = du/dn = 0) are enforced in place: constrained DOF keep their index
/// and the assembled rows/columns reduce to the identity, so the system
/// dimension equals the full entity count (3V+E for HCT, V+E for Morley).
struct DofLayout {
  ElementKind kind = ElementKind::Morley;
  int n_vertices = 0, n_edges = 0;
  int size = 0;
  std::vector<char> constrained;
  struct DofInfo {
    DofKind kind;
    int entity;  // vertex or edge id
  };
  std::vector<DofInfo> info;

  int vertex_value(int v) const {
    return kind == ElementKind::HCT ? 3 * v : v;
  }
  int vertex_dx(int v) const { return 3 * v + 1; }  // HCT only
  int vertex_dy(int v) const { return 3 * v + 2; }  // HCT only
  int edge_dof(int e) const {
    return kind == ElementKind::HCT ? 3 * n_vertices + e : n_vertices + e;
  }
  int dofs_per_element() const { return kind == ElementKind::HCT ? 12 : 6; }

  /// Global ids in the local order used by local_stiffness.
  void element_dofs(const MeshLevel& mesh, int tri, std::vector<int>& out) const;
};

DofLayout dof_layout(ElementKind kind, const MeshLevel& mesh);

}  // namespace agks
