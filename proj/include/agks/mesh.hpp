#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <vector>

namespace agks {

/// Axis-aligned bounding box of the highly-bending island, in unit-square
/// coordinates.  Corners must lie on the coarse 4x4 grid.
struct IslandSpec {
  double x0 = 0.25, y0 = 0.25;
  double x1 = 0.50, y1 = 0.50;
};

struct Edge {
  int a = -1, b = -1;  // vertex ids, a < b
};

struct Triangle {
  std::array<int, 3> v{};     // vertex ids, counterclockwise
  std::array<int, 3> edge{};  // edge[k] joins v[k] and v[(k+1)%3]
  bool high = false;          // inside the highly-bending island
};

/// One level of the nested triangulation of the unit square.  Immutable
/// after construction; safe for concurrent reads.
struct MeshLevel {
  int level = 1;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  std::vector<int> parent;  // child triangle -> parent index; empty on level 1

  std::vector<char> vertex_boundary, edge_boundary;
  // incidence with H- and L-tagged triangles
  std::vector<char> vertex_high, vertex_low, edge_high, edge_low;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  Eigen::Vector2d edge_midpoint(int e) const {
    return 0.5 * (vertices[edges[e].a] + vertices[edges[e].b]);
  }
  double edge_length(int e) const {
    return (vertices[edges[e].b] - vertices[edges[e].a]).norm();
  }
  /// Unit tangent from the lower- to the higher-indexed endpoint.
  Eigen::Vector2d edge_tangent(int e) const {
    return (vertices[edges[e].b] - vertices[edges[e].a]).normalized();
  }
  /// Unit normal: tangent rotated by +90 degrees.  The global sign
  /// convention for all edge-normal degrees of freedom.
  Eigen::Vector2d edge_normal(int e) const {
    const Eigen::Vector2d t = edge_tangent(e);
    return {-t.y(), t.x()};
  }
  Eigen::Vector2d barycenter(int t) const {
    const auto& tri = triangles[t];
    return (vertices[tri.v[0]] + vertices[tri.v[1]] + vertices[tri.v[2]]) / 3.0;
  }
  double signed_area(int t) const;

  /// Interface edges: shared by one H and one L triangle.
  bool edge_on_interface(int e) const { return edge_high[e] && edge_low[e]; }
  bool vertex_on_interface(int v) const { return vertex_high[v] && vertex_low[v]; }

  int count_high_triangles() const;
};

/// Coarsest level: 4x4 squares, each split by the positive-slope diagonal
/// (32 triangles, 25 vertices, 56 edges).  Throws std::invalid_argument if
/// the island box is not aligned with the coarse grid.
MeshLevel build_coarse(const IslandSpec& island = {});

/// Uniform midpoint (red) refinement.  Children inherit the region tag.
MeshLevel refine(const MeshLevel& mesh);

/// Levels 1..levels, level 1 the coarsest.
std::vector<MeshLevel> build_hierarchy(int levels, const IslandSpec& island = {});

/// Plain-text dump, one entity per line.
void dump_mesh(std::ostream& os, const MeshLevel& mesh);

}  // namespace agks
