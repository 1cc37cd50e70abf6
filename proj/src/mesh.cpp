#include "agks/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace agks {

double MeshLevel::signed_area(int t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d d1 = vertices[tri.v[1]] - vertices[tri.v[0]];
  const Eigen::Vector2d d2 = vertices[tri.v[2]] - vertices[tri.v[0]];
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

int MeshLevel::count_high_triangles() const {
  int n = 0;
  for (const auto& t : triangles) n += t.high ? 1 : 0;
  return n;
}

namespace {

// Rebuild the edge list and all derived connectivity from vertices/triangles.
void finalize(MeshLevel& mesh) {
  std::map<std::pair<int, int>, int> edge_ids;
  mesh.edges.clear();
  for (auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int a = tri.v[k], b = tri.v[(k + 1) % 3];
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_ids.try_emplace({a, b}, static_cast<int>(mesh.edges.size()));
      if (inserted) mesh.edges.push_back(Edge{a, b});
      tri.edge[k] = it->second;
    }
  }

  const int nv = mesh.num_vertices();
  const int ne = mesh.num_edges();
  std::vector<int> edge_tri_count(ne, 0);
  mesh.vertex_high.assign(nv, 0);
  mesh.vertex_low.assign(nv, 0);
  mesh.edge_high.assign(ne, 0);
  mesh.edge_low.assign(ne, 0);
  for (const auto& tri : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      ++edge_tri_count[tri.edge[k]];
      (tri.high ? mesh.vertex_high : mesh.vertex_low)[tri.v[k]] = 1;
      (tri.high ? mesh.edge_high : mesh.edge_low)[tri.edge[k]] = 1;
    }
  }
  mesh.edge_boundary.assign(ne, 0);
  mesh.vertex_boundary.assign(nv, 0);
  for (int e = 0; e < ne; ++e) {
    if (edge_tri_count[e] == 1) {
      mesh.edge_boundary[e] = 1;
      mesh.vertex_boundary[mesh.edges[e].a] = 1;
      mesh.vertex_boundary[mesh.edges[e].b] = 1;
    }
  }

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (mesh.signed_area(t) <= 0.0)
      throw std::logic_error("mesh: nonpositive triangle area");
  }
}

bool on_coarse_grid(double c) {
  const double scaled = c * 4.0;
  return std::abs(scaled - std::round(scaled)) < 1e-12;
}

}  // namespace

MeshLevel build_coarse(const IslandSpec& island) {
  for (double c : {island.x0, island.y0, island.x1, island.y1}) {
    if (!on_coarse_grid(c))
      throw std::invalid_argument("island box corner not on the coarse 4x4 grid");
  }
  if (!(island.x0 < island.x1 && island.y0 < island.y1))
    throw std::invalid_argument("island box is empty");

  MeshLevel mesh;
  mesh.level = 1;
  constexpr int n = 4;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      mesh.vertices.emplace_back(double(i) / n, double(j) / n);

  auto vid = [](int i, int j) { return j * (n + 1) + i; };
  auto inside_island = [&](const Eigen::Vector2d& p) {
    return p.x() >= island.x0 && p.x() <= island.x1 &&
           p.y() >= island.y0 && p.y() <= island.y1;
  };

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      // positive-slope diagonal v00 -- v11
      for (auto verts : {std::array<int, 3>{v00, v10, v11},
                         std::array<int, 3>{v00, v11, v01}}) {
        Triangle tri;
        tri.v = verts;
        const Eigen::Vector2d bc = (mesh.vertices[verts[0]] + mesh.vertices[verts[1]] +
                                    mesh.vertices[verts[2]]) / 3.0;
        tri.high = inside_island(bc);
        mesh.triangles.push_back(tri);
      }
    }
  }
  finalize(mesh);
  return mesh;
}

MeshLevel refine(const MeshLevel& coarse) {
  MeshLevel fine;
  fine.level = coarse.level + 1;
  fine.vertices = coarse.vertices;
  // midpoint vertex of coarse edge e gets id  coarse.num_vertices() + e
  for (int e = 0; e < coarse.num_edges(); ++e)
    fine.vertices.push_back(coarse.edge_midpoint(e));

  const int off = coarse.num_vertices();
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    const auto& tri = coarse.triangles[t];
    const int a = tri.v[0], b = tri.v[1], c = tri.v[2];
    const int mab = off + tri.edge[0];
    const int mbc = off + tri.edge[1];
    const int mca = off + tri.edge[2];
    for (auto verts : {std::array<int, 3>{a, mab, mca},
                       std::array<int, 3>{mab, b, mbc},
                       std::array<int, 3>{mca, mbc, c},
                       std::array<int, 3>{mab, mbc, mca}}) {
      Triangle child;
      child.v = verts;
      child.high = tri.high;
      fine.triangles.push_back(child);
      fine.parent.push_back(t);
    }
  }
  finalize(fine);
  return fine;
}

std::vector<MeshLevel> build_hierarchy(int levels, const IslandSpec& island) {
  if (levels < 1) throw std::invalid_argument("levels must be >= 1");
  std::vector<MeshLevel> chain;
  chain.push_back(build_coarse(island));
  for (int l = 1; l < levels; ++l) chain.push_back(refine(chain.back()));
  return chain;
}

void dump_mesh(std::ostream& os, const MeshLevel& mesh) {
  os << "level " << mesh.level << "\n";
  os << "vertices " << mesh.num_vertices() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v)
    os << v << " " << mesh.vertices[v].x() << " " << mesh.vertices[v].y()
       << (mesh.vertex_boundary[v] ? " boundary" : "") << "\n";
  os << "edges " << mesh.num_edges() << "\n";
  for (int e = 0; e < mesh.num_edges(); ++e)
    os << e << " " << mesh.edges[e].a << " " << mesh.edges[e].b
       << (mesh.edge_boundary[e] ? " boundary" : "") << "\n";
  os << "triangles " << mesh.num_triangles() << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    os << t << " " << tri.v[0] << " " << tri.v[1] << " " << tri.v[2]
       << " " << (tri.high ? "H" : "L") << "\n";
  }
}

}  // namespace agks
