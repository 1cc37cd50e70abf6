#include "agks/multigrid.hpp"

#include "agks/dense_oracle.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace agks {

void SmootherSpec::validate() const {
  if (sweeps < 1) throw std::invalid_argument("smoother sweeps must be >= 1");
}

namespace {

using Triplet = Eigen::Triplet<double>;

}  // namespace

// Fine DOF functionals evaluated on the coarse finite element function (the
// transfer of Peisker/Braess type): nodal data is read off the coarse
// polynomial, averaged over the coarse elements sharing the evaluation
// point where the coarse function is multivalued.
SparseMat build_prolongation(ElementKind kind, const MeshLevel& coarse,
                             const MeshLevel& fine, const DofLayout& coarse_layout,
                             const DofLayout& fine_layout) {
  const int nv_c = coarse.num_vertices();
  std::vector<Triplet> trips;
  auto add = [&](int row, int col, double w) {
    if (fine_layout.constrained[row] || coarse_layout.constrained[col] || w == 0.0) return;
    trips.emplace_back(row, col, w);
  };

  // per-edge adjacency and bases of the coarse elements
  std::vector<std::array<int, 2>> edge_tris(coarse.num_edges(), {-1, -1});
  for (int t = 0; t < coarse.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      auto& slots = edge_tris[coarse.triangles[t].edge[k]];
      (slots[0] < 0 ? slots[0] : slots[1]) = t;
    }
  // averaging weights across a coarse edge; on the interface only the
  // highly-bending side contributes, which keeps the island sub-block of
  // the transfer exact on the rigid modes after the off-diagonal blocks
  // are dropped
  auto edge_weights = [&](int edge) {
    std::array<double, 2> w{1.0, 0.0};
    const auto& tris = edge_tris[edge];
    if (tris[1] >= 0) {
      const bool h0 = coarse.triangles[tris[0]].high;
      const bool h1 = coarse.triangles[tris[1]].high;
      if (h0 == h1) w = {0.5, 0.5};
      else if (h1) w = {0.0, 1.0};
      else w = {1.0, 0.0};
    }
    return w;
  };
  std::vector<ElementBasis> bases;
  bases.reserve(coarse.num_triangles());
  std::vector<std::vector<int>> tri_dofs(coarse.num_triangles());
  for (int t = 0; t < coarse.num_triangles(); ++t) {
    bases.emplace_back(kind, ElementGeometry::from_mesh(coarse, t));
    coarse_layout.element_dofs(coarse, t, tri_dofs[t]);
  }

  auto add_value_row = [&](int row, const Eigen::Vector2d& p, int tri, double weight) {
    const Eigen::VectorXd vals = bases[tri].values(p);
    for (int a = 0; a < vals.size(); ++a) add(row, tri_dofs[tri][a], weight * vals[a]);
  };
  auto add_gradient_rows = [&](int row_dx, int row_dy, const Eigen::Vector2d& p, int tri,
                               double weight) {
    const Eigen::MatrixXd grads = bases[tri].gradients(p);
    for (int a = 0; a < grads.rows(); ++a) {
      if (row_dx >= 0) add(row_dx, tri_dofs[tri][a], weight * grads(a, 0));
      if (row_dy >= 0) add(row_dy, tri_dofs[tri][a], weight * grads(a, 1));
    }
  };
  auto add_normal_row = [&](int row, const Eigen::Vector2d& p, const Eigen::Vector2d& n,
                            int tri, double weight) {
    const Eigen::MatrixXd grads = bases[tri].gradients(p);
    for (int a = 0; a < grads.rows(); ++a)
      add(row, tri_dofs[tri][a], weight * (n.x() * grads(a, 0) + n.y() * grads(a, 1)));
  };

  // fine vertices: coarse vertices carry their nodal data over; edge
  // midpoints average the one or two adjacent coarse polynomials
  for (int v = 0; v < fine.num_vertices(); ++v) {
    if (v < nv_c) {
      add(fine_layout.vertex_value(v), coarse_layout.vertex_value(v), 1.0);
      if (kind == ElementKind::HCT) {
        add(fine_layout.vertex_dx(v), coarse_layout.vertex_dx(v), 1.0);
        add(fine_layout.vertex_dy(v), coarse_layout.vertex_dy(v), 1.0);
      }
    } else {
      const int ce = v - nv_c;
      const Eigen::Vector2d mid = coarse.edge_midpoint(ce);
      const auto w = edge_weights(ce);
      for (int s = 0; s < 2; ++s) {
        if (edge_tris[ce][s] < 0 || w[s] == 0.0) continue;
        const int tri = edge_tris[ce][s];
        add_value_row(fine_layout.vertex_value(v), mid, tri, w[s]);
        if (kind == ElementKind::HCT)
          add_gradient_rows(fine_layout.vertex_dx(v), fine_layout.vertex_dy(v), mid, tri,
                            w[s]);
      }
    }
  }

  // fine edge-normal DOF: halves of coarse edges average across the shared
  // coarse edge, interior fine edges evaluate inside their parent triangle
  for (int fe = 0; fe < fine.num_edges(); ++fe) {
    const Edge& edge = fine.edges[fe];
    const int row = fine_layout.edge_dof(fe);
    const Eigen::Vector2d q = fine.edge_midpoint(fe);
    const Eigen::Vector2d n_f = fine.edge_normal(fe);
    if (edge.a < nv_c) {
      const int ce = edge.b - nv_c;
      if (edge.a != coarse.edges[ce].a && edge.a != coarse.edges[ce].b)
        throw std::logic_error("prolongation: fine edge does not match its parent");
      const auto w = edge_weights(ce);
      for (int s = 0; s < 2; ++s)
        if (edge_tris[ce][s] >= 0 && w[s] != 0.0)
          add_normal_row(row, q, n_f, edge_tris[ce][s], w[s]);
    } else {
      // both endpoints are midpoints of edges of one coarse triangle
      const int ea = edge.a - nv_c, eb = edge.b - nv_c;
      int tri = -1;
      for (int cand : {edge_tris[ea][0], edge_tris[ea][1]})
        if (cand >= 0 && (edge_tris[eb][0] == cand || edge_tris[eb][1] == cand)) tri = cand;
      if (tri < 0)
        throw std::logic_error("prolongation: interior fine edge without parent triangle");
      add_normal_row(row, q, n_f, tri, 1.0);
    }
  }

  SparseMat P(fine_layout.size, coarse_layout.size);
  P.setFromTriplets(trips.begin(), trips.end());
  P.makeCompressed();
  return P;
}

namespace {

SparseMat restrict_to(const SparseMat& P, const std::vector<int>& fine_rows,
                      const std::vector<int>& coarse_cols,
                      const std::vector<int>& fine_map, const std::vector<int>& coarse_map) {
  std::vector<Triplet> trips;
  for (int row = 0; row < P.outerSize(); ++row) {
    const int r = fine_map[row];
    if (r < 0) continue;
    for (SparseMat::InnerIterator it(P, row); it; ++it) {
      const int c = coarse_map[it.col()];
      if (c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseMat sub(static_cast<int>(fine_rows.size()), static_cast<int>(coarse_cols.size()));
  sub.setFromTriplets(trips.begin(), trips.end());
  sub.makeCompressed();
  return sub;
}

}  // namespace

TransferChain extract_prolongations(ElementKind kind, const std::vector<MeshLevel>& meshes,
                                    const std::vector<DofLayout>& layouts,
                                    const std::vector<BlockPartition>& parts) {
  TransferChain chain;
  for (std::size_t l = 0; l + 1 < meshes.size(); ++l) {
    SparseMat P = build_prolongation(kind, meshes[l], meshes[l + 1], layouts[l], layouts[l + 1]);
    const auto& pc = parts[l];
    const auto& pf = parts[l + 1];
    SparseMat P_HH = restrict_to(P, pf.H, pc.H, pf.global_to_H, pc.global_to_H);
    SparseMat P_LL = restrict_to(P, pf.L, pc.L, pf.global_to_L, pc.global_to_L);

    // nestedness: every unconstrained coarse H DOF must reach a fine H DOF
    Eigen::VectorXd col_mass = Eigen::VectorXd::Zero(P_HH.cols());
    for (int row = 0; row < P_HH.outerSize(); ++row)
      for (SparseMat::InnerIterator it(P_HH, row); it; ++it)
        col_mass[it.col()] += std::abs(it.value());
    for (int c = 0; c < P_HH.cols(); ++c)
      if (col_mass[c] == 0.0 && !layouts[l].constrained[pc.H[c]])
        throw std::runtime_error("extract_prolongations: partitions are not nested");

    chain.P.push_back(std::move(P));
    chain.P_HH.push_back(std::move(P_HH));
    chain.P_LL.push_back(std::move(P_LL));
  }
  return chain;
}

MgHierarchy MgHierarchy::build(SparseMat finest, std::vector<SparseMat> prolongations,
                               SmootherSpec smoother) {
  smoother.validate();
  MgHierarchy mg;
  mg.smoother_ = smoother;

  const int n_levels = static_cast<int>(prolongations.size()) + 1;
  mg.levels_.resize(n_levels);
  mg.levels_[n_levels - 1].A = std::move(finest);
  for (int l = n_levels - 1; l > 0; --l) {
    mg.levels_[l].P = std::move(prolongations[l - 1]);
    const SparseMat& P = mg.levels_[l].P;
    if (P.rows() != mg.levels_[l].A.rows())
      throw std::invalid_argument("mg: prolongation does not match the matrix");
    SparseMat coarse = SparseMat(P.transpose()) * mg.levels_[l].A * P;
    coarse.makeCompressed();
    mg.levels_[l - 1].A = std::move(coarse);
  }

  for (int l = 0; l < n_levels; ++l) {
    auto& lvl = mg.levels_[l];
    // constrained DOF drop out of the Galerkin product as empty rows;
    // pin them with a unit diagonal so every level stays SPD
    std::vector<Triplet> unit;
    Eigen::VectorXd diag = lvl.A.diagonal();
    for (int i = 0; i < diag.size(); ++i)
      if (diag[i] == 0.0) unit.emplace_back(i, i, 1.0);
    if (!unit.empty()) {
      SparseMat fix(lvl.A.rows(), lvl.A.cols());
      fix.setFromTriplets(unit.begin(), unit.end());
      lvl.A += fix;
      lvl.A.makeCompressed();
      diag = lvl.A.diagonal();
    }
    lvl.inv_diag = diag.cwiseInverse();
    if (!lvl.inv_diag.allFinite())
      throw std::runtime_error("mg: zero diagonal in level matrix");
  }

  const Eigen::MatrixXd coarse = to_dense(mg.levels_[0].A);
  mg.coarse_solver_.compute(coarse);
  if (mg.coarse_solver_.info() != Eigen::Success)
    throw std::runtime_error("mg: coarsest-level factorization failed");
  return mg;
}

void MgHierarchy::smooth(const Level& lvl, const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
  const SparseMat& A = lvl.A;
  const int n = static_cast<int>(A.rows());
  auto forward = [&] {
    for (int i = 0; i < n; ++i) {
      double s = b[i];
      for (SparseMat::InnerIterator it(A, i); it; ++it)
        if (it.col() != i) s -= it.value() * x[it.col()];
      x[i] = s * lvl.inv_diag[i];
    }
  };
  auto backward = [&] {
    for (int i = n - 1; i >= 0; --i) {
      double s = b[i];
      for (SparseMat::InnerIterator it(A, i); it; ++it)
        if (it.col() != i) s -= it.value() * x[it.col()];
      x[i] = s * lvl.inv_diag[i];
    }
  };
  for (int sweep = 0; sweep < smoother_.sweeps; ++sweep) {
    forward();
    if (smoother_.kind == SmootherSpec::Kind::SGS) backward();
    ++counters_.smoother_sweeps;
  }
}

void MgHierarchy::vcycle(int level, const Eigen::VectorXd& r, Eigen::VectorXd& x) const {
  if (level == 0) {
    x = coarse_solver_.solve(r);
    return;
  }
  const Level& lvl = levels_[level];
  x.setZero(r.size());
  smooth(lvl, r, x);
  const Eigen::VectorXd r_coarse = lvl.P.transpose() * (r - lvl.A * x);
  Eigen::VectorXd x_coarse;
  vcycle(level - 1, r_coarse, x_coarse);
  x += lvl.P * x_coarse;
  smooth(lvl, r, x);
}

Eigen::VectorXd MgHierarchy::apply(const Eigen::VectorXd& r) const {
  ++counters_.applications;
  Eigen::VectorXd x;
  vcycle(num_levels() - 1, r, x);
  return x;
}

}  // namespace agks
