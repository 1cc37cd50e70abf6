#include "agks/assembly.hpp"

#include <Eigen/QR>
#include <Eigen/SparseCore>

#include <random>
#include <stdexcept>

namespace agks {

namespace {
using Triplet = Eigen::Triplet<double>;
}

System assemble(ElementKind kind, const MeshLevel& mesh, const DofLayout& layout,
                const MaterialParams& params, const RhsSpec& rhs) {
  params.validate();
  System sys;
  sys.b = Eigen::VectorXd::Zero(layout.size);

  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(mesh.num_triangles()) *
                layout.dofs_per_element() * layout.dofs_per_element() + layout.size);
  std::vector<int> dofs;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double alpha = mesh.triangles[t].high ? params.contrast : 1.0;
    const LocalMatrix local =
        local_stiffness(kind, ElementGeometry::from_mesh(mesh, t), alpha, params.sigma);
    layout.element_dofs(mesh, t, dofs);
    const int n = static_cast<int>(dofs.size());
    for (int i = 0; i < n; ++i) {
      if (layout.constrained[dofs[i]]) continue;
      sys.b[dofs[i]] += local.load[i];
      for (int j = 0; j < n; ++j) {
        if (layout.constrained[dofs[j]]) continue;
        trips.emplace_back(dofs[i], dofs[j], local.stiffness(i, j));
      }
    }
  }
  for (int d = 0; d < layout.size; ++d)
    if (layout.constrained[d]) trips.emplace_back(d, d, 1.0);

  sys.K.resize(layout.size, layout.size);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.K.makeCompressed();

  if (rhs.kind == RhsSpec::Kind::Random) {
    std::mt19937_64 gen(rhs.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int d = 0; d < layout.size; ++d)
      sys.b[d] = layout.constrained[d] ? 0.0 : dist(gen);
  }
  return sys;
}

BlockPartition partition(ElementKind kind, const MeshLevel& mesh, const DofLayout& layout) {
  (void)kind;
  if (mesh.count_high_triangles() == 0)
    throw std::runtime_error("partition: no highly-bending triangle");
  BlockPartition part;
  part.global_to_H.assign(layout.size, -1);
  part.global_to_L.assign(layout.size, -1);

  auto classify = [&](int dof, bool& high, bool& low) {
    const auto& info = layout.info[dof];
    if (info.kind == DofKind::EdgeNormal) {
      high = mesh.edge_high[info.entity];
      low = mesh.edge_low[info.entity];
    } else {
      high = mesh.vertex_high[info.entity];
      low = mesh.vertex_low[info.entity];
    }
  };

  std::vector<int> gamma;
  for (int d = 0; d < layout.size; ++d) {
    bool high = false, low = false;
    classify(d, high, low);
    if (high && !low) {
      part.H.push_back(d);
    } else if (high && low) {
      gamma.push_back(d);
    } else {
      part.L.push_back(d);
    }
  }
  part.n_interior = static_cast<int>(part.H.size());
  part.H.insert(part.H.end(), gamma.begin(), gamma.end());
  if (part.H.empty()) throw std::runtime_error("partition: no highly-bending DOF");
  part.degenerate_all_high = part.L.empty();

  for (int i = 0; i < part.n_H(); ++i) part.global_to_H[part.H[i]] = i;
  for (int i = 0; i < part.n_L(); ++i) part.global_to_L[part.L[i]] = i;
  return part;
}

Blocks extract_blocks(const SparseMat& K, const BlockPartition& part) {
  std::vector<Triplet> hh, hl, lh, ll;
  for (int row = 0; row < K.outerSize(); ++row) {
    const int hr = part.global_to_H[row];
    const int lr = part.global_to_L[row];
    for (SparseMat::InnerIterator it(K, row); it; ++it) {
      const int hc = part.global_to_H[it.col()];
      const int lc = part.global_to_L[it.col()];
      if (hr >= 0 && hc >= 0) hh.emplace_back(hr, hc, it.value());
      else if (hr >= 0 && lc >= 0) hl.emplace_back(hr, lc, it.value());
      else if (lr >= 0 && hc >= 0) lh.emplace_back(lr, hc, it.value());
      else ll.emplace_back(lr, lc, it.value());
    }
  }
  Blocks b;
  b.K_HH.resize(part.n_H(), part.n_H());
  b.K_HL.resize(part.n_H(), part.n_L());
  b.K_LH.resize(part.n_L(), part.n_H());
  b.K_LL.resize(part.n_L(), part.n_L());
  b.K_HH.setFromTriplets(hh.begin(), hh.end());
  b.K_HL.setFromTriplets(hl.begin(), hl.end());
  b.K_LH.setFromTriplets(lh.begin(), lh.end());
  b.K_LL.setFromTriplets(ll.begin(), ll.end());
  for (SparseMat* m : {&b.K_HH, &b.K_HL, &b.K_LH, &b.K_LL}) m->makeCompressed();
  return b;
}

Eigen::VectorXd gather(const Eigen::VectorXd& x, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[idx[i]];
  return out;
}

void scatter_add(Eigen::VectorXd& x, const std::vector<int>& idx, const Eigen::VectorXd& sub) {
  for (std::size_t i = 0; i < idx.size(); ++i) x[idx[i]] += sub[static_cast<Eigen::Index>(i)];
}

NeumannDecomposition neumann_extract(ElementKind kind, const MeshLevel& mesh,
                                     const DofLayout& layout, const BlockPartition& part,
                                     double sigma) {
  for (int d : part.H)
    if (layout.constrained[d])
      throw std::runtime_error("neumann_extract: island touches the clamped boundary");

  const int n_H = part.n_H();
  std::vector<Triplet> n_trips, r_trips;
  std::vector<int> dofs;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const bool high = mesh.triangles[t].high;
    const LocalMatrix local =
        local_stiffness(kind, ElementGeometry::from_mesh(mesh, t), 1.0, sigma);
    layout.element_dofs(mesh, t, dofs);
    const int n = static_cast<int>(dofs.size());
    for (int i = 0; i < n; ++i) {
      const int hi = part.global_to_H[dofs[i]];
      if (hi < 0) continue;
      for (int j = 0; j < n; ++j) {
        const int hj = part.global_to_H[dofs[j]];
        if (hj < 0) continue;
        (high ? n_trips : r_trips).emplace_back(hi, hj, local.stiffness(i, j));
      }
    }
  }

  NeumannDecomposition nd;
  nd.N_HH.resize(n_H, n_H);
  nd.N_HH.setFromTriplets(n_trips.begin(), n_trips.end());
  nd.N_HH.makeCompressed();
  nd.R.resize(n_H, n_H);
  nd.R.setFromTriplets(r_trips.begin(), r_trips.end());
  nd.R.makeCompressed();

  // raw rigid modes in the DOF functionals, then orthonormalized
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(n_H, 3);
  for (int i = 0; i < n_H; ++i) {
    const auto& info = layout.info[part.H[i]];
    switch (info.kind) {
      case DofKind::VertexValue: {
        const Eigen::Vector2d& p = mesh.vertices[info.entity];
        raw(i, 0) = 1.0;
        raw(i, 1) = p.x();
        raw(i, 2) = p.y();
        break;
      }
      case DofKind::VertexDx:
        raw(i, 1) = 1.0;
        break;
      case DofKind::VertexDy:
        raw(i, 2) = 1.0;
        break;
      case DofKind::EdgeNormal: {
        const Eigen::Vector2d n = mesh.edge_normal(info.entity);
        raw(i, 1) = n.x();
        raw(i, 2) = n.y();
        break;
      }
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  nd.e_H = qr.householderQ() * Eigen::MatrixXd::Identity(n_H, 3);

  nd.eta = nd.e_H.transpose() * (nd.R * nd.e_H);
  nd.eta = 0.5 * (nd.eta + nd.eta.transpose()).eval();

  const double n_scale = Eigen::Map<const Eigen::VectorXd>(nd.N_HH.valuePtr(),
                          nd.N_HH.nonZeros()).cwiseAbs().maxCoeff();
  const double kernel_residual = (nd.N_HH * nd.e_H).cwiseAbs().maxCoeff();
  if (kernel_residual > 1e-9 * n_scale)
    throw std::runtime_error("neumann_extract: rigid modes not in ker(N_HH)");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(nd.eta);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::runtime_error("neumann_extract: eta is not positive definite");
  return nd;
}

}  // namespace agks
