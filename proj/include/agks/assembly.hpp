#pragma once

#include "agks/elements.hpp"
#include "agks/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <vector>

namespace agks {

/// Symmetric sparse operator in compressed-row layout.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct RhsSpec {
  enum class Kind { Constant, Random } kind = Kind::Constant;
  std::uint64_t seed = 0;
};

struct System {
  SparseMat K;
  Eigen::VectorXd b;
};

/// Assemble the global stiffness matrix K(m) and load vector with clamped
/// boundary conditions enforced in place (unit diagonal on constrained DOF).
System assemble(ElementKind kind, const MeshLevel& mesh, const DofLayout& layout,
                const MaterialParams& params, const RhsSpec& rhs = {});

/// Index sets of the 2x2 block split.  H holds every DOF supported in the
/// closure of the island (interface included), ordered interior-first; L is
/// the rest.
struct BlockPartition {
  std::vector<int> H;           // interior DOF first, then interface DOF
  std::vector<int> L;
  int n_interior = 0;           // first n_interior entries of H
  std::vector<int> global_to_H; // -1 when not in H
  std::vector<int> global_to_L;
  bool degenerate_all_high = false;

  int n_H() const { return static_cast<int>(H.size()); }
  int n_L() const { return static_cast<int>(L.size()); }
  int n_gamma() const { return n_H() - n_interior; }
};

/// Throws std::runtime_error when the mesh has no H triangle.
BlockPartition partition(ElementKind kind, const MeshLevel& mesh, const DofLayout& layout);

struct Blocks {
  SparseMat K_HH, K_HL, K_LH, K_LL;
};

Blocks extract_blocks(const SparseMat& K, const BlockPartition& part);

/// Gather sub-vectors / scatter them back in partition order.
Eigen::VectorXd gather(const Eigen::VectorXd& x, const std::vector<int>& idx);
void scatter_add(Eigen::VectorXd& x, const std::vector<int>& idx, const Eigen::VectorXd& sub);

/// K_HH(m) = m * N_HH + R with ker N_HH = span{1, x, y}; e_H holds the
/// orthonormalized discrete rigid modes and eta = e_H^t K_HH e_H (computed
/// from R, which makes the m-independence explicit).
struct NeumannDecomposition {
  SparseMat N_HH;       // coefficient-free island block, natural on Gamma
  SparseMat R;          // coupling contributions from L elements (Gamma x Gamma)
  Eigen::MatrixXd e_H;  // n_H x 3, orthonormal columns
  Eigen::Matrix3d eta;
};

/// Throws std::runtime_error when the extracted kernel is not the rigid
/// modes (wrong natural-boundary assembly, or island touching the domain
/// boundary).
NeumannDecomposition neumann_extract(ElementKind kind, const MeshLevel& mesh,
                                     const DofLayout& layout, const BlockPartition& part,
                                     double sigma);

}  // namespace agks
