#pragma once

#include "agks/assembly.hpp"

#include <Eigen/Dense>

#include <vector>

namespace agks {

struct SmootherSpec {
  enum class Kind { GS, SGS } kind = Kind::SGS;
  int sweeps = 1;  // nu in V(nu,nu)
  void validate() const;
};

/// Global interpolation prolongation from the coarse to the fine level:
/// every fine DOF functional is evaluated on the coarse finite element
/// function, averaging across the coarse elements sharing the evaluation
/// point where that function is multivalued.  Reproduces linear fields
/// exactly.  Rows of constrained fine DOF and columns of constrained
/// coarse DOF stay empty.
SparseMat build_prolongation(ElementKind kind, const MeshLevel& coarse,
                             const MeshLevel& fine, const DofLayout& coarse_layout,
                             const DofLayout& fine_layout);

/// Square sub-blocks of the global prolongations restricted to the H- and
/// L-index sets of each level pair (the off-diagonal blocks are dropped).
struct TransferChain {
  std::vector<SparseMat> P;     // P[l]: level l+1 -> level l+2 DOF
  std::vector<SparseMat> P_HH;
  std::vector<SparseMat> P_LL;
};

/// Throws std::runtime_error when the partitions are not nested.
TransferChain extract_prolongations(ElementKind kind, const std::vector<MeshLevel>& meshes,
                                    const std::vector<DofLayout>& layouts,
                                    const std::vector<BlockPartition>& parts);

/// Geometric multigrid hierarchy with Galerkin-coarsened operators, point
/// GS/sGS smoothing and a dense direct solve on the coarsest level.  One
/// call to apply() runs a single V(nu,nu)-cycle; a 1-level hierarchy is the
/// direct solve.
class MgHierarchy {
 public:
  /// prolongations ordered coarsest-first; empty list = 1-level hierarchy.
  static MgHierarchy build(SparseMat finest, std::vector<SparseMat> prolongations,
                           SmootherSpec smoother);

  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const SparseMat& matrix(int level) const { return levels_[level].A; }
  const SmootherSpec& smoother() const { return smoother_; }

  struct Counters {
    long applications = 0;
    long smoother_sweeps = 0;
  };
  const Counters& counters() const { return counters_; }

 private:
  struct Level {
    SparseMat A;
    Eigen::VectorXd inv_diag;
    SparseMat P;  // to the next finer level; empty on the finest
  };

  void vcycle(int level, const Eigen::VectorXd& r, Eigen::VectorXd& x) const;
  void smooth(const Level& lvl, const Eigen::VectorXd& b, Eigen::VectorXd& x) const;

  std::vector<Level> levels_;  // 0 = coarsest
  Eigen::LDLT<Eigen::MatrixXd> coarse_solver_;
  SmootherSpec smoother_;
  mutable Counters counters_;
};

}  // namespace agks
