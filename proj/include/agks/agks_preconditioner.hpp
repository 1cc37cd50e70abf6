#pragma once

#include "agks/assembly.hpp"
#include "agks/multigrid.hpp"
#include "agks/spa.hpp"

#include <Eigen/Dense>

namespace agks {

/// The practical low-rank-perturbation preconditioner: block-triangular
/// factors built from the limiting rank-3 inverse e_H eta^{-1} e_H^t, one
/// multigrid V-cycle on the island block and one on the complement, and a
/// Sherman-Morrison-Woodbury-corrected Schur solve
///   S~^{-1} = M_LL + M_LL v (eta - v^t M_LL v)^{-1} v^t M_LL,  v = K_LH e_H,
/// with W = M_LL v precomputed during setup so each application costs
/// exactly one M_LL and one M_HH cycle.
class AgksPreconditioner {
 public:
  AgksPreconditioner(const Blocks& blocks, const SpaLimits& limits,
                     const BlockPartition& part, std::vector<SparseMat> p_hh_chain,
                     std::vector<SparseMat> p_ll_chain, SmootherSpec smoother);

  /// z = B r on full-length vectors in global DOF order.
  Eigen::VectorXd apply(const Eigen::VectorXd& r) const;

  /// The SMW-corrected approximate Schur inverse S~^{-1} alone.
  Eigen::VectorXd apply_schur(const Eigen::VectorXd& r_L) const;

  const MgHierarchy& island_cycle() const { return m_hh_; }
  const MgHierarchy& complement_cycle() const { return m_ll_; }
  int size() const { return static_cast<int>(part_.global_to_H.size()); }

 private:
  Eigen::VectorXd apply_khh_dagger(const Eigen::VectorXd& r_H) const;

  BlockPartition part_;
  Eigen::MatrixXd e_H_;
  Eigen::Matrix3d eta_inv_;
  SparseMat K_HL_, K_LH_;
  MgHierarchy m_hh_, m_ll_;
  Eigen::MatrixXd v_;  // K_LH e_H
  Eigen::MatrixXd w_;  // M_LL v, precomputed
  Eigen::PartialPivLU<Eigen::Matrix3d> smw_factor_;
};

}  // namespace agks
