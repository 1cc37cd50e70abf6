#include "agks/agks_preconditioner.hpp"

#include <cmath>
#include <stdexcept>

namespace agks {

AgksPreconditioner::AgksPreconditioner(const Blocks& blocks, const SpaLimits& limits,
                                       const BlockPartition& part,
                                       std::vector<SparseMat> p_hh_chain,
                                       std::vector<SparseMat> p_ll_chain,
                                       SmootherSpec smoother)
    : part_(part),
      e_H_(limits.e_H),
      eta_inv_(limits.eta_inv),
      K_HL_(blocks.K_HL),
      K_LH_(blocks.K_LH),
      m_hh_(MgHierarchy::build(blocks.K_HH, std::move(p_hh_chain), smoother)),
      m_ll_(MgHierarchy::build(blocks.K_LL, std::move(p_ll_chain), smoother)),
      v_(limits.v) {
  // setup-phase work: W = M_LL v and the 3x3 SMW factor
  w_.resize(v_.rows(), 3);
  for (int c = 0; c < 3; ++c) w_.col(c) = m_ll_.apply(v_.col(c));
  const Eigen::Matrix3d factor = limits.eta - v_.transpose() * w_;
  smw_factor_.compute(factor);
  const double pivot_floor = factor.cwiseAbs().maxCoeff() * 1e-14;
  if (!(std::abs(smw_factor_.matrixLU().diagonal().prod()) > pivot_floor))
    throw std::runtime_error(
        "agks: SMW factor eta - v^t M_LL v is numerically singular (indefinite complement cycle?)");
}

Eigen::VectorXd AgksPreconditioner::apply_khh_dagger(const Eigen::VectorXd& r_H) const {
  return e_H_ * (eta_inv_ * (e_H_.transpose() * r_H));
}

Eigen::VectorXd AgksPreconditioner::apply_schur(const Eigen::VectorXd& r_L) const {
  const Eigen::VectorXd u = m_ll_.apply(r_L);
  return u + w_ * smw_factor_.solve(v_.transpose() * u);
}

Eigen::VectorXd AgksPreconditioner::apply(const Eigen::VectorXd& r) const {
  const Eigen::VectorXd r_H = gather(r, part_.H);
  const Eigen::VectorXd r_L = gather(r, part_.L);

  // lower factor: shift the island residual into the complement
  const Eigen::VectorXd w_L = r_L - K_LH_ * apply_khh_dagger(r_H);

  // block-diagonal solves
  Eigen::VectorXd z_H = m_hh_.apply(r_H);
  const Eigen::VectorXd z_L = apply_schur(w_L);

  // upper factor
  z_H -= apply_khh_dagger(K_HL_ * z_L);

  Eigen::VectorXd z = Eigen::VectorXd::Zero(r.size());
  scatter_add(z, part_.H, z_H);
  scatter_add(z, part_.L, z_L);
  return z;
}

}  // namespace agks
