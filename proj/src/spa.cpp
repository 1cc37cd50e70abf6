#include "agks/spa.hpp"

#include "agks/dense_oracle.hpp"

#include <stdexcept>

namespace agks {

Eigen::VectorXd SpaLimits::apply_khh_dagger(const Eigen::VectorXd& r_H) const {
  return e_H * (eta_inv * (e_H.transpose() * r_H));
}

Eigen::VectorXd SpaLimits::apply_s_inf(const Eigen::VectorXd& x_L) const {
  return K_LL * x_L - v * (eta_inv * (v.transpose() * x_L));
}

Eigen::VectorXd SpaLimits::apply_p_inf(const Eigen::VectorXd& r_H) const {
  return v * (eta_inv * (e_H.transpose() * r_H));
}

Eigen::MatrixXd SpaLimits::dense_s_inf() const {
  check_dense_cap(K_LL.rows());
  return to_dense(K_LL) - v * eta_inv * v.transpose();
}

SpaLimits compute_limits(const Blocks& blocks, const NeumannDecomposition& nd,
                         const BlockPartition& part) {
  SpaLimits lim;
  lim.e_H = nd.e_H;
  lim.eta = nd.eta;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(lim.eta);
  if (!lu.isInvertible())
    throw std::runtime_error("compute_limits: eta is numerically singular");
  lim.eta_inv = lu.inverse();
  lim.eta_inv = 0.5 * (lim.eta_inv + lim.eta_inv.transpose()).eval();

  lim.v = blocks.K_LH * nd.e_H;
  lim.K_LL = blocks.K_LL;

  // interface form: R is supported on the Gamma x Gamma block
  const int n_gamma = part.n_gamma();
  Eigen::MatrixXd e_gamma = nd.e_H.bottomRows(n_gamma);
  Eigen::MatrixXd r_gamma = Eigen::MatrixXd::Zero(n_gamma, n_gamma);
  const int off = part.n_interior;
  for (int row = 0; row < nd.R.outerSize(); ++row) {
    for (SparseMat::InnerIterator it(nd.R, row); it; ++it) {
      if (row >= off && it.col() >= off)
        r_gamma(row - off, it.col() - off) = it.value();
    }
  }
  lim.eta_interface = e_gamma.transpose() * r_gamma * e_gamma;
  return lim;
}

Eigen::MatrixXd schur_dense(const Blocks& blocks) {
  check_dense_cap(blocks.K_HH.rows() + blocks.K_LL.rows());
  const Eigen::MatrixXd K_HH = to_dense(blocks.K_HH);
  const Eigen::MatrixXd K_HL = to_dense(blocks.K_HL);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(K_HH);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("schur_dense: K_HH factorization failed");
  Eigen::MatrixXd X = ldlt.solve(K_HL);
  // one refinement sweep keeps the high-contrast solve accurate
  X += ldlt.solve(K_HL - K_HH * X);
  Eigen::MatrixXd S = to_dense(blocks.K_LL) - to_dense(blocks.K_LH) * X;
  return 0.5 * (S + S.transpose());
}

double solution_flatness(const Eigen::VectorXd& x_H, const Eigen::MatrixXd& e_H) {
  const double norm = x_H.norm();
  if (norm == 0.0) throw std::domain_error("solution_flatness: zero island solution");
  const Eigen::VectorXd projected = x_H - e_H * (e_H.transpose() * x_H);
  return projected.norm() / norm;
}

}  // namespace agks
