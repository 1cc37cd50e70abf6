#pragma once

#include "agks/assembly.hpp"

#include <Eigen/Dense>

namespace agks {

/// Singular-perturbation limits of the block system as the contrast grows:
/// the rank-3 limiting inverse of K_HH, the limiting Schur complement
/// S_inf = K_LL - v eta^{-1} v^t with v = K_LH e_H, and the limiting
/// coupling P_inf = v eta^{-1} e_H^t.  S_inf and P_inf are kept in factored
/// form; only eta-sized (3x3) objects are dense.
struct SpaLimits {
  Eigen::MatrixXd e_H;            // n_H x 3, orthonormal columns
  Eigen::Matrix3d eta;            // e_H^t K_HH e_H (m-independent)
  Eigen::Matrix3d eta_interface;  // e_Gamma^t K_GammaGamma^(L) e_Gamma
  Eigen::Matrix3d eta_inv;
  Eigen::MatrixXd v;              // K_LH e_H, n_L x 3
  SparseMat K_LL;

  /// K_HH^{infty dagger} r = e_H eta^{-1} e_H^t r
  Eigen::VectorXd apply_khh_dagger(const Eigen::VectorXd& r_H) const;
  /// S_inf x = K_LL x - v eta^{-1} v^t x
  Eigen::VectorXd apply_s_inf(const Eigen::VectorXd& x_L) const;
  /// P_inf r = v eta^{-1} e_H^t r  (limit of K_LH K_HH^{-1})
  Eigen::VectorXd apply_p_inf(const Eigen::VectorXd& r_H) const;

  /// Dense S_inf, guarded by the oracle cap.
  Eigen::MatrixXd dense_s_inf() const;
};

SpaLimits compute_limits(const Blocks& blocks, const NeumannDecomposition& nd,
                         const BlockPartition& part);

/// Dense Schur complement S(m) = K_LL - K_LH K_HH(m)^{-1} K_HL of the
/// supplied (already contrast-scaled) blocks.  Refuses above the dense cap.
Eigen::MatrixXd schur_dense(const Blocks& blocks);

/// || (I - e_H e_H^t) x_H || / || x_H ||, the distance of the island
/// solution from the discrete linear polynomials.  Throws std::domain_error
/// for x_H = 0.
double solution_flatness(const Eigen::VectorXd& x_H, const Eigen::MatrixXd& e_H);

/// One row of an asymptotic sweep: an observable sampled at contrast m.
struct SweepSample {
  double m = 0.0;
  std::string observable;
  double value = 0.0;
};

}  // namespace agks
