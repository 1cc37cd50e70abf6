#include "agks/diagnostics.hpp"

#include "agks/dense_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace agks {

double SpectrumReport::median() const {
  const Eigen::Index n = eigenvalues.size();
  if (n == 0) throw std::domain_error("empty spectrum");
  return n % 2 == 1 ? eigenvalues[n / 2]
                    : 0.5 * (eigenvalues[n / 2 - 1] + eigenvalues[n / 2]);
}

int SpectrumReport::count_below(double threshold) const {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                        [&](double ev) { return ev < threshold; }));
}

int SpectrumReport::count_above(double threshold) const {
  return static_cast<int>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                        [&](double ev) { return ev > threshold; }));
}

SpectrumReport spectrum(const SparseMat& A, Scaling scaling, double contrast) {
  Eigen::MatrixXd dense = to_dense(A);
  if (scaling == Scaling::Diagonal) {
    const Eigen::VectorXd d = dense.diagonal().cwiseSqrt().cwiseInverse();
    if (!d.allFinite()) throw std::runtime_error("spectrum: nonpositive diagonal");
    dense = d.asDiagonal() * dense * d.asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  SpectrumReport report;
  report.eigenvalues = es.eigenvalues();
  report.scaling = scaling;
  report.contrast = contrast;
  return report;
}

Eigen::MatrixXd permute_to_blocks(const SparseMat& K, const BlockPartition& part) {
  const Eigen::MatrixXd dense = to_dense(K);
  std::vector<int> order = part.H;
  order.insert(order.end(), part.L.begin(), part.L.end());
  Eigen::MatrixXd out(dense.rows(), dense.cols());
  for (Eigen::Index i = 0; i < dense.rows(); ++i)
    for (Eigen::Index j = 0; j < dense.cols(); ++j)
      out(i, j) = dense(order[i], order[j]);
  return out;
}

Eigen::MatrixXd idealized_agks_dense(const Blocks& blocks, const SpaLimits& limits) {
  const int n_H = static_cast<int>(blocks.K_HH.rows());
  const int n_L = static_cast<int>(blocks.K_LL.rows());
  check_dense_cap(n_H + n_L);

  const Eigen::MatrixXd dagger = limits.e_H * limits.eta_inv * limits.e_H.transpose();
  Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n_H + n_L, n_H + n_L);
  T.block(n_H, 0, n_L, n_H) = -to_dense(blocks.K_LH) * dagger;

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_H + n_L, n_H + n_L);
  D.topLeftCorner(n_H, n_H) = invert_spd(to_dense(blocks.K_HH));
  D.bottomRightCorner(n_L, n_L) = invert_spd(limits.dense_s_inf());

  Eigen::MatrixXd B = T.transpose() * D * T;
  return 0.5 * (B + B.transpose());
}

double preconditioned_condition(const Eigen::MatrixXd& K, const Eigen::MatrixXd& B) {
  check_dense_cap(K.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("preconditioned_condition: B is not SPD");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd M = L.transpose() * K * L;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
  const double lo = es.eigenvalues().minCoeff();
  if (lo <= 0.0) throw std::runtime_error("preconditioned_condition: K is not SPD");
  return es.eigenvalues().maxCoeff() / lo;
}

}  // namespace agks
