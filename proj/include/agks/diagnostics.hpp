#pragma once

#include "agks/assembly.hpp"
#include "agks/spa.hpp"

#include <Eigen/Dense>

namespace agks {

enum class Scaling { Raw, Diagonal };

struct SpectrumReport {
  Eigen::VectorXd eigenvalues;  // ascending
  Scaling scaling = Scaling::Raw;
  double contrast = 0.0;

  double median() const;
  int count_below(double threshold) const;
  int count_above(double threshold) const;
};

/// Full dense symmetric eigendecomposition of A or D^{-1/2} A D^{-1/2}.
/// Refuses above the dense cap.
SpectrumReport spectrum(const SparseMat& A, Scaling scaling, double contrast = 0.0);

/// Dense matrix reordered to [H; L] block order.
Eigen::MatrixXd permute_to_blocks(const SparseMat& K, const BlockPartition& part);

/// The idealized preconditioner in block order: triangular factors from the
/// rank-3 limiting inverse around diag(K_HH(m)^{-1}, S_inf^{-1}), all dense.
Eigen::MatrixXd idealized_agks_dense(const Blocks& blocks, const SpaLimits& limits);

/// Generalized condition number of the symmetrically preconditioned
/// operator: eigenvalue ratio of L^t K L with B = L L^t.
double preconditioned_condition(const Eigen::MatrixXd& K, const Eigen::MatrixXd& B);

}  // namespace agks
