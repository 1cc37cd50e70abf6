#pragma once

#include "agks/assembly.hpp"

#include <Eigen/Dense>

namespace agks {

/// Hard cap for all dense oracle work.
inline constexpr int kDenseCap = 2000;

/// Throws std::length_error beyond kDenseCap.
void check_dense_cap(Eigen::Index dim);

Eigen::MatrixXd to_dense(const SparseMat& A);

/// LDLT solve with a few iterative-refinement sweeps; accurate also for
/// strongly graded high-contrast systems.
Eigen::VectorXd solve_refined(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

/// Symmetric inverse via LDLT with refinement, column by column.
Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& A);

/// Largest singular value (2-norm) of a small dense matrix.
double spectral_norm(const Eigen::MatrixXd& A);

}  // namespace agks
