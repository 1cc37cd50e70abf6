#include "agks/dense_oracle.hpp"

#include <stdexcept>

namespace agks {

void check_dense_cap(Eigen::Index dim) {
  if (dim > kDenseCap)
    throw std::length_error("dense oracle refused: dimension exceeds cap");
}

Eigen::MatrixXd to_dense(const SparseMat& A) {
  check_dense_cap(std::max(A.rows(), A.cols()));
  return Eigen::MatrixXd(A);
}

Eigen::VectorXd solve_refined(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  check_dense_cap(A.rows());
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("dense factorization failed");
  Eigen::VectorXd x = ldlt.solve(b);
  for (int sweep = 0; sweep < 3; ++sweep) {
    const Eigen::VectorXd r = b - A * x;
    x += ldlt.solve(r);
  }
  return x;
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& A) {
  check_dense_cap(A.rows());
  // extended precision: the high-contrast blocks reach condition numbers
  // near 1e12, where a double factorization loses the limiting rank-3 part
  using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixXl Al = A.cast<long double>();
  const Eigen::LLT<MatrixXl> llt(Al);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("invert_spd: matrix is not positive definite");
  MatrixXl X = llt.solve(MatrixXl::Identity(A.rows(), A.cols()));
  X += llt.solve(MatrixXl::Identity(A.rows(), A.cols()) - Al * X);
  X = 0.5 * (X + X.transpose()).eval();
  return X.cast<double>();
}

double spectral_norm(const Eigen::MatrixXd& A) {
  check_dense_cap(std::max(A.rows(), A.cols()));
  return A.jacobiSvd().singularValues()[0];
}

}  // namespace agks
