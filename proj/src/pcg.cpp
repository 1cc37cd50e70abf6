#include "agks/pcg.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace agks {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::ExceededBound: return "60+";
    case SolveStatus::Stalled: return "inf";
  }
  return "?";
}

namespace {

double ritz_condition(const std::vector<double>& alphas, const std::vector<double>& betas) {
  const int k = static_cast<int>(alphas.size());
  if (k < 2) return 0.0;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    T(i, i) = 1.0 / alphas[i];
    if (i > 0) T(i, i) += betas[i - 1] / alphas[i - 1];
    if (i + 1 < k) {
      const double off = std::sqrt(std::max(betas[i], 0.0)) / alphas[i];
      T(i, i + 1) = off;
      T(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return lo > 0.0 ? hi / lo : 0.0;
}

}  // namespace

SolveReport pcg(const SparseMat& K, const Eigen::VectorXd& b, const Preconditioner& prec,
                Eigen::VectorXd& x, const PcgOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport report;
  report.rr_history.push_back(1.0);

  x = Eigen::VectorXd::Zero(b.size());
  const double rr0 = b.norm();
  if (rr0 == 0.0) {
    report.status = SolveStatus::Converged;
    return report;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = prec(r);
  Eigen::VectorXd p = z;
  double rho = r.dot(z);
  std::vector<double> alphas, betas;

  bool converged = false, blown_up = false;
  int it = 0;
  while (it < opts.max_it) {
    ++it;
    const Eigen::VectorXd q = K * p;
    const double pq = p.dot(q);
    if (pq <= 0.0)
      throw std::runtime_error("pcg: indefinite curvature at iteration " + std::to_string(it));
    const double alpha = rho / pq;
    x += alpha * p;
    if (it % 25 == 0) r = b - K * x;  // periodic refresh against drift
    else r -= alpha * q;

    const double rr = r.norm() / rr0;
    report.rr_history.push_back(rr);
    if (opts.track_ritz) alphas.push_back(alpha);
    if (opts.on_iterate) opts.on_iterate(it, x);

    if (rr <= opts.tol) {
      converged = true;
      break;
    }
    if (rr > opts.blowup) {
      blown_up = true;
      break;
    }
    if (it == opts.max_it) break;

    z = prec(r);
    const double rho_next = r.dot(z);
    const double beta = rho_next / rho;
    rho = rho_next;
    p = z + beta * p;
    if (opts.track_ritz) betas.push_back(beta);
  }

  report.iterations = it;
  const double rr_last = report.rr_history.back();
  report.avg_reduction = it > 0 ? std::pow(rr_last, 1.0 / it) : 0.0;

  if (converged) {
    report.status = SolveStatus::Converged;
  } else {
    bool stalled = blown_up;
    const int n = static_cast<int>(report.rr_history.size());
    if (n > opts.stall_window) {
      const double recent = report.rr_history[n - 1];
      const double past = report.rr_history[n - 1 - opts.stall_window];
      if (recent >= past * (1.0 - opts.stall_decrease)) stalled = true;
    }
    if (report.avg_reduction >= opts.trend_threshold) stalled = true;
    report.status = stalled ? SolveStatus::Stalled : SolveStatus::ExceededBound;
  }

  if (opts.track_ritz) report.ritz_kappa = ritz_condition(alphas, betas);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace agks
