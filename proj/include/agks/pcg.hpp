#pragma once

#include "agks/assembly.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace agks {

enum class SolveStatus { Converged, ExceededBound, Stalled };

const char* to_string(SolveStatus s);

/// Outcome of one preconditioned CG run.  rr_history[i] is the relative
/// (true-residual) norm after i iterations, rr_history[0] = 1; the average
/// reduction factor is rr^(1/iterations) at termination.
struct SolveReport {
  int iterations = 0;
  SolveStatus status = SolveStatus::Converged;
  std::vector<double> rr_history;
  double avg_reduction = 0.0;
  double wall_time_s = 0.0;
  double ritz_kappa = 0.0;  // extreme-Ritz condition estimate, 0 when untracked

  bool converged() const { return status == SolveStatus::Converged; }
};

using Preconditioner = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PcgOptions {
  double tol = 1e-7;
  int max_it = 60;
  bool track_ritz = false;
  // stall rule: < 0.1% relative residual progress over 10 consecutive
  // iterations, or blow-up past 1e3
  int stall_window = 10;
  double stall_decrease = 1e-3;
  double blowup = 1e3;
  // classification of a non-converged run: trend-converging (60+) below
  // this average reduction factor, stalling (inf) otherwise
  double trend_threshold = 0.995;
  std::function<void(int, const Eigen::VectorXd&)> on_iterate;
};

/// Throws std::runtime_error on indefinite curvature (p^t K p <= 0).
SolveReport pcg(const SparseMat& K, const Eigen::VectorXd& b, const Preconditioner& prec,
                Eigen::VectorXd& x, const PcgOptions& opts = {});

}  // namespace agks
