#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace monitor {

/// Cholesky with a shared jitter ladder: retries with diagonal jitter
/// {1e-10, 1e-8, 1e-6} times the mean diagonal before giving up.
/// Throws ConditioningError naming the last jitter level tried.
Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& A,
                                             double* jitter_used = nullptr);

/// log|A| for symmetric positive definite A, via chol_with_jitter.
double spd_log_det(const Eigen::MatrixXd& A);

/// Nearest-PD style repair: symmetric eigendecomposition with eigenvalues
/// clamped below at floor_rel * max eigenvalue. For covariances that have
/// drifted slightly indefinite through accumulated rank-one updates.
Eigen::MatrixXd pd_repair(const Eigen::MatrixXd& A, double floor_rel = 1e-10);

inline Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& M) {
  return 0.5 * (M + M.transpose());
}

}  // namespace monitor
