#include "monitor/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "monitor/errors.hpp"

namespace monitor {

Eigen::LLT<Eigen::MatrixXd> chol_with_jitter(const Eigen::MatrixXd& A, double* jitter_used) {
  const double mean_diag = A.diagonal().mean();
  // The two largest rungs exist for late-mission planning covariances:
  // once the model saturates, batches of nearby cells produce Gram
  // matrices that are numerically rank-deficient well past 1e-6.
  const double ladder[] = {0.0, 1e-10, 1e-8, 1e-6, 1e-4, 1e-2};
  double last = 0.0;
  for (double rel : ladder) {
    last = rel * std::abs(mean_diag);
    Eigen::MatrixXd B = A;
    B.diagonal().array() += last;
    Eigen::LLT<Eigen::MatrixXd> llt(B);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = last;
      return llt;
    }
  }
  throw ConditioningError("matrix not positive definite, last jitter tried " +
                          std::to_string(last) + " (size " + std::to_string(A.rows()) + ")");
}

double spd_log_det(const Eigen::MatrixXd& A) {
  const auto llt = chol_with_jitter(A);
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

Eigen::MatrixXd pd_repair(const Eigen::MatrixXd& A, double floor_rel) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(A));
  const double lmax = es.eigenvalues().maxCoeff();
  const double floor = std::max(lmax, 1.0e-300) * floor_rel;
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(floor);
  return symmetrize(es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace monitor
