#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "monitor/kernel.hpp"

namespace monitor {

/// Exact GP regression over a fixed training set; immutable after fit().
struct GpModel {
  std::vector<Point> inputs;
  Eigen::VectorXd targets;
  Hyperparameters hyper;
  Eigen::MatrixXd gram;          // K, with sigma_n^2 on the diagonal
  Eigen::MatrixXd gram_inverse;  // K^-1
  Eigen::VectorXd alpha;         // K^-1 y

  long size() const { return static_cast<long>(inputs.size()); }
};

/// Leave-one-out cross-validation summary: total log-likelihood, its
/// log-space gradient, and the held-out predictive moments per point.
struct LooReport {
  double log_likelihood = 0.0;
  Eigen::VectorXd gradient;
  Eigen::VectorXd per_point_mean;
  Eigen::VectorXd per_point_var;
};

struct OptimizerConfig {
  double learning_rate = 0.05;
  int max_iters = 100;
  double grad_tolerance = 1e-4;
  bool backtrack = true;
};

struct OptimizerResult {
  Hyperparameters hyper;
  std::vector<double> trace;  // L_LOO per accepted iterate, h0 first
  bool truncated = false;     // stopped early on a factorization failure
};

GpModel fit(const Hyperparameters& h, const std::vector<Point>& X, const Eigen::VectorXd& y);

/// Predictive mean and variance at each test point; the test-point
/// variance includes sigma_n^2 (the same_index convention applied to the
/// point itself), clamped below at 1e-12.
std::pair<Eigen::VectorXd, Eigen::VectorXd> predict(const GpModel& m,
                                                    const std::vector<Point>& X_star);

LooReport loo_report(const GpModel& m);

/// Gradient ascent on L_LOO in log space with optional backtracking;
/// log parameters are clamped to [-10, 10].
OptimizerResult optimize_hyperparameters(const std::vector<Point>& X, const Eigen::VectorXd& y,
                                         const Hyperparameters& h0, const OptimizerConfig& cfg);

}  // namespace monitor
