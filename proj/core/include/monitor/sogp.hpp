#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "monitor/kernel.hpp"

namespace monitor {

struct SogpConfig {
  int capacity = 100;              // m, max BV-set size
  double novelty_threshold = 0.0;  // omega, absolute
  double noise_var = 1e-2;         // sigma_0^2 used in q_t / r_t
};

struct SogpStats {
  long total_updates = 0;
  long additions = 0;
  long rejections = 0;  // reduced updates
  long deletions = 0;
};

enum class UpdateKind { added, reduced, added_then_deleted };

struct UpdateOutcome {
  UpdateKind kind = UpdateKind::reduced;
  long deleted_index = -1;
  bool is_addition() const { return kind != UpdateKind::reduced; }
};

struct NoveltyResult {
  double gamma = 0.0;
  Eigen::VectorXd k_vec;  // noise-free kernel vector against the BV-set
  Eigen::VectorXd e_hat;  // Q * k_vec
};

/// Sparse online GP in the natural parametrization (alpha, C) with a
/// capacity-bounded basis-vector set and its cached inverse Gram Q.
/// Measurement noise enters only through noise_var; all kernel vectors
/// here are noise-free.
class SogpState {
 public:
  SogpState() = default;
  SogpState(const Hyperparameters& h, const SogpConfig& cfg);

  long size() const { return static_cast<long>(bv_points_.size()); }
  const std::vector<Point>& bv_points() const { return bv_points_; }
  const Eigen::VectorXd& bv_targets() const { return targets_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::MatrixXd& c_matrix() const { return C_; }
  const Eigen::MatrixXd& q_matrix() const { return Q_; }
  const Hyperparameters& hyper() const { return hyper_; }
  const SogpConfig& config() const { return cfg_; }
  const SogpStats& stats() const { return stats_; }
  void set_novelty_threshold(double omega) { cfg_.novelty_threshold = omega; }
  void set_noise_var(double sigma02) { cfg_.noise_var = sigma02; }

  /// Posterior mean and variance at x_star (noise-free k(x,x); variance
  /// clamped below at 1e-12). Empty state gives the prior (0, sigma_f^2).
  std::pair<double, double> predict(const Point& x_star) const;

  /// Vectorized predict over many points (columns of means/vars align
  /// with rows of pts).
  void predict_batch(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                     Eigen::VectorXd* means, Eigen::VectorXd* vars) const;

  NoveltyResult novelty(const Point& x) const;

  UpdateOutcome update(const Point& x, double y);

  /// Deletion score epsilon_i = |alpha_i| / Q_ii; candidates rank ascending.
  double score(long i) const;

  /// Removes BV element j with the Schur-style downdates of alpha, C, Q.
  void erase_basis(long j);

  /// Rebuilds a batch-exact posterior over the retained BV data under new
  /// hyperparameters; BV membership unchanged.
  void refit_from_bv(const Hyperparameters& h_new);

  /// CSV dump: x0,x1,y,alpha_i,score_i per BV element.
  std::string dump_bv_csv() const;

 private:
  std::vector<Point> bv_points_;
  Eigen::VectorXd targets_;
  Eigen::VectorXd alpha_;
  Eigen::MatrixXd C_;
  Eigen::MatrixXd Q_;
  Hyperparameters hyper_;
  SogpConfig cfg_;
  SogpStats stats_;
};

}  // namespace monitor
