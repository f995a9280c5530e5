#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace monitor {

using Point = Eigen::Vector2d;

/// Squared-exponential ARD kernel parameters, stored in log space so that
/// unconstrained gradient steps keep sigma_n^2, sigma_f^2 and the
/// length-scales strictly positive.
struct Hyperparameters {
  double log_sigma_n2 = 0.0;
  double log_sigma_f2 = 0.0;
  Eigen::VectorXd log_lengths;  // one per input dimension

  double sigma_n2() const { return std::exp(log_sigma_n2); }
  double sigma_f2() const { return std::exp(log_sigma_f2); }
  Eigen::VectorXd lengths() const { return log_lengths.array().exp(); }

  int count() const { return 2 + static_cast<int>(log_lengths.size()); }
  int dim() const { return static_cast<int>(log_lengths.size()); }

  /// Flat vector view ordered (log_sigma_n2, log_sigma_f2, log_lengths...).
  Eigen::VectorXd to_vector() const;
  static Hyperparameters from_vector(const Eigen::VectorXd& v);

  /// key=value text block (keys log_sigma_n2, log_sigma_f2, log_l_0, ...).
  std::string serialize() const;
  static Hyperparameters parse(const std::string& text);

  /// The hand-set 2-D values {sigma_n2=e^-2, sigma_f2=e^2, l=(e, e)}.
  static Hyperparameters manual2d();
};

/// k(x, x') with the Kronecker delta interpreted by data-point index:
/// same_index adds sigma_n^2, coordinate equality alone does not.
double kernel_eval(const Hyperparameters& h, const Point& x, const Point& x_prime,
                   bool same_index);

/// Partial derivatives of kernel_eval with respect to the log-space
/// parameters, ordered as Hyperparameters::to_vector.
Eigen::VectorXd kernel_grad(const Hyperparameters& h, const Point& x, const Point& x_prime,
                            bool same_index);

/// n x n covariance matrix with entries kernel_eval(h, p_i, p_j, i == j).
Eigen::MatrixXd kernel_gram(const Hyperparameters& h, const std::vector<Point>& points);

/// Same, without the sigma_n^2 diagonal (prior covariance of the latent f).
Eigen::MatrixXd kernel_gram_noise_free(const Hyperparameters& h,
                                       const std::vector<Point>& points);

/// Noise-free kernel vector [k(p_0, x), ..., k(p_{n-1}, x)].
Eigen::VectorXd kernel_vector(const Hyperparameters& h, const std::vector<Point>& points,
                              const Point& x);

}  // namespace monitor
