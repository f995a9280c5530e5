#include "monitor/full_gp.hpp"

#include <algorithm>
#include <cmath>

#include "monitor/errors.hpp"
#include "monitor/linalg.hpp"

namespace monitor {

namespace {
constexpr double kVarFloor = 1e-12;
constexpr double kLogBound = 10.0;
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

GpModel fit(const Hyperparameters& h, const std::vector<Point>& X, const Eigen::VectorXd& y) {
  if (X.empty() || static_cast<long>(X.size()) != y.size())
    throw ContractError("fit: |X| must equal |y| and be >= 1");
  GpModel m;
  m.inputs = X;
  m.targets = y;
  m.hyper = h;
  m.gram = kernel_gram(h, X);
  const auto llt = chol_with_jitter(m.gram);
  const long n = m.gram.rows();
  m.gram_inverse = llt.solve(Eigen::MatrixXd::Identity(n, n));
  m.alpha = m.gram_inverse * y;
  return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> predict(const GpModel& m,
                                                    const std::vector<Point>& X_star) {
  if (X_star.empty()) throw ContractError("predict: empty test set");
  const long ns = static_cast<long>(X_star.size());
  const long n = m.size();
  Eigen::MatrixXd Ks(ns, n);  // K(X_*, X), cross entries never share an index
  for (long i = 0; i < ns; ++i)
    Ks.row(i) = kernel_vector(m.hyper, m.inputs, X_star[i]).transpose();

  Eigen::VectorXd means = Ks * m.alpha;
  const double prior = m.hyper.sigma_f2() + m.hyper.sigma_n2();
  Eigen::VectorXd vars(ns);
  for (long i = 0; i < ns; ++i) {
    const double v = prior - Ks.row(i) * m.gram_inverse * Ks.row(i).transpose();
    vars(i) = std::max(v, kVarFloor);
  }
  return {std::move(means), std::move(vars)};
}

LooReport loo_report(const GpModel& m) {
  const long n = m.size();
  if (n < 2) throw ContractError("loo_report: need at least 2 training points");
  const Eigen::VectorXd d = m.gram_inverse.diagonal();
  if ((d.array() <= 0.0).any())
    throw ConditioningError("loo_report: K^-1 has a non-positive diagonal entry");

  LooReport rep;
  rep.per_point_var = d.cwiseInverse();
  rep.per_point_mean = m.targets - m.alpha.cwiseQuotient(d);
  rep.log_likelihood = 0.0;
  for (long i = 0; i < n; ++i) {
    const double s2 = rep.per_point_var(i);
    const double resid = m.targets(i) - rep.per_point_mean(i);  // = alpha_i / d_i
    rep.log_likelihood += -0.5 * std::log(s2) - resid * resid / (2.0 * s2) -
                          0.5 * std::log(kTwoPi);
  }

  const int np = m.hyper.count();
  rep.gradient.resize(np);
  // dK/dtheta_j assembled entrywise from kernel_grad (log-space derivatives).
  std::vector<Eigen::MatrixXd> dK(static_cast<std::size_t>(np), Eigen::MatrixXd(n, n));
  for (long i = 0; i < n; ++i)
    for (long j = i; j < n; ++j) {
      const Eigen::VectorXd g = kernel_grad(m.hyper, m.inputs[i], m.inputs[j], i == j);
      for (int p = 0; p < np; ++p) {
        dK[p](i, j) = g(p);
        dK[p](j, i) = g(p);
      }
    }
  for (int p = 0; p < np; ++p) {
    const Eigen::MatrixXd Z = m.gram_inverse * dK[p];
    const Eigen::VectorXd Za = Z * m.alpha;
    const Eigen::VectorXd ZKinv_diag = (Z * m.gram_inverse).diagonal();
    double g = 0.0;
    for (long i = 0; i < n; ++i) {
      const double ai = m.alpha(i);
      g += (ai * Za(i) - 0.5 * (1.0 + ai * ai / d(i)) * ZKinv_diag(i)) / d(i);
    }
    rep.gradient(p) = g;
  }
  return rep;
}

namespace {

Eigen::VectorXd clamp_logs(Eigen::VectorXd v) {
  for (long i = 0; i < v.size(); ++i) v(i) = std::clamp(v(i), -kLogBound, kLogBound);
  return v;
}

}  // namespace

OptimizerResult optimize_hyperparameters(const std::vector<Point>& X, const Eigen::VectorXd& y,
                                         const Hyperparameters& h0, const OptimizerConfig& cfg) {
  if (X.size() < 2 || static_cast<long>(X.size()) != y.size())
    throw ContractError("optimize_hyperparameters: need |X| = |y| >= 2");
  if (cfg.learning_rate <= 0 || cfg.max_iters < 1 || cfg.grad_tolerance < 0)
    throw ContractError("optimize_hyperparameters: invalid OptimizerConfig");

  OptimizerResult res;
  Eigen::VectorXd theta = clamp_logs(h0.to_vector());
  res.hyper = Hyperparameters::from_vector(theta);

  GpModel model = fit(res.hyper, X, y);
  LooReport rep = loo_report(model);
  double cur = rep.log_likelihood;
  res.trace.push_back(cur);
  double best = cur;
  Eigen::VectorXd best_theta = theta;

  for (int it = 0; it < cfg.max_iters; ++it) {
    if (rep.gradient.cwiseAbs().maxCoeff() < cfg.grad_tolerance) break;
    double step = cfg.learning_rate;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::VectorXd cand = clamp_logs(theta + step * rep.gradient);
      Hyperparameters hc = Hyperparameters::from_vector(cand);
      try {
        GpModel mc = fit(hc, X, y);
        LooReport rc = loo_report(mc);
        if (!std::isfinite(rc.log_likelihood)) throw ConditioningError("non-finite L_LOO");
        if (!cfg.backtrack || rc.log_likelihood >= cur) {
          theta = cand;
          model = std::move(mc);
          rep = std::move(rc);
          cur = rep.log_likelihood;
          accepted = true;
          break;
        }
      } catch (const ConditioningError&) {
        if (!cfg.backtrack) {
          res.truncated = true;
          res.hyper = Hyperparameters::from_vector(best_theta);
          return res;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no improving step found at any scale
    res.trace.push_back(cur);
    if (cur > best) {
      best = cur;
      best_theta = theta;
    }
  }
  res.hyper = Hyperparameters::from_vector(best_theta);
  return res;
}

}  // namespace monitor
