#include "monitor/sogp.hpp"

#include <cmath>
#include <cstdio>

#include "monitor/errors.hpp"
#include "monitor/linalg.hpp"

namespace monitor {

namespace {
constexpr double kVarFloor = 1e-12;
// Full updates with near-zero gamma would divide by ~0 in the Q extension;
// points below this relative residual always take the reduced branch.
constexpr double kGammaFloorRel = 1e-12;
}  // namespace

SogpState::SogpState(const Hyperparameters& h, const SogpConfig& cfg) : hyper_(h), cfg_(cfg) {
  if (cfg.capacity < 1) throw ContractError("SogpConfig: capacity must be >= 1");
  if (cfg.novelty_threshold < 0) throw ContractError("SogpConfig: omega must be >= 0");
  if (cfg.noise_var <= 0) throw ContractError("SogpConfig: noise_var must be > 0");
  alpha_.resize(0);
  C_.resize(0, 0);
  Q_.resize(0, 0);
  targets_.resize(0);
}

std::pair<double, double> SogpState::predict(const Point& x_star) const {
  const double kxx = hyper_.sigma_f2();
  if (size() == 0) return {0.0, kxx};
  const Eigen::VectorXd k = kernel_vector(hyper_, bv_points_, x_star);
  const double mean = alpha_.dot(k);
  const double var = kxx + k.dot(C_ * k);
  return {mean, std::max(var, kVarFloor)};
}

void SogpState::predict_batch(const Eigen::Matrix<double, Eigen::Dynamic, 2>& pts,
                              Eigen::VectorXd* means, Eigen::VectorXd* vars) const {
  const long n = pts.rows();
  const double sf2 = hyper_.sigma_f2();
  if (size() == 0) {
    means->setZero(n);
    vars->setConstant(n, sf2);
    return;
  }
  const long t = size();
  const Eigen::VectorXd l = hyper_.lengths();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(t, n);  // scaled squared distances
  for (int dim = 0; dim < 2; ++dim) {
    Eigen::VectorXd b(t);
    for (long i = 0; i < t; ++i) b(i) = bv_points_[i](dim);
    const Eigen::VectorXd q = pts.col(dim);
    D.noalias() += ((b.replicate(1, n).rowwise() - q.transpose()) / l(dim))
                       .array()
                       .square()
                       .matrix();
  }
  const Eigen::MatrixXd K = (sf2 * (-0.5 * D.array()).exp()).matrix();  // t x n
  *means = K.transpose() * alpha_;
  const Eigen::MatrixXd CK = C_ * K;
  Eigen::VectorXd corr = (K.cwiseProduct(CK)).colwise().sum().transpose();
  *vars = (corr.array() + sf2).max(kVarFloor).matrix();
}

NoveltyResult SogpState::novelty(const Point& x) const {
  NoveltyResult r;
  const double kxx = hyper_.sigma_f2();
  if (size() == 0) {
    r.gamma = kxx;
    r.k_vec.resize(0);
    r.e_hat.resize(0);
    return r;
  }
  r.k_vec = kernel_vector(hyper_, bv_points_, x);
  r.e_hat = Q_ * r.k_vec;
  r.gamma = std::max(kxx - r.k_vec.dot(r.e_hat), 0.0);
  return r;
}

UpdateOutcome SogpState::update(const Point& x, double y) {
  if (!std::isfinite(y)) throw ContractError("sogp update: non-finite target value");
  const long t = size();
  const NoveltyResult nov = novelty(x);
  const auto [mean, var] = predict(x);
  const double denom = var + cfg_.noise_var;
  const double q = (y - mean) / denom;
  const double r = -1.0 / denom;
  ++stats_.total_updates;

  const double gamma_floor = kGammaFloorRel * hyper_.sigma_f2();
  if (nov.gamma > std::max(cfg_.novelty_threshold, gamma_floor)) {
    // Full update: grow alpha, C by one via the T/U extension operators.
    Eigen::VectorXd s(t + 1);
    s.head(t) = C_ * nov.k_vec;
    s(t) = 1.0;
    Eigen::VectorXd a(t + 1);
    a.head(t) = alpha_;
    a(t) = 0.0;
    alpha_ = a + q * s;

    Eigen::MatrixXd Cn = Eigen::MatrixXd::Zero(t + 1, t + 1);
    Cn.topLeftCorner(t, t) = C_;
    Cn.noalias() += r * s * s.transpose();
    C_ = symmetrize(Cn);

    Eigen::VectorXd u(t + 1);  // T(e_hat) - e_{t+1}
    u.head(t) = nov.e_hat;
    u(t) = -1.0;
    Eigen::MatrixXd Qn = Eigen::MatrixXd::Zero(t + 1, t + 1);
    Qn.topLeftCorner(t, t) = Q_;
    Qn.noalias() += (1.0 / nov.gamma) * u * u.transpose();
    Q_ = symmetrize(Qn);

    bv_points_.push_back(x);
    targets_.conservativeResize(t + 1);
    targets_(t) = y;
    ++stats_.additions;

    if (size() > cfg_.capacity) {
      long worst = 0;
      double worst_score = score(0);
      for (long i = 1; i < size(); ++i) {
        const double si = score(i);
        if (si < worst_score) {  // lowest index wins ties
          worst_score = si;
          worst = i;
        }
      }
      erase_basis(worst);
      return {UpdateKind::added_then_deleted, worst};
    }
    return {UpdateKind::added, -1};
  }

  // Reduced update: project onto the current BV span, no growth.
  const Eigen::VectorXd s_hat = C_ * nov.k_vec + nov.e_hat;
  alpha_ += q * s_hat;
  C_ = symmetrize(C_ + r * s_hat * s_hat.transpose());
  ++stats_.rejections;
  return {UpdateKind::reduced, -1};
}

double SogpState::score(long i) const {
  if (i < 0 || i >= size()) throw ContractError("sogp score: index out of range");
  const double qii = Q_(i, i);
  if (qii <= 0) throw ConditioningError("sogp score: Q has non-positive diagonal");
  return std::abs(alpha_(i)) / qii;
}

void SogpState::erase_basis(long j) {
  const long t = size();
  if (t < 2) throw ContractError("sogp erase_basis: need at least 2 BV points");
  if (j < 0 || j >= t) throw ContractError("sogp erase_basis: index out of range");
  const double qj = Q_(j, j);
  if (qj <= 0) throw ConditioningError("sogp erase_basis: Q_jj <= 0");
  const double cj = C_(j, j);
  const double aj = alpha_(j);

  auto drop_entry = [j, t](const Eigen::VectorXd& v) {
    Eigen::VectorXd out(t - 1);
    out.head(j) = v.head(j);
    out.tail(t - 1 - j) = v.tail(t - 1 - j);
    return out;
  };
  auto drop_row_col = [j, t](const Eigen::MatrixXd& M) {
    Eigen::MatrixXd out(t - 1, t - 1);
    out.topLeftCorner(j, j) = M.topLeftCorner(j, j);
    out.topRightCorner(j, t - 1 - j) = M.topRightCorner(j, t - 1 - j);
    out.bottomLeftCorner(t - 1 - j, j) = M.bottomLeftCorner(t - 1 - j, j);
    out.bottomRightCorner(t - 1 - j, t - 1 - j) = M.bottomRightCorner(t - 1 - j, t - 1 - j);
    return out;
  };

  const Eigen::VectorXd Qcol = drop_entry(Q_.col(j));
  const Eigen::VectorXd Ccol = drop_entry(C_.col(j));
  const Eigen::VectorXd a_red = drop_entry(alpha_);
  const Eigen::MatrixXd Q_red = drop_row_col(Q_);
  const Eigen::MatrixXd C_red = drop_row_col(C_);

  alpha_ = a_red - (aj / qj) * Qcol;
  C_ = symmetrize(C_red + (cj / (qj * qj)) * Qcol * Qcol.transpose() -
                  (Qcol * Ccol.transpose() + Ccol * Qcol.transpose()) / qj);
  Q_ = symmetrize(Q_red - Qcol * Qcol.transpose() / qj);

  bv_points_.erase(bv_points_.begin() + j);
  Eigen::VectorXd yt(t - 1);
  yt.head(j) = targets_.head(j);
  yt.tail(t - 1 - j) = targets_.tail(t - 1 - j);
  targets_ = yt;
  ++stats_.deletions;
}

void SogpState::refit_from_bv(const Hyperparameters& h_new) {
  if (size() < 1) throw ContractError("refit_from_bv: empty BV-set");
  hyper_ = h_new;

  // New hyperparameters can make the retained BV-set redundant (e.g. much
  // longer length-scales); restore the novelty invariant by dropping
  // points whose residual against the rest, 1 / Q_ii, falls below the
  // gate. Without this the Gram inverse blows up and later incremental
  // updates diverge.
  const double gate =
      std::max(cfg_.novelty_threshold, 1e-8 * hyper_.sigma_f2());
  for (;;) {
    const long t = size();
    const Eigen::MatrixXd Knf = kernel_gram_noise_free(hyper_, bv_points_);
    Q_ = symmetrize(chol_with_jitter(Knf).solve(Eigen::MatrixXd::Identity(t, t)));
    Eigen::MatrixXd Kn = Knf;
    Kn.diagonal().array() += cfg_.noise_var;
    const Eigen::MatrixXd Kn_inv =
        chol_with_jitter(Kn).solve(Eigen::MatrixXd::Identity(t, t));
    alpha_ = Kn_inv * targets_;
    C_ = symmetrize(-Kn_inv);
    if (t < 2) return;

    long worst = 0;
    for (long i = 1; i < t; ++i)
      if (Q_(i, i) > Q_(worst, worst)) worst = i;
    if (1.0 / Q_(worst, worst) >= gate) return;

    bv_points_.erase(bv_points_.begin() + worst);
    Eigen::VectorXd yt(t - 1);
    yt.head(worst) = targets_.head(worst);
    yt.tail(t - 1 - worst) = targets_.tail(t - 1 - worst);
    targets_ = yt;
    ++stats_.deletions;
  }
}

std::string SogpState::dump_bv_csv() const {
  std::string out = "x0,x1,y,alpha_i,score_i\n";
  char buf[192];
  for (long i = 0; i < size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", bv_points_[i](0),
                  bv_points_[i](1), targets_(i), alpha_(i), score(i));
    out += buf;
  }
  return out;
}

}  // namespace monitor
