#include "monitor/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "monitor/errors.hpp"
#include "monitor/linalg.hpp"

namespace monitor {

namespace {
constexpr double kLog2PiE = 2.8378770664093454835606594728112;  // log(2*pi*e)
}

std::string SelectionResult::serialize() const {
  std::string out = "stage,x0,x1,value\n";
  char buf[128];
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", i + 1, waypoints[i](0),
                  waypoints[i](1), stage_values[i]);
    out += buf;
  }
  return out;
}

Eigen::MatrixXd posterior_covariance(const SogpState& s, const std::vector<Point>& cells) {
  const long k = static_cast<long>(cells.size());
  const long t = s.size();
  Eigen::MatrixXd Sigma = kernel_gram_noise_free(s.hyper(), cells);
  if (t > 0) {
    Eigen::MatrixXd Kbc(t, k);
    for (long j = 0; j < k; ++j) Kbc.col(j) = kernel_vector(s.hyper(), s.bv_points(), cells[j]);
    Sigma.noalias() += Kbc.transpose() * s.c_matrix() * Kbc;
  }
  Sigma.diagonal().array() += s.config().noise_var;
  return symmetrize(Sigma);
}

double entropy(const SogpState& s, const std::vector<Point>& A) {
  if (A.empty()) throw ContractError("entropy: empty cell set");
  const Eigen::MatrixXd Sigma = posterior_covariance(s, A);
  double logdet;
  try {
    logdet = spd_log_det(Sigma);
  } catch (const ConditioningError&) {
    throw ConditioningError("entropy: covariance not PD for |A| = " +
                            std::to_string(A.size()));
  }
  return 0.5 * (static_cast<double>(A.size()) * kLog2PiE + logdet);
}

double mutual_information(const SogpState& s, const std::vector<Point>& A,
                          const std::vector<Point>& B) {
  if (A.empty() || B.empty()) throw ContractError("mutual_information: empty set");
  for (const auto& a : A)
    for (const auto& b : B)
      if (a == b) throw ContractError("mutual_information: A and B overlap");

  std::vector<Point> joint = A;
  joint.insert(joint.end(), B.begin(), B.end());
  const Eigen::MatrixXd Sigma = posterior_covariance(s, joint);
  const long na = static_cast<long>(A.size());
  const long nb = static_cast<long>(B.size());
  const Eigen::MatrixXd Saa = Sigma.topLeftCorner(na, na);
  const Eigen::MatrixXd Sab = Sigma.topRightCorner(na, nb);
  const Eigen::MatrixXd Sbb = Sigma.bottomRightCorner(nb, nb);
  const Eigen::MatrixXd Scond =
      symmetrize(Saa - Sab * chol_with_jitter(Sbb).solve(Sab.transpose()));
  const double mi = 0.5 * (spd_log_det(Saa) - spd_log_det(Scond));
  return std::max(mi, 0.0);
}

PlanGrid build_plan_grid(const FieldRaster& field, int rows, int cols) {
  if (rows < 1 || cols < 1 || static_cast<long>(rows) * cols < 2)
    throw ContractError("build_plan_grid: need rows*cols >= 2");
  if (field.rows < 1 || field.cols < 1) throw ContractError("build_plan_grid: empty field");
  PlanGrid g;
  for (int R = 0; R < rows; ++R) {
    const int r0 = static_cast<int>(static_cast<std::int64_t>(R) * field.rows / rows);
    const int r1 = std::max(r0 + 1,
        static_cast<int>(static_cast<std::int64_t>(R + 1) * field.rows / rows));
    for (int C = 0; C < cols; ++C) {
      const int c0 = static_cast<int>(static_cast<std::int64_t>(C) * field.cols / cols);
      const int c1 = std::max(c0 + 1,
          static_cast<int>(static_cast<std::int64_t>(C + 1) * field.cols / cols));
      bool any_ocean = false;
      for (int r = r0; r < r1 && !any_ocean; ++r)
        for (int c = c0; c < c1; ++c)
          if (!field.masked(r, c)) {
            any_ocean = true;
            break;
          }
      if (!any_ocean) continue;
      g.cells.emplace_back((c0 + c1 - 1) / 2.0, (r0 + r1 - 1) / 2.0);
      g.fine_regions.push_back({r0, r1, c0, c1});
    }
  }
  if (g.cells.empty()) throw ContractError("build_plan_grid: all cells are masked");
  return g;
}

namespace {

// Per-candidate stage gain given a conditioning prefix. With singleton
// candidates the gain reduces to 1/2 log(Sigma'_cc * [Sigma'^-1]_cc):
// the first factor is the variance given the prefix, the second the
// reciprocal of the variance given everything else.
Eigen::VectorXd stage_gains(const Eigen::MatrixXd& Sigma_cond) {
  const long n = Sigma_cond.rows();
  Eigen::MatrixXd inv;
  try {
    inv = chol_with_jitter(Sigma_cond).solve(Eigen::MatrixXd::Identity(n, n));
  } catch (const ConditioningError&) {
    // Accumulated rank-one model updates can leave the covariance slightly
    // indefinite late in a mission; repair and retry.
    const Eigen::MatrixXd fixed = pd_repair(Sigma_cond);
    inv = chol_with_jitter(fixed).solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::VectorXd g(n);
    for (long i = 0; i < n; ++i) g(i) = 0.5 * std::log(fixed(i, i) * inv(i, i));
    return g;
  }
  Eigen::VectorXd g(n);
  for (long i = 0; i < n; ++i) g(i) = 0.5 * std::log(Sigma_cond(i, i) * inv(i, i));
  return g;
}

}  // namespace

SelectionResult select_waypoints(const SogpState& s, const PlanGrid& grid, int n,
                                 const std::vector<long>& exclude) {
  std::vector<long> cand;  // indices into grid.cells
  for (long i = 0; i < static_cast<long>(grid.cells.size()); ++i)
    if (std::find(exclude.begin(), exclude.end(), i) == exclude.end()) cand.push_back(i);
  const long N = static_cast<long>(cand.size());
  if (n < 1 || n >= N)
    throw ContractError("select_waypoints: need 1 <= n < candidate count");

  std::vector<Point> cells(N);
  for (long i = 0; i < N; ++i) cells[i] = grid.cells[cand[i]];
  Eigen::MatrixXd Sigma = posterior_covariance(s, cells);
  try {
    chol_with_jitter(Sigma);
  } catch (const ConditioningError&) {
    Sigma = pd_repair(Sigma);  // drifted indefinite; see stage_gains
  }

  // chain[i] = local candidate indices of the backtraced prefix at stage i+1.
  std::vector<std::vector<long>> chain(n);
  std::vector<double> stage_value(n);

  Eigen::VectorXd V = stage_gains(Sigma);  // stage 1
  std::vector<long> prefix;
  for (int stage = 0; stage < n; ++stage) {
    long best = -1;
    for (long i = 0; i < N; ++i) {
      if (std::find(prefix.begin(), prefix.end(), i) != prefix.end()) continue;
      if (best < 0 || V(i) > V(best)) best = i;  // lowest index wins ties
    }
    prefix.push_back(best);
    chain[stage] = prefix;
    stage_value[stage] = V(best);
    if (stage + 1 == n) break;

    // Condition the remaining cells on the chosen prefix.
    const long np = static_cast<long>(prefix.size());
    std::vector<long> rest;
    for (long i = 0; i < N; ++i)
      if (std::find(prefix.begin(), prefix.end(), i) == prefix.end()) rest.push_back(i);
    const long nr = static_cast<long>(rest.size());
    Eigen::MatrixXd Spp(np, np), Srp(nr, np), Srr(nr, nr);
    for (long a = 0; a < np; ++a)
      for (long b = 0; b < np; ++b) Spp(a, b) = Sigma(prefix[a], prefix[b]);
    for (long a = 0; a < nr; ++a)
      for (long b = 0; b < np; ++b) Srp(a, b) = Sigma(rest[a], prefix[b]);
    for (long a = 0; a < nr; ++a)
      for (long b = 0; b < nr; ++b) Srr(a, b) = Sigma(rest[a], rest[b]);
    const Eigen::MatrixXd Scond =
        symmetrize(Srr - Srp * chol_with_jitter(Spp).solve(Srp.transpose()));
    const Eigen::VectorXd gains = stage_gains(Scond);

    Eigen::VectorXd Vnext =
        Eigen::VectorXd::Constant(N, -std::numeric_limits<double>::infinity());
    for (long a = 0; a < nr; ++a) Vnext(rest[a]) = stage_value[stage] + gains(a);
    V = Vnext;
  }

  SelectionResult res;
  res.stage_values = stage_value;
  res.objective = stage_value[n - 1];
  for (long idx : chain[n - 1]) res.waypoints.push_back(cells[idx]);
  return res;
}

}  // namespace monitor
