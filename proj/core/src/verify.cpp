#include "monitor/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "monitor/full_gp.hpp"
#include "monitor/planner.hpp"
#include "monitor/route.hpp"
#include "monitor/sogp.hpp"

namespace monitor::verify {

namespace {

Hyperparameters random_hyper(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Hyperparameters h;
  h.log_sigma_n2 = -3.0 + 2.0 * u(rng);
  h.log_sigma_f2 = -0.5 + 1.5 * u(rng);
  h.log_lengths = Eigen::Vector2d(std::log(0.5 + 1.5 * u(rng)), std::log(0.5 + 1.5 * u(rng)));
  return h;
}

std::vector<Point> random_points(std::mt19937& rng, int n, double extent = 5.0) {
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng));
  return pts;
}

Eigen::VectorXd random_targets(std::mt19937& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = g(rng);
  return y;
}

SuiteResult make_result(const std::string& name, double max_dev, double tol,
                        const std::string& extra = "") {
  SuiteResult r;
  r.name = name;
  r.max_deviation = max_dev;
  r.tolerance = tol;
  r.pass = max_dev < tol;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: max deviation %.3e (tolerance %.1e)%s", name.c_str(),
                max_dev, tol, extra.c_str());
  r.detail = buf;
  return r;
}

}  // namespace

SuiteResult sogp_equiv(int cases, unsigned seed) {
  double max_dev = 0.0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    std::uniform_int_distribution<int> nn(5, 30);
    const int n = nn(rng);
    const Hyperparameters h = random_hyper(rng);
    const auto X = random_points(rng, n);
    const Eigen::VectorXd y = random_targets(rng, n);

    SogpConfig cfg;
    cfg.capacity = n + 5;
    cfg.novelty_threshold = 0.0;
    cfg.noise_var = h.sigma_n2();
    SogpState s(h, cfg);
    for (int i = 0; i < n; ++i) s.update(X[static_cast<std::size_t>(i)], y(i));

    const GpModel m = fit(h, X, y);
    const auto probes = random_points(rng, 10);
    const auto [fm, fv] = predict(m, probes);
    for (int i = 0; i < 10; ++i) {
      const auto [sm, sv] = s.predict(probes[static_cast<std::size_t>(i)]);
      max_dev = std::max(max_dev, std::abs(sm - fm(i)));
      // SOGP variance is noise-free; the exact-GP test variance carries sigma_n^2.
      max_dev = std::max(max_dev, std::abs(sv + cfg.noise_var - fv(i)));
    }
  }
  return make_result("sogp_equiv", max_dev, 1e-6);
}

SuiteResult loo_value(int cases, unsigned seed) {
  double max_dev = 0.0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    std::uniform_int_distribution<int> nn(2, 10);
    const int n = nn(rng);
    const Hyperparameters h = random_hyper(rng);
    const auto X = random_points(rng, n);
    const Eigen::VectorXd y = random_targets(rng, n);
    const GpModel m = fit(h, X, y);
    const LooReport rep = loo_report(m);

    // Explicit oracle: refit on the n-1 remaining points and score the
    // held-out log-likelihood directly.
    double oracle = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<Point> Xr;
      Eigen::VectorXd yr(n - 1);
      int k = 0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        Xr.push_back(X[static_cast<std::size_t>(j)]);
        yr(k++) = y(j);
      }
      const GpModel mr = fit(h, Xr, yr);
      const auto [mu, var] = predict(mr, {X[static_cast<std::size_t>(i)]});
      const double resid = y(i) - mu(0);
      oracle += -0.5 * std::log(var(0)) - resid * resid / (2.0 * var(0)) -
                0.5 * std::log(2.0 * M_PI);
    }
    max_dev = std::max(max_dev, std::abs(rep.log_likelihood - oracle));
  }
  return make_result("loo_value", max_dev, 1e-8);
}

SuiteResult loo_grad(int cases, unsigned seed) {
  double max_rel = 0.0;
  const double step = 1e-5;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    std::uniform_int_distribution<int> nn(3, 10);
    const int n = nn(rng);
    const Hyperparameters h = random_hyper(rng);
    const auto X = random_points(rng, n);
    const Eigen::VectorXd y = random_targets(rng, n);
    const LooReport rep = loo_report(fit(h, X, y));

    const Eigen::VectorXd theta = h.to_vector();
    for (int p = 0; p < theta.size(); ++p) {
      Eigen::VectorXd tp = theta, tm = theta;
      tp(p) += step;
      tm(p) -= step;
      const double lp = loo_report(fit(Hyperparameters::from_vector(tp), X, y)).log_likelihood;
      const double lm = loo_report(fit(Hyperparameters::from_vector(tm), X, y)).log_likelihood;
      const double fd = (lp - lm) / (2.0 * step);
      const double rel = std::abs(rep.gradient(p) - fd) / std::max(std::abs(fd), 1e-2);
      max_rel = std::max(max_rel, rel);
    }
  }
  return make_result("loo_grad", max_rel, 1e-3);
}

SuiteResult deletion(int cases, unsigned seed) {
  double max_dev = 0.0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    std::uniform_int_distribution<int> nn(3, 10);
    const int n = nn(rng);
    const Hyperparameters h = random_hyper(rng);
    const auto X = random_points(rng, n);
    const Eigen::VectorXd y = random_targets(rng, n);

    SogpConfig cfg;
    cfg.capacity = n + 5;
    cfg.noise_var = h.sigma_n2();
    SogpState s(h, cfg);
    for (int i = 0; i < n; ++i) s.update(X[static_cast<std::size_t>(i)], y(i));

    // Downdate vs direct inversion of the reduced noise-free Gram.
    {
      SogpState t = s;
      std::uniform_int_distribution<int> jj(0, n - 1);
      const int j = jj(rng);
      t.erase_basis(j);
      const Eigen::MatrixXd direct =
          kernel_gram_noise_free(h, t.bv_points()).inverse();
      max_dev = std::max(max_dev, (t.q_matrix() - direct).cwiseAbs().maxCoeff());
    }

    // Add-then-delete-last: Q must return to its prior value, and alpha, C
    // must land on the closed-form reduced update of the same sample.
    {
      SogpState t = s;
      const Point x = random_points(rng, 1)[0];
      const double yv = random_targets(rng, 1)(0);
      const NoveltyResult nov = t.novelty(x);
      const auto [mean, var] = t.predict(x);
      const double denom = var + cfg.noise_var;
      const Eigen::VectorXd s_hat = t.c_matrix() * nov.k_vec + nov.e_hat;
      const Eigen::VectorXd alpha_red = t.alpha() + ((yv - mean) / denom) * s_hat;
      const Eigen::MatrixXd c_red =
          t.c_matrix() - (1.0 / denom) * s_hat * s_hat.transpose();

      t.update(x, yv);
      t.erase_basis(t.size() - 1);
      max_dev = std::max(max_dev, (t.q_matrix() - s.q_matrix()).cwiseAbs().maxCoeff());
      max_dev = std::max(max_dev, (t.alpha() - alpha_red).cwiseAbs().maxCoeff());
      max_dev = std::max(max_dev, (t.c_matrix() - c_red).cwiseAbs().maxCoeff());
    }
  }
  return make_result("deletion", max_dev, 1e-8);
}

SuiteResult mutual_info(int cases, unsigned seed) {
  double max_dev = 0.0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    const Hyperparameters h = random_hyper(rng);
    SogpConfig cfg;
    cfg.capacity = 16;
    cfg.noise_var = h.sigma_n2();
    SogpState s(h, cfg);
    const auto train = random_points(rng, 6);
    const Eigen::VectorXd y = random_targets(rng, 6);
    for (int i = 0; i < 6; ++i) s.update(train[static_cast<std::size_t>(i)], y(i));

    std::uniform_int_distribution<int> sz(1, 5);
    const int na = sz(rng), nb = sz(rng);
    const auto A = random_points(rng, na);
    auto B = random_points(rng, nb);
    for (auto& b : B) b += Point(7.0, 7.0);  // keep A and B disjoint

    // Dense determinant oracle on the joint covariance.
    std::vector<Point> joint = A;
    joint.insert(joint.end(), B.begin(), B.end());
    const Eigen::MatrixXd Sigma = posterior_covariance(s, joint);
    const Eigen::MatrixXd Saa = Sigma.topLeftCorner(na, na);
    const Eigen::MatrixXd Sab = Sigma.topRightCorner(na, nb);
    const Eigen::MatrixXd Sbb = Sigma.bottomRightCorner(nb, nb);
    const Eigen::MatrixXd Scond = Saa - Sab * Sbb.inverse() * Sab.transpose();
    const double mi_oracle = 0.5 * std::log(Saa.determinant() / Scond.determinant());

    const double ha = entropy(s, A);
    const double ha_oracle =
        0.5 * (na * std::log(2.0 * M_PI * M_E) + std::log(Saa.determinant()));
    max_dev = std::max(max_dev, std::abs(ha - ha_oracle));

    const double mi = mutual_information(s, A, B);
    max_dev = std::max(max_dev, std::abs(mi - std::max(mi_oracle, 0.0)));
    if (mi < 0.0) max_dev = std::max(max_dev, std::abs(mi));
    const double mi_sym = mutual_information(s, B, A);
    max_dev = std::max(max_dev, std::abs(mi - mi_sym) * 1e-1);  // symmetry at 1e-8
  }
  return make_result("mutual_info", max_dev, 1e-9);
}

namespace {

// Straightforward sequential maximizer of the DP stage terms, with its own
// per-candidate Schur-complement evaluation. Lowest index wins ties.
std::vector<long> greedy_select_oracle(const Eigen::MatrixXd& Sigma, int n) {
  const long N = Sigma.rows();
  std::vector<long> chosen;
  for (int stage = 0; stage < n; ++stage) {
    long best = -1;
    double best_term = 0.0;
    for (long cand = 0; cand < N; ++cand) {
      if (std::find(chosen.begin(), chosen.end(), cand) != chosen.end()) continue;
      // H(cand | chosen) - H(cand | everything else)
      auto cond_var = [&](const std::vector<long>& cond) {
        if (cond.empty()) return Sigma(cand, cand);
        const long m = static_cast<long>(cond.size());
        Eigen::MatrixXd S(m, m);
        Eigen::VectorXd v(m);
        for (long a = 0; a < m; ++a) {
          v(a) = Sigma(cand, cond[static_cast<std::size_t>(a)]);
          for (long b = 0; b < m; ++b)
            S(a, b) = Sigma(cond[static_cast<std::size_t>(a)], cond[static_cast<std::size_t>(b)]);
        }
        return Sigma(cand, cand) - v.dot(S.ldlt().solve(v));
      };
      std::vector<long> rest_and_chosen;
      for (long i = 0; i < N; ++i)
        if (i != cand) rest_and_chosen.push_back(i);
      const double term = 0.5 * std::log(cond_var(chosen) / cond_var(rest_and_chosen));
      if (best < 0 || term > best_term) {
        best = cand;
        best_term = term;
      }
    }
    chosen.push_back(best);
  }
  return chosen;
}

}  // namespace

SuiteResult dp_greedy(int cases, unsigned seed) {
  int mismatches = 0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    const Hyperparameters h = random_hyper(rng);
    SogpConfig cfg;
    cfg.capacity = 16;
    cfg.noise_var = h.sigma_n2();
    SogpState s(h, cfg);
    const auto train = random_points(rng, 8, 4.0);
    const Eigen::VectorXd y = random_targets(rng, 8);
    for (int i = 0; i < 8; ++i) s.update(train[static_cast<std::size_t>(i)], y(i));

    PlanGrid grid;
    for (int r = 0; r < 4; ++r)
      for (int col = 0; col < 4; ++col) {
        grid.cells.emplace_back(col + 0.5, r + 0.5);
        grid.fine_regions.push_back({r, r + 1, col, col + 1});
      }
    const Eigen::MatrixXd Sigma = posterior_covariance(s, grid.cells);
    for (int n = 2; n <= 4; ++n) {
      const SelectionResult sel = select_waypoints(s, grid, n);
      const auto oracle = greedy_select_oracle(Sigma, n);
      bool ok = sel.waypoints.size() == oracle.size();
      for (std::size_t i = 0; ok && i < oracle.size(); ++i)
        ok = sel.waypoints[i] == grid.cells[static_cast<std::size_t>(oracle[i])];
      if (!ok) ++mismatches;
    }
  }
  char extra[64];
  std::snprintf(extra, sizeof(extra), ", %d sequence mismatches", mismatches);
  return make_result("dp_greedy", static_cast<double>(mismatches), 0.5, extra);
}

SuiteResult tsp_exact(int cases, unsigned seed) {
  int optimal = 0;
  double worst_ratio = 1.0;
  for (int c = 0; c < cases; ++c) {
    std::mt19937 rng(seed + static_cast<unsigned>(c));
    std::uniform_int_distribution<int> nn(2, 8);
    const int n = nn(rng);
    const auto pts = random_points(rng, n, 10.0);
    const Point origin = random_points(rng, 1, 10.0)[0];

    const Path p = route(origin, pts);

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double len = 0.0;
      Point prev = origin;
      for (int i : perm) {
        len += (pts[static_cast<std::size_t>(i)] - prev).norm();
        prev = pts[static_cast<std::size_t>(i)];
      }
      best = std::min(best, len);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double ratio = p.length / best;
    worst_ratio = std::max(worst_ratio, ratio);
    if (ratio < 1.0 + 1e-9) ++optimal;
  }
  const double opt_frac = static_cast<double>(optimal) / cases;
  char extra[96];
  std::snprintf(extra, sizeof(extra), ", optimal in %.0f%% of instances", 100.0 * opt_frac);
  SuiteResult r = make_result("tsp_exact", worst_ratio - 1.0, 0.05, extra);
  r.pass = r.pass && opt_frac >= 0.9;
  return r;
}

}  // namespace monitor::verify
