#include "monitor/mission.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "monitor/errors.hpp"

namespace monitor {

Metrics metrics(const SogpState& sogp, const FieldRaster& field, bool want_maps) {
  if (field.cell_count() == 0) throw ContractError("metrics: empty field");
  const long n_ocean = field.ocean_count();
  Eigen::Matrix<double, Eigen::Dynamic, 2> pts(n_ocean, 2);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_ocean));
  long k = 0;
  for (int r = 0; r < field.rows; ++r)
    for (int c = 0; c < field.cols; ++c)
      if (!field.masked(r, c)) {
        pts(k, 0) = c;
        pts(k, 1) = r;
        idx[static_cast<std::size_t>(k)] = static_cast<std::size_t>(r) * field.cols + c;
        ++k;
      }

  Eigen::VectorXd means, vars;
  sogp.predict_batch(pts, &means, &vars);

  Metrics m;
  double se = 0.0;
  for (long i = 0; i < n_ocean; ++i) {
    const double d = means(i) - field.values[idx[static_cast<std::size_t>(i)]];
    se += d * d;
  }
  m.mse = n_ocean > 0 ? se / n_ocean : 0.0;
  m.mean_variance = n_ocean > 0 ? vars.mean() : 0.0;

  if (want_maps) {
    m.mean_map.rows = m.var_map.rows = field.rows;
    m.mean_map.cols = m.var_map.cols = field.cols;
    m.mean_map.values.assign(field.cell_count(), 0.0);
    m.var_map.values.assign(field.cell_count(), 0.0);
    m.mean_map.mask = field.mask;
    m.var_map.mask = field.mask;
    for (long i = 0; i < n_ocean; ++i) {
      m.mean_map.values[idx[static_cast<std::size_t>(i)]] = means(i);
      m.var_map.values[idx[static_cast<std::size_t>(i)]] = vars(i);
    }
  }
  return m;
}

double rho_update(long* churn, const UpdateOutcome& outcome, int m) {
  if (m < 1) throw ContractError("rho_update: m must be >= 1");
  if (outcome.is_addition()) ++(*churn);
  return std::min(1.0, static_cast<double>(*churn) / m);
}

namespace {

bool cell_masked(const FieldRaster& f, const Point& p) {
  const int c = static_cast<int>(std::lround(p(0)));
  const int r = static_cast<int>(std::lround(p(1)));
  if (r < 0 || r >= f.rows || c < 0 || c >= f.cols) return true;
  return f.masked(r, c);
}

double cell_value(const FieldRaster& f, const Point& p) {
  return f.at(static_cast<int>(std::lround(p(1))), static_cast<int>(std::lround(p(0))));
}

}  // namespace

MissionState run(const FieldRaster& field, const Hyperparameters& h0, const MissionConfig& cfg) {
  if (field.ocean_count() < 1) throw ContractError("mission: field has no ocean cells");
  if (cfg.rho_threshold < 0) throw ContractError("mission: rho_threshold must be >= 0");
  if (cell_masked(field, cfg.launch)) throw ContractError("mission: launch cell is masked");

  MissionState st;
  st.position = cfg.launch;
  SogpConfig scfg;
  scfg.capacity = cfg.bv_capacity;
  scfg.noise_var = h0.sigma_n2();
  scfg.novelty_threshold = cfg.novelty_rel * h0.sigma_f2();
  st.sogp = SogpState(h0, scfg);

  std::mt19937_64 rng(cfg.rng_seed);

  std::vector<Point> ocean;
  for (int r = 0; r < field.rows; ++r)
    for (int c = 0; c < field.cols; ++c)
      if (!field.masked(r, c)) ocean.emplace_back(c, r);

  long samples = 0;
  long churn = 0;

  auto take_sample = [&](const Point& p) {
    const UpdateOutcome out = st.sogp.update(p, cell_value(field, p));
    ++samples;
    st.rho = rho_update(&churn, out, cfg.bv_capacity);
    const Metrics m = metrics(st.sogp, field, /*want_maps=*/false);
    st.history.push_back({samples, m.mse, m.mean_variance, st.epoch});
  };

  // Prior seeding with uniform random ocean cells.
  std::uniform_int_distribution<std::size_t> pick(0, ocean.size() - 1);
  for (int i = 0; i < cfg.prior_random_samples && samples < cfg.max_samples; ++i)
    take_sample(ocean[pick(rng)]);

  const PlanGrid grid = build_plan_grid(field, cfg.plan_rows, cfg.plan_cols);
  std::vector<long> visited;  // plan-grid cells covered since last re-estimate

  auto plan_cell_of = [&](const Point& p) -> long {
    for (long i = 0; i < static_cast<long>(grid.fine_regions.size()); ++i) {
      const auto& rg = grid.fine_regions[i];
      const int r = static_cast<int>(std::lround(p(1)));
      const int c = static_cast<int>(std::lround(p(0)));
      if (r >= rg[0] && r < rg[1] && c >= rg[2] && c < rg[3]) return i;
    }
    return -1;
  };

  while (samples < cfg.max_samples) {
    ++st.epoch;
    // Keep enough candidates for the DP; drop the exclusion list if the
    // mission has covered nearly the whole grid.
    if (static_cast<long>(grid.cells.size()) - static_cast<long>(visited.size()) <=
        cfg.waypoints_per_plan)
      visited.clear();

    EpochRecord rec;
    rec.epoch = st.epoch;
    rec.selection = select_waypoints(st.sogp, grid, cfg.waypoints_per_plan, visited);
    rec.path = route(st.position, rec.selection.waypoints);

    bool triggered = false;
    Point last_sampled(-1e9, -1e9);
    for (const auto& stop : rec.path.stops) {
      const auto leg = rasterize_leg(st.position, stop, cfg.sample_stride);
      for (const auto& cell : leg) {
        if (cell_masked(field, cell)) continue;
        if (cell == last_sampled) continue;
        take_sample(cell);
        last_sampled = cell;
        st.position = cell;
        if (samples >= cfg.max_samples) break;
        if (st.rho > cfg.rho_threshold) {
          const long additions = churn;
          OptimizerResult opt = optimize_hyperparameters(
              st.sogp.bv_points(), st.sogp.bv_targets(), st.sogp.hyper(), cfg.optimizer);
          st.sogp.set_noise_var(opt.hyper.sigma_n2());
          st.sogp.set_novelty_threshold(cfg.novelty_rel * opt.hyper.sigma_f2());
          st.sogp.refit_from_bv(opt.hyper);
          st.re_estimates.push_back({samples, additions, st.rho, opt.hyper});
          churn = 0;
          st.rho = 0.0;
          visited.clear();
          triggered = true;
          break;
        }
      }
      st.position = stop;
      if (triggered || samples >= cfg.max_samples) break;
      const long pc = plan_cell_of(stop);
      if (pc >= 0 && std::find(visited.begin(), visited.end(), pc) == visited.end())
        visited.push_back(pc);
    }

    const Metrics maps = metrics(st.sogp, field, /*want_maps=*/true);
    rec.bv_csv = st.sogp.dump_bv_csv();
    rec.mean_map = maps.mean_map;
    rec.var_map = maps.var_map;
    st.epochs.push_back(std::move(rec));
  }
  return st;
}

}  // namespace monitor
