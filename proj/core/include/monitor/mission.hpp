#pragma once

#include <cstdint>
#include <vector>

#include "monitor/field.hpp"
#include "monitor/full_gp.hpp"
#include "monitor/planner.hpp"
#include "monitor/route.hpp"
#include "monitor/sogp.hpp"

namespace monitor {

struct MissionConfig {
  Point launch = Point(0, 0);
  int waypoints_per_plan = 4;     // n
  int bv_capacity = 100;          // m
  double rho_threshold = 0.6;     // rho_0
  int sample_stride = 4;          // fine cells between samples along a leg
  int prior_random_samples = 50;
  long max_samples = 2000;        // mission budget
  std::uint64_t rng_seed = 0;
  int plan_rows = 12;
  int plan_cols = 12;
  double novelty_rel = 1e-4;      // omega = novelty_rel * sigma_f^2
  OptimizerConfig optimizer{0.02, 30, 1e-3, true};
};

struct MetricSample {
  long sample_index = 0;
  double mse = 0.0;
  double mean_variance = 0.0;
  int epoch = 0;
};

struct ReEstimateEvent {
  long sample_index = 0;
  long additions_since_last = 0;
  double rho_before = 0.0;
  Hyperparameters hyper_after;
};

/// One planning round: the selected batch, the routed path, and the model
/// snapshots taken when the round ended.
struct EpochRecord {
  int epoch = 0;
  SelectionResult selection;
  Path path;
  std::string bv_csv;
  FieldRaster mean_map;
  FieldRaster var_map;
};

struct MissionState {
  Point position = Point(0, 0);
  SogpState sogp;
  double rho = 0.0;
  int epoch = 0;  // re-plan count
  std::vector<MetricSample> history;
  std::vector<EpochRecord> epochs;
  std::vector<ReEstimateEvent> re_estimates;
};

struct Metrics {
  double mse = 0.0;
  double mean_variance = 0.0;
  FieldRaster mean_map;
  FieldRaster var_map;
};

/// Prediction error and uncertainty over the fine grid: MSE against the
/// ground truth and mean posterior variance over ocean cells. Land cells
/// carry a sentinel (masked) in the output rasters.
Metrics metrics(const SogpState& sogp, const FieldRaster& field, bool want_maps = true);

/// Churn-counter rule: BV additions (including those that trigger a
/// deletion) increase rho by 1/m, clamped to 1.
double rho_update(long* churn, const UpdateOutcome& outcome, int m);

/// The closed planning / sampling / learning loop.
MissionState run(const FieldRaster& field, const Hyperparameters& h0, const MissionConfig& cfg);

}  // namespace monitor
