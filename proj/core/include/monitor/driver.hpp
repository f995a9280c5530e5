#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monitor/field.hpp"
#include "monitor/mission.hpp"

namespace monitor {

/// Aggregated experiment configuration: field source, initial kernel
/// parameters, mission knobs, planner resolution, output location.
struct RunConfig {
  // Field source: a CSV raster path, or a synthetic field when empty.
  std::string field_csv;
  int synth_rows = 128;
  int synth_cols = 128;
  SynthKind synth_kind = SynthKind::gaussian_blobs;

  Hyperparameters hyper = Hyperparameters::manual2d();
  MissionConfig mission;
  std::uint64_t seed = 0;  // master seed; sub-streams derive from it
  RasterFormat raster_format = RasterFormat::pgm;
  std::string out_dir = "out";

  /// Flat key=value text with section prefixes (mission.rho_threshold=0.6).
  std::string serialize() const;
  static RunConfig parse(const std::string& text);
  static RunConfig parse_file(const std::string& path);
};

/// Loads or synthesizes the configured field.
FieldRaster resolve_field(const RunConfig& cfg);

/// Executes the mission and writes metrics.csv, per-epoch rasters, paths
/// and BV dumps, a run summary, and the resolved config into cfg.out_dir.
/// Returns the process exit status (0 ok, 1 config/input, 2 numerical).
int cmd_run(const RunConfig& cfg);

/// Cross-product of thresholds and launch points; one output directory
/// per combination plus a combined long-format CSV. MONITOR_THREADS caps
/// parallelism (0 or unset = serial). Returns 0, or 3 if any run failed.
int cmd_sweep(const RunConfig& cfg, const std::vector<double>& rho_list,
              const std::vector<Point>& launch_list);

/// Runs one oracle-comparison suite by name (sogp_equiv, loo_grad,
/// dp_greedy, tsp_exact); prints max deviations. Returns 0 or 2.
int cmd_oracle(const std::string& suite);

}  // namespace monitor
