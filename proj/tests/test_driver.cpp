#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "monitor/driver.hpp"
#include "monitor/errors.hpp"

using namespace monitor;
namespace fs = std::filesystem;

namespace {

RunConfig tiny_config(const std::string& out_name) {
  RunConfig cfg;
  cfg.synth_rows = 20;
  cfg.synth_cols = 20;
  cfg.synth_kind = SynthKind::smooth_gradient;
  cfg.seed = 13;
  cfg.raster_format = RasterFormat::csv;
  cfg.out_dir = (fs::temp_directory_path() / out_name).string();
  cfg.mission.launch = Point(2, 2);
  cfg.mission.waypoints_per_plan = 3;
  cfg.mission.bv_capacity = 25;
  cfg.mission.prior_random_samples = 8;
  cfg.mission.max_samples = 60;
  cfg.mission.sample_stride = 3;
  cfg.mission.plan_rows = 4;
  cfg.mission.plan_cols = 4;
  cfg.mission.optimizer.max_iters = 5;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("run config text round-trips") {
  RunConfig cfg = tiny_config("rt");
  cfg.hyper.log_sigma_n2 = -4.6;
  cfg.hyper.log_lengths(1) = 3.25;
  cfg.mission.rho_threshold = 0.45;
  const RunConfig back = RunConfig::parse(cfg.serialize());
  CHECK(back.synth_rows == 20);
  CHECK(back.synth_kind == SynthKind::smooth_gradient);
  CHECK(back.hyper.log_sigma_n2 == cfg.hyper.log_sigma_n2);
  CHECK(back.hyper.log_lengths(1) == 3.25);
  CHECK(back.mission.rho_threshold == 0.45);
  CHECK(back.mission.launch == cfg.mission.launch);
  CHECK(back.seed == 13);
  CHECK(back.raster_format == RasterFormat::csv);
  CHECK(back.out_dir == cfg.out_dir);
}

TEST_CASE("config parse rejects malformed lines and bad enums") {
  CHECK_THROWS_AS(RunConfig::parse("seed 13\n"), FormatError);
  CHECK_THROWS_AS(RunConfig::parse("format=tiff\n"), FormatError);
  CHECK_THROWS_AS(RunConfig::parse("field.synth_kind=volcano\n"), FormatError);
  CHECK_NOTHROW(RunConfig::parse("# comment only\n\n"));
}

TEST_CASE("cmd_run writes the documented artifacts") {
  const RunConfig cfg = tiny_config("run_smoke");
  fs::remove_all(cfg.out_dir);
  REQUIRE(cmd_run(cfg) == 0);
  const fs::path dir(cfg.out_dir);
  CHECK(fs::exists(dir / "config.txt"));
  CHECK(fs::exists(dir / "metrics.csv"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / "selection_epoch_1.txt"));
  CHECK(fs::exists(dir / "path_epoch_1.txt"));
  CHECK(fs::exists(dir / "bv_epoch_1.csv"));
  CHECK(fs::exists(dir / "mean_epoch_1.csv"));
  CHECK(fs::exists(dir / "var_epoch_1.csv"));

  const std::string metrics = slurp(dir / "metrics.csv");
  CHECK(metrics.rfind("sample_index,mse,mean_variance,epoch\n", 0) == 0);
  CHECK(std::count(metrics.begin(), metrics.end(), '\n') == 61);  // header + 60

  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("samples=60") != std::string::npos);
  CHECK(summary.find("epochs=") != std::string::npos);
}

TEST_CASE("same seed produces byte-identical metrics") {
  RunConfig a = tiny_config("det_a");
  RunConfig b = tiny_config("det_b");
  fs::remove_all(a.out_dir);
  fs::remove_all(b.out_dir);
  REQUIRE(cmd_run(a) == 0);
  REQUIRE(cmd_run(b) == 0);
  CHECK(slurp(fs::path(a.out_dir) / "metrics.csv") ==
        slurp(fs::path(b.out_dir) / "metrics.csv"));
}

TEST_CASE("a missing field file exits 1 and names the path") {
  RunConfig cfg = tiny_config("missing_field");
  cfg.field_csv = (fs::temp_directory_path() / "no_such_field.csv").string();
  CHECK(cmd_run(cfg) == 1);
}

TEST_CASE("unknown oracle suite exits 1") { CHECK(cmd_oracle("nonsense") == 1); }

TEST_CASE("sweep covers the cross product and writes combined.csv") {
  RunConfig cfg = tiny_config("sweep");
  cfg.mission.max_samples = 40;
  fs::remove_all(cfg.out_dir);
  REQUIRE(cmd_sweep(cfg, {0.5, 0.9}, {Point(2, 2), Point(10, 10)}) == 0);
  const fs::path dir(cfg.out_dir);
  CHECK(fs::exists(dir / "rho_0.5_launch_2_2" / "metrics.csv"));
  CHECK(fs::exists(dir / "rho_0.9_launch_10_10" / "metrics.csv"));
  const std::string combined = slurp(dir / "combined.csv");
  CHECK(combined.rfind("rho,launch_x,launch_y,sample_index,mse,mean_variance,epoch\n", 0) == 0);
  // 4 combos x 40 samples + header.
  CHECK(std::count(combined.begin(), combined.end(), '\n') == 161);
}
