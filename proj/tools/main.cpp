#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "monitor/driver.hpp"
#include "monitor/errors.hpp"

namespace {

// "x,y" -> Point
monitor::Point parse_launch(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--launch expects \"x,y\"");
  return {std::strtod(s.c_str(), nullptr), std::strtod(s.c_str() + comma + 1, nullptr)};
}

// "RxC" -> rows, cols
void parse_dims(const std::string& s, int* rows, int* cols) {
  const auto x = s.find('x');
  if (x == std::string::npos) throw CLI::ValidationError("--planner-dims expects \"RxC\"");
  *rows = std::atoi(s.c_str());
  *cols = std::atoi(s.c_str() + x + 1);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent-monitoring simulator: informative planning with a sparse online GP"};
  app.require_subcommand(1);

  std::string config_path, out_dir, launch_str, dims_str, format_str, field_csv;
  std::uint64_t seed = 0;
  double rho = -1.0;
  long budget = -1;
  bool have_seed = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Config file (flat key=value)");
    cmd->add_option("--out", out_dir, "Output directory");
    cmd->add_option("--seed", seed, "Master RNG seed")->each([&](const std::string&) {
      have_seed = true;
    });
    cmd->add_option("--field", field_csv, "Ground-truth raster CSV (default: synthetic)");
    cmd->add_option("--budget", budget, "Total sample budget");
    cmd->add_option("--planner-dims", dims_str, "Planning grid as RxC (e.g. 12x12)");
    cmd->add_option("--format", format_str, "Raster output format: csv or pgm");
  };

  auto* run_cmd = app.add_subcommand("run", "Execute one mission and emit all artifacts");
  add_common(run_cmd);
  run_cmd->add_option("--rho", rho, "Re-estimate threshold rho_0");
  run_cmd->add_option("--launch", launch_str, "Launch point as x,y");

  std::vector<double> rho_list;
  std::vector<std::string> launch_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the rho x launch cross-product");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--rho", rho_list, "Thresholds to sweep")->expected(-1);
  sweep_cmd->add_option("--launch", launch_list, "Launch points x,y to sweep")->expected(-1);

  std::string suite;
  auto* oracle_cmd = app.add_subcommand("oracle", "Run a brute-force verification suite");
  oracle_cmd->add_option("suite", suite, "sogp_equiv | loo_grad | dp_greedy | tsp_exact")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle_cmd->parsed()) return monitor::cmd_oracle(suite);

    monitor::RunConfig cfg;
    if (!config_path.empty()) cfg = monitor::RunConfig::parse_file(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!field_csv.empty()) cfg.field_csv = field_csv;
    if (have_seed) cfg.seed = seed;
    if (budget >= 0) cfg.mission.max_samples = budget;
    if (!dims_str.empty()) parse_dims(dims_str, &cfg.mission.plan_rows, &cfg.mission.plan_cols);
    if (!format_str.empty()) {
      if (format_str == "csv")
        cfg.raster_format = monitor::RasterFormat::csv;
      else if (format_str == "pgm")
        cfg.raster_format = monitor::RasterFormat::pgm;
      else
        throw monitor::FormatError("unknown --format: " + format_str);
    }

    if (run_cmd->parsed()) {
      if (rho >= 0.0) cfg.mission.rho_threshold = rho;
      if (!launch_str.empty()) cfg.mission.launch = parse_launch(launch_str);
      return monitor::cmd_run(cfg);
    }

    std::vector<monitor::Point> launches;
    for (const auto& s : launch_list) launches.push_back(parse_launch(s));
    return monitor::cmd_sweep(cfg, rho_list, launches);
  } catch (const monitor::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const monitor::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
