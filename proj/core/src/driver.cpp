#include "monitor/driver.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "monitor/errors.hpp"
#include "monitor/verify.hpp"

namespace monitor {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string kind_name(SynthKind k) {
  return k == SynthKind::gaussian_blobs ? "gaussian_blobs" : "smooth_gradient";
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "field.csv=" << field_csv << "\n";
  o << "field.synth_rows=" << synth_rows << "\n";
  o << "field.synth_cols=" << synth_cols << "\n";
  o << "field.synth_kind=" << kind_name(synth_kind) << "\n";
  o << "hyper.log_sigma_n2=" << fmt(hyper.log_sigma_n2) << "\n";
  o << "hyper.log_sigma_f2=" << fmt(hyper.log_sigma_f2) << "\n";
  for (int d = 0; d < hyper.dim(); ++d)
    o << "hyper.log_l_" << d << "=" << fmt(hyper.log_lengths(d)) << "\n";
  o << "mission.launch_x=" << fmt(mission.launch(0)) << "\n";
  o << "mission.launch_y=" << fmt(mission.launch(1)) << "\n";
  o << "mission.waypoints_per_plan=" << mission.waypoints_per_plan << "\n";
  o << "mission.bv_capacity=" << mission.bv_capacity << "\n";
  o << "mission.rho_threshold=" << fmt(mission.rho_threshold) << "\n";
  o << "mission.sample_stride=" << mission.sample_stride << "\n";
  o << "mission.prior_random_samples=" << mission.prior_random_samples << "\n";
  o << "mission.max_samples=" << mission.max_samples << "\n";
  o << "mission.novelty_rel=" << fmt(mission.novelty_rel) << "\n";
  o << "planner.rows=" << mission.plan_rows << "\n";
  o << "planner.cols=" << mission.plan_cols << "\n";
  o << "optimizer.learning_rate=" << fmt(mission.optimizer.learning_rate) << "\n";
  o << "optimizer.max_iters=" << mission.optimizer.max_iters << "\n";
  o << "optimizer.grad_tolerance=" << fmt(mission.optimizer.grad_tolerance) << "\n";
  o << "seed=" << seed << "\n";
  o << "format=" << (raster_format == RasterFormat::pgm ? "pgm" : "csv") << "\n";
  o << "out=" << out_dir << "\n";
  return o.str();
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("config line missing '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key, auto parse_fn, auto* dst) {
    const auto it = kv.find(key);
    if (it != kv.end()) *dst = parse_fn(it->second);
  };
  auto as_str = [](const std::string& s) { return s; };
  auto as_d = [](const std::string& s) { return std::strtod(s.c_str(), nullptr); };
  auto as_i = [](const std::string& s) { return std::atoi(s.c_str()); };
  auto as_l = [](const std::string& s) { return std::atol(s.c_str()); };
  auto as_u64 = [](const std::string& s) { return std::strtoull(s.c_str(), nullptr, 10); };

  get("field.csv", as_str, &cfg.field_csv);
  get("field.synth_rows", as_i, &cfg.synth_rows);
  get("field.synth_cols", as_i, &cfg.synth_cols);
  if (kv.count("field.synth_kind")) {
    const auto& k = kv["field.synth_kind"];
    if (k == "gaussian_blobs")
      cfg.synth_kind = SynthKind::gaussian_blobs;
    else if (k == "smooth_gradient")
      cfg.synth_kind = SynthKind::smooth_gradient;
    else
      throw FormatError("unknown field.synth_kind: " + k);
  }
  get("hyper.log_sigma_n2", as_d, &cfg.hyper.log_sigma_n2);
  get("hyper.log_sigma_f2", as_d, &cfg.hyper.log_sigma_f2);
  for (int d = 0; d < cfg.hyper.dim(); ++d) {
    double v = cfg.hyper.log_lengths(d);
    get("hyper.log_l_" + std::to_string(d), as_d, &v);
    cfg.hyper.log_lengths(d) = v;
  }
  double lx = cfg.mission.launch(0), ly = cfg.mission.launch(1);
  get("mission.launch_x", as_d, &lx);
  get("mission.launch_y", as_d, &ly);
  cfg.mission.launch = Point(lx, ly);
  get("mission.waypoints_per_plan", as_i, &cfg.mission.waypoints_per_plan);
  get("mission.bv_capacity", as_i, &cfg.mission.bv_capacity);
  get("mission.rho_threshold", as_d, &cfg.mission.rho_threshold);
  get("mission.sample_stride", as_i, &cfg.mission.sample_stride);
  get("mission.prior_random_samples", as_i, &cfg.mission.prior_random_samples);
  get("mission.max_samples", as_l, &cfg.mission.max_samples);
  get("mission.novelty_rel", as_d, &cfg.mission.novelty_rel);
  get("planner.rows", as_i, &cfg.mission.plan_rows);
  get("planner.cols", as_i, &cfg.mission.plan_cols);
  get("optimizer.learning_rate", as_d, &cfg.mission.optimizer.learning_rate);
  get("optimizer.max_iters", as_i, &cfg.mission.optimizer.max_iters);
  get("optimizer.grad_tolerance", as_d, &cfg.mission.optimizer.grad_tolerance);
  get("seed", as_u64, &cfg.seed);
  if (kv.count("format")) {
    const auto& f = kv["format"];
    if (f == "pgm")
      cfg.raster_format = RasterFormat::pgm;
    else if (f == "csv")
      cfg.raster_format = RasterFormat::csv;
    else
      throw FormatError("unknown format: " + f);
  }
  get("out", as_str, &cfg.out_dir);
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

FieldRaster resolve_field(const RunConfig& cfg) {
  if (!cfg.field_csv.empty()) return load_field_csv(cfg.field_csv);
  // Named sub-stream of the master seed for field synthesis.
  const auto synth_seed = static_cast<std::uint32_t>(cfg.seed ^ 0x9E3779B9u);
  return synth_field(cfg.synth_rows, cfg.synth_cols, synth_seed, cfg.synth_kind);
}

namespace {

std::string metrics_csv(const MissionState& st) {
  std::string out = "sample_index,mse,mean_variance,epoch\n";
  char buf[128];
  for (const auto& m : st.history) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%d\n", m.sample_index, m.mse,
                  m.mean_variance, m.epoch);
    out += buf;
  }
  return out;
}

void write_run_artifacts(const RunConfig& cfg, const MissionState& st,
                         const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_text(dir / "config.txt", cfg.serialize());
  write_text(dir / "metrics.csv", metrics_csv(st));

  const std::string ext = cfg.raster_format == RasterFormat::pgm ? ".pgm" : ".csv";
  for (const auto& ep : st.epochs) {
    const std::string k = std::to_string(ep.epoch);
    write_text(dir / ("selection_epoch_" + k + ".txt"), ep.selection.serialize());
    write_text(dir / ("path_epoch_" + k + ".txt"), ep.path.serialize());
    write_text(dir / ("bv_epoch_" + k + ".csv"), ep.bv_csv);
    write_raster(ep.mean_map, (dir / ("mean_epoch_" + k + ext)).string(), cfg.raster_format);
    write_raster(ep.var_map, (dir / ("var_epoch_" + k + ext)).string(), cfg.raster_format);
  }

  std::ostringstream sum;
  sum << "samples=" << (st.history.empty() ? 0 : st.history.back().sample_index) << "\n";
  sum << "epochs=" << st.epoch << "\n";
  sum << "re_estimates=" << st.re_estimates.size() << "\n";
  if (!st.history.empty()) {
    sum << "final_mse=" << fmt(st.history.back().mse) << "\n";
    sum << "final_mean_variance=" << fmt(st.history.back().mean_variance) << "\n";
  }
  for (std::size_t i = 0; i < st.re_estimates.size(); ++i) {
    const auto& e = st.re_estimates[i];
    sum << "re_estimate_" << i << ".sample_index=" << e.sample_index << "\n";
    sum << "re_estimate_" << i << ".additions=" << e.additions_since_last << "\n";
    std::istringstream hp(e.hyper_after.serialize());
    std::string line;
    while (std::getline(hp, line))
      sum << "re_estimate_" << i << ".hyper." << line << "\n";
  }
  write_text(dir / "summary.txt", sum.str());
}

}  // namespace

int cmd_run(const RunConfig& cfg) {
  FieldRaster field;
  try {
    field = resolve_field(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  MissionConfig mc = cfg.mission;
  mc.rng_seed = cfg.seed;
  try {
    const MissionState st = run(field, cfg.hyper, mc);
    write_run_artifacts(cfg, st, cfg.out_dir);
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& rho_list,
              const std::vector<Point>& launch_list) {
  if (rho_list.empty() || launch_list.empty()) {
    std::cerr << "error: sweep needs nonempty --rho and --launch lists\n";
    return 1;
  }
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);

  struct Combo {
    double rho;
    Point launch;
    std::string dir;
    int status = 0;
  };
  std::vector<Combo> combos;
  for (double rho : rho_list)
    for (const auto& lp : launch_list) {
      char name[96];
      std::snprintf(name, sizeof(name), "rho_%g_launch_%g_%g", rho, lp(0), lp(1));
      combos.push_back({rho, lp, (fs::path(cfg.out_dir) / name).string(), 0});
    }

  int threads = 0;
  if (const char* env = std::getenv("MONITOR_THREADS")) threads = std::atoi(env);

  auto run_one = [&](Combo& c) {
    RunConfig rc = cfg;
    rc.mission.rho_threshold = c.rho;
    rc.mission.launch = c.launch;
    rc.out_dir = c.dir;
    c.status = cmd_run(rc);
  };

  if (threads <= 1) {
    for (auto& c : combos) run_one(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= combos.size()) return;
          run_one(combos[i]);
        }
      });
    for (auto& t : pool) t.join();
  }

  // Combined long-format CSV, deterministic combo order.
  std::ofstream combined(fs::path(cfg.out_dir) / "combined.csv", std::ios::binary);
  combined << "rho,launch_x,launch_y,sample_index,mse,mean_variance,epoch\n";
  bool any_failed = false;
  for (const auto& c : combos) {
    if (c.status != 0) {
      any_failed = true;
      std::cerr << "sweep combination failed (exit " << c.status << "): " << c.dir << "\n";
      continue;
    }
    std::ifstream in(fs::path(c.dir) / "metrics.csv");
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line))
      combined << c.rho << "," << c.launch(0) << "," << c.launch(1) << "," << line << "\n";
  }
  return any_failed ? 3 : 0;
}

int cmd_oracle(const std::string& suite) {
  verify::SuiteResult r;
  if (suite == "sogp_equiv")
    r = verify::sogp_equiv();
  else if (suite == "loo_grad")
    r = verify::loo_grad();
  else if (suite == "dp_greedy")
    r = verify::dp_greedy();
  else if (suite == "tsp_exact")
    r = verify::tsp_exact();
  else {
    std::cerr << "error: unknown oracle suite '" << suite
              << "' (expected sogp_equiv|loo_grad|dp_greedy|tsp_exact)\n";
    return 1;
  }
  std::cout << r.detail << "\n" << (r.pass ? "PASS" : "FAIL") << "\n";
  return r.pass ? 0 : 2;
}

}  // namespace monitor
