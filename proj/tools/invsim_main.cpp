// invsim command line: deterministic scenario runs of the rate-triggered
// inverter attack chain and the feeder-level studies built on top of it.

#include "invsim/config.hpp"
#include "invsim/report.hpp"
#include "invsim/trojan.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using namespace invsim;

int run_one_device(const std::string& config_path, const std::string& out_dir,
                   int decimate_override) {
  ParseOutcome parsed = parse_config(config_path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      std::cerr << config_path << ": " << e << "\n";
    return 2;
  }
  ScenarioConfig cfg = *parsed.config;
  if (!cfg.output.channels.empty()) cfg.device.records = cfg.output.channels;
  if (decimate_override > 0) {
    if (cfg.device.records.empty())
      cfg.device.records = default_records(cfg.device.stage);
    for (auto& r : cfg.device.records) r.decimation = decimate_override;
  }
  const std::string dir = out_dir.empty() ? cfg.output.dir : out_dir;
  try {
    const ScenarioResult result = run_device_scenario(cfg.device);
    write_device_result(dir, result);
    std::cout << config_path << ": ok, summary in " << dir << "/summary.txt\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": simulation error: " << e.what() << "\n";
    return 3;
  }
}

int run_one_grid(const std::string& config_path, const std::string& out_dir) {
  ParseOutcome parsed = parse_config(config_path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      std::cerr << config_path << ": " << e << "\n";
    return 2;
  }
  const ScenarioConfig& cfg = *parsed.config;
  const std::string dir = out_dir.empty() ? cfg.output.dir : out_dir;
  try {
    const FeederModel model = load_feeder_file(cfg.grid.feeder_path);
    const GridScenarioResult result = run_scenario(
        model, cfg.grid.scenario, cfg.grid.t_attack_s, cfg.grid.settings);
    write_grid_result(dir, result);
    std::cout << config_path << ": ok, trace in " << dir << "/grid.csv\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": simulation error: " << e.what() << "\n";
    return 3;
  }
}

int run_one_chain(const std::string& config_path, const std::string& out_dir) {
  ParseOutcome parsed = parse_config(config_path);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors)
      std::cerr << config_path << ": " << e << "\n";
    return 2;
  }
  ScenarioConfig cfg = *parsed.config;
  if (!cfg.output.channels.empty()) cfg.device.records = cfg.output.channels;
  const std::string dir = out_dir.empty() ? cfg.output.dir : out_dir;
  try {
    const ScenarioResult device = run_device_scenario(cfg.device);
    write_device_result(dir + "/device", device);
    const DgOutcome outcome = derive_dg_behavior(device);
    if (!outcome.kind) {
      std::cerr << config_path
                << ": device outcome does not map to a grid scenario ("
                << outcome.note << ")\n";
      return 4;
    }
    std::cout << config_path << ": device outcome -> "
              << to_string(*outcome.kind);
    if (!outcome.note.empty()) std::cout << " (" << outcome.note << ")";
    std::cout << "\n";
    const FeederModel model = load_feeder_file(cfg.grid.feeder_path);
    const GridScenarioResult grid = run_scenario(
        model, *outcome.kind, cfg.grid.t_attack_s, cfg.grid.settings);
    write_grid_result(dir + "/grid", grid);
    std::cout << config_path << ": chain complete, outputs in " << dir << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": simulation error: " << e.what() << "\n";
    return 3;
  }
}

int run_many(const std::vector<std::string>& configs, const std::string& out,
             int jobs, int decimate,
             int (*fn)(const std::string&, const std::string&),
             bool device_mode) {
  if (configs.empty()) return 0;
  std::vector<int> codes(configs.size(), 0);
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= configs.size()) return;
        i = next++;
      }
      // Per-run output isolation when batching.
      std::string dir = out;
      if (configs.size() > 1) {
        const auto stem = std::filesystem::path(configs[i]).stem().string();
        dir = (out.empty() ? std::string("out") : out) + "/" + stem;
      }
      codes[i] = device_mode ? run_one_device(configs[i], dir, decimate)
                             : fn(configs[i], dir);
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(configs.size())));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  int rc = 0;
  for (int c : codes) rc = std::max(rc, c);
  return rc;
}

int replay_golden(const std::string& dir) {
  namespace fs = std::filesystem;
  int rc = 0;
  int checked = 0;
  std::vector<fs::path> cfgs;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".cfg") cfgs.push_back(entry.path());
  std::sort(cfgs.begin(), cfgs.end());
  for (const auto& cfg_path : cfgs) {
    fs::path expected = cfg_path;
    expected.replace_extension(".expected");
    if (!fs::exists(expected)) {
      std::cerr << "golden: missing " << expected << "\n";
      rc = std::max(rc, 2);
      continue;
    }
    ParseOutcome parsed = parse_config(cfg_path.string());
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors) std::cerr << cfg_path << ": " << e << "\n";
      rc = std::max(rc, 2);
      continue;
    }
    ScenarioConfig cfg = *parsed.config;
    if (!cfg.output.channels.empty()) cfg.device.records = cfg.output.channels;
    std::string got;
    try {
      const ScenarioResult result = run_device_scenario(cfg.device);
      got = summary_text(result.summary);
    } catch (const std::exception& e) {
      std::cerr << cfg_path << ": simulation error: " << e.what() << "\n";
      rc = std::max(rc, 3);
      continue;
    }
    std::ifstream in(expected);
    std::stringstream want;
    want << in.rdbuf();
    ++checked;
    if (got == want.str()) {
      std::cout << "golden " << cfg_path.stem().string() << ": match\n";
    } else {
      std::cerr << "golden " << cfg_path.stem().string() << ": MISMATCH\n";
      std::cerr << "--- expected ---\n" << want.str() << "--- got ---\n" << got;
      rc = std::max(rc, 5);
    }
  }
  if (checked == 0) {
    std::cerr << "golden: no scenarios found in " << dir << "\n";
    rc = std::max(rc, 2);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic solar-inverter attack-chain simulator"};
  app.require_subcommand(1);

  std::string out_dir;
  int jobs = 1;
  int decimate = 0;
  int seed = 0;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "parallel runs for multi-config batches");
  app.add_option("--decimate", decimate, "override channel decimation");
  app.add_option("--seed", seed,
                 "reserved; simulations are deterministic and ignore it");

  std::vector<std::string> run_cfgs, grid_cfgs, chain_cfgs;
  auto* cmd_run = app.add_subcommand("run", "device-level scenario");
  cmd_run->add_option("config", run_cfgs, "scenario config file(s)")->required();
  auto* cmd_grid = app.add_subcommand("grid", "feeder-level scenario");
  cmd_grid->add_option("config", grid_cfgs, "scenario config file(s)")->required();
  auto* cmd_chain =
      app.add_subcommand("chain", "device scenario mapped onto the feeder");
  cmd_chain->add_option("config", chain_cfgs, "scenario config file(s)")->required();

  double cal_delay = 5.0, cal_vth = 0.7, cal_vdd = 1.2, cal_f = 60.0;
  double cal_cmain = 100e-12;
  auto* cmd_cal = app.add_subcommand(
      "calibrate-pump", "closed-form charge-pump sharing ratio");
  cmd_cal->add_option("--delay", cal_delay, "trigger delay, s");
  cmd_cal->add_option("--vth", cal_vth, "buffer threshold, V");
  cmd_cal->add_option("--vdd", cal_vdd, "supply, V");
  cmd_cal->add_option("--f", cal_f, "glitch frequency, Hz");
  cmd_cal->add_option("--c-main", cal_cmain, "main capacitor, F");

  std::string golden_dir = "data/golden";
  auto* cmd_golden =
      app.add_subcommand("replay-golden", "re-run shipped golden scenarios");
  cmd_golden->add_option("--dir", golden_dir, "golden scenario directory");

  CLI11_PARSE(app, argc, argv);

  if (cmd_run->parsed())
    return run_many(run_cfgs, out_dir, jobs, decimate, nullptr, true);
  if (cmd_grid->parsed())
    return run_many(grid_cfgs, out_dir, jobs, decimate, run_one_grid, false);
  if (cmd_chain->parsed())
    return run_many(chain_cfgs, out_dir, jobs, decimate, run_one_chain, false);
  if (cmd_cal->parsed()) {
    try {
      const double ratio =
          invsim::calibrate_charge_ratio(cal_delay, cal_vth, cal_vdd, cal_f);
      const int n = static_cast<int>(std::lround(cal_delay * cal_f));
      const double c_unit = cal_cmain * ratio / (1.0 - ratio);
      std::cout << "glitches = " << n << "\n";
      std::cout << "ratio = " << invsim::format_value(ratio) << "\n";
      std::cout << "c_unit_for_c_main " << invsim::format_value(cal_cmain)
                << " = " << invsim::format_value(c_unit) << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "calibrate-pump: " << e.what() << "\n";
      return 2;
    }
  }
  if (cmd_golden->parsed()) return replay_golden(golden_dir);
  return 1;
}
