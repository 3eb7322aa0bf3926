#pragma once

#include <Eigen/Core>

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invsim {

struct Bus {
  int id = 0;
  double kv = 4.16;
};

struct Line {
  int from = 0;
  int to = 0;
  double r_ohm = 0.0;
  double x_ohm = 0.0;
};

enum class LoadType { ConstantPower, ConstantImpedance };

struct Load {
  int bus = 0;
  double p_kw = 0.0;
  double q_kvar = 0.0;
  LoadType type = LoadType::ConstantPower;
};

enum class GenType { SlackMain, Distributed };

struct Generator {
  int bus = 0;
  GenType type = GenType::Distributed;
  double p_kw = 0.0;
  double q_kvar = 0.0;
};

// Balanced positive-sequence radial feeder.
struct FeederModel {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Load> loads;
  std::vector<Generator> generators;
  double scc_utility_mva = 1000.0;
  double s_base_mva = 10.0;
  int slack_bus = 650;

  int bus_index(int id) const;
  double total_load_p_kw() const;
  double total_load_q_kvar() const;
};

// Parses the sectioned feeder text format ([buses] [lines] [loads]
// [generators]); throws std::runtime_error with all problems listed.
FeederModel load_feeder_file(const std::string& path);
FeederModel parse_feeder_text(const std::string& text);

struct PfInput {
  double slack_v_pu = 1.0;
  double load_scale = 1.0;  // multiplies every load
  // Extra per-bus injections in MW/Mvar (generation positive).
  std::vector<std::pair<int, std::complex<double>>> extra_injections_mva;
};

struct PowerFlowResult {
  bool converged = false;
  int iterations = 0;
  Eigen::VectorXcd v_bus;      // per-unit, ordered as model.buses
  double slack_p_mw = 0.0;
  double slack_q_mvar = 0.0;
  double max_mismatch_pu = 0.0;
};

// Backward-forward sweep on the radial tree. Non-convergence is the
// voltage-collapse proxy, reported through `converged`.
PowerFlowResult power_flow(const FeederModel& model, const PfInput& input);

struct FrequencyModel {
  double h_agg = 4.0;       // s
  double s_base_mva = 10.0;
  double headroom_mw = 0.0; // governor reserve
  double f0 = 60.0;

  friend bool operator==(const FrequencyModel&, const FrequencyModel&) = default;
};

// One step of the aggregate frequency model. A deficit above headroom
// declines f linearly; otherwise the governor restores f toward f0.
double frequency_step(const FrequencyModel& fm, double f_now,
                      double p_deficit_mw, double dt);

struct ProtectionSettings {
  double uf_trip_hz = 59.3;
  double uv_trip_pu = 0.88;
  double trip_delay_s = 1.0;

  friend bool operator==(const ProtectionSettings&, const ProtectionSettings&) = default;
};

struct GridEvent {
  double t = 0.0;
  std::string label;
};

struct ProtectionState {
  bool uf_tripped = false;
  bool halted = false;
  std::vector<double> uv_since;  // per bus; < 0 means no violation running
};

// Under-frequency shutdown plus sustained-undervoltage trips. Returns the
// events raised at time t; sets state.halted on a grid shutdown.
std::vector<GridEvent> protection_scan(const ProtectionSettings& settings,
                                       double t, double f,
                                       const Eigen::VectorXcd& v_bus,
                                       const std::vector<Bus>& buses,
                                       ProtectionState& state);

enum class ScenarioKind { InstantTrip, VoltageDegradation, LossOfExcitation };

std::string to_string(ScenarioKind kind);
std::optional<ScenarioKind> scenario_kind_from_string(const std::string& name);

struct GridScenarioSettings {
  FrequencyModel freq;
  ProtectionSettings protection;
  double dt = 0.1;
  double t_end = 150.0;
  double dg_p_mw = 0.1;      // distributed unit under attack (bus 692)
  double dg_q_mvar = 0.06;   // its pre-attack reactive support
  double q_slack_max_mvar = 2.2;  // utility reactive capability at peak demand
  double slack_droop_pu_per_mvar_s = 0.02;
  // Scenario B: reactive support decline until the horizon, then load
  // restoration drives the feeder past its loadability.
  double b_q_decline_mvar_per_s = 0.002;
  double b_horizon_s = 60.0;
  double b_restoration_per_s = 0.05;
  // Scenario C: aggressive excitation loss.
  double c_q_absorb_mvar_per_s = 0.03;
  double c_p_osc_frac = 0.5;
  double c_p_osc_hz = 0.5;

  friend bool operator==(const GridScenarioSettings&, const GridScenarioSettings&) = default;
};

struct GridScenarioResult {
  std::vector<double> t;
  std::vector<double> f_hz;
  std::vector<double> v_632_pu;
  std::vector<double> v_692_pu;
  std::vector<GridEvent> events;
  std::optional<double> t_instability;  // first shutdown/collapse event
};

GridScenarioResult run_scenario(const FeederModel& model, ScenarioKind kind,
                                double t_attack,
                                const GridScenarioSettings& settings);

}  // namespace invsim
