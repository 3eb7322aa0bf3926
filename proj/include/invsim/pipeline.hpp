#pragma once

#include "invsim/core.hpp"
#include "invsim/dcac.hpp"
#include "invsim/dcdc.hpp"
#include "invsim/grid.hpp"
#include "invsim/sensor.hpp"
#include "invsim/trojan.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invsim {

enum class DeviceStage { TriggerOnly, Dcdc, Dcac, DcdcDcac };

enum class DecimMode { Stride, BlockMax };

struct ChannelRequest {
  std::string name;
  int decimation = 1;
  DecimMode mode = DecimMode::Stride;

  friend bool operator==(const ChannelRequest&, const ChannelRequest&) = default;
};

// Everything needed for one device-level run: environment, sensing,
// trigger circuit and the requested power stages.
struct DeviceScenario {
  EnvironmentProfile env;
  TempSensorModel sensor;
  FrontEndFilter filter;
  TriggerCircuitParams trigger;
  bool trojan_bypassed = false;
  // When set, the payload engages at this time regardless of the trigger
  // chain (bench mode for stage-level studies).
  std::optional<double> forced_payload_t;
  DeviceStage stage = DeviceStage::Dcdc;
  FlybackParams dcdc;
  PvPanelModel pv;
  bool pv_coupled = true;
  double v_in_fixed = 17.6;
  double c_in = 100e-6;
  MpptState mppt;
  double mppt_period_s = 10e-3;
  bool mppt_enabled = true;
  HBridgeParams dcac;
  SimClock clock;
  std::vector<ChannelRequest> records;  // empty = stage defaults
  double settle_frac = 0.3;  // fraction of pre/post spans used for metrics

  friend bool operator==(const DeviceScenario&, const DeviceScenario&) = default;
};

struct ScenarioResult {
  std::map<std::string, TimeSeries> channels;
  std::vector<std::pair<double, std::string>> events;
  std::map<std::string, double> summary;
};

// Validates the scenario and runs the composed per-step loop:
// environment -> sensor -> trigger -> override -> power stages -> records.
ScenarioResult run_device_scenario(const DeviceScenario& s);

struct DgOutcome {
  std::optional<ScenarioKind> kind;
  std::vector<ScenarioKind> candidates;
  std::string note;
};

// Maps a completed device run onto the grid-side failure mode:
// driver destruction -> InstantTrip, strong waveform asymmetry ->
// LossOfExcitation, sustained output reduction -> VoltageDegradation.
DgOutcome derive_dg_behavior(const ScenarioResult& result);

std::vector<ChannelRequest> default_records(DeviceStage stage);

}  // namespace invsim
