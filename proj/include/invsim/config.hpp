#pragma once

#include "invsim/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace invsim {

struct GridConfig {
  std::string feeder_path = "data/ieee13.feeder";
  ScenarioKind scenario = ScenarioKind::InstantTrip;
  double t_attack_s = 2.0;
  GridScenarioSettings settings;

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<ChannelRequest> channels;  // empty = stage defaults

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

// One declarative scenario document: device chain, grid study, outputs.
struct ScenarioConfig {
  DeviceScenario device;
  GridConfig grid;
  OutputConfig output;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ParseOutcome {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> errors;  // all problems, with line numbers
  bool ok() const { return errors.empty() && config.has_value(); }
};

ParseOutcome parse_config_text(const std::string& text);
ParseOutcome parse_config(const std::string& path);

// Canonical full emission; parse_config_text(emit_config(c)) reproduces c.
std::string emit_config(const ScenarioConfig& config);

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b);

}  // namespace invsim
