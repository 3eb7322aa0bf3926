#pragma once

#include "invsim/grid.hpp"
#include "invsim/pipeline.hpp"

#include <map>
#include <string>

namespace invsim {

// Deterministic output formatting: 9 significant digits, fixed column
// order, sorted summary keys.
std::string format_value(double v);

void write_channel_csv(const std::string& path, const TimeSeries& series);
void write_events_csv(
    const std::string& path,
    const std::vector<std::pair<double, std::string>>& events);
void write_summary(const std::string& path,
                   const std::map<std::string, double>& summary);
void write_grid_csv(const std::string& path, const GridScenarioResult& result);

void write_device_result(const std::string& dir, const ScenarioResult& result);
void write_grid_result(const std::string& dir, const GridScenarioResult& result);

std::string summary_text(const std::map<std::string, double>& summary);

}  // namespace invsim
