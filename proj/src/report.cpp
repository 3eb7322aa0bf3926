#include "invsim/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace invsim {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write: " + path);
  return out;
}

}  // namespace

void write_channel_csv(const std::string& path, const TimeSeries& series) {
  auto out = open_out(path);
  out << "t_s,value";
  if (!series.unit.empty()) out << "_" << series.unit;
  out << "\n";
  for (std::size_t k = 0; k < series.samples.size(); ++k) {
    out << format_value(static_cast<double>(k) * series.dt) << ","
        << format_value(series.samples[k]) << "\n";
  }
}

void write_events_csv(
    const std::string& path,
    const std::vector<std::pair<double, std::string>>& events) {
  auto out = open_out(path);
  out << "t_s,event\n";
  for (const auto& [t, label] : events)
    out << format_value(t) << "," << label << "\n";
}

std::string summary_text(const std::map<std::string, double>& summary) {
  std::string text;
  for (const auto& [key, value] : summary)
    text += key + " = " + format_value(value) + "\n";
  return text;
}

void write_summary(const std::string& path,
                   const std::map<std::string, double>& summary) {
  auto out = open_out(path);
  out << summary_text(summary);
}

void write_grid_csv(const std::string& path, const GridScenarioResult& r) {
  auto out = open_out(path);
  out << "t_s,f_hz,v_632_pu,v_692_pu,events\n";
  for (std::size_t k = 0; k < r.t.size(); ++k) {
    out << format_value(r.t[k]) << "," << format_value(r.f_hz[k]) << ","
        << format_value(r.v_632_pu[k]) << "," << format_value(r.v_692_pu[k])
        << ",";
    bool first = true;
    for (const auto& ev : r.events) {
      if (ev.t == r.t[k]) {
        if (!first) out << ";";
        out << ev.label;
        first = false;
      }
    }
    out << "\n";
  }
}

void write_device_result(const std::string& dir, const ScenarioResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, series] : result.channels)
    write_channel_csv(dir + "/" + name + ".csv", series);
  write_events_csv(dir + "/events.csv", result.events);
  write_summary(dir + "/summary.txt", result.summary);
}

void write_grid_result(const std::string& dir, const GridScenarioResult& result) {
  std::filesystem::create_directories(dir);
  write_grid_csv(dir + "/grid.csv", result);

  std::map<std::string, double> summary;
  if (result.t_instability) summary["t_instability"] = *result.t_instability;
  if (!result.f_hz.empty()) summary["f_final_hz"] = result.f_hz.back();
  if (!result.v_632_pu.empty()) summary["v_632_final_pu"] = result.v_632_pu.back();
  summary["n_events"] = static_cast<double>(result.events.size());
  write_summary(dir + "/grid_summary.txt", summary);

  auto out = open_out(dir + "/grid_events.csv");
  out << "t_s,event\n";
  for (const auto& ev : result.events)
    out << format_value(ev.t) << "," << ev.label << "\n";
}

}  // namespace invsim
