#include "invsim/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace invsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Parser {
  std::vector<std::string>& errors;
  int line_no = 0;

  void error(const std::string& msg) {
    errors.push_back("line " + std::to_string(line_no) + ": " + msg);
  }

  bool number(const std::string& text, double& out) {
    const char* c = text.c_str();
    char* end = nullptr;
    out = std::strtod(c, &end);
    if (end == c || trim(end) != "") {
      error("not a number: '" + text + "'");
      return false;
    }
    return true;
  }

  bool boolean(const std::string& text, bool& out) {
    if (text == "0" || text == "false") { out = false; return true; }
    if (text == "1" || text == "true") { out = true; return true; }
    error("not a boolean (0/1): '" + text + "'");
    return false;
  }

  bool ratio(const std::string& key, const std::string& text, double& out) {
    if (!number(text, out)) return false;
    if (out < 0.0 || out > 1.0) {
      error(key + ": ratio out of [0,1]");
      return false;
    }
    return true;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

ParseOutcome parse_config_text(const std::string& text) {
  ParseOutcome out;
  ScenarioConfig cfg;
  cfg.device.env.segments.clear();
  Parser p{out.errors};

  std::istringstream in(text);
  std::string raw;
  std::string section;

  while (std::getline(in, raw)) {
    ++p.line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      if (section != "run" && section != "env" && section != "sensor" &&
          section != "trigger" && section != "dcdc" && section != "pv" &&
          section != "mppt" && section != "dcac" && section != "grid" &&
          section != "output")
        p.error("unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.error("expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double num = 0.0;
    bool flag = false;

    auto& dev = cfg.device;
    if (section == "run") {
      if (key == "stage") {
        if (value == "trigger") dev.stage = DeviceStage::TriggerOnly;
        else if (value == "dcdc") dev.stage = DeviceStage::Dcdc;
        else if (value == "dcac") dev.stage = DeviceStage::Dcac;
        else if (value == "dcdc_dcac") dev.stage = DeviceStage::DcdcDcac;
        else p.error("stage: want trigger|dcdc|dcac|dcdc_dcac");
      } else if (key == "dt_s") {
        if (p.number(value, num)) dev.clock.dt = num;
      } else if (key == "t_end_s") {
        if (p.number(value, num)) dev.clock.t_end = num;
      } else if (key == "trojan_bypassed") {
        if (p.boolean(value, flag)) dev.trojan_bypassed = flag;
      } else if (key == "forced_payload_t_s") {
        if (p.number(value, num)) dev.forced_payload_t = num;
      } else if (key == "settle_frac") {
        if (p.ratio(key, value, num)) dev.settle_frac = num;
      } else {
        p.error("unknown key '" + key + "' in [run]");
      }
    } else if (section == "env") {
      if (key == "t0_c") {
        if (p.number(value, num)) dev.env.t0_c = num;
      } else if (key == "segment") {
        const auto cols = split_ws(value);
        if (cols.size() != 3 && cols.size() != 4) {
          p.error("segment: want 'start_s end_s rate_c_per_s [emi_v_per_s]'");
        } else {
          EnvSegment seg;
          bool good = p.number(cols[0], seg.start_t) &&
                      p.number(cols[1], seg.end_t) &&
                      p.number(cols[2], seg.rate_c_per_s);
          if (good && cols.size() == 4)
            good = p.number(cols[3], seg.emi_offset_rate_v_per_s);
          if (good) dev.env.segments.push_back(seg);
        }
      } else {
        p.error("unknown key '" + key + "' in [env]");
      }
    } else if (section == "sensor") {
      if (key == "alpha_v_per_c") { if (p.number(value, num)) dev.sensor.alpha = num; }
      else if (key == "beta_v") { if (p.number(value, num)) dev.sensor.beta = num; }
      else if (key == "r1_ohm") { if (p.number(value, num)) dev.filter.r1 = num; }
      else if (key == "c1_f") { if (p.number(value, num)) dev.filter.c1 = num; }
      else if (key == "r3_ohm") { if (p.number(value, num)) dev.filter.r3 = num; }
      else if (key == "r_shunt_ohm") { if (p.number(value, num)) dev.filter.r_shunt = num; }
      else if (key == "placement") {
        if (value == "dedicated") dev.filter.placement = ShuntPlacement::Dedicated;
        else if (value == "r1") dev.filter.placement = ShuntPlacement::R1;
        else p.error("placement: want dedicated|r1");
      }
      else p.error("unknown key '" + key + "' in [sensor]");
    } else if (section == "trigger") {
      auto& tr = dev.trigger;
      if (key == "av_gain") { if (p.number(value, num)) tr.av = num; }
      else if (key == "vth_inv_v") { if (p.number(value, num)) tr.vth_inv = num; }
      else if (key == "c_unit_f") { if (p.number(value, num)) tr.c_unit = num; }
      else if (key == "c_main_f") { if (p.number(value, num)) tr.c_main = num; }
      else if (key == "vdd_v") { if (p.number(value, num)) tr.vdd = num; }
      else if (key == "i_leak_sat_a") { if (p.number(value, num)) tr.i_leak_sat = num; }
      else if (key == "r_leak_low_ohm") { if (p.number(value, num)) tr.r_leak_low = num; }
      else if (key == "vth_buf_v") { if (p.number(value, num)) tr.vth_buf = num; }
      else if (key == "grid_zero_freq_hz") { if (p.number(value, num)) tr.grid_zero_freq = num; }
      else if (key == "payload_mode") {
        if (value == "pwm1_high") tr.payload_mode = PayloadMode::Pwm1High;
        else if (value == "pwm1_low") tr.payload_mode = PayloadMode::Pwm1Low;
        else if (value == "pwm5_high") tr.payload_mode = PayloadMode::Pwm5High;
        else p.error("payload_mode: want pwm1_high|pwm1_low|pwm5_high");
      }
      else p.error("unknown key '" + key + "' in [trigger]");
    } else if (section == "dcdc") {
      auto& d = dev.dcdc;
      if (key == "l_m_h") { if (p.number(value, num)) d.l_m = num; }
      else if (key == "l_lk_h") { if (p.number(value, num)) d.l_lk = num; }
      else if (key == "turns_ratio") { if (p.number(value, num)) d.turns_ratio = num; }
      else if (key == "c_clamp_f") { if (p.number(value, num)) d.c_clamp = num; }
      else if (key == "c_out_f") { if (p.number(value, num)) d.c_out = num; }
      else if (key == "r_load_ohm") { if (p.number(value, num)) d.r_load = num; }
      else if (key == "f_sw_hz") { if (p.number(value, num)) d.f_sw = num; }
      else if (key == "r_on_ohm") { if (p.number(value, num)) d.r_on = num; }
      else if (key == "v_diode_v") { if (p.number(value, num)) d.v_diode = num; }
      else if (key == "r_clamp_ohm") { if (p.number(value, num)) d.r_clamp = num; }
      else if (key == "r_lk_ohm") { if (p.number(value, num)) d.r_lk = num; }
      else if (key == "c_par_f") { if (p.number(value, num)) d.c_par = num; }
      else if (key == "v_rating_v") { if (p.number(value, num)) d.v_rating = num; }
      else if (key == "over_steps_to_fail") { if (p.number(value, num)) d.over_steps_to_fail = static_cast<int>(num); }
      else p.error("unknown key '" + key + "' in [dcdc]");
    } else if (section == "pv") {
      if (key == "coupled") { if (p.boolean(value, flag)) dev.pv_coupled = flag; }
      else if (key == "v_oc_v") { if (p.number(value, num)) dev.pv.v_oc = num; }
      else if (key == "i_sc_a") { if (p.number(value, num)) dev.pv.i_sc = num; }
      else if (key == "knee_frac") { if (p.ratio(key, value, num)) dev.pv.knee_frac = num; }
      else if (key == "v_in_fixed_v") { if (p.number(value, num)) dev.v_in_fixed = num; }
      else if (key == "c_in_f") { if (p.number(value, num)) dev.c_in = num; }
      else p.error("unknown key '" + key + "' in [pv]");
    } else if (section == "mppt") {
      auto& m = dev.mppt;
      if (key == "enabled") { if (p.boolean(value, flag)) dev.mppt_enabled = flag; }
      else if (key == "duty0") { if (p.ratio(key, value, num)) m.duty = num; }
      else if (key == "step") { if (p.number(value, num)) m.step = num; }
      else if (key == "d_min") { if (p.ratio(key, value, num)) m.d_min = num; }
      else if (key == "d_max") { if (p.ratio(key, value, num)) m.d_max = num; }
      else if (key == "period_s") { if (p.number(value, num)) dev.mppt_period_s = num; }
      else p.error("unknown key '" + key + "' in [mppt]");
    } else if (section == "dcac") {
      auto& a = dev.dcac;
      if (key == "f_grid_hz") { if (p.number(value, num)) a.f_grid = num; }
      else if (key == "f_sw_hz") { if (p.number(value, num)) a.f_sw = num; }
      else if (key == "l2_h") { if (p.number(value, num)) a.l2 = num; }
      else if (key == "l3_h") { if (p.number(value, num)) a.l3 = num; }
      else if (key == "l4_h") { if (p.number(value, num)) a.l4 = num; }
      else if (key == "l5_h") { if (p.number(value, num)) a.l5 = num; }
      else if (key == "c_f_f") { if (p.number(value, num)) a.c_f = num; }
      else if (key == "r_cf_ohm") { if (p.number(value, num)) a.r_cf = num; }
      else if (key == "r_series_ohm") { if (p.number(value, num)) a.r_series = num; }
      else if (key == "r_on_ohm") { if (p.number(value, num)) a.r_on = num; }
      else if (key == "modulation_index") {
        if (p.ratio(key, value, num)) a.modulation_index = num;
      }
      else if (key == "load") {
        if (value == "bank") a.load = AcLoad::ResistiveBank;
        else if (value == "grid") a.load = AcLoad::StiffGrid;
        else p.error("load: want bank|grid");
      }
      else if (key == "r_load_ohm") { if (p.number(value, num)) a.r_load = num; }
      else if (key == "v_grid_peak_v") { if (p.number(value, num)) a.v_grid_peak = num; }
      else if (key == "r_grid_ohm") { if (p.number(value, num)) a.r_grid = num; }
      else if (key == "v_bus_nominal_v") { if (p.number(value, num)) a.v_bus_nominal = num; }
      else if (key == "source") {
        if (value == "ideal") a.source = BridgeSource::IdealBus;
        else if (value == "dcdc") a.source = BridgeSource::DcdcCoupled;
        else p.error("source: want ideal|dcdc");
      }
      else p.error("unknown key '" + key + "' in [dcac]");
    } else if (section == "grid") {
      auto& g = cfg.grid;
      auto& gs = g.settings;
      if (key == "feeder") { g.feeder_path = value; }
      else if (key == "scenario") {
        const auto kind = scenario_kind_from_string(value);
        if (kind) g.scenario = *kind;
        else p.error("scenario: want instant_trip|voltage_degradation|loss_of_excitation");
      }
      else if (key == "t_attack_s") { if (p.number(value, num)) g.t_attack_s = num; }
      else if (key == "dt_s") { if (p.number(value, num)) gs.dt = num; }
      else if (key == "t_end_s") { if (p.number(value, num)) gs.t_end = num; }
      else if (key == "h_agg_s") { if (p.number(value, num)) gs.freq.h_agg = num; }
      else if (key == "s_base_mva") { if (p.number(value, num)) gs.freq.s_base_mva = num; }
      else if (key == "headroom_mw") { if (p.number(value, num)) gs.freq.headroom_mw = num; }
      else if (key == "f0_hz") { if (p.number(value, num)) gs.freq.f0 = num; }
      else if (key == "uf_trip_hz") { if (p.number(value, num)) gs.protection.uf_trip_hz = num; }
      else if (key == "uv_trip_pu") { if (p.number(value, num)) gs.protection.uv_trip_pu = num; }
      else if (key == "trip_delay_s") { if (p.number(value, num)) gs.protection.trip_delay_s = num; }
      else if (key == "dg_p_mw") { if (p.number(value, num)) gs.dg_p_mw = num; }
      else if (key == "dg_q_mvar") { if (p.number(value, num)) gs.dg_q_mvar = num; }
      else if (key == "q_slack_max_mvar") { if (p.number(value, num)) gs.q_slack_max_mvar = num; }
      else if (key == "slack_droop_pu_per_mvar_s") { if (p.number(value, num)) gs.slack_droop_pu_per_mvar_s = num; }
      else if (key == "b_q_decline_mvar_per_s") { if (p.number(value, num)) gs.b_q_decline_mvar_per_s = num; }
      else if (key == "b_horizon_s") { if (p.number(value, num)) gs.b_horizon_s = num; }
      else if (key == "b_restoration_per_s") { if (p.number(value, num)) gs.b_restoration_per_s = num; }
      else if (key == "c_q_absorb_mvar_per_s") { if (p.number(value, num)) gs.c_q_absorb_mvar_per_s = num; }
      else if (key == "c_p_osc_frac") { if (p.number(value, num)) gs.c_p_osc_frac = num; }
      else if (key == "c_p_osc_hz") { if (p.number(value, num)) gs.c_p_osc_hz = num; }
      else p.error("unknown key '" + key + "' in [grid]");
    } else if (section == "output") {
      if (key == "dir") { cfg.output.dir = value; }
      else if (key == "channel") {
        const auto cols = split_ws(value);
        ChannelRequest req;
        if (cols.size() < 1 || cols.size() > 3) {
          p.error("channel: want 'name [decimation] [stride|blockmax]'");
        } else {
          req.name = cols[0];
          bool good = true;
          if (cols.size() >= 2) {
            double d;
            good = p.number(cols[1], d);
            if (good && d < 1) { p.error("channel: decimation must be >= 1"); good = false; }
            if (good) req.decimation = static_cast<int>(d);
          }
          if (good && cols.size() == 3) {
            if (cols[2] == "stride") req.mode = DecimMode::Stride;
            else if (cols[2] == "blockmax") req.mode = DecimMode::BlockMax;
            else { p.error("channel: mode must be stride|blockmax"); good = false; }
          }
          if (good) cfg.output.channels.push_back(req);
        }
      }
      else p.error("unknown key '" + key + "' in [output]");
    } else {
      p.error("data outside any section");
    }
  }

  // Cross-field validation.
  if (cfg.device.env.segments.empty()) {
    // A config without [env] segments gets a flat profile covering the run.
    EnvSegment seg;
    seg.start_t = 0.0;
    seg.end_t = cfg.device.clock.t_end + 1.0;
    cfg.device.env.segments.push_back(seg);
  }
  try {
    cfg.device.clock.recompute();
    validate_profile(cfg.device.env);
    validate_trigger_params(cfg.device.trigger);
  } catch (const std::exception& e) {
    out.errors.push_back(std::string("validation: ") + e.what());
  }
  if (cfg.device.env.end_time() + 1e-9 < cfg.device.clock.t_end)
    out.errors.push_back("validation: environment profile ends before t_end");

  if (out.errors.empty()) out.config = cfg;
  return out;
}

ParseOutcome parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseOutcome out;
    out.errors.push_back("cannot open config file: " + path);
    return out;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string emit_config(const ScenarioConfig& cfg) {
  std::ostringstream o;
  const auto& dev = cfg.device;
  o << "[run]\n";
  o << "stage = "
    << (dev.stage == DeviceStage::TriggerOnly ? "trigger"
        : dev.stage == DeviceStage::Dcdc     ? "dcdc"
        : dev.stage == DeviceStage::Dcac     ? "dcac"
                                             : "dcdc_dcac")
    << "\n";
  o << "dt_s = " << fmt(dev.clock.dt) << "\n";
  o << "t_end_s = " << fmt(dev.clock.t_end) << "\n";
  o << "trojan_bypassed = " << (dev.trojan_bypassed ? 1 : 0) << "\n";
  if (dev.forced_payload_t)
    o << "forced_payload_t_s = " << fmt(*dev.forced_payload_t) << "\n";
  o << "settle_frac = " << fmt(dev.settle_frac) << "\n";

  o << "\n[env]\n";
  o << "t0_c = " << fmt(dev.env.t0_c) << "\n";
  for (const auto& s : dev.env.segments)
    o << "segment = " << fmt(s.start_t) << " " << fmt(s.end_t) << " "
      << fmt(s.rate_c_per_s) << " " << fmt(s.emi_offset_rate_v_per_s) << "\n";

  o << "\n[sensor]\n";
  o << "alpha_v_per_c = " << fmt(dev.sensor.alpha) << "\n";
  o << "beta_v = " << fmt(dev.sensor.beta) << "\n";
  o << "r1_ohm = " << fmt(dev.filter.r1) << "\n";
  o << "c1_f = " << fmt(dev.filter.c1) << "\n";
  o << "r3_ohm = " << fmt(dev.filter.r3) << "\n";
  o << "r_shunt_ohm = " << fmt(dev.filter.r_shunt) << "\n";
  o << "placement = "
    << (dev.filter.placement == ShuntPlacement::Dedicated ? "dedicated" : "r1")
    << "\n";

  const auto& tr = dev.trigger;
  o << "\n[trigger]\n";
  o << "av_gain = " << fmt(tr.av) << "\n";
  o << "vth_inv_v = " << fmt(tr.vth_inv) << "\n";
  o << "c_unit_f = " << fmt(tr.c_unit) << "\n";
  o << "c_main_f = " << fmt(tr.c_main) << "\n";
  o << "vdd_v = " << fmt(tr.vdd) << "\n";
  o << "i_leak_sat_a = " << fmt(tr.i_leak_sat) << "\n";
  o << "r_leak_low_ohm = " << fmt(tr.r_leak_low) << "\n";
  o << "vth_buf_v = " << fmt(tr.vth_buf) << "\n";
  o << "grid_zero_freq_hz = " << fmt(tr.grid_zero_freq) << "\n";
  o << "payload_mode = "
    << (tr.payload_mode == PayloadMode::Pwm1High   ? "pwm1_high"
        : tr.payload_mode == PayloadMode::Pwm1Low ? "pwm1_low"
                                                  : "pwm5_high")
    << "\n";

  const auto& d = dev.dcdc;
  o << "\n[dcdc]\n";
  o << "l_m_h = " << fmt(d.l_m) << "\n";
  o << "l_lk_h = " << fmt(d.l_lk) << "\n";
  o << "turns_ratio = " << fmt(d.turns_ratio) << "\n";
  o << "c_clamp_f = " << fmt(d.c_clamp) << "\n";
  o << "c_out_f = " << fmt(d.c_out) << "\n";
  o << "r_load_ohm = " << fmt(d.r_load) << "\n";
  o << "f_sw_hz = " << fmt(d.f_sw) << "\n";
  o << "r_on_ohm = " << fmt(d.r_on) << "\n";
  o << "v_diode_v = " << fmt(d.v_diode) << "\n";
  o << "r_clamp_ohm = " << fmt(d.r_clamp) << "\n";
  o << "r_lk_ohm = " << fmt(d.r_lk) << "\n";
  o << "c_par_f = " << fmt(d.c_par) << "\n";
  o << "v_rating_v = " << fmt(d.v_rating) << "\n";
  o << "over_steps_to_fail = " << d.over_steps_to_fail << "\n";

  o << "\n[pv]\n";
  o << "coupled = " << (dev.pv_coupled ? 1 : 0) << "\n";
  o << "v_oc_v = " << fmt(dev.pv.v_oc) << "\n";
  o << "i_sc_a = " << fmt(dev.pv.i_sc) << "\n";
  o << "knee_frac = " << fmt(dev.pv.knee_frac) << "\n";
  o << "v_in_fixed_v = " << fmt(dev.v_in_fixed) << "\n";
  o << "c_in_f = " << fmt(dev.c_in) << "\n";

  o << "\n[mppt]\n";
  o << "enabled = " << (dev.mppt_enabled ? 1 : 0) << "\n";
  o << "duty0 = " << fmt(dev.mppt.duty) << "\n";
  o << "step = " << fmt(dev.mppt.step) << "\n";
  o << "d_min = " << fmt(dev.mppt.d_min) << "\n";
  o << "d_max = " << fmt(dev.mppt.d_max) << "\n";
  o << "period_s = " << fmt(dev.mppt_period_s) << "\n";

  const auto& a = dev.dcac;
  o << "\n[dcac]\n";
  o << "f_grid_hz = " << fmt(a.f_grid) << "\n";
  o << "f_sw_hz = " << fmt(a.f_sw) << "\n";
  o << "l2_h = " << fmt(a.l2) << "\n";
  o << "l3_h = " << fmt(a.l3) << "\n";
  o << "l4_h = " << fmt(a.l4) << "\n";
  o << "l5_h = " << fmt(a.l5) << "\n";
  o << "c_f_f = " << fmt(a.c_f) << "\n";
  o << "r_cf_ohm = " << fmt(a.r_cf) << "\n";
  o << "r_series_ohm = " << fmt(a.r_series) << "\n";
  o << "r_on_ohm = " << fmt(a.r_on) << "\n";
  o << "modulation_index = " << fmt(a.modulation_index) << "\n";
  o << "load = " << (a.load == AcLoad::ResistiveBank ? "bank" : "grid") << "\n";
  o << "r_load_ohm = " << fmt(a.r_load) << "\n";
  o << "v_grid_peak_v = " << fmt(a.v_grid_peak) << "\n";
  o << "r_grid_ohm = " << fmt(a.r_grid) << "\n";
  o << "v_bus_nominal_v = " << fmt(a.v_bus_nominal) << "\n";
  o << "source = " << (a.source == BridgeSource::IdealBus ? "ideal" : "dcdc") << "\n";

  const auto& g = cfg.grid;
  const auto& gs = g.settings;
  o << "\n[grid]\n";
  o << "feeder = " << g.feeder_path << "\n";
  o << "scenario = " << to_string(g.scenario) << "\n";
  o << "t_attack_s = " << fmt(g.t_attack_s) << "\n";
  o << "dt_s = " << fmt(gs.dt) << "\n";
  o << "t_end_s = " << fmt(gs.t_end) << "\n";
  o << "h_agg_s = " << fmt(gs.freq.h_agg) << "\n";
  o << "s_base_mva = " << fmt(gs.freq.s_base_mva) << "\n";
  o << "headroom_mw = " << fmt(gs.freq.headroom_mw) << "\n";
  o << "f0_hz = " << fmt(gs.freq.f0) << "\n";
  o << "uf_trip_hz = " << fmt(gs.protection.uf_trip_hz) << "\n";
  o << "uv_trip_pu = " << fmt(gs.protection.uv_trip_pu) << "\n";
  o << "trip_delay_s = " << fmt(gs.protection.trip_delay_s) << "\n";
  o << "dg_p_mw = " << fmt(gs.dg_p_mw) << "\n";
  o << "dg_q_mvar = " << fmt(gs.dg_q_mvar) << "\n";
  o << "q_slack_max_mvar = " << fmt(gs.q_slack_max_mvar) << "\n";
  o << "slack_droop_pu_per_mvar_s = " << fmt(gs.slack_droop_pu_per_mvar_s) << "\n";
  o << "b_q_decline_mvar_per_s = " << fmt(gs.b_q_decline_mvar_per_s) << "\n";
  o << "b_horizon_s = " << fmt(gs.b_horizon_s) << "\n";
  o << "b_restoration_per_s = " << fmt(gs.b_restoration_per_s) << "\n";
  o << "c_q_absorb_mvar_per_s = " << fmt(gs.c_q_absorb_mvar_per_s) << "\n";
  o << "c_p_osc_frac = " << fmt(gs.c_p_osc_frac) << "\n";
  o << "c_p_osc_hz = " << fmt(gs.c_p_osc_hz) << "\n";

  o << "\n[output]\n";
  o << "dir = " << cfg.output.dir << "\n";
  for (const auto& ch : cfg.output.channels)
    o << "channel = " << ch.name << " " << ch.decimation << " "
      << (ch.mode == DecimMode::Stride ? "stride" : "blockmax") << "\n";
  return o.str();
}

bool config_equal(const ScenarioConfig& a, const ScenarioConfig& b) {
  return a == b;
}

}  // namespace invsim
