#include "invsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace invsim {

namespace {

struct Recorder {
  ChannelRequest req;
  TimeSeries ts;
  double block_max = 0.0;
  long count = 0;

  void push(double v) {
    if (req.mode == DecimMode::Stride) {
      if (count % req.decimation == 0) ts.samples.push_back(v);
      ++count;
    } else {
      block_max = count % req.decimation == 0 ? v : std::max(block_max, v);
      ++count;
      if (count % req.decimation == 0) ts.samples.push_back(block_max);
    }
  }
};

// Fast unchecked environment evaluation (profile validated beforehand).
EnvSample env_eval(const EnvironmentProfile& profile, double t) {
  EnvSample out;
  out.temp_c = profile.t0_c;
  for (const auto& seg : profile.segments) {
    if (t <= seg.start_t) break;
    const double span = std::min(t, seg.end_t) - seg.start_t;
    out.temp_c += seg.rate_c_per_s * span;
    out.emi_offset_v += seg.emi_offset_rate_v_per_s * span;
  }
  return out;
}

PwmOverride forced_override(PayloadMode mode) {
  TriggerCircuitParams p;
  p.payload_mode = mode;
  TriggerState st;
  st.payload_active = true;
  return payload_override(p, st);
}

// Metric window [t0, t1) of a recorded channel, snapped to whole samples.
TimeSeries slice(const TimeSeries& ts, double t0, double t1) {
  TimeSeries out;
  out.dt = ts.dt;
  out.unit = ts.unit;
  const auto lo = static_cast<std::size_t>(std::max(0.0, std::ceil(t0 / ts.dt)));
  const auto hi = std::min(ts.samples.size(),
                           static_cast<std::size_t>(std::max(0.0, std::floor(t1 / ts.dt))));
  if (lo < hi)
    out.samples.assign(ts.samples.begin() + static_cast<long>(lo),
                       ts.samples.begin() + static_cast<long>(hi));
  return out;
}

double mean(const TimeSeries& ts) {
  if (ts.samples.empty()) return 0.0;
  double s = 0.0;
  for (double v : ts.samples) s += v;
  return s / static_cast<double>(ts.samples.size());
}

double peak(const TimeSeries& ts) {
  double m = 0.0;
  for (double v : ts.samples) m = std::max(m, v);
  return m;
}

double floor_to_period(double t, double period) {
  return std::floor(t / period) * period;
}

}  // namespace

std::vector<ChannelRequest> default_records(DeviceStage stage) {
  std::vector<ChannelRequest> r;
  r.push_back({"temp_c", 1000, DecimMode::Stride});
  r.push_back({"v_shunt", 1000, DecimMode::Stride});
  r.push_back({"v_main", 1000, DecimMode::Stride});
  r.push_back({"payload", 1000, DecimMode::Stride});
  if (stage == DeviceStage::Dcdc || stage == DeviceStage::DcdcDcac) {
    r.push_back({"v_out", 50, DecimMode::Stride});
    r.push_back({"v_sw", 50, DecimMode::BlockMax});
    r.push_back({"duty", 1000, DecimMode::Stride});
    r.push_back({"v_pv", 500, DecimMode::Stride});
  }
  if (stage == DeviceStage::Dcac || stage == DeviceStage::DcdcDcac) {
    r.push_back({"ac_out", 10, DecimMode::Stride});
    r.push_back({"v_bus", 50, DecimMode::Stride});
  }
  return r;
}

ScenarioResult run_device_scenario(const DeviceScenario& s) {
  validate_profile(s.env);
  validate_trigger_params(s.trigger);
  if (s.env.end_time() + 1e-9 < s.clock.t_end)
    throw std::invalid_argument(
        "device scenario: environment profile does not cover the clock");
  if (s.forced_payload_t && *s.forced_payload_t < 0.0)
    throw std::invalid_argument("device scenario: forced payload time < 0");
  for (const auto& r : s.records)
    if (r.decimation < 1)
      throw std::invalid_argument("device scenario: decimation must be >= 1");

  ScenarioResult out;
  const double dt = s.clock.dt;

  std::vector<Recorder> recs;
  for (const auto& req : s.records.empty() ? default_records(s.stage) : s.records) {
    Recorder r;
    r.req = req;
    r.ts.dt = dt * req.decimation;
    recs.push_back(std::move(r));
  }

  // State.
  const double v_tmp0 =
      sensor_voltage(s.sensor, env_eval(s.env, 0.0).temp_c);
  SensorNodeState sensor_state = settled_sensor_state(v_tmp0);
  TriggerState trig;
  FlybackState fly;
  fly.v_out = 0.0;
  double v_pv = s.pv_coupled ? s.pv.knee_frac * s.pv.v_oc : s.v_in_fixed;
  MpptState mppt = s.mppt;
  HBridgeState hb;
  ModTrim trim;

  const bool run_dcdc =
      s.stage == DeviceStage::Dcdc || s.stage == DeviceStage::DcdcDcac;
  const bool run_dcac =
      s.stage == DeviceStage::Dcac || s.stage == DeviceStage::DcdcDcac;

  const long mppt_steps = std::max(1L, std::lround(s.mppt_period_s / dt));
  const long sw_steps =
      run_dcac ? std::max(1L, std::lround(1.0 / (s.dcac.f_sw * dt))) : 1;
  double mppt_v_acc = 0.0, mppt_i_acc = 0.0;

  bool was_active = false;
  bool was_destroyed = false;
  std::optional<double> t_trigger;
  std::optional<double> t_failure;

  for (std::size_t k = 0; k < s.clock.n_steps; ++k) {
    const double t = s.clock.time_at(k);

    const EnvSample env = env_eval(s.env, t);
    const double v_tmp =
        sensor_voltage(s.sensor, env.temp_c) + env.emi_offset_v;
    sensor_state = front_end_step(s.filter, sensor_state, v_tmp, dt);

    PwmOverride ov;
    if (!s.trojan_bypassed) {
      const int gv0 = grid_v_zero_level(s.trigger.grid_zero_freq, t);
      trig = trojan_step(s.trigger, trig, sensor_state.v_shunt, gv0, dt, t);
      ov = payload_override(s.trigger, trig);
      if (trig.payload_active && !was_active) {
        out.events.push_back({t, "trigger activated"});
        if (!t_trigger) t_trigger = t;
      } else if (!trig.payload_active && was_active) {
        out.events.push_back({t, "payload released"});
      }
      was_active = trig.payload_active;
    }
    if (s.forced_payload_t && t >= *s.forced_payload_t) {
      ov = forced_override(s.trigger.payload_mode);
      if (!t_trigger) {
        t_trigger = t;
        out.events.push_back({t, "trigger activated"});
      }
    }

    double duty_cmd_ac = 0.0;
    bool positive_half = true;

    if (run_dcdc) {
      PwmConfig chop{s.dcdc.f_sw, mppt.duty, 0.0, Polarity::ActiveHigh};
      PwmOverride ov2;
      if (ov.target == PwmTarget::Pwm2) ov2 = ov;
      const int pwm2 = pwm_level(chop, t, ov2);
      int pwm1 = 1 - pwm2;
      if (ov.target == PwmTarget::Pwm1 && ov.forced_level != ForcedLevel::None)
        pwm1 = ov.forced_level == ForcedLevel::High ? 1 : 0;

      const double v_in = s.pv_coupled ? v_pv : s.v_in_fixed;
      const double i_ext = run_dcac ? hb.i_bus : 0.0;
      fly = flyback_step(s.dcdc, fly, pwm1, pwm2, v_in, dt, i_ext);

      if (s.pv_coupled) {
        const double i_draw = s.dcdc.turns_ratio * fly.i_m;
        const double i_avail = pv_current(s.pv, std::clamp(v_pv, 0.0, s.pv.v_oc));
        v_pv += ((i_avail - i_draw) / s.c_in) * dt;
        v_pv = std::clamp(v_pv, 0.0, s.pv.v_oc);
        mppt_v_acc += v_pv;
        mppt_i_acc += i_draw;
        if (s.mppt_enabled && (k + 1) % static_cast<std::size_t>(mppt_steps) == 0) {
          const double n = static_cast<double>(mppt_steps);
          mppt = mppt_step(mppt, mppt_v_acc / n, mppt_i_acc / n);
          mppt_v_acc = mppt_i_acc = 0.0;
        }
      }
      if (fly.driver_destroyed && !was_destroyed) {
        out.events.push_back({t, "driver destroyed"});
        t_failure = t;
        was_destroyed = true;
      }
    }

    if (run_dcac) {
      const double theta = 2.0 * std::numbers::pi * s.dcac.f_grid * t;
      const double sine = std::sin(theta);
      positive_half = sine >= 0.0;
      const double gain = trim_gain(trim, positive_half);
      duty_cmd_ac =
          std::min(1.0, gain * s.dcac.modulation_index * std::abs(sine));
      const GateVector gates = gate_schedule(s.dcac, t, ov, gain);
      const double v_bus =
          s.stage == DeviceStage::DcdcDcac ? fly.v_out : s.dcac.v_bus_nominal;
      hb = hbridge_step(s.dcac, hb, gates, v_bus, t, dt);
      accumulate_mod_trim(trim, duty_cmd_ac, positive_half ? 1.0 : -1.0,
                          s.dcac.v_bus_nominal, hb.v_br, dt);
      if ((k + 1) % static_cast<std::size_t>(sw_steps) == 0)
        update_mod_trim(trim, positive_half);
    }

    for (auto& r : recs) {
      double v = 0.0;
      const std::string& name = r.req.name;
      if (name == "temp_c") v = env.temp_c;
      else if (name == "v_tmp") v = v_tmp;
      else if (name == "v_shunt") v = sensor_state.v_shunt;
      else if (name == "v_main") v = trig.v_main;
      else if (name == "payload") v = (ov.forced_level != ForcedLevel::None) ? 1.0 : 0.0;
      else if (name == "v_out") v = fly.v_out;
      else if (name == "v_sw") v = fly.v_sw;
      else if (name == "duty") v = mppt.duty;
      else if (name == "v_pv") v = v_pv;
      else if (name == "i_m") v = fly.i_m;
      else if (name == "ac_out") v = hb.v_out;
      else if (name == "v_bus") v = s.stage == DeviceStage::DcdcDcac
                                        ? fly.v_out
                                        : s.dcac.v_bus_nominal;
      else throw std::invalid_argument("unknown channel: " + name);
      r.push(v);
    }
  }

  for (auto& r : recs) out.channels[r.req.name] = std::move(r.ts);

  // Summary, computed from the recorded channels.
  auto& sm = out.summary;
  const double t_end = s.clock.t_end;
  const double ta = t_trigger.value_or(t_end);
  if (t_trigger) sm["t_trigger"] = *t_trigger;
  if (t_failure) sm["t_failure"] = *t_failure;
  sm["trigger_fired"] = t_trigger ? 1.0 : 0.0;

  const bool attacked = t_trigger.has_value() && ta < t_end;
  const double grid_period = 1.0 / s.dcac.f_grid;

  double pre0 = attacked ? ta * (1.0 - s.settle_frac) : 0.2 * t_end;
  double pre1 = attacked ? ta : t_end;
  double post0 = attacked ? t_end - s.settle_frac * (t_end - ta) : pre0;
  double post1 = t_end;
  if (run_dcac) {
    pre0 = floor_to_period(pre0, grid_period);
    pre1 = floor_to_period(pre1, grid_period);
    post0 = floor_to_period(post0, grid_period);
  }

  if (run_dcdc && out.channels.count("v_out")) {
    const auto& ch = out.channels.at("v_out");
    const double before = mean(slice(ch, pre0, pre1));
    const double after = mean(slice(ch, post0, post1));
    sm["v_out_before"] = before;
    sm["v_out_after"] = after;
    if (before > 0.0) sm["v_out_reduction"] = percent_reduction(before, after);
  }
  if (run_dcdc && out.channels.count("v_sw")) {
    const auto& ch = out.channels.at("v_sw");
    sm["vsw_peak_before"] = peak(slice(ch, pre0, pre1));
    sm["vsw_peak_after"] = peak(slice(ch, post0, post1));
  }
  if (run_dcdc && out.channels.count("duty")) {
    const auto& ch = out.channels.at("duty");
    sm["duty_before"] = mean(slice(ch, pre0, pre1));
    sm["duty_after"] = mean(slice(ch, post0, post1));
  }
  if (run_dcac && out.channels.count("ac_out")) {
    const auto& ch = out.channels.at("ac_out");
    const TimeSeries pre = slice(ch, pre0, pre1);
    const TimeSeries post = slice(ch, post0, post1);
    if (pre.samples.size() * pre.dt >= 5.0 * grid_period) {
      const OutputMetrics mb = output_metrics(pre, s.dcac.f_grid);
      sm["ac_rms_before"] = mb.rms;
      sm["ac_pos_peak_before"] = mb.pos_peak;
      sm["ac_neg_peak_before"] = mb.neg_peak;
    }
    if (post.samples.size() * post.dt >= 5.0 * grid_period) {
      const OutputMetrics ma = output_metrics(post, s.dcac.f_grid);
      sm["ac_rms_after"] = ma.rms;
      sm["ac_pos_peak_after"] = ma.pos_peak;
      sm["ac_neg_peak_after"] = ma.neg_peak;
      sm["ac_asymmetry_after"] = ma.asymmetry;
      if (ma.pos_peak > 0.0)
        sm["ac_neg_over_pos_after"] = ma.neg_peak / ma.pos_peak;
    }
    if (sm.count("ac_rms_before") && sm.count("ac_rms_after") &&
        sm["ac_rms_before"] > 0.0)
      sm["ac_rms_reduction"] =
          percent_reduction(sm["ac_rms_before"], sm["ac_rms_after"]);
    if (sm.count("ac_neg_peak_before") && sm.count("ac_neg_peak_after") &&
        sm["ac_neg_peak_before"] > 0.0)
      sm["ac_neg_reduction"] =
          percent_reduction(sm["ac_neg_peak_before"], sm["ac_neg_peak_after"]);
    if (run_dcac && out.channels.count("v_bus")) {
      const TimeSeries vb = slice(out.channels.at("v_bus"), post0, post1);
      double mn = vb.samples.empty() ? 0.0 : vb.samples.front();
      for (double v : vb.samples) mn = std::min(mn, v);
      sm["v_bus_min_after"] = mn;
    }
  }
  if (out.channels.count("v_main")) {
    sm["v_main_peak"] = peak(out.channels.at("v_main"));
  }
  sm["driver_destroyed"] = was_destroyed ? 1.0 : 0.0;
  return out;
}

DgOutcome derive_dg_behavior(const ScenarioResult& result) {
  DgOutcome out;
  const auto& sm = result.summary;
  auto get = [&](const std::string& k, double dflt) {
    const auto it = sm.find(k);
    return it == sm.end() ? dflt : it->second;
  };

  if (get("driver_destroyed", 0.0) > 0.5)
    out.candidates.push_back(ScenarioKind::InstantTrip);
  if (sm.count("ac_neg_over_pos_after") &&
      get("ac_neg_over_pos_after", 1.0) < 0.7)
    out.candidates.push_back(ScenarioKind::LossOfExcitation);
  if (get("ac_rms_reduction", 0.0) >= 0.10 ||
      get("v_out_reduction", 0.0) >= 0.10)
    out.candidates.push_back(ScenarioKind::VoltageDegradation);

  if (out.candidates.empty()) {
    out.note = get("trigger_fired", 0.0) > 0.5
                   ? "trigger fired but no measurable device degradation"
                   : "no trigger, healthy run";
    return out;
  }
  // Priority: destruction dominates, asymmetry next, plain reduction last.
  out.kind = out.candidates.front();
  if (out.candidates.size() > 1)
    out.note = "multiple device outcomes; mapped by severity";
  return out;
}

}  // namespace invsim
