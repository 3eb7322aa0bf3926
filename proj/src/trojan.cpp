#include "invsim/trojan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invsim {

void validate_trigger_params(const TriggerCircuitParams& p) {
  if (p.vth_inv < 0.2 || p.vth_inv > 1.0)
    throw std::invalid_argument("trigger: vth_inv outside [0.2, 1.0]");
  if (!(p.c_unit > 0.0) || !(p.c_main > 0.0) || !(p.c_unit < p.c_main))
    throw std::invalid_argument("trigger: require 0 < c_unit < c_main");
  if (!(p.vth_buf > 0.0) || !(p.vth_buf < p.vdd))
    throw std::invalid_argument("trigger: require 0 < vth_buf < vdd");
  if (!(p.r_leak_low > 1e8))
    throw std::invalid_argument("trigger: r_leak_low must exceed 100 MOhm");
  if (!(p.av > 0.0) || !(p.vdd > 0.0) || !(p.grid_zero_freq > 0.0))
    throw std::invalid_argument("trigger: gains, rails and frequency must be > 0");
  if (!(p.i_leak_sat >= 0.0))
    throw std::invalid_argument("trigger: i_leak_sat must be >= 0");
}

double sense_amplify(const TriggerCircuitParams& p, double v_shunt) {
  return std::clamp(p.av * v_shunt, 0.0, p.vdd);
}

int skewed_inverter(const TriggerCircuitParams& p, double v_in) {
  return v_in < p.vth_inv ? 1 : 0;
}

NorGlitch nor_glitch_stage(int inv_out, int grid_v_zero, int prev_nor) {
  NorGlitch out;
  out.nor_out = (inv_out == 0 && grid_v_zero == 0) ? 1 : 0;
  out.glitch = (prev_nor == 0 && out.nor_out == 1);
  return out;
}

TriggerState charge_pump_step(const TriggerCircuitParams& p,
                              const TriggerState& state, bool glitch,
                              double dt) {
  TriggerState next = state;
  if (glitch) {
    next.v_main += p.charge_ratio() * (p.vdd - next.v_main);
  }
  const double i_leak = std::min(next.v_main / p.r_leak_low, p.i_leak_sat);
  next.v_main -= (i_leak / p.c_main) * dt;
  next.v_main = std::clamp(next.v_main, 0.0, p.vdd);
  next.glitch_pending = false;
  return next;
}

TriggerState payload_check(const TriggerCircuitParams& p,
                           const TriggerState& state, double t) {
  TriggerState next = state;
  if (!next.payload_active && next.v_main >= p.vth_buf) {
    next.payload_active = true;
    if (!next.t_activated) next.t_activated = t;
  } else if (next.payload_active && next.v_main < 0.5 * p.vth_buf) {
    next.payload_active = false;
  }
  return next;
}

PwmOverride payload_override(const TriggerCircuitParams& p,
                             const TriggerState& state) {
  PwmOverride ov;
  if (!state.payload_active) return ov;
  switch (p.payload_mode) {
    case PayloadMode::Pwm1High:
      ov.target = PwmTarget::Pwm1;
      ov.forced_level = ForcedLevel::High;
      break;
    case PayloadMode::Pwm1Low:
      ov.target = PwmTarget::Pwm1;
      ov.forced_level = ForcedLevel::Low;
      break;
    case PayloadMode::Pwm5High:
      ov.target = PwmTarget::Pwm5;
      ov.forced_level = ForcedLevel::High;
      break;
  }
  return ov;
}

TriggerState trojan_step(const TriggerCircuitParams& p,
                         const TriggerState& state, double v_shunt,
                         int grid_v_zero, double dt, double t) {
  const double v_amp = sense_amplify(p, v_shunt);
  const int inv = skewed_inverter(p, v_amp);
  const NorGlitch ng = nor_glitch_stage(inv, grid_v_zero, state.nor_out);
  TriggerState next = charge_pump_step(p, state, ng.glitch, dt);
  next.inv_out = inv;
  next.nor_out = ng.nor_out;
  next.glitch_pending = ng.glitch;
  next = payload_check(p, next, t);
  return next;
}

int grid_v_zero_level(double freq, double t) {
  const double x = t * freq;
  const double frac = x - std::floor(x);
  return frac < 0.5 ? 1 : 0;
}

int glitches_to_threshold(double vth, double vdd, double ratio) {
  if (!(vth > 0.0) || !(vth < vdd) || !(ratio > 0.0) || !(ratio < 1.0))
    throw std::invalid_argument("glitches_to_threshold: bad arguments");
  return static_cast<int>(std::ceil(std::log1p(-vth / vdd) / std::log1p(-ratio)));
}

double calibrate_charge_ratio(double delay_s, double vth, double vdd,
                              double freq) {
  if (!(delay_s > 0.0) || !(freq > 0.0) || !(vth > 0.0) || !(vth < vdd))
    throw std::invalid_argument("calibrate_charge_ratio: bad arguments");
  const double n = std::round(delay_s * freq);
  if (n < 1.0) throw std::invalid_argument("calibrate_charge_ratio: zero glitches");
  return 1.0 - std::pow(1.0 - vth / vdd, 1.0 / n);
}

}  // namespace invsim
