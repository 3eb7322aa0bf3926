#pragma once

#include "invsim/core.hpp"

#include <optional>

namespace invsim {

enum class PayloadMode { Pwm1High, Pwm1Low, Pwm5High };

// Constants of the rate-trigger chain. Defaults are calibrated so that a
// sustained 60 Hz glitch train crosses vth_buf after ~5 s (300 glitches)
// and so that rates of roughly 0.1 degC/s and above switch the input
// inverter while slower drift does not.
struct TriggerCircuitParams {
  double av = 7.2e7;          // sense amplifier gain (lumped, behavioral)
  double vth_inv = 0.7;       // skewed inverter threshold, within [0.2, 1.0]
  double c_unit = 2.9265e-13; // F
  double c_main = 100e-12;    // F
  double vdd = 1.2;           // V
  double i_leak_sat = 1e-13;  // leakage saturation current, A
  double r_leak_low = 200e6;  // leakage resistance at low Vds, > 100 MOhm
  double vth_buf = 0.7;       // skewed buffer (activation) threshold, V
  double grid_zero_freq = 60.0;
  PayloadMode payload_mode = PayloadMode::Pwm1High;

  double charge_ratio() const { return c_unit / (c_unit + c_main); }

  friend bool operator==(const TriggerCircuitParams&, const TriggerCircuitParams&) = default;
};

void validate_trigger_params(const TriggerCircuitParams& p);

struct TriggerState {
  double v_main = 0.0;  // charge-pump output voltage on c_main
  int inv_out = 1;
  int nor_out = 0;
  bool glitch_pending = false;
  bool payload_active = false;
  std::optional<double> t_activated;
};

// av * v_shunt clamped to the [0, vdd] rails.
double sense_amplify(const TriggerCircuitParams& p, double v_shunt);

// 1 below threshold, 0 at or above it (ties count as crossed).
int skewed_inverter(const TriggerCircuitParams& p, double v_in);

// NOR of the inverter output with GRID_V_ZERO; a glitch fires on each
// 0->1 transition of the NOR output.
struct NorGlitch {
  int nor_out = 0;
  bool glitch = false;
};
NorGlitch nor_glitch_stage(int inv_out, int grid_v_zero, int prev_nor);

// Charge sharing on a glitch plus leakage decay every step.
TriggerState charge_pump_step(const TriggerCircuitParams& p,
                              const TriggerState& state, bool glitch,
                              double dt);

// Latches payload_active at vth_buf with release hysteresis at vth_buf/2.
TriggerState payload_check(const TriggerCircuitParams& p,
                           const TriggerState& state, double t);

PwmOverride payload_override(const TriggerCircuitParams& p,
                             const TriggerState& state);

// Full chain for one simulation step.
TriggerState trojan_step(const TriggerCircuitParams& p,
                         const TriggerState& state, double v_shunt,
                         int grid_v_zero, double dt, double t);

// Ideal 60 Hz (or freq) 50%-duty square wave used as GRID_V_ZERO.
int grid_v_zero_level(double freq, double t);

// Closed-form number of glitches needed to charge from 0 to vth with the
// given sharing ratio and no leakage:
//   n = ceil(ln(1 - vth/vdd) / ln(1 - ratio))
int glitches_to_threshold(double vth, double vdd, double ratio);

// Sharing ratio that reaches vth from 0 in exactly round(delay*freq)
// glitches (equality at the final glitch).
double calibrate_charge_ratio(double delay_s, double vth, double vdd,
                              double freq);

}  // namespace invsim
