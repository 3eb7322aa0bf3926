#pragma once

#include "invsim/core.hpp"

namespace invsim {

enum class BridgeSource { IdealBus, DcdcCoupled };
enum class AcLoad { ResistiveBank, StiffGrid };

struct HBridgeParams {
  double f_grid = 60.0;
  double f_sw = 20e3;
  // LCL filter: l2/l3 bridge side, l4/l5 line side, c_f across the line
  // with series damping r_cf.
  double l2 = 600e-6;
  double l3 = 600e-6;
  double l4 = 150e-6;
  double l5 = 150e-6;
  double c_f = 4.7e-6;
  double r_cf = 3.0;
  double r_series = 1.0;  // conduction path resistance of the loop
  double r_on = 0.5;      // per-switch on-resistance (limits shoot-through)
  double modulation_index = 0.97;
  AcLoad load = AcLoad::ResistiveBank;
  double r_load = 480.0;      // load bank
  double v_grid_peak = 0.0;   // stiff-grid source amplitude
  double r_grid = 2.0;        // stiff-grid source impedance
  BridgeSource source = BridgeSource::IdealBus;
  double v_bus_nominal = 100.0;

  friend bool operator==(const HBridgeParams&, const HBridgeParams&) = default;
};

// pwm5/pwm6 select the half-cycle at f_grid; pwm3/pwm4 chop at f_sw.
struct GateVector {
  int pwm3 = 0;
  int pwm4 = 0;
  int pwm5 = 0;
  int pwm6 = 0;
};

// Healthy gate pattern at time t with the override applied to its target.
// duty_trim scales the chopper duty (volt-second compensation), 1 = none.
GateVector gate_schedule(const HBridgeParams& p, double t,
                         const PwmOverride& override_ = {},
                         double duty_trim = 1.0);

struct HBridgeState {
  double i_br = 0.0;   // bridge-side filter current
  double i_out = 0.0;  // line-side filter current
  double v_cf = 0.0;
  double v_out = 0.0;  // voltage across the AC load
  double v_br = 0.0;   // instantaneous bridge differential voltage
  double i_bus = 0.0;  // current drawn from the DC bus this step
};

HBridgeState hbridge_step(const HBridgeParams& p, const HBridgeState& s,
                          const GateVector& g, double v_bus_in, double t,
                          double dt);

struct OutputMetrics {
  double rms = 0.0;
  double pk_pk = 0.0;
  double pos_peak = 0.0;  // mean per-cycle positive peak
  double neg_peak = 0.0;  // mean per-cycle |negative| peak
  double asymmetry = 0.0; // |pos - neg| / pos
};

// Requires at least 5 full grid cycles; metrics use whole cycles only.
OutputMetrics output_metrics(const TimeSeries& series, double f_grid);

// Per-half volt-second tracking: compares commanded and delivered bridge
// volt-seconds each PWM cycle and raises the chopper duty when the bridge
// under-delivers, up to saturation.
struct ModTrim {
  double gain_pos = 1.0;
  double gain_neg = 1.0;
  double gain_max = 2.5;
  double vs_cmd = 0.0;
  double vs_meas = 0.0;
};

// Accumulate one step; call update_mod_trim at each PWM cycle boundary.
void accumulate_mod_trim(ModTrim& trim, double duty_cmd, double sign,
                         double v_bus_nominal, double v_br, double dt);
void update_mod_trim(ModTrim& trim, bool positive_half);

double trim_gain(const ModTrim& trim, bool positive_half);

}  // namespace invsim
