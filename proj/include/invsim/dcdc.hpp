#pragma once

namespace invsim {

// Clamped converter parameters. The switched model works in the
// transformer-referred frame: the source appears as turns_ratio * v_in and
// referred currents scale by 1/turns_ratio, which realizes the ideal gain
// v_out = v_in * turns_ratio / (1 - d).
struct FlybackParams {
  double l_m = 100e-6;    // magnetizing inductance (referred), H
  double l_lk = 2.8e-6;   // leakage inductance, H
  double turns_ratio = 1.5;
  double c_clamp = 0.2e-6;
  double c_out = 470e-6;
  double r_load = 40.0;
  double f_sw = 100e3;
  double r_on = 0.1;      // main/clamp switch on-resistance
  double v_diode = 0.7;   // output diode forward drop
  double r_clamp = 0.5;   // clamp branch series resistance
  double r_lk = 0.1;      // leakage branch series resistance
  double c_par = 3e-9;    // switch-node parasitic capacitance
  double v_rating = 100.0;          // gate-driver voltage rating
  int over_steps_to_fail = 10;      // consecutive over-rating steps to failure

  friend bool operator==(const FlybackParams&, const FlybackParams&) = default;
};

struct FlybackState {
  double i_m = 0.0;      // magnetizing-branch current (referred)
  double i_lk = 0.0;     // leakage-branch current at the switch node
  double v_clamp = 0.0;
  double v_out = 0.0;
  double v_sw = 0.0;     // main switch drain voltage
  bool diode_on = false;
  bool driver_destroyed = false;
  int over_count = 0;
  // Running energy audit (J): source input, load output, dissipated.
  double e_in = 0.0;
  double e_load = 0.0;
  double e_diss = 0.0;
};

// v_in * turns_ratio / (1 - d_main). Throws for d_main >= 1 or out of range.
double ideal_flyback_output(double v_in, double turns_ratio, double d_main);

// One fixed step of the switched network for the given gate levels.
// pwm2 drives the main switch, pwm1 the clamp switch. i_ext is an extra
// current drawn from the output node (used when a DC-AC stage is attached).
FlybackState flyback_step(const FlybackParams& p, const FlybackState& s,
                          int pwm1, int pwm2, double v_in, double dt,
                          double i_ext = 0.0);

// Energy currently stored in the converter's reactive elements (J).
double flyback_stored_energy(const FlybackParams& p, const FlybackState& s);

// State at the steady operating point for the given input and duty, used
// to start runs without the cold-start inrush transient.
FlybackState flyback_warm_start(const FlybackParams& p, double v_in,
                                double duty);

// v = l * di/dt.
double spike_estimate(double l, double di, double dt);

// Two-segment photovoltaic I-V: constant current up to knee_frac * v_oc,
// then linear falloff to zero at v_oc.
struct PvPanelModel {
  double v_oc = 22.0;
  double i_sc = 8.0;
  double knee_frac = 0.8;

  friend bool operator==(const PvPanelModel&, const PvPanelModel&) = default;
};

double pv_current(const PvPanelModel& panel, double v);

// Perturb-and-observe hill climber on PV power.
struct MpptState {
  double duty = 0.65;
  double step = 0.005;
  double last_power = 0.0;
  int direction = 1;
  double d_min = 0.1;
  double d_max = 0.85;

  friend bool operator==(const MpptState&, const MpptState&) = default;
};

MpptState mppt_step(const MpptState& m, double v_pv, double i_pv);

// Cycle-averaged output model for long runs where only the envelope
// matters: first-order relaxation toward the ideal gain.
struct FlybackAvgState {
  double v_out = 0.0;
};

FlybackAvgState flyback_averaged_step(const FlybackParams& p,
                                      const FlybackAvgState& s, double duty,
                                      double v_in, double dt);

}  // namespace invsim
