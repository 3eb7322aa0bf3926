#pragma once

#include <vector>

namespace invsim {

// LM61-style linear temperature sensor: v = alpha*T + beta.
struct TempSensorModel {
  double alpha = 0.01;  // V/degC
  double beta = 0.6;    // V

  friend bool operator==(const TempSensorModel&, const TempSensorModel&) = default;
};

double sensor_voltage(const TempSensorModel& model, double temp_c);
double rate_to_voltage_rate(const TempSensorModel& model, double dtemp_dt);

enum class ShuntPlacement { Dedicated, R1 };

// Sensor output filter. The sensed current is the charging current of c1;
// the shunt converting it to a voltage sits between c1 and ground by
// default (r_shunt models the Rds(on) of the sense transistor). r3 feeds a
// high-impedance ADC input and carries no current in this model.
struct FrontEndFilter {
  double r1 = 10e3;
  double c1 = 100e-9;
  double r3 = 10e3;
  double r_shunt = 100.0;
  ShuntPlacement placement = ShuntPlacement::Dedicated;

  friend bool operator==(const FrontEndFilter&, const FrontEndFilter&) = default;
};

struct SensorNodeState {
  double v_c1 = 0.0;
  double i_cap = 0.0;
  double v_shunt = 0.0;

  friend bool operator==(const SensorNodeState&, const SensorNodeState&) = default;
};

// One forward-Euler step of the RC front end driven by v_tmp.
// The returned state satisfies v_shunt == i_cap * r_sense and
// v_c1_next == v_c1 + (i_cap/c1)*dt bit-exactly.
SensorNodeState front_end_step(const FrontEndFilter& filter,
                               const SensorNodeState& state, double v_tmp,
                               double dt);

// State settled at a constant input (zero capacitor current).
SensorNodeState settled_sensor_state(double v_tmp);

struct EnvSegment {
  double start_t = 0.0;
  double end_t = 0.0;
  double rate_c_per_s = 0.0;
  double emi_offset_rate_v_per_s = 0.0;

  friend bool operator==(const EnvSegment&, const EnvSegment&) = default;
};

// Piecewise-constant-rate temperature trajectory plus an optional induced
// voltage-offset rate per segment (EMI acting directly on the sensor line).
// Segments must be contiguous from t = 0.
struct EnvironmentProfile {
  std::vector<EnvSegment> segments;
  double t0_c = 25.0;

  double end_time() const {
    return segments.empty() ? 0.0 : segments.back().end_t;
  }

  friend bool operator==(const EnvironmentProfile&, const EnvironmentProfile&) = default;
};

struct EnvSample {
  double temp_c = 0.0;
  double emi_offset_v = 0.0;
};

// Throws if the profile is malformed or t lies outside it.
EnvSample environment_at(const EnvironmentProfile& profile, double t);

void validate_profile(const EnvironmentProfile& profile);

}  // namespace invsim
