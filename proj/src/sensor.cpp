#include "invsim/sensor.hpp"

#include <cmath>
#include <stdexcept>

namespace invsim {

double sensor_voltage(const TempSensorModel& model, double temp_c) {
  return model.alpha * temp_c + model.beta;
}

double rate_to_voltage_rate(const TempSensorModel& model, double dtemp_dt) {
  return model.alpha * dtemp_dt;
}

SensorNodeState front_end_step(const FrontEndFilter& filter,
                               const SensorNodeState& state, double v_tmp,
                               double dt) {
  const double r_series = filter.r1 + (filter.placement == ShuntPlacement::Dedicated
                                           ? filter.r_shunt
                                           : 0.0);
  const double i = (v_tmp - state.v_c1) / r_series;
  SensorNodeState next;
  next.i_cap = i;
  next.v_c1 = state.v_c1 + (i / filter.c1) * dt;
  const double r_sense =
      filter.placement == ShuntPlacement::Dedicated ? filter.r_shunt : filter.r1;
  next.v_shunt = i * r_sense;
  return next;
}

SensorNodeState settled_sensor_state(double v_tmp) {
  SensorNodeState s;
  s.v_c1 = v_tmp;
  s.i_cap = 0.0;
  s.v_shunt = 0.0;
  return s;
}

void validate_profile(const EnvironmentProfile& profile) {
  if (profile.segments.empty())
    throw std::invalid_argument("environment profile: no segments");
  double expect_start = 0.0;
  for (const auto& seg : profile.segments) {
    if (std::abs(seg.start_t - expect_start) > 1e-12)
      throw std::invalid_argument(
          "environment profile: segments must be contiguous from t=0");
    if (!(seg.end_t > seg.start_t))
      throw std::invalid_argument("environment profile: empty segment");
    expect_start = seg.end_t;
  }
}

EnvSample environment_at(const EnvironmentProfile& profile, double t) {
  validate_profile(profile);
  if (t < 0.0 || t > profile.end_time() + 1e-12)
    throw std::out_of_range("environment_at: t outside profile");
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

}  // namespace invsim
