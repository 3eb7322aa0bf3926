#include "invsim/dcac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace invsim {

namespace {

int apply_override(int level, PwmTarget target, const PwmOverride& ov) {
  if (ov.forced_level == ForcedLevel::None || ov.target != target) return level;
  return ov.forced_level == ForcedLevel::High ? 1 : 0;
}

}  // namespace

GateVector gate_schedule(const HBridgeParams& p, double t,
                         const PwmOverride& override_, double duty_trim) {
  const double theta = 2.0 * std::numbers::pi * p.f_grid * t;
  const double s = std::sin(theta);
  const bool positive = s >= 0.0;

  const double duty =
      std::min(1.0, duty_trim * p.modulation_index * std::abs(s));
  const double x = t * p.f_sw;
  const int chop = (x - std::floor(x)) < duty ? 1 : 0;

  GateVector g;
  g.pwm5 = positive ? 1 : 0;
  g.pwm6 = positive ? 0 : 1;
  g.pwm4 = positive ? chop : 0;
  g.pwm3 = positive ? 0 : chop;

  g.pwm3 = apply_override(g.pwm3, PwmTarget::Pwm3, override_);
  g.pwm4 = apply_override(g.pwm4, PwmTarget::Pwm4, override_);
  g.pwm5 = apply_override(g.pwm5, PwmTarget::Pwm5, override_);
  g.pwm6 = apply_override(g.pwm6, PwmTarget::Pwm6, override_);
  return g;
}

HBridgeState hbridge_step(const HBridgeParams& p, const HBridgeState& s,
                          const GateVector& g, double v_bus_in, double t,
                          double dt) {
  const double v_bus = std::max(v_bus_in, 0.0);

  // Leg terminal voltages. A leg with both devices on is a shoot-through
  // divider; with neither on the body diodes steer by current direction.
  double shoot = 0.0;
  auto leg_voltage = [&](int top, int bottom, double i_leaving) {
    if (top == 1 && bottom == 1) {
      shoot += v_bus / (2.0 * p.r_on);
      return 0.5 * v_bus;
    }
    if (top == 1) return v_bus;
    if (bottom == 1) return 0.0;
    return i_leaving > 0.0 ? 0.0 : v_bus;
  };

  const double v_a = leg_voltage(g.pwm5, g.pwm3, s.i_br);
  const double v_b = leg_voltage(g.pwm6, g.pwm4, -s.i_br);
  const double v_br = v_a - v_b;

  const double l_b = p.l2 + p.l3;
  const double l_o = p.l4 + p.l5;

  HBridgeState n = s;
  const double i_cf = s.i_br - s.i_out;
  n.i_br += ((v_br - s.v_cf - p.r_cf * i_cf - p.r_series * s.i_br) / l_b) * dt;

  auto load_voltage = [&](double i_out) {
    if (p.load == AcLoad::StiffGrid)
      return p.v_grid_peak * std::sin(2.0 * std::numbers::pi * p.f_grid * t) +
             i_out * p.r_grid;
    return i_out * p.r_load;
  };

  n.i_out += ((s.v_cf + p.r_cf * i_cf - load_voltage(s.i_out)) / l_o) * dt;
  n.v_cf += ((n.i_br - n.i_out) / p.c_f) * dt;

  n.v_out = load_voltage(n.i_out);
  n.v_br = v_br;

  double i_draw = 0.0;
  if (v_bus > 1e-3) i_draw = std::max(0.0, v_br * s.i_br) / v_bus;
  n.i_bus = shoot + i_draw;
  return n;
}

OutputMetrics output_metrics(const TimeSeries& series, double f_grid) {
  if (!(f_grid > 0.0)) throw std::invalid_argument("output_metrics: bad f_grid");
  const double period = 1.0 / f_grid;
  const double span = static_cast<double>(series.samples.size()) * series.dt;
  if (span + 1e-9 < 5.0 * period)
    throw std::invalid_argument("output_metrics: need at least 5 full cycles");

  const auto peaks = half_cycle_amplitudes(series, f_grid);
  const std::size_t n_cycles = peaks.size();
  const std::size_t n_keep =
      std::min(series.samples.size(),
               static_cast<std::size_t>(std::floor(n_cycles * period / series.dt)));

  TimeSeries whole = series;
  whole.samples.assign(series.samples.begin(),
                       series.samples.begin() + static_cast<long>(n_keep));

  OutputMetrics m;
  m.rms = rms(whole);
  const auto [mn, mx] =
      std::minmax_element(whole.samples.begin(), whole.samples.end());
  m.pk_pk = *mx - *mn;
  double pos = 0.0, neg = 0.0;
  for (const auto& pk : peaks) {
    pos += pk.pos;
    neg += pk.neg;
  }
  m.pos_peak = pos / static_cast<double>(n_cycles);
  m.neg_peak = neg / static_cast<double>(n_cycles);
  m.asymmetry = m.pos_peak > 0.0
                    ? std::abs(m.pos_peak - m.neg_peak) / m.pos_peak
                    : 0.0;
  return m;
}

void accumulate_mod_trim(ModTrim& trim, double duty_cmd, double sign,
                         double v_bus_nominal, double v_br, double dt) {
  trim.vs_cmd += sign * duty_cmd * v_bus_nominal * dt;
  trim.vs_meas += v_br * dt;
}

void update_mod_trim(ModTrim& trim, bool positive_half) {
  const double cmd = std::abs(trim.vs_cmd);
  const double meas = std::abs(trim.vs_meas);
  trim.vs_cmd = 0.0;
  trim.vs_meas = 0.0;
  if (cmd < 1e-9) return;
  const double g_inst = std::clamp(cmd / std::max(meas, 1e-9), 1.0, trim.gain_max);
  double& gain = positive_half ? trim.gain_pos : trim.gain_neg;
  gain = std::clamp(0.8 * gain + 0.2 * g_inst, 1.0, trim.gain_max);
}

double trim_gain(const ModTrim& trim, bool positive_half) {
  return positive_half ? trim.gain_pos : trim.gain_neg;
}

}  // namespace invsim
