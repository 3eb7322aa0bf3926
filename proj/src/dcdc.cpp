#include "invsim/dcdc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invsim {

double ideal_flyback_output(double v_in, double turns_ratio, double d_main) {
  if (d_main < 0.0 || d_main >= 1.0)
    throw std::invalid_argument("ideal_flyback_output: degenerate duty");
  return v_in * turns_ratio / (1.0 - d_main);
}

double spike_estimate(double l, double di, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("spike_estimate: dt must be > 0");
  return l * di / dt;
}

namespace {

// Flux-conserving merge of the two series inductor currents, used when the
// branches are forced into series conduction with unequal currents. The
// kinetic mismatch is dissipated.
void merge_series_currents(const FlybackParams& p, FlybackState& s) {
  if (s.i_m == s.i_lk) return;
  const double l_tot = p.l_m + p.l_lk;
  const double i_ser = (p.l_m * s.i_m + p.l_lk * s.i_lk) / l_tot;
  const double e_before = 0.5 * p.l_m * s.i_m * s.i_m + 0.5 * p.l_lk * s.i_lk * s.i_lk;
  const double e_after = 0.5 * l_tot * i_ser * i_ser;
  s.e_diss += e_before - e_after;
  s.i_m = i_ser;
  s.i_lk = i_ser;
}

void reassign_switch_node(const FlybackParams& p, FlybackState& s, double v_new) {
  const double dv = s.v_sw - v_new;
  s.e_diss += 0.5 * p.c_par * dv * dv;
  s.v_sw = v_new;
}

}  // namespace

FlybackState flyback_step(const FlybackParams& p, const FlybackState& s,
                          int pwm1, int pwm2, double v_in, double dt,
                          double i_ext) {
  FlybackState n = s;
  if (n.driver_destroyed) {
    n.v_out = -p.v_diode;
    n.i_m = n.i_lk = 0.0;
    n.v_sw = 0.0;
    return n;
  }

  const double v_e = p.turns_ratio * v_in;
  n.e_in += v_e * s.i_m * dt;
  n.e_load += (s.v_out * s.v_out / p.r_load) * dt;

  double i_diode = 0.0;

  if (pwm2 == 1) {
    // Main switch on: series energize through l_m + l_lk, diode blocked.
    n.diode_on = false;
    merge_series_currents(p, n);
    double i_dump = 0.0;
    if (pwm1 == 1) {
      // Clamp discharges through both switches.
      i_dump = n.v_clamp / (p.r_clamp + p.r_on);
      n.v_clamp -= (i_dump / p.c_clamp) * dt;
      n.e_diss += i_dump * i_dump * (p.r_clamp + p.r_on) * dt;
    }
    const double r_ser = p.r_on + p.r_lk;
    const double didt = (v_e - n.i_m * r_ser) / (p.l_m + p.l_lk);
    n.e_diss += n.i_m * n.i_m * r_ser * dt;
    n.i_m += didt * dt;
    n.i_lk = n.i_m;
    reassign_switch_node(p, n, (n.i_lk + i_dump) * p.r_on);
  } else {
    // Main switch off: the leakage current commutates into the clamp
    // branch, the parasitic node capacitance, or both, while the
    // magnetizing branch transfers through the output diode once the
    // internal node reaches the reflected output voltage.
    const double v_xfer = n.v_out + p.v_diode;

    if (!n.diode_on) {
      const double l_tot = p.l_m + p.l_lk;
      const double v_p_float = n.v_sw + (p.l_lk / l_tot) * (v_e - n.v_sw);
      if (v_p_float >= v_xfer && n.i_m > 0.0) n.diode_on = true;
    }

    if (n.diode_on) {
      i_diode = n.i_m - n.i_lk;
      if (i_diode < 0.0) {
        n.diode_on = false;
        i_diode = 0.0;
        merge_series_currents(p, n);
      }
    }

    if (n.diode_on) {
      n.i_m += ((v_e - v_xfer) / p.l_m) * dt;
      n.i_lk += ((v_xfer - n.v_sw - n.i_lk * p.r_lk) / p.l_lk) * dt;
      n.e_diss += n.i_lk * n.i_lk * p.r_lk * dt + p.v_diode * i_diode * dt;
    } else {
      const double r_ser = p.r_lk;
      const double didt = (v_e - n.v_sw - n.i_m * r_ser) / (p.l_m + p.l_lk);
      n.e_diss += n.i_m * n.i_m * r_ser * dt;
      n.i_m += didt * dt;
      n.i_lk = n.i_m;
    }

    if (pwm1 == 1) {
      // Clamp engaged: the node follows the clamp capacitor.
      n.e_diss += n.i_lk * n.i_lk * p.r_clamp * dt;
      n.v_clamp += (n.i_lk / p.c_clamp) * dt;
      reassign_switch_node(p, n, n.v_clamp + n.i_lk * p.r_clamp);
    } else {
      // Only the parasitic capacitance takes the commutated current.
      // i_lk was updated first, so this pairing stays non-amplifying for
      // the l_lk / c_par oscillation.
      n.v_sw += (n.i_lk / p.c_par) * dt;
    }
  }

  n.v_out += ((i_diode - n.v_out / p.r_load - i_ext) / p.c_out) * dt;
  n.v_clamp = std::max(n.v_clamp, 0.0);

  if (n.v_sw > p.v_rating) {
    n.over_count += 1;
  } else {
    n.over_count = 0;
  }
  if (n.over_count > p.over_steps_to_fail) {
    n.driver_destroyed = true;
    n.v_out = -p.v_diode;
    n.i_m = n.i_lk = 0.0;
    n.v_sw = 0.0;
  }
  return n;
}

double flyback_stored_energy(const FlybackParams& p, const FlybackState& s) {
  return 0.5 * p.l_m * s.i_m * s.i_m + 0.5 * p.l_lk * s.i_lk * s.i_lk +
         0.5 * p.c_clamp * s.v_clamp * s.v_clamp +
         0.5 * p.c_out * s.v_out * s.v_out + 0.5 * p.c_par * s.v_sw * s.v_sw;
}

double pv_current(const PvPanelModel& panel, double v) {
  if (v < 0.0) throw std::invalid_argument("pv_current: negative voltage");
  const double v_knee = panel.knee_frac * panel.v_oc;
  if (v <= v_knee) return panel.i_sc;
  if (v >= panel.v_oc) return 0.0;
  return panel.i_sc * (panel.v_oc - v) / (panel.v_oc - v_knee);
}

MpptState mppt_step(const MpptState& m, double v_pv, double i_pv) {
  MpptState n = m;
  const double p = v_pv * i_pv;
  if (p <= m.last_power) n.direction = -m.direction;
  n.duty = std::clamp(m.duty + n.direction * m.step, m.d_min, m.d_max);
  n.last_power = p;
  return n;
}

FlybackAvgState flyback_averaged_step(const FlybackParams& p,
                                      const FlybackAvgState& s, double duty,
                                      double v_in, double dt) {
  const double target = ideal_flyback_output(v_in, p.turns_ratio, duty) - p.v_diode;
  const double tau = p.r_load * p.c_out;
  FlybackAvgState n = s;
  n.v_out += ((target - s.v_out) / tau) * dt;
  return n;
}

}  // namespace invsim
