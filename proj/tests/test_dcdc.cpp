#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invsim/core.hpp"
#include "invsim/dcdc.hpp"

#include <algorithm>
#include <cmath>

using namespace invsim;

namespace {

enum class ClampMode { Healthy, ForcedHigh, ForcedLow };

struct RunOut {
  FlybackState state;
  double v_out_settled = 0.0;  // mean over the last fifth of the run
  double v_sw_peak = 0.0;
  double e_in = 0.0, e_load = 0.0, e_diss = 0.0, e_stored_delta = 0.0;
};

// Fixed-duty converter run from an ideal source or a PV panel with input
// capacitance. Settled metrics come from the tail of the run.
RunOut run_flyback(const FlybackParams& p, double duty, double v_in,
                   bool pv_coupled, const PvPanelModel& pv, double t_end,
                   double dt, ClampMode mode, double t_attack = 0.0) {
  FlybackState s;
  double v_pv = pv_coupled ? pv.knee_frac * pv.v_oc : v_in;
  const double c_in = 100e-6;
  const auto n = static_cast<long>(t_end / dt);
  const long tail = n - n / 5;
  RunOut out;
  double acc = 0.0;
  long acc_n = 0;
  const FlybackState s0 = s;
  const double stored0 = flyback_stored_energy(p, s0);

  PwmConfig chop{p.f_sw, duty, 0.0, Polarity::ActiveHigh};
  for (long k = 0; k < n; ++k) {
    const double t = k * dt;
    const int pwm2 = pwm_level(chop, t);
    int pwm1 = 1 - pwm2;
    if (t >= t_attack) {
      if (mode == ClampMode::ForcedHigh) pwm1 = 1;
      if (mode == ClampMode::ForcedLow) pwm1 = 0;
    }
    const double vin_now = pv_coupled ? v_pv : v_in;
    s = flyback_step(p, s, pwm1, pwm2, vin_now, dt);
    if (pv_coupled) {
      const double i_draw = p.turns_ratio * s.i_m;
      v_pv += ((pv_current(pv, std::clamp(v_pv, 0.0, pv.v_oc)) - i_draw) / c_in) * dt;
      v_pv = std::clamp(v_pv, 0.0, pv.v_oc);
    }
    out.v_sw_peak = std::max(out.v_sw_peak, s.v_sw);
    if (k >= tail) {
      acc += s.v_out;
      ++acc_n;
    }
  }
  out.state = s;
  out.v_out_settled = acc / static_cast<double>(acc_n);
  out.e_in = s.e_in;
  out.e_load = s.e_load;
  out.e_diss = s.e_diss;
  out.e_stored_delta = flyback_stored_energy(p, s) - stored0;
  return out;
}

}  // namespace

TEST_CASE("ideal_flyback_output gain law") {
  CHECK(ideal_flyback_output(10.0, 2.0, 0.5) == doctest::Approx(40.0));
  CHECK(ideal_flyback_output(10.0, 2.0, 0.0) == doctest::Approx(20.0));
  CHECK(ideal_flyback_output(17.0, 1.5, 0.65) ==
        doctest::Approx(72.86).epsilon(0.01 / 72.86));
  CHECK_THROWS(ideal_flyback_output(10.0, 2.0, 1.0));
  CHECK_THROWS(ideal_flyback_output(10.0, 2.0, 1.5));
}

TEST_CASE("spike_estimate is l di/dt") {
  CHECK(spike_estimate(2.8e-6, 5.0, 1e-6) == doctest::Approx(14.0));
  CHECK(spike_estimate(123.0, 0.0, 1e-3) == 0.0);
  CHECK(spike_estimate(2.8e-6, 10.0, 5e-7) == doctest::Approx(56.0));
  CHECK_THROWS(spike_estimate(1e-6, 1.0, 0.0));
}

TEST_CASE("pv_current endpoints and monotonicity") {
  PvPanelModel pv;
  CHECK(pv_current(pv, 0.0) == doctest::Approx(8.0));
  CHECK(pv_current(pv, pv.v_oc) == 0.0);
  const double mid = pv_current(pv, 0.8 * pv.v_oc);
  CHECK(mid > 0.0);
  CHECK(mid <= 8.0);
  double prev = pv_current(pv, 0.0);
  for (double v = 0.0; v <= pv.v_oc; v += pv.v_oc / 200.0) {
    const double i = pv_current(pv, v);
    CHECK(i <= prev + 1e-12);
    prev = i;
  }
  CHECK_THROWS(pv_current(pv, -1.0));
}

TEST_CASE("mppt perturb-and-observe rules") {
  MpptState m;
  m.duty = 0.65;
  m.last_power = 100.0;
  m.direction = 1;
  MpptState up = mppt_step(m, 20.0, 5.2);  // 104 W: improved, keep climbing
  CHECK(up.direction == 1);
  CHECK(up.duty == doctest::Approx(0.655));

  MpptState down = mppt_step(up, 20.0, 5.0);  // 100 W: worse, reverse
  CHECK(down.direction == -1);
  CHECK(down.duty == doctest::Approx(0.65));

  MpptState clamped;
  clamped.duty = 0.849;
  clamped.last_power = 0.0;
  clamped.direction = 1;
  clamped = mppt_step(clamped, 10.0, 10.0);
  CHECK(clamped.duty == doctest::Approx(0.85));
}

TEST_CASE("healthy settled output tracks the ideal gain within 15%") {
  FlybackParams p;
  const double v_in = 17.6;
  const RunOut r = run_flyback(p, 0.5, v_in, false, {}, 0.06, 2e-8,
                               ClampMode::Healthy);
  const double ideal = ideal_flyback_output(v_in, p.turns_ratio, 0.5);
  CHECK(std::abs(r.v_out_settled - ideal) / ideal < 0.15);
}

TEST_CASE("lossless duty sweep matches the ideal gain within 5%") {
  FlybackParams p;
  p.r_on = 1e-4;
  p.v_diode = 0.0;
  p.r_lk = 1e-3;
  const double v_in = 17.6;
  for (double d : {0.3, 0.5, 0.65}) {
    const RunOut r =
        run_flyback(p, d, v_in, false, {}, 0.08, 2e-8, ClampMode::Healthy);
    const double ideal = ideal_flyback_output(v_in, p.turns_ratio, d);
    CHECK(std::abs(r.v_out_settled - ideal) / ideal < 0.05);
  }
}

TEST_CASE("energy audit closes within 2% in healthy operation") {
  FlybackParams p;
  const RunOut r = run_flyback(p, 0.65, 17.6, true, PvPanelModel{}, 0.05, 2e-8,
                               ClampMode::Healthy);
  const double residual =
      r.e_in - r.e_load - r.e_diss - r.e_stored_delta;
  CHECK(std::abs(residual) < 0.02 * r.e_in);
  CHECK(r.e_in > r.e_load);  // losses are non-negative
}

TEST_CASE("clamp forced high degrades the settled output by at least 30%") {
  FlybackParams p;
  PvPanelModel pv;
  const RunOut healthy =
      run_flyback(p, 0.65, 17.6, true, pv, 0.10, 2e-8, ClampMode::Healthy);
  const RunOut attacked = run_flyback(p, 0.65, 17.6, true, pv, 0.10, 2e-8,
                                      ClampMode::ForcedHigh, 0.03);
  CHECK(attacked.v_out_settled < 0.7 * healthy.v_out_settled);
  CHECK(attacked.v_out_settled > 0.0);
  CHECK_FALSE(attacked.state.driver_destroyed);
}

TEST_CASE("clamp forced low produces the destructive switch-node spike") {
  FlybackParams p;
  PvPanelModel pv;
  const RunOut healthy =
      run_flyback(p, 0.65, 17.6, true, pv, 0.06, 2e-8, ClampMode::Healthy);
  const RunOut attacked = run_flyback(p, 0.65, 17.6, true, pv, 0.06, 2e-8,
                                      ClampMode::ForcedLow, 0.03);
  CHECK(attacked.v_sw_peak >= 3.0 * healthy.v_sw_peak);
  CHECK(attacked.state.driver_destroyed);
  CHECK(attacked.state.v_out == doctest::Approx(-p.v_diode));
  CHECK(healthy.v_sw_peak < p.v_rating);
}

TEST_CASE("attack direction monotonicity against the healthy baseline") {
  FlybackParams p;
  PvPanelModel pv;
  const RunOut healthy =
      run_flyback(p, 0.65, 17.6, true, pv, 0.08, 2e-8, ClampMode::Healthy);
  const RunOut high = run_flyback(p, 0.65, 17.6, true, pv, 0.08, 2e-8,
                                  ClampMode::ForcedHigh, 0.03);
  const RunOut low = run_flyback(p, 0.65, 17.6, true, pv, 0.08, 2e-8,
                                 ClampMode::ForcedLow, 0.03);
  CHECK(high.v_out_settled <= healthy.v_out_settled);
  CHECK(low.v_sw_peak >= healthy.v_sw_peak);
}

TEST_CASE("identical inputs give bit-identical trajectories") {
  FlybackParams p;
  const RunOut a =
      run_flyback(p, 0.6, 17.6, true, PvPanelModel{}, 0.02, 2e-8, ClampMode::Healthy);
  const RunOut b =
      run_flyback(p, 0.6, 17.6, true, PvPanelModel{}, 0.02, 2e-8, ClampMode::Healthy);
  CHECK(a.state.i_m == b.state.i_m);
  CHECK(a.state.i_lk == b.state.i_lk);
  CHECK(a.state.v_out == b.state.v_out);
  CHECK(a.state.v_clamp == b.state.v_clamp);
  CHECK(a.state.v_sw == b.state.v_sw);
  CHECK(a.e_diss == b.e_diss);
}

TEST_CASE("averaged model relaxes to the ideal gain") {
  FlybackParams p;
  FlybackAvgState s;
  const double v_in = 17.6;
  const double dt = 1e-4;
  for (int k = 0; k < 200000; ++k)
    s = flyback_averaged_step(p, s, 0.65, v_in, dt);
  const double target = ideal_flyback_output(v_in, p.turns_ratio, 0.65) - p.v_diode;
  CHECK(s.v_out == doctest::Approx(target).epsilon(1e-6));
}
