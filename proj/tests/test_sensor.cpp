#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invsim/sensor.hpp"

#include <cmath>

using namespace invsim;

TEST_CASE("sensor_voltage linear law") {
  TempSensorModel m;
  CHECK(sensor_voltage(m, 25.0) == doctest::Approx(0.85));
  CHECK(sensor_voltage(m, 0.0) == doctest::Approx(0.6));
  CHECK(sensor_voltage(m, -10.0) == doctest::Approx(0.5));
}

TEST_CASE("rate_to_voltage_rate") {
  TempSensorModel m;
  CHECK(rate_to_voltage_rate(m, 0.1) == doctest::Approx(1.0e-3));
  CHECK(rate_to_voltage_rate(m, 0.0) == 0.0);
  CHECK(rate_to_voltage_rate(m, -0.5) == doctest::Approx(-5.0e-3));
}

TEST_CASE("front end settles to zero current on a constant input") {
  FrontEndFilter f;
  SensorNodeState s = settled_sensor_state(0.85);
  for (int k = 0; k < 200000; ++k) s = front_end_step(f, s, 0.85, 1e-5);
  CHECK(std::abs(s.i_cap) < 1e-12);
  CHECK(std::abs(s.v_shunt) < 1e-12 * f.r_shunt);
}

TEST_CASE("front end ramp response matches the analytic RC oracle") {
  // For input rate rho, the settled capacitor current is c1 * rho.
  FrontEndFilter f;
  const double rho = 1e-3;  // V/s
  const double dt = 1e-6;
  const double tau = (f.r1 + f.r_shunt) * f.c1;
  SensorNodeState s = settled_sensor_state(0.85);
  double t = 0.0;
  while (t < 8.0 * tau) {
    t += dt;
    s = front_end_step(f, s, 0.85 + rho * t, dt);
  }
  const double expect = f.c1 * rho;
  CHECK(s.i_cap == doctest::Approx(expect).epsilon(0.02));
  CHECK(s.v_shunt == doctest::Approx(expect * f.r_shunt).epsilon(0.02));
}

TEST_CASE("front end step response peak and decay match the RC oracle") {
  FrontEndFilter f;
  const double dv = 0.1;
  const double dt = 1e-7;
  const double r_tot = f.r1 + f.r_shunt;
  const double tau = r_tot * f.c1;
  SensorNodeState s = settled_sensor_state(0.85);
  s = front_end_step(f, s, 0.85 + dv, dt);
  CHECK(s.i_cap == doctest::Approx(dv / r_tot).epsilon(1e-3));
  // After one time constant the current has decayed to ~1/e of the peak.
  double t = dt;
  while (t < tau) {
    s = front_end_step(f, s, 0.85 + dv, dt);
    t += dt;
  }
  CHECK(s.i_cap == doctest::Approx((dv / r_tot) * std::exp(-1.0)).epsilon(0.01));
}

TEST_CASE("settled ramp current is linear in the ramp rate") {
  FrontEndFilter f;
  const double dt = 1e-6;
  auto settled = [&](double rho) {
    SensorNodeState s = settled_sensor_state(0.6);
    double t = 0.0;
    while (t < 0.02) {
      t += dt;
      s = front_end_step(f, s, 0.6 + rho * t, dt);
    }
    return s.i_cap;
  };
  const double i1 = settled(5e-4);
  const double i2 = settled(1e-3);
  CHECK(i2 / i1 == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("discrete RC relation holds bit-exactly") {
  FrontEndFilter f;
  SensorNodeState s = settled_sensor_state(0.7);
  const double dt = 1e-5;
  double t = 0.0;
  for (int k = 0; k < 5000; ++k) {
    t += dt;
    const SensorNodeState next = front_end_step(f, s, 0.7 + 2e-3 * t, dt);
    CHECK(next.v_c1 == s.v_c1 + (next.i_cap / f.c1) * dt);  // bit equal
    CHECK(next.v_shunt == next.i_cap * f.r_shunt);          // bit equal
    s = next;
  }
}

TEST_CASE("environment_at piecewise trajectory") {
  EnvironmentProfile env;
  env.t0_c = 25.0;
  env.segments.push_back({0.0, 20.0, 0.05, 0.0});
  CHECK(environment_at(env, 10.0).temp_c == doctest::Approx(25.5));

  EnvironmentProfile attack;
  attack.t0_c = 25.0;
  attack.segments.push_back({0.0, 10.0, 0.2, 0.0});
  attack.segments.push_back({10.0, 40.0, 0.0, 0.0});
  CHECK(environment_at(attack, 10.0).temp_c == doctest::Approx(27.0));
  CHECK(environment_at(attack, 30.0).temp_c == doctest::Approx(27.0));

  EnvironmentProfile emi;
  emi.segments.push_back({0.0, 5.0, 0.0, 2e-3});
  emi.segments.push_back({5.0, 10.0, 0.0, 0.0});
  CHECK(environment_at(emi, 5.0).emi_offset_v == doctest::Approx(10e-3));
  CHECK(environment_at(emi, 9.0).emi_offset_v == doctest::Approx(10e-3));

  CHECK_THROWS(environment_at(emi, 11.0));
  CHECK_THROWS(environment_at(emi, -1.0));

  EnvironmentProfile gap;
  gap.segments.push_back({0.0, 5.0, 0.1, 0.0});
  gap.segments.push_back({6.0, 10.0, 0.1, 0.0});
  CHECK_THROWS(environment_at(gap, 1.0));
}
