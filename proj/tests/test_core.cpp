#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invsim/core.hpp"

#include <cmath>
#include <numbers>

using namespace invsim;

namespace {

TimeSeries sine_series(double amp_pos, double amp_neg, double f, double dt,
                       double t_end) {
  TimeSeries ts;
  ts.dt = dt;
  const auto n = static_cast<std::size_t>(t_end / dt);
  ts.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s = std::sin(2.0 * std::numbers::pi * f * k * dt);
    ts.samples.push_back(s >= 0.0 ? amp_pos * s : amp_neg * s);
  }
  return ts;
}

}  // namespace

TEST_CASE("duty_cycle basic values") {
  CHECK(duty_cycle(1e-5, 1e-5) == doctest::Approx(0.5));
  CHECK(duty_cycle(0.0, 1e-5) == doctest::Approx(0.0));
  // 3us on, 1us off: 3/(3+1)
  CHECK(duty_cycle(3e-6, 1e-6) == doctest::Approx(0.75));
  CHECK_THROWS(duty_cycle(0.0, 0.0));
  CHECK_THROWS(duty_cycle(-1.0, 2.0));
}

TEST_CASE("pwm_level half-period samples and override") {
  PwmConfig cfg;
  cfg.frequency = 1000.0;
  cfg.duty = 0.5;
  const double period = 1e-3;
  CHECK(pwm_level(cfg, 0.25 * period) == 1);
  CHECK(pwm_level(cfg, 0.75 * period) == 0);

  PwmOverride ov;
  ov.forced_level = ForcedLevel::High;
  for (double t : {0.0, 0.1, 0.75 * period, 123.456})
    CHECK(pwm_level(cfg, t, ov) == 1);
  ov.forced_level = ForcedLevel::Low;
  CHECK(pwm_level(cfg, 0.25 * period, ov) == 0);
}

TEST_CASE("pwm_level is periodic and averages to duty") {
  PwmConfig cfg;
  cfg.frequency = 250.0;
  cfg.phase = 1.7e-4;
  const double period = 1.0 / cfg.frequency;
  for (double duty : {0.0, 0.15, 0.5, 0.73, 1.0}) {
    cfg.duty = duty;
    const int per_period = 1000;
    long on = 0;
    for (int k = 0; k < 10 * per_period; ++k) {
      const double t = k * period / per_period;
      const int level = pwm_level(cfg, t);
      CHECK(level == pwm_level(cfg, t + period));
      CHECK(level == pwm_level(cfg, t + 7 * period));
      on += level;
    }
    const double avg = static_cast<double>(on) / (10.0 * per_period);
    CHECK(std::abs(avg - duty) <= 1.0 / per_period);
  }
}

TEST_CASE("pwm_level active-low inverts") {
  PwmConfig cfg;
  cfg.frequency = 1000.0;
  cfg.duty = 0.25;
  cfg.polarity = Polarity::ActiveLow;
  CHECK(pwm_level(cfg, 0.0) == 0);
  CHECK(pwm_level(cfg, 0.5e-3) == 1);
}

TEST_CASE("rms of constants and sines") {
  TimeSeries flat;
  flat.dt = 1e-3;
  flat.samples.assign(500, 2.0);
  CHECK(rms(flat) == doctest::Approx(2.0));

  const TimeSeries sine = sine_series(1.0, 1.0, 50.0, 1e-5, 0.2);
  CHECK(rms(sine) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));

  TimeSeries empty;
  CHECK_THROWS(rms(empty));
}

TEST_CASE("rms ratio of a sine with scaled negative half") {
  // Independent quadrature oracle over one cycle for the distorted shape.
  const double k = 0.4926;
  const int n = 200000;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * (i + 0.5) / n;
    const double s = std::sin(th);
    const double v = s >= 0.0 ? s : k * s;
    acc += v * v;
  }
  const double oracle_ratio = std::sqrt(acc / n) / (1.0 / std::sqrt(2.0));
  CHECK(oracle_ratio == doctest::Approx(0.788).epsilon(2e-3));

  const TimeSeries full = sine_series(1.0, 1.0, 60.0, 1e-6, 0.1);
  const TimeSeries scaled = sine_series(1.0, k, 60.0, 1e-6, 0.1);
  CHECK(rms(scaled) / rms(full) == doctest::Approx(oracle_ratio).epsilon(1e-3));
  CHECK(rms(scaled) / rms(full) == doctest::Approx(0.787).epsilon(0.01 / 0.787));
}

TEST_CASE("rms scales with |c|") {
  const TimeSeries base = sine_series(1.3, 0.8, 60.0, 1e-5, 0.2);
  for (double c : {-3.0, -0.5, 0.25, 2.0}) {
    TimeSeries scaled = base;
    for (auto& v : scaled.samples) v *= c;
    CHECK(rms(scaled) == doctest::Approx(std::abs(c) * rms(base)).epsilon(1e-12));
  }
}

TEST_CASE("half_cycle_amplitudes on clean and scaled sines") {
  const TimeSeries sine = sine_series(1.0, 1.0, 60.0, 1e-6, 0.1);
  const auto peaks = half_cycle_amplitudes(sine, 60.0);
  REQUIRE(peaks.size() == 6);
  for (const auto& p : peaks) {
    CHECK(p.pos == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(p.neg == doctest::Approx(1.0).epsilon(1e-3));
  }

  const TimeSeries half = sine_series(1.0, 0.5, 60.0, 1e-6, 0.1);
  for (const auto& p : half_cycle_amplitudes(half, 60.0)) {
    CHECK(p.pos == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(p.neg == doctest::Approx(0.5).epsilon(1e-3));
  }

  TimeSeries too_short = sine_series(1.0, 1.0, 60.0, 1e-6, 0.01);
  CHECK_THROWS(half_cycle_amplitudes(too_short, 60.0));
}

TEST_CASE("percent_reduction values and monotonicity") {
  CHECK(percent_reduction(77.77, 33.80) == doctest::Approx(0.5653).epsilon(1e-4 / 0.5653));
  CHECK(percent_reduction(67.97, 56.74) == doctest::Approx(0.1652).epsilon(1e-4 / 0.1652));
  CHECK(percent_reduction(5.0, 5.0) == 0.0);
  CHECK_THROWS(percent_reduction(0.0, 1.0));
  CHECK_THROWS(percent_reduction(-2.0, 1.0));

  double prev = percent_reduction(10.0, 0.0);
  for (double after = 1.0; after <= 12.0; after += 1.0) {
    const double r = percent_reduction(10.0, after);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("SimClock step times have no drift") {
  SimClock clock(1e-7, 0.5);
  CHECK(clock.n_steps == 5000000);
  CHECK(clock.time_at(3'000'000) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK_THROWS(SimClock(0.0, 1.0));
}

TEST_CASE("linear_fit_r2 detects lines") {
  std::vector<double> t, y_line, y_curve;
  for (int i = 0; i < 100; ++i) {
    t.push_back(0.1 * i);
    y_line.push_back(60.0 - 0.075 * 0.1 * i);
    y_curve.push_back(60.0 - 0.01 * (0.1 * i) * (0.1 * i));
  }
  CHECK(linear_fit_r2(t, y_line) > 0.999999);
  CHECK(linear_fit_r2(t, y_curve) < 0.999);
}
