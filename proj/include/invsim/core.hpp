#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace invsim {

// Fixed-step time base. Step k is at exactly k*dt (computed by
// multiplication, never by accumulation).
struct SimClock {
  double dt = 1e-6;
  double t_end = 1.0;
  std::size_t n_steps = 0;

  SimClock() { recompute(); }
  SimClock(double dt_, double t_end_) : dt(dt_), t_end(t_end_) { recompute(); }

  void recompute();
  double time_at(std::size_t k) const { return static_cast<double>(k) * dt; }

  friend bool operator==(const SimClock&, const SimClock&) = default;
};

enum class Polarity { ActiveHigh, ActiveLow };

struct PwmConfig {
  double frequency = 100e3;  // Hz
  double duty = 0.5;         // in [0,1]
  double phase = 0.0;        // seconds
  Polarity polarity = Polarity::ActiveHigh;

  friend bool operator==(const PwmConfig&, const PwmConfig&) = default;
};

enum class PwmTarget { Pwm1, Pwm2, Pwm3, Pwm4, Pwm5, Pwm6 };
enum class ForcedLevel { None, High, Low };

// forced_level == None means pass-through of the controller's signal.
struct PwmOverride {
  PwmTarget target = PwmTarget::Pwm1;
  ForcedLevel forced_level = ForcedLevel::None;

  friend bool operator==(const PwmOverride&, const PwmOverride&) = default;
};

// Uniformly sampled channel. samples[k] is the value at k*dt.
struct TimeSeries {
  double dt = 1.0;
  std::vector<double> samples;
  std::string unit;
};

struct HalfCyclePeaks {
  double pos = 0.0;  // max of the positive half-cycle
  double neg = 0.0;  // |min| of the negative half-cycle
};

// D = t_on / (t_on + t_off). Throws on a zero period.
double duty_cycle(double t_on, double t_off);

// Logic level of a PWM signal at time t; override forces a constant level.
int pwm_level(const PwmConfig& config, double t,
              const PwmOverride& override_ = {});

double rms(const TimeSeries& series);

// Per-cycle peaks of both half-cycles. Cycle boundaries are taken from the
// ideal reference phase (cycle c spans [c/f0, (c+1)/f0), positive half
// first), not from zero crossings of the possibly distorted data.
std::vector<HalfCyclePeaks> half_cycle_amplitudes(const TimeSeries& series,
                                                  double f0);

// (before - after) / before. Throws if before <= 0.
double percent_reduction(double before, double after);

// Least-squares R^2 of y against time; used to judge linearity of traces.
double linear_fit_r2(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace invsim
