#include "invsim/core.hpp"

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>

namespace invsim {

void SimClock::recompute() {
  if (!(dt > 0.0)) throw std::invalid_argument("SimClock: dt must be > 0");
  if (!(t_end >= 0.0)) throw std::invalid_argument("SimClock: t_end must be >= 0");
  n_steps = static_cast<std::size_t>(std::floor(t_end / dt));
}

double duty_cycle(double t_on, double t_off) {
  if (t_on < 0.0 || t_off < 0.0)
    throw std::invalid_argument("duty_cycle: negative interval");
  const double period = t_on + t_off;
  if (period <= 0.0) throw std::invalid_argument("duty_cycle: zero period");
  return t_on / period;
}

int pwm_level(const PwmConfig& config, double t, const PwmOverride& override_) {
  if (override_.forced_level == ForcedLevel::High) return 1;
  if (override_.forced_level == ForcedLevel::Low) return 0;
  if (!(config.frequency > 0.0))
    throw std::invalid_argument("pwm_level: frequency must be > 0");
  if (config.duty < 0.0 || config.duty > 1.0)
    throw std::invalid_argument("pwm_level: duty outside [0,1]");
  const double period = 1.0 / config.frequency;
  double x = (t - config.phase) / period;
  double frac = x - std::floor(x);
  const int on = frac < config.duty ? 1 : 0;
  return config.polarity == Polarity::ActiveHigh ? on : 1 - on;
}

double rms(const TimeSeries& series) {
  if (series.samples.empty()) throw std::invalid_argument("rms: empty series");
  Eigen::Map<const Eigen::VectorXd> x(series.samples.data(),
                                      static_cast<Eigen::Index>(series.samples.size()));
  return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

std::vector<HalfCyclePeaks> half_cycle_amplitudes(const TimeSeries& series,
                                                  double f0) {
  if (!(f0 > 0.0)) throw std::invalid_argument("half_cycle_amplitudes: f0 must be > 0");
  if (!(series.dt > 0.0)) throw std::invalid_argument("half_cycle_amplitudes: dt must be > 0");
  const double period = 1.0 / f0;
  const double span = static_cast<double>(series.samples.size()) * series.dt;
  const std::size_t n_cycles = static_cast<std::size_t>(std::floor(span / period + 1e-9));
  if (n_cycles < 1)
    throw std::invalid_argument("half_cycle_amplitudes: series spans less than one cycle");

  std::vector<HalfCyclePeaks> out(n_cycles);
  std::vector<bool> seen_pos(n_cycles, false), seen_neg(n_cycles, false);
  for (std::size_t k = 0; k < series.samples.size(); ++k) {
    const double t = static_cast<double>(k) * series.dt;
    const double phase = t / period;
    const std::size_t c = static_cast<std::size_t>(std::floor(phase));
    if (c >= n_cycles) break;
    const double frac = phase - std::floor(phase);
    const double v = series.samples[k];
    if (frac < 0.5) {
      if (!seen_pos[c] || v > out[c].pos) out[c].pos = v;
      seen_pos[c] = true;
    } else {
      if (!seen_neg[c] || -v > out[c].neg) out[c].neg = -v;
      seen_neg[c] = true;
    }
  }
  return out;
}

double percent_reduction(double before, double after) {
  if (!(before > 0.0))
    throw std::invalid_argument("percent_reduction: before must be > 0");
  return (before - after) / before;
}

double linear_fit_r2(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 3)
    throw std::invalid_argument("linear_fit_r2: need >= 3 matching points");
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  Eigen::Map<const Eigen::VectorXd> tv(t.data(), n), yv(y.data(), n);
  const double tm = tv.mean(), ym = yv.mean();
  const Eigen::VectorXd td = tv.array() - tm, yd = yv.array() - ym;
  const double stt = td.squaredNorm(), sty = td.dot(yd), syy = yd.squaredNorm();
  if (syy <= 0.0) return 1.0;  // constant trace fits any line exactly
  if (stt <= 0.0) return 0.0;
  return (sty * sty) / (stt * syy);
}

}  // namespace invsim
