#pragma once

#include <cstddef>
#include <vector>

namespace porocell::waveform {

/// Uniformly sampled time-domain signal.
struct Trace {
  double dt = 0.0;              // s
  std::vector<double> samples;  // arbitrary consistent units

  double time(std::size_t i) const { return dt * static_cast<double>(i); }
  double duration() const { return dt * static_cast<double>(samples.size() - 1); }
  void validate() const;
};

struct PulseSpec {
  double center_frequency = 0.0;  // Hz
  int n_cycles = 3;
  double amplitude = 1.0;
};

/// Hanning-windowed n-cycle tone burst:
///   s(t) = A * 0.5 (1 - cos(2 pi t / T)) * sin(2 pi f0 t),  T = n / f0,
/// zero outside [0, T]. Requires dt < 1/(20 f0).
Trace hanning_pulse(const PulseSpec& spec, double dt);

/// Earliest time where |s| first exceeds threshold_fraction * max|s|,
/// refined by linear interpolation between the bracketing samples.
double pick_first_arrival(const Trace& trace, double threshold_fraction = 0.1);

/// Lag of b relative to a maximizing |cross-correlation|, with parabolic
/// sub-sample refinement. Positive lag means b is delayed.
double cross_correlation_delay(const Trace& a, const Trace& b);

/// Standard product-moment correlation coefficient.
double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Zero-phase moving-average smoothing (forward+backward pass), available for
/// ingested experiment data; not applied anywhere by default.
Trace smooth(const Trace& trace, int half_width);

}  // namespace porocell::waveform
