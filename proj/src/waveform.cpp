#include "porocell/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "porocell/common.hpp"

namespace porocell::waveform {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("waveform", what); }
constexpr double kPi = std::numbers::pi;
}  // namespace

void Trace::validate() const {
  if (!(dt > 0.0)) fail("trace sample period must be positive");
  if (samples.size() < 2) fail("trace needs at least 2 samples");
  for (double s : samples)
    if (!std::isfinite(s)) fail("trace contains a non-finite sample");
}

Trace hanning_pulse(const PulseSpec& spec, double dt) {
  if (!(spec.center_frequency > 0.0)) fail("pulse center frequency must be positive");
  if (spec.n_cycles < 1) fail("pulse needs at least one cycle");
  if (!(dt > 0.0) || dt >= 1.0 / (20.0 * spec.center_frequency))
    fail("sampling too coarse: need dt < 1/(20 f0)");

  const double T = spec.n_cycles / spec.center_frequency;
  const auto n = static_cast<std::size_t>(std::floor(T / dt)) + 1;
  Trace out;
  out.dt = dt;
  out.samples.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = dt * static_cast<double>(i);
    if (t > T) {
      out.samples[i] = 0.0;
      continue;
    }
    const double window = 0.5 * (1.0 - std::cos(2.0 * kPi * t / T));
    out.samples[i] = spec.amplitude * window * std::sin(2.0 * kPi * spec.center_frequency * t);
  }
  return out;
}

double pick_first_arrival(const Trace& trace, double threshold_fraction) {
  trace.validate();
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
    fail("threshold fraction must lie in (0,1)");

  double peak = 0.0;
  for (double s : trace.samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) fail("no arrival: trace is identically zero");

  const double threshold = threshold_fraction * peak;
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    const double cur = std::abs(trace.samples[i]);
    if (cur >= threshold) {
      if (i == 0) return 0.0;
      const double prev = std::abs(trace.samples[i - 1]);
      const double frac = (threshold - prev) / (cur - prev);
      return trace.dt * (static_cast<double>(i - 1) + frac);
    }
  }
  fail("no arrival: trace never exceeds the threshold");
}

double cross_correlation_delay(const Trace& a, const Trace& b) {
  a.validate();
  b.validate();
  if (std::abs(a.dt - b.dt) > 1e-15 * a.dt) fail("traces must share the sample period");

  auto centered = [](const Trace& t) {
    double mean = 0.0;
    for (double s : t.samples) mean += s;
    mean /= static_cast<double>(t.samples.size());
    std::vector<double> out(t.samples.size());
    double var = 0.0;
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      out[i] = t.samples[i] - mean;
      var += out[i] * out[i];
    }
    if (var == 0.0) fail("undefined delay: constant trace");
    return out;
  };
  const auto xa = centered(a);
  const auto xb = centered(b);

  const auto na = static_cast<long>(xa.size());
  const auto nb = static_cast<long>(xb.size());
  const long lag_min = -(na - 1);
  const long lag_max = nb - 1;
  std::vector<double> corr(static_cast<std::size_t>(lag_max - lag_min + 1), 0.0);
  long best = 0;
  double best_mag = -1.0;
  for (long lag = lag_min; lag <= lag_max; ++lag) {
    double sum = 0.0;
    const long i0 = std::max(0L, -lag);
    const long i1 = std::min(na - 1, nb - 1 - lag);
    for (long i = i0; i <= i1; ++i) sum += xa[static_cast<std::size_t>(i)] * xb[static_cast<std::size_t>(i + lag)];
    corr[static_cast<std::size_t>(lag - lag_min)] = sum;
    if (std::abs(sum) > best_mag) {
      best_mag = std::abs(sum);
      best = lag;
    }
  }

  // Parabolic refinement on |corr| around the discrete peak.
  double delta = 0.0;
  const auto ib = static_cast<std::size_t>(best - lag_min);
  if (ib > 0 && ib + 1 < corr.size()) {
    const double ym = std::abs(corr[ib - 1]);
    const double y0 = std::abs(corr[ib]);
    const double yp = std::abs(corr[ib + 1]);
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) delta = 0.5 * (ym - yp) / denom;
  }
  return (static_cast<double>(best) + delta) * a.dt;
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) fail("series lengths differ");
  if (x.size() < 2) fail("need at least 2 points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) fail("undefined correlation: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

Trace smooth(const Trace& trace, int half_width) {
  trace.validate();
  if (half_width < 1) return trace;
  auto pass = [&](const std::vector<double>& in) {
    std::vector<double> out(in.size());
    const auto n = static_cast<long>(in.size());
    for (long i = 0; i < n; ++i) {
      double sum = 0.0;
      long cnt = 0;
      for (long j = std::max(0L, i - half_width); j <= std::min(n - 1, i + half_width); ++j) {
        sum += in[static_cast<std::size_t>(j)];
        ++cnt;
      }
      out[static_cast<std::size_t>(i)] = sum / static_cast<double>(cnt);
    }
    return out;
  };
  Trace out = trace;
  out.samples = pass(pass(trace.samples));
  return out;
}

}  // namespace porocell::waveform
