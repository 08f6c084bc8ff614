#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "porocell/common.hpp"
#include "porocell/waveform.hpp"
#include "support.hpp"

using namespace porocell;
using namespace porocell::waveform;
using testsupport::close_abs;
using testsupport::close_rel;

namespace {
constexpr double kPi = std::numbers::pi;

/// Continuous Hanning tone burst, for synthesizing shifted copies.
double burst(double t, double f0, int cycles) {
  const double T = cycles / f0;
  if (t < 0.0 || t > T) return 0.0;
  return 0.5 * (1.0 - std::cos(2.0 * kPi * t / T)) * std::sin(2.0 * kPi * f0 * t);
}

Trace sample_burst(double f0, int cycles, double dt, double shift, double length) {
  Trace t;
  t.dt = dt;
  const auto n = static_cast<std::size_t>(length / dt);
  t.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.samples[i] = burst(i * dt - shift, f0, cycles);
  return t;
}

}  // namespace

TEST_CASE("hanning pulse endpoints and duration") {
  const PulseSpec spec{500e3, 3, 1.0};
  const double dt = 1e-8;
  const auto t = hanning_pulse(spec, dt);
  CHECK(t.samples.front() == 0.0);
  CHECK(close_abs(t.samples.back(), 0.0, 1e-12));
  // T = n/f0 = 6 us.
  CHECK(close_abs(t.duration(), 6e-6, 2.0 * dt));
  // Envelope peaks mid-burst: the largest |s| sits in the middle third.
  std::size_t imax = 0;
  for (std::size_t i = 0; i < t.samples.size(); ++i)
    if (std::abs(t.samples[i]) > std::abs(t.samples[imax])) imax = i;
  CHECK(t.time(imax) > 2e-6);
  CHECK(t.time(imax) < 4e-6);
  CHECK(std::abs(t.samples[imax]) <= 1.0);
  CHECK(std::abs(t.samples[imax]) > 0.9);
}

TEST_CASE("hanning pulse spectral peak sits at the center frequency") {
  const PulseSpec spec{500e3, 3, 1.0};
  const auto t = hanning_pulse(spec, 2e-8);
  // DFT oracle on a fine frequency grid.
  double best_f = 0.0, best_mag = -1.0;
  for (double f = 50e3; f <= 2e6; f += 5e3) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      const double ph = 2.0 * kPi * f * t.time(i);
      re += t.samples[i] * std::cos(ph);
      im -= t.samples[i] * std::sin(ph);
    }
    const double mag = re * re + im * im;
    if (mag > best_mag) {
      best_mag = mag;
      best_f = f;
    }
  }
  CHECK(close_rel(best_f, 500e3, 0.05));
}

TEST_CASE("sampling bound is enforced") {
  CHECK_THROWS_AS(hanning_pulse({500e3, 3, 1.0}, 1.1e-7), Error);  // 1/(20 f0) = 1e-7
  CHECK_THROWS_AS(hanning_pulse({0.0, 3, 1.0}, 1e-9), Error);
}

TEST_CASE("first-arrival pick is shift-equivariant") {
  const double dt = 5e-9;
  const double shift = 1.7e-6;
  const auto a = sample_burst(500e3, 3, dt, 0.2e-6, 12e-6);
  const auto b = sample_burst(500e3, 3, dt, 0.2e-6 + shift, 12e-6);
  const double ta = pick_first_arrival(a, 0.1);
  const double tb = pick_first_arrival(b, 0.1);
  CHECK(close_abs(tb - ta, shift, dt));
}

TEST_CASE("pick is invariant under positive amplitude scaling") {
  const auto a = sample_burst(500e3, 3, 5e-9, 1e-6, 12e-6);
  auto scaled = a;
  for (auto& s : scaled.samples) s *= 731.5;
  CHECK(pick_first_arrival(a, 0.1) == pick_first_arrival(scaled, 0.1));
}

TEST_CASE("all-zero trace has no arrival") {
  Trace z;
  z.dt = 1e-8;
  z.samples.assign(100, 0.0);
  CHECK_THROWS_AS(pick_first_arrival(z, 0.1), Error);
}

TEST_CASE("cross-correlation delay") {
  const double dt = 5e-9;
  SUBCASE("integer-sample shift is exact") {
    const auto a = sample_burst(500e3, 3, dt, 1e-6, 14e-6);
    const auto b = sample_burst(500e3, 3, dt, 1e-6 + 123 * dt, 14e-6);
    CHECK(close_abs(cross_correlation_delay(a, b), 123 * dt, 1e-15));
  }
  SUBCASE("half-sample shift resolves within 0.1 dt") {
    const auto a = sample_burst(500e3, 3, dt, 1e-6, 14e-6);
    const auto b = sample_burst(500e3, 3, dt, 1e-6 + 77.5 * dt, 14e-6);
    CHECK(close_abs(cross_correlation_delay(a, b), 77.5 * dt, 0.1 * dt));
  }
  SUBCASE("anti-correlated copy gives the same lag") {
    const auto a = sample_burst(500e3, 3, dt, 1e-6, 14e-6);
    auto b = sample_burst(500e3, 3, dt, 1e-6 + 50 * dt, 14e-6);
    for (auto& s : b.samples) s = -s;
    // Brute-force oracle over |correlation| is the definition itself; the
    // flipped copy must land on the same lag.
    CHECK(close_abs(cross_correlation_delay(a, b), 50 * dt, 0.1 * dt));
  }
  SUBCASE("antisymmetry") {
    const auto a = sample_burst(500e3, 3, dt, 1e-6, 14e-6);
    const auto b = sample_burst(500e3, 3, dt, 2.3e-6, 14e-6);
    const double ab = cross_correlation_delay(a, b);
    const double ba = cross_correlation_delay(b, a);
    CHECK(close_abs(ab + ba, 0.0, 0.2 * dt));
  }
  SUBCASE("constant traces are degenerate") {
    Trace c;
    c.dt = dt;
    c.samples.assign(64, 3.25);
    CHECK_THROWS_AS(cross_correlation_delay(c, c), Error);
  }
}

TEST_CASE("pearson correlation") {
  SUBCASE("exact anti-correlation y = -2x + 7") {
    std::vector<double> x, y;
    for (int i = 0; i < 57; ++i) {
      x.push_back(0.31 * i - 4.0);
      y.push_back(-2.0 * x.back() + 7.0);
    }
    CHECK(close_abs(pearson_correlation(x, y), -1.0, 1e-12));
  }
  SUBCASE("identity gives +1") {
    std::vector<double> x;
    for (int i = 0; i < 20; ++i) x.push_back(i * i * 0.1);
    CHECK(close_abs(pearson_correlation(x, x), 1.0, 1e-12));
  }
  SUBCASE("matches the brute-force two-pass oracle on random series") {
    std::mt19937 gen(2024);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(100), y(100);
      for (int i = 0; i < 100; ++i) {
        x[i] = dist(gen);
        y[i] = 0.4 * x[i] + dist(gen);
      }
      // Long-double oracle.
      long double mx = 0.0L, my = 0.0L;
      for (int i = 0; i < 100; ++i) {
        mx += x[i];
        my += y[i];
      }
      mx /= 100.0L;
      my /= 100.0L;
      long double sxx = 0.0L, syy = 0.0L, sxy = 0.0L;
      for (int i = 0; i < 100; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
      }
      const double oracle = static_cast<double>(sxy / std::sqrt(sxx * syy));
      CHECK(close_abs(pearson_correlation(x, y), oracle, 1e-12));
    }
  }
  SUBCASE("affine invariance and slope-sign flip") {
    std::mt19937 gen(5);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> x(64), y(64), y_pos(64), y_neg(64);
    for (int i = 0; i < 64; ++i) {
      x[i] = dist(gen);
      y[i] = dist(gen);
      y_pos[i] = 3.5 * y[i] + 11.0;
      y_neg[i] = -0.25 * y[i] + 2.0;
    }
    const double base = pearson_correlation(x, y);
    CHECK(close_abs(pearson_correlation(x, y_pos), base, 1e-12));
    CHECK(close_abs(pearson_correlation(x, y_neg), -base, 1e-12));
  }
  SUBCASE("zero variance is an error") {
    std::vector<double> x = {1.0, 1.0, 1.0};
    std::vector<double> y = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(pearson_correlation(x, y), Error);
    CHECK_THROWS_AS(pearson_correlation(y, x), Error);
    CHECK_THROWS_AS(pearson_correlation({1.0}, {2.0}), Error);
  }
}
