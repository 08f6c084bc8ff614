#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "porocell/bubbly.hpp"
#include "porocell/common.hpp"
#include "support.hpp"

using namespace porocell;
using namespace porocell::bubbly;
using testsupport::close_abs;
using testsupport::close_rel;

namespace {
constexpr double kPi = std::numbers::pi;

BubblyLiquid adiabatic_lossless() {
  auto l = electrolyte_like_defaults();
  l.surface_tension = 0.0;
  l.viscosity = 0.0;
  l.gas_thermal_diffusivity = 1e-30;  // chi -> 0, Phi -> 3 gamma, no thermal loss
  return l;
}
}  // namespace

TEST_CASE("thermal transfer function limits") {
  const double gamma = 1.4;
  SUBCASE("isothermal limit chi -> inf gives Phi -> 3") {
    const auto phi = thermal_phi(1e6, gamma);
    CHECK(close_abs(phi.real(), 3.0, 1e-3));
    CHECK(close_abs(phi.imag(), 0.0, 1e-2));
  }
  SUBCASE("adiabatic limit chi -> 0 gives Re Phi -> 3 gamma") {
    const auto phi = thermal_phi(1e-8, gamma);
    CHECK(close_rel(phi.real(), 3.0 * gamma, 1e-3));
  }
  SUBCASE("thermal damping is dissipative: Im Phi >= 0 over a wide sweep") {
    for (double e = -6.0; e <= 6.0; e += 0.05) {
      const auto phi = thermal_phi(std::pow(10.0, e), gamma);
      CHECK(phi.imag() >= -1e-12);
    }
  }
  SUBCASE("invalid chi") { CHECK_THROWS_AS(thermal_phi(0.0, gamma), Error); }
}

TEST_CASE("Minnaert frequency in the adiabatic lossless limit") {
  const auto l = adiabatic_lossless();
  const double r = 1e-3;
  const double omega = 2.0 * kPi * 1e3;
  const auto res = resonance_and_damping(l, r, omega);
  const double minnaert =
      std::sqrt(3.0 * l.specific_heat_ratio * l.ambient_pressure / l.density) / r;
  CHECK(close_rel(res.omega0, minnaert, 1e-6));
  // Only acoustic radiation damping remains.
  CHECK(close_rel(res.damping, omega * omega * r / (2.0 * l.sound_speed), 1e-6));
}

TEST_CASE("doubling the radius halves the resonance (sigma = 0)") {
  const auto l = adiabatic_lossless();
  const double omega = 2.0 * kPi * 50e3;
  const auto r1 = resonance_and_damping(l, 10e-6, omega);
  const auto r2 = resonance_and_damping(l, 20e-6, omega);
  CHECK(close_rel(r1.omega0, 2.0 * r2.omega0, 1e-9));
}

TEST_CASE("micron bubbles sit below resonance at 100 kHz") {
  const auto l = electrolyte_like_defaults();
  const double omega = 2.0 * kPi * 100e3;
  const auto res = resonance_and_damping(l, 2.5e-6, omega);
  CHECK(res.omega0 > 5.0 * omega);  // f0 ~ 0.9 MHz for a 2.5 um bubble
}

TEST_CASE("surface tension can remove the resonance for tiny bubbles") {
  auto l = electrolyte_like_defaults();
  l.surface_tension = 5.0;  // exaggerated
  CHECK_THROWS_AS(resonance_and_damping(l, 1e-7, 2.0 * kPi * 1e5), Error);
}

TEST_CASE("bubble-free mixture returns the liquid speed exactly") {
  const auto l = electrolyte_like_defaults();
  BubblePopulation none{3e-6, 0.0};
  const auto pv = bubbly_phase_velocity(l, none, 2.0 * kPi * 500e3);
  CHECK(pv.velocity == l.sound_speed);
  CHECK(pv.velocity_ratio == 1.0);
  CHECK(pv.attenuation == 0.0);
}

TEST_CASE("dilute-limit guard") {
  CHECK_THROWS_AS(BubblePopulation::from_void_fraction(1e-6, 0.02), Error);
  CHECK_NOTHROW(BubblePopulation::from_void_fraction(1e-6, 0.005));
}

TEST_CASE("no velocity reduction above 2.5 um in the ultrasonic range") {
  const auto l = electrolyte_like_defaults();
  for (double f : {100e3, 250e3, 500e3, 1e6, 2.25e6}) {
    for (double e = std::log10(2.5e-6); e <= -3.0; e += 0.05) {
      const double r = std::pow(10.0, e);
      const auto pop = BubblePopulation::from_void_fraction(r, 1e-3);
      const auto pv = bubbly_phase_velocity(l, pop, 2.0 * kPi * f);
      CHECK(std::abs(pv.velocity_ratio - 1.0) < 0.01);
    }
  }
}

TEST_CASE("bubble damping suppresses the reduction across the ultrasonic band") {
  // With the damping law used here the thermal term grows like 1/r^2, so at
  // ultrasonic frequencies no bubble size reaches a 1% velocity reduction at
  // beta = 1e-3; the reduction reappears at audio frequencies (see below).
  const auto l = electrolyte_like_defaults();
  for (double e = std::log10(0.6e-6); e <= std::log10(1e-3); e += 0.02) {
    const double r = std::pow(10.0, e);
    const auto pop = BubblePopulation::from_void_fraction(r, 1e-3);
    const auto pv = bubbly_phase_velocity(l, pop, 2.0 * kPi * 100e3);
    CHECK(std::abs(pv.velocity_ratio - 1.0) < 0.01);
  }
}

TEST_CASE("strong reduction for micron bubbles at audio frequencies") {
  const auto l = electrolyte_like_defaults();
  const auto pop = BubblePopulation::from_void_fraction(1e-6, 1e-3);
  // Deep reduction at 1 kHz, fading away toward the ultrasonic band.
  const double r1k = bubbly_phase_velocity(l, pop, 2.0 * kPi * 1e3).velocity_ratio;
  const double r5k = bubbly_phase_velocity(l, pop, 2.0 * kPi * 5e3).velocity_ratio;
  const double r20k = bubbly_phase_velocity(l, pop, 2.0 * kPi * 20e3).velocity_ratio;
  CHECK(r1k < 0.5);
  CHECK(r1k < r5k);
  CHECK(r5k < r20k);
  // Smaller bubbles reduce the speed more.
  const double omega = 2.0 * kPi * 1e3;
  double prev = 0.0;
  for (double r : {0.7e-6, 1e-6, 2e-6, 4e-6}) {
    const auto p = BubblePopulation::from_void_fraction(r, 1e-3);
    const double ratio = bubbly_phase_velocity(l, p, omega).velocity_ratio;
    CHECK(ratio > prev);
    prev = ratio;
  }
}

TEST_CASE("quasi-static limit matches Wood's equation within 1%") {
  const auto l = adiabatic_lossless();
  const double beta = 1e-3;
  const double r = 1e-3;
  const double omega = 2.0 * kPi * 50.0;  // far below the ~2.9 kHz resonance
  const auto pop = BubblePopulation::from_void_fraction(r, beta);
  const auto pv = bubbly_phase_velocity(l, pop, omega);
  // Wood oracle: 1/(rho_mix c_mix^2) = beta/(gamma p0) + (1-beta)/(rho c^2).
  const double rho_mix = (1.0 - beta) * l.density;
  const double inv = beta / (l.specific_heat_ratio * l.ambient_pressure) +
                     (1.0 - beta) / (l.density * l.sound_speed * l.sound_speed);
  const double wood = std::sqrt(1.0 / (rho_mix * inv));
  CHECK(close_rel(pv.velocity, wood, 0.01));
  // The mixture is far softer than the pure liquid here.
  CHECK(pv.velocity < 0.5 * l.sound_speed);
}

TEST_CASE("velocity reduction is a reduction below resonance") {
  const auto l = electrolyte_like_defaults();
  for (double f : {50e3, 100e3, 400e3}) {
    for (double r : {2e-6, 5e-6, 20e-6}) {
      const double omega = 2.0 * kPi * f;
      const auto res = resonance_and_damping(l, r, omega);
      if (omega > 0.5 * res.omega0) continue;  // keep to the sub-resonant regime
      const auto pop = BubblePopulation::from_void_fraction(r, 5e-4);
      const auto pv = bubbly_phase_velocity(l, pop, omega);
      CHECK(pv.velocity_ratio <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("more gas means slower sound below resonance") {
  const auto l = electrolyte_like_defaults();
  const double omega = 2.0 * kPi * 100e3;
  double prev = 2.0;
  for (double beta : {1e-5, 1e-4, 5e-4, 1e-3, 5e-3}) {
    const auto pop = BubblePopulation::from_void_fraction(1.5e-6, beta);
    const auto pv = bubbly_phase_velocity(l, pop, omega);
    CHECK(pv.velocity_ratio < prev);
    prev = pv.velocity_ratio;
  }
}

TEST_CASE("dispersion relation residual at the returned velocity") {
  const auto l = electrolyte_like_defaults();
  for (double r : {1e-6, 2.5e-6, 10e-6, 100e-6}) {
    for (double f : {100e3, 500e3, 2e6}) {
      const double omega = 2.0 * kPi * f;
      const auto pop = BubblePopulation::from_void_fraction(r, 1e-3);
      const auto pv = bubbly_phase_velocity(l, pop, omega);
      const auto res = resonance_and_damping(l, r, omega);
      const std::complex<double> rhs =
          1.0 + 4.0 * kPi * l.sound_speed * l.sound_speed * pop.number_density * pop.radius /
                    std::complex<double>(res.omega0 * res.omega0 - omega * omega,
                                         2.0 * res.damping * omega);
      const std::complex<double> lhs = pv.slowness_ratio * pv.slowness_ratio;
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
    }
  }
}

TEST_CASE("sweep grid") {
  const auto l = electrolyte_like_defaults();
  SUBCASE("single point equals the scalar operation") {
    const auto grid = velocity_reduction_surface(l, {2e-6}, {150e3}, {1e-4});
    REQUIRE(grid.size() == 1);
    const auto pop = BubblePopulation::from_void_fraction(2e-6, 1e-4);
    const auto pv = bubbly_phase_velocity(l, pop, 2.0 * kPi * 150e3);
    CHECK(grid[0].velocity_ratio == pv.velocity_ratio);
  }
  SUBCASE("row order is (radius, frequency, beta)") {
    const auto grid = velocity_reduction_surface(l, {1e-6, 2e-6}, {1e5, 2e5}, {1e-4, 2e-4});
    REQUIRE(grid.size() == 8);
    CHECK(grid[0].radius == 1e-6);
    CHECK(grid[0].frequency == 1e5);
    CHECK(grid[0].void_fraction == 1e-4);
    CHECK(grid[1].void_fraction == 2e-4);
    CHECK(grid[2].frequency == 2e5);
    CHECK(grid[4].radius == 2e-6);
  }
  SUBCASE("monotone in beta at fixed radius and frequency") {
    const auto grid =
        velocity_reduction_surface(l, {1.5e-6}, {100e3}, {1e-5, 1e-4, 1e-3, 5e-3});
    for (std::size_t i = 1; i < grid.size(); ++i)
      CHECK(grid[i].velocity_ratio < grid[i - 1].velocity_ratio);
  }
  SUBCASE("empty ranges are rejected") {
    CHECK_THROWS_AS(velocity_reduction_surface(l, {}, {1e5}, {1e-4}), Error);
  }
}
