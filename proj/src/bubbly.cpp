#include "porocell/bubbly.hpp"

#include <cmath>
#include <numbers>

#include "porocell/common.hpp"

namespace porocell::bubbly {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("bubbly", what); }
constexpr double kPi = std::numbers::pi;
constexpr double kDiluteLimit = 0.01;
}  // namespace

void BubblyLiquid::validate() const {
  if (!(sound_speed > 0.0) || !(density > 0.0)) fail("liquid speed and density must be positive");
  if (surface_tension < 0.0 || viscosity < 0.0) fail("sigma and mu must be non-negative");
  if (!(ambient_pressure > 0.0)) fail("ambient pressure must be positive");
  if (!(specific_heat_ratio > 1.0)) fail("specific heat ratio must exceed 1");
  if (!(gas_thermal_diffusivity > 0.0)) fail("gas thermal diffusivity must be positive");
}

BubblyLiquid electrolyte_like_defaults() {
  BubblyLiquid l;
  l.sound_speed = std::sqrt(1.0e9 / 1270.0);  // electrolyte K = 1 GPa, rho = 1270
  l.density = 1270.0;
  l.surface_tension = 0.0726;  // water at room temperature
  l.viscosity = 1.0e-3;
  l.ambient_pressure = 101325.0;
  l.specific_heat_ratio = 1.4;           // diatomic gas
  l.gas_thermal_diffusivity = 1.9e-5;    // air
  return l;
}

BubblePopulation BubblePopulation::from_void_fraction(double radius, double beta) {
  if (!(radius > 0.0)) fail("bubble radius must be positive");
  if (beta < 0.0) fail("void fraction must be non-negative");
  BubblePopulation p;
  p.radius = radius;
  p.number_density = 3.0 * beta / (4.0 * kPi * radius * radius * radius);
  p.validate();
  return p;
}

double BubblePopulation::void_fraction() const {
  return number_density * 4.0 / 3.0 * kPi * radius * radius * radius;
}

void BubblePopulation::validate() const {
  if (!(radius > 0.0)) fail("bubble radius must be positive");
  if (number_density < 0.0) fail("number density must be non-negative");
  if (void_fraction() >= kDiluteLimit)
    fail("void fraction " + format_sig(void_fraction()) + " outside the dilute regime (< 0.01)");
}

std::complex<double> thermal_phi(double chi, double gamma) {
  if (!(chi > 0.0)) fail("chi must be positive");
  if (!(gamma > 1.0)) fail("gamma must exceed 1");
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> z = std::sqrt(i / chi);  // principal branch, Re z > 0
  // z coth z, evaluated via the series near zero to dodge cancellation.
  std::complex<double> zcoth;
  if (std::abs(z) < 1e-4) {
    const std::complex<double> z2 = z * z;
    zcoth = 1.0 + z2 / 3.0 - z2 * z2 / 45.0;
  } else {
    zcoth = z / std::tanh(z);
  }
  const std::complex<double> denom = 1.0 - 3.0 * (gamma - 1.0) * i * chi * (zcoth - 1.0);
  return 3.0 * gamma / denom;
}

Resonance resonance_and_damping(const BubblyLiquid& liquid, double r, double omega) {
  liquid.validate();
  if (!(r > 0.0)) fail("bubble radius must be positive");
  if (!(omega > 0.0)) fail("angular frequency must be positive");

  const double chi = liquid.gas_thermal_diffusivity / (omega * r * r);
  const std::complex<double> phi = thermal_phi(chi, liquid.specific_heat_ratio);
  const double p0 = liquid.ambient_pressure;
  const double rho = liquid.density;

  const double stiffness = phi.real() - 2.0 * liquid.surface_tension / (r * p0);
  if (stiffness <= 0.0)
    fail("no resonance: Re Phi - 2 sigma/(r p0) <= 0 (surface tension dominates at r = " +
         format_sig(r) + " m)");

  Resonance out;
  out.omega0 = std::sqrt(p0 / (rho * r * r) * stiffness);
  out.damping = 2.0 * liquid.viscosity / (rho * r * r) +
                p0 / (2.0 * rho * r * r) * phi.imag() +
                omega * omega * r / (2.0 * liquid.sound_speed);
  return out;
}

PhaseVelocity bubbly_phase_velocity(const BubblyLiquid& liquid,
                                    const BubblePopulation& population, double omega) {
  liquid.validate();
  population.validate();
  if (!(omega > 0.0)) fail("angular frequency must be positive");

  PhaseVelocity out;
  if (population.number_density == 0.0) {
    out.velocity = liquid.sound_speed;
    out.velocity_ratio = 1.0;
    out.attenuation = 0.0;
    out.slowness_ratio = {1.0, 0.0};
    return out;
  }

  const Resonance res = resonance_and_damping(liquid, population.radius, omega);
  const double c = liquid.sound_speed;
  const std::complex<double> denom(res.omega0 * res.omega0 - omega * omega,
                                   2.0 * res.damping * omega);
  const std::complex<double> c2_over_cm2 =
      1.0 + 4.0 * kPi * c * c * population.number_density * population.radius / denom;

  // Principal branch of the complex slowness; its real part defines the
  // phase velocity, its imaginary part the attenuation proxy.
  const std::complex<double> slowness = std::sqrt(c2_over_cm2);
  out.slowness_ratio = slowness;
  out.velocity = c / slowness.real();
  out.velocity_ratio = 1.0 / slowness.real();
  out.attenuation = slowness.imag();
  return out;
}

std::vector<GridPoint> velocity_reduction_surface(const BubblyLiquid& liquid,
                                                  const std::vector<double>& radii,
                                                  const std::vector<double>& frequencies,
                                                  const std::vector<double>& void_fractions) {
  if (radii.empty() || frequencies.empty() || void_fractions.empty())
    fail("sweep ranges must be non-empty");
  for (double r : radii)
    if (!(r > 0.0)) fail("sweep radii must be positive");
  for (double f : frequencies)
    if (!(f > 0.0)) fail("sweep frequencies must be positive");

  std::vector<GridPoint> grid(radii.size() * frequencies.size() * void_fractions.size());
  std::vector<std::string> errors(grid.size());
  const auto nf = static_cast<long>(frequencies.size());
  const auto nb = static_cast<long>(void_fractions.size());
  const auto total = static_cast<long>(grid.size());
  // Points are independent; exceptions are captured per point and the lowest
  // index rethrows so the outcome does not depend on scheduling.
#pragma omp parallel for schedule(static)
  for (long idx = 0; idx < total; ++idx) {
    const long ir = idx / (nf * nb);
    const long jf = (idx / nb) % nf;
    const long kb = idx % nb;
    GridPoint p;
    p.radius = radii[static_cast<std::size_t>(ir)];
    p.frequency = frequencies[static_cast<std::size_t>(jf)];
    p.void_fraction = void_fractions[static_cast<std::size_t>(kb)];
    try {
      const auto pop = BubblePopulation::from_void_fraction(p.radius, p.void_fraction);
      p.velocity_ratio =
          bubbly_phase_velocity(liquid, pop, 2.0 * kPi * p.frequency).velocity_ratio;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(idx)] = e.what();
    }
    grid[static_cast<std::size_t>(idx)] = p;
  }
  for (const auto& err : errors)
    if (!err.empty()) throw Error("bubbly", "sweep point failed: " + err);
  return grid;
}

}  // namespace porocell::bubbly
