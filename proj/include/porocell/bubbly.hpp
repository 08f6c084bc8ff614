#pragma once

#include <complex>
#include <vector>

namespace porocell::bubbly {

/// Host liquid of a dilute bubbly mixture.
struct BubblyLiquid {
  double sound_speed = 0.0;       // c, m/s
  double density = 0.0;           // rho, kg/m^3
  double surface_tension = 0.0;   // sigma, N/m
  double viscosity = 0.0;         // mu, Pa s
  double ambient_pressure = 0.0;  // p0, Pa
  double specific_heat_ratio = 0.0;      // gamma > 1
  double gas_thermal_diffusivity = 0.0;  // D, m^2/s

  void validate() const;
};

/// Water-like defaults at 1 atm applied to the electrolyte host; the paper's
/// sources do not give the electrolyte constants, so these are documented,
/// overridable assumptions.
BubblyLiquid electrolyte_like_defaults();

/// Monodisperse bubble population.
struct BubblePopulation {
  double radius = 0.0;          // r, m
  double number_density = 0.0;  // n, 1/m^3

  /// n = 3 beta / (4 pi r^3) for a void fraction beta.
  static BubblePopulation from_void_fraction(double radius, double void_fraction);
  double void_fraction() const;
  void validate() const;
};

/// Thermal transfer function
///   Phi = 3 gamma / (1 - 3(gamma-1) i chi [ (i/chi)^{1/2} coth((i/chi)^{1/2}) - 1 ]),
/// chi = D / (omega r^2); principal branch of the complex square root.
std::complex<double> thermal_phi(double chi, double gamma);

struct Resonance {
  double omega0 = 0.0;   // rad/s
  double damping = 0.0;  // b, 1/s
};

/// omega0^2 = (p0 / rho r^2)(Re Phi - 2 sigma/(r p0));
/// b = 2 mu / rho r^2 + (p0 / 2 rho r^2) Im Phi + omega^2 r / 2c.
Resonance resonance_and_damping(const BubblyLiquid& liquid, double radius, double omega);

struct PhaseVelocity {
  double velocity = 0.0;        // c_m, m/s
  double velocity_ratio = 0.0;  // c_m / c
  double attenuation = 0.0;     // c * Im(complex slowness), dimensionless proxy
  std::complex<double> slowness_ratio;  // sqrt(c^2/c_m^2), principal branch
};

/// Dispersion relation c^2/c_m^2 = 1 + 4 pi c^2 n r / (omega0^2 - omega^2 + 2 i b omega).
/// The reported phase velocity is c / Re[sqrt(c^2/c_m^2)].
PhaseVelocity bubbly_phase_velocity(const BubblyLiquid& liquid,
                                    const BubblePopulation& population, double omega);

struct GridPoint {
  double radius = 0.0;         // m
  double frequency = 0.0;      // Hz
  double void_fraction = 0.0;  // beta
  double velocity_ratio = 0.0;
};

/// Cartesian sweep over radius/frequency/void-fraction; rows ordered by
/// (radius, frequency, beta) regardless of how the work is scheduled.
std::vector<GridPoint> velocity_reduction_surface(const BubblyLiquid& liquid,
                                                  const std::vector<double>& radii,
                                                  const std::vector<double>& frequencies,
                                                  const std::vector<double>& void_fractions);

}  // namespace porocell::bubbly
