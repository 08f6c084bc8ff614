#pragma once

namespace porocell::biot {

/// Lossless fluid-saturated porous medium. The frame moduli (Km, Gm) are the
/// drained-skeleton moduli, distinct from the grain moduli (Ks, Gs).
struct BiotMedium {
  double porosity = 0.0;       // phi in (0,1)
  double solid_bulk = 0.0;     // Ks, Pa
  double solid_shear = 0.0;    // Gs, Pa
  double fluid_bulk = 0.0;     // Kf, Pa
  double frame_bulk = 0.0;     // Km, Pa
  double frame_shear = 0.0;    // Gm, Pa
  double solid_density = 0.0;  // rho_s, kg/m^3
  double fluid_density = 0.0;  // rho_f, kg/m^3
  double tortuosity = 1.0;     // tau >= 1

  void validate() const;
};

/// Stress-strain coefficients and the inertial coupling terms:
///   B = [[K + 4Gm/3, C], [C, R]],  D = [[rho11, rho12], [rho12, rho22]].
struct BiotCoefficients {
  double K = 0.0;  // Pa
  double C = 0.0;  // Pa
  double R = 0.0;  // Pa
  double frame_shear = 0.0;  // Gm carried along for the B matrix
  double rho11 = 0.0;  // kg/m^3
  double rho12 = 0.0;  // <= 0
  double rho22 = 0.0;

  double b11() const { return K + 4.0 * frame_shear / 3.0; }
  double b12() const { return C; }
  double b22() const { return R; }
};

/// The two longitudinal roots of det(D^-1 B - c^2 I) = 0. The fast root has
/// solid and fluid moving in phase (positive amplitude ratio), the slow root
/// in counter-phase.
struct LongitudinalSolution {
  double c_fast = 0.0;  // m/s
  double c_slow = 0.0;  // m/s
  double fast_amplitude_ratio = 0.0;  // e_f0 / e_m0 for the fast root
  double slow_amplitude_ratio = 0.0;  // e_f0 / e_m0 for the slow root
};

/// Berryman-style spherical-grain estimate used as the default when a
/// medium does not specify tortuosity: tau = 1 + (1/phi - 1)/2.
double default_tortuosity(double porosity);

/// Suspension approximation of the drained frame moduli:
///   Km = 4 Gs Ks (1-phi) / (4 Gs + 3 phi Ks)
///   Gm = Gs (8 Gs + 9 Ks)(1-phi) / (8 Gs + 9 Ks + 6 (2 Gs + Ks) phi)
struct FrameModuli {
  double bulk = 0.0;
  double shear = 0.0;
};
FrameModuli frame_moduli_suspension(double solid_bulk, double solid_shear, double porosity);

BiotCoefficients biot_coefficients(const BiotMedium& medium);

/// Closed-form quadratic in c_p^2 (characteristic polynomial of D^-1 B); a
/// generic eigensolver lives in the tests as the independent oracle.
LongitudinalSolution longitudinal_velocities(const BiotCoefficients& coeffs);

/// Convenience: coefficients + velocities in one call.
LongitudinalSolution solve(const BiotMedium& medium);

}  // namespace porocell::biot
