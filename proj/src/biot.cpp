#include "porocell/biot.hpp"

#include <cmath>

#include "porocell/common.hpp"

namespace porocell::biot {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("biot", what); }
}  // namespace

void BiotMedium::validate() const {
  if (!(porosity > 0.0 && porosity < 1.0)) fail("porosity must lie in (0,1)");
  if (!(solid_bulk > 0.0 && solid_shear > 0.0)) fail("grain moduli must be positive");
  if (!(fluid_bulk > 0.0)) fail("fluid bulk modulus must be positive");
  if (!(frame_bulk > 0.0 && frame_shear > 0.0)) fail("frame moduli must be positive");
  if (frame_bulk > solid_bulk) fail("frame bulk modulus exceeds grain bulk modulus");
  if (!(solid_density > 0.0 && fluid_density > 0.0)) fail("densities must be positive");
  if (!(tortuosity >= 1.0)) fail("tortuosity must be >= 1");
}

double default_tortuosity(double porosity) {
  if (!(porosity > 0.0 && porosity <= 1.0)) fail("porosity must lie in (0,1]");
  return 1.0 + 0.5 * (1.0 / porosity - 1.0);
}

FrameModuli frame_moduli_suspension(double Ks, double Gs, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) fail("porosity must lie in [0,1]");
  if (!(Ks > 0.0 && Gs > 0.0)) fail("grain moduli must be positive");
  FrameModuli out;
  out.bulk = 4.0 * Gs * Ks * (1.0 - phi) / (4.0 * Gs + 3.0 * phi * Ks);
  out.shear = Gs * (8.0 * Gs + 9.0 * Ks) * (1.0 - phi) /
              (8.0 * Gs + 9.0 * Ks + 6.0 * (2.0 * Gs + Ks) * phi);
  return out;
}

BiotCoefficients biot_coefficients(const BiotMedium& m) {
  m.validate();
  const double phi = m.porosity;
  const double km_ks = m.frame_bulk / m.solid_bulk;
  const double denom = 1.0 - phi - km_ks + phi * m.solid_bulk / m.fluid_bulk;
  if (std::abs(denom) < 1e-12)
    fail("vanishing denominator 1 - phi - Km/Ks + phi Ks/Kf (phi -> 0 with Km -> Ks limit)");

  BiotCoefficients c;
  c.K = ((1.0 - phi) * (1.0 - phi - km_ks) * m.solid_bulk +
         phi * m.solid_bulk * m.frame_bulk / m.fluid_bulk) / denom;
  c.C = phi * (1.0 - phi - km_ks) * m.solid_bulk / denom;
  c.R = phi * phi * m.solid_bulk / denom;
  c.frame_shear = m.frame_shear;
  c.rho12 = -phi * m.fluid_density * (m.tortuosity - 1.0);
  c.rho11 = (1.0 - phi) * m.solid_density - c.rho12;
  c.rho22 = phi * m.fluid_density - c.rho12;
  return c;
}

LongitudinalSolution longitudinal_velocities(const BiotCoefficients& c) {
  // det(B - c^2 D) = 0 expanded as a quadratic a x^2 - b x + det(B) = 0 in
  // x = c^2, solved with the numerically stable variant of the formula.
  const double detD = c.rho11 * c.rho22 - c.rho12 * c.rho12;
  if (!(detD > 0.0)) fail("density matrix is singular or indefinite");
  const double a = detD;
  const double b = c.b11() * c.rho22 + c.b22() * c.rho11 - 2.0 * c.b12() * c.rho12;
  const double detB = c.b11() * c.b22() - c.b12() * c.b12();
  const double disc = b * b - 4.0 * a * detB;
  if (disc < 0.0) fail("complex longitudinal roots; medium is not physically valid");
  const double q = 0.5 * (b + std::sqrt(disc));  // b > 0 for a valid medium
  const double x1 = q / a;
  const double x2 = detB / q;
  const double x_fast = std::max(x1, x2);
  const double x_slow = std::min(x1, x2);
  if (!(x_slow > 0.0)) fail("non-positive squared velocity root; medium is not physically valid");

  auto amplitude_ratio = [&](double x) {
    // (B - x D) e = 0; pick the row with the better-conditioned denominator.
    const double r1num = -(c.b11() - x * c.rho11);
    const double r1den = c.b12() - x * c.rho12;
    const double r2num = -(c.b12() - x * c.rho12);
    const double r2den = c.b22() - x * c.rho22;
    return std::abs(r1den) >= std::abs(r2den) ? r1num / r1den : r2num / r2den;
  };

  LongitudinalSolution out;
  out.c_fast = std::sqrt(x_fast);
  out.c_slow = std::sqrt(x_slow);
  out.fast_amplitude_ratio = amplitude_ratio(x_fast);
  out.slow_amplitude_ratio = amplitude_ratio(x_slow);
  return out;
}

LongitudinalSolution solve(const BiotMedium& medium) {
  return longitudinal_velocities(biot_coefficients(medium));
}

}  // namespace porocell::biot
