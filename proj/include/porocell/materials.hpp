#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace porocell::materials {

/// One constituent material. SI units internally (kg/m^3, Pa, m/s); config
/// files carry g/cm^3 and GPa and are converted while parsing.
///
/// Fluids carry a bulk modulus and no shear modulus (or equivalently a sound
/// speed, related through c = sqrt(K/rho)). Simple solids that enter the
/// model only through their longitudinal wave speed (current collector foils)
/// may carry just density and sound_speed.
struct MaterialSpec {
  std::string name;
  double density = 0.0;                // kg/m^3
  std::optional<double> bulk_modulus;  // Pa
  std::optional<double> shear_modulus; // Pa
  std::optional<double> sound_speed;   // m/s

  bool is_fluid() const { return !shear_modulus || *shear_modulus == 0.0; }

  /// Longitudinal speed sqrt((K + 4G/3)/rho), or the stored speed when the
  /// moduli are absent.
  double longitudinal_speed() const;

  void validate() const;
};

struct CompositionEntry {
  std::string material;
  double weight_fraction = 0.0;  // dimensionless, in [0,1]
};

/// Ordered list of weight fractions that must sum to 1 (+- 1e-9).
struct Composition {
  std::vector<CompositionEntry> entries;
  void validate() const;
};

/// Immutable-after-construction material catalog; safe to share across
/// threads once built.
class MaterialLibrary {
 public:
  void add(MaterialSpec spec);
  void add_composition(const std::string& name, Composition comp);

  const MaterialSpec& get(const std::string& name) const;
  const Composition& composition(const std::string& name) const;
  bool has_material(const std::string& name) const;
  bool has_composition(const std::string& name) const;

  std::vector<std::string> material_names() const;
  std::vector<std::string> composition_names() const;

 private:
  std::map<std::string, MaterialSpec> materials_;
  std::map<std::string, Composition> compositions_;
};

/// v_i = (w_i/rho_i) / sum_j (w_j/rho_j). Output preserves entry order.
std::vector<std::pair<std::string, double>> weight_to_volume_fractions(
    const Composition& comp, const MaterialLibrary& lib);

/// rho_eff = sum_i v_i rho_i = 1 / sum_i (w_i/rho_i) for normalized weights.
double effective_density(const Composition& comp, const MaterialLibrary& lib);

/// (K, G) from Young's modulus and Poisson ratio:
///   K = E / (3(1-2nu)),  G = E / (2(1+nu)).
std::pair<double, double> moduli_from_young_poisson(double young, double poisson);

/// Inverse of moduli_from_young_poisson: (E, nu) from (K, G).
std::pair<double, double> young_poisson_from_moduli(double bulk, double shear);

/// Catalog of the constituents used by the bundled prismatic-cell model:
/// graphite, LiFePO4, the two homogenized binder/carbon composites, PP,
/// electrolyte, Cu and Al, plus the electrode / cell compositions as named
/// compositions ("anode_solid", "cathode_solid", "anode_binder_mix",
/// "cathode_binder_mix", "cell").
MaterialLibrary builtin_library();

/// Load a material config file (JSON) on top of a base catalog. Schema:
///   materials.<name>.{density_g_cm3, bulk_gpa, shear_gpa, speed_m_s}
///   compositions.<name> = [{material, weight_pct}, ...]
MaterialLibrary load_library(const std::string& path,
                             MaterialLibrary base = builtin_library());

}  // namespace porocell::materials
