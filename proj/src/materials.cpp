#include "porocell/materials.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "json.hpp"
#include "porocell/common.hpp"

namespace porocell::materials {

namespace {
constexpr double kWeightSumTol = 1e-9;

[[noreturn]] void fail(const std::string& what) { throw Error("materials", what); }
}  // namespace

double MaterialSpec::longitudinal_speed() const {
  if (bulk_modulus) {
    const double g = shear_modulus.value_or(0.0);
    return std::sqrt((*bulk_modulus + 4.0 * g / 3.0) / density);
  }
  if (sound_speed) return *sound_speed;
  fail("material '" + name + "' has neither moduli nor a sound speed");
}

void MaterialSpec::validate() const {
  if (name.empty()) fail("material with empty name");
  if (!(density > 0.0)) fail("material '" + name + "' has non-positive density");
  if (bulk_modulus && *bulk_modulus < 0.0) fail("material '" + name + "' has negative bulk modulus");
  if (shear_modulus && *shear_modulus < 0.0) fail("material '" + name + "' has negative shear modulus");
  if (sound_speed && *sound_speed <= 0.0) fail("material '" + name + "' has non-positive sound speed");
  if (!bulk_modulus && !sound_speed)
    fail("material '" + name + "' needs a bulk modulus or a sound speed");
  if (bulk_modulus && sound_speed && is_fluid()) {
    // Redundant fluid specification must be consistent: c = sqrt(K/rho).
    const double c = std::sqrt(*bulk_modulus / density);
    if (std::abs(c - *sound_speed) > 1e-6 * c)
      fail("material '" + name + "': sound speed inconsistent with sqrt(K/rho)");
  }
}

void Composition::validate() const {
  if (entries.empty()) fail("empty composition");
  double sum = 0.0;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.weight_fraction < 0.0 || e.weight_fraction > 1.0)
      fail("weight fraction of '" + e.material + "' outside [0,1]");
    if (!seen.insert(e.material).second) fail("duplicate entry '" + e.material + "'");
    sum += e.weight_fraction;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    fail("weight fractions sum to " + format_sig(sum) + ", expected 1");
}

void MaterialLibrary::add(MaterialSpec spec) {
  spec.validate();
  materials_[spec.name] = std::move(spec);
}

void MaterialLibrary::add_composition(const std::string& name, Composition comp) {
  comp.validate();
  for (const auto& e : comp.entries)
    if (!has_material(e.material))
      fail("composition '" + name + "' references unknown material '" + e.material + "'");
  compositions_[name] = std::move(comp);
}

const MaterialSpec& MaterialLibrary::get(const std::string& name) const {
  auto it = materials_.find(name);
  if (it == materials_.end()) fail("unknown material '" + name + "'");
  return it->second;
}

const Composition& MaterialLibrary::composition(const std::string& name) const {
  auto it = compositions_.find(name);
  if (it == compositions_.end()) fail("unknown composition '" + name + "'");
  return it->second;
}

bool MaterialLibrary::has_material(const std::string& name) const {
  return materials_.count(name) != 0;
}

bool MaterialLibrary::has_composition(const std::string& name) const {
  return compositions_.count(name) != 0;
}

std::vector<std::string> MaterialLibrary::material_names() const {
  std::vector<std::string> names;
  names.reserve(materials_.size());
  for (const auto& [k, v] : materials_) names.push_back(k);
  return names;
}

std::vector<std::string> MaterialLibrary::composition_names() const {
  std::vector<std::string> names;
  names.reserve(compositions_.size());
  for (const auto& [k, v] : compositions_) names.push_back(k);
  return names;
}

std::vector<std::pair<std::string, double>> weight_to_volume_fractions(
    const Composition& comp, const MaterialLibrary& lib) {
  comp.validate();
  double denom = 0.0;
  for (const auto& e : comp.entries) {
    const auto& m = lib.get(e.material);
    if (!(m.density > 0.0)) fail("non-positive density for '" + e.material + "'");
    denom += e.weight_fraction / m.density;
  }
  std::vector<std::pair<std::string, double>> out;
  out.reserve(comp.entries.size());
  for (const auto& e : comp.entries)
    out.emplace_back(e.material, e.weight_fraction / lib.get(e.material).density / denom);
  return out;
}

double effective_density(const Composition& comp, const MaterialLibrary& lib) {
  double rho = 0.0;
  for (const auto& [name, v] : weight_to_volume_fractions(comp, lib))
    rho += v * lib.get(name).density;
  return rho;
}

std::pair<double, double> moduli_from_young_poisson(double young, double poisson) {
  if (!(young > 0.0)) fail("Young's modulus must be positive");
  if (!(poisson > -1.0 && poisson < 0.5))
    fail("Poisson ratio " + format_sig(poisson) + " outside (-1, 0.5)");
  const double bulk = young / (3.0 * (1.0 - 2.0 * poisson));
  const double shear = young / (2.0 * (1.0 + poisson));
  return {bulk, shear};
}

std::pair<double, double> young_poisson_from_moduli(double bulk, double shear) {
  if (!(bulk > 0.0) || !(shear > 0.0)) fail("moduli must be positive");
  const double young = 9.0 * bulk * shear / (3.0 * bulk + shear);
  const double poisson = (3.0 * bulk - 2.0 * shear) / (2.0 * (3.0 * bulk + shear));
  return {young, poisson};
}

MaterialLibrary builtin_library() {
  using units::kGPa;
  using units::kGramPerCm3;
  MaterialLibrary lib;

  // Electrode constituents (densities in g/cm^3 from the composition tables).
  lib.add({"graphite", 2.26 * kGramPerCm3, 27.0 * kGPa, 12.5 * kGPa, {}});
  lib.add({"LiFePO4", 3.5 * kGramPerCm3, 95.0 * kGPa, 45.0 * kGPa, {}});
  lib.add({"CMC", 1.6 * kGramPerCm3, 0.0, 0.0, {}});
  lib.add({"SBR", 1.52 * kGramPerCm3, 0.0, 0.0, {}});
  lib.add({"PVDF", 1.78 * kGramPerCm3, 0.0, 0.0, {}});
  lib.add({"carbon_black", 2.1 * kGramPerCm3, 0.0, 0.0, {}});

  lib.add({"PP", 0.9 * kGramPerCm3, 1.38 * kGPa, 0.92 * kGPa, {}});
  lib.add({"electrolyte", 1.27 * kGramPerCm3, 1.0 * kGPa, {}, {}});
  lib.add({"Cu", 8.96 * kGramPerCm3, {}, {}, 4600.0});
  lib.add({"Al", 2.7 * kGramPerCm3, {}, {}, 6320.0});

  // Binder + carbon black is treated as one homogenized material per
  // electrode. Moduli are the measured composite pairs; densities follow
  // from the binder sub-compositions below.
  Composition anode_binder_mix{{{"CMC", 2.25 / 5.5}, {"SBR", 2.25 / 5.5}, {"carbon_black", 1.0 / 5.5}}};
  Composition cathode_binder_mix{{{"PVDF", 2.5 / 6.5}, {"carbon_black", 4.0 / 6.5}}};
  lib.add({"anode_binder", effective_density(anode_binder_mix, lib), 0.56 * kGPa, 0.19 * kGPa, {}});
  lib.add({"cathode_binder", effective_density(cathode_binder_mix, lib), 1.78 * kGPa, 0.59 * kGPa, {}});
  lib.add_composition("anode_binder_mix", anode_binder_mix);
  lib.add_composition("cathode_binder_mix", cathode_binder_mix);

  // Electrode solid phases by weight.
  lib.add_composition("anode_solid", Composition{{{"graphite", 0.945},
                                                  {"CMC", 0.0225},
                                                  {"SBR", 0.0225},
                                                  {"carbon_black", 0.01}}});
  lib.add_composition("cathode_solid", Composition{{{"LiFePO4", 0.935},
                                                    {"PVDF", 0.025},
                                                    {"carbon_black", 0.04}}});

  // Whole-cell composition by weight.
  lib.add_composition("cell", Composition{{{"LiFePO4", 0.31},
                                           {"electrolyte", 0.22},
                                           {"graphite", 0.17},
                                           {"Al", 0.18},
                                           {"Cu", 0.10},
                                           {"PP", 0.02}}});
  return lib;
}

MaterialLibrary load_library(const std::string& path, MaterialLibrary base) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail("config '" + path + "': " + e.what());
  }

  if (doc.contains("materials")) {
    for (const auto& [name, m] : doc.at("materials").items()) {
      MaterialSpec spec;
      spec.name = name;
      spec.density = m.at("density_g_cm3").get<double>() * units::kGramPerCm3;
      if (m.contains("bulk_gpa")) spec.bulk_modulus = m.at("bulk_gpa").get<double>() * units::kGPa;
      if (m.contains("shear_gpa")) spec.shear_modulus = m.at("shear_gpa").get<double>() * units::kGPa;
      if (m.contains("speed_m_s")) spec.sound_speed = m.at("speed_m_s").get<double>();
      base.add(spec);
    }
  }
  if (doc.contains("compositions")) {
    for (const auto& [name, list] : doc.at("compositions").items()) {
      Composition comp;
      for (const auto& e : list)
        comp.entries.push_back({e.at("material").get<std::string>(),
                                e.at("weight_pct").get<double>() / 100.0});
      base.add_composition(name, comp);
    }
  }
  return base;
}

}  // namespace porocell::materials
