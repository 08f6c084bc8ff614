#include "porocell/cellmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "porocell/biot.hpp"
#include "porocell/common.hpp"

namespace porocell::cellmodel {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("cellmodel", what); }

constexpr double kFaraday = 96485.33212;  // C/mol
constexpr double kStackTolerance = 0.1e-3;  // m

bool is_porous(LayerKind kind) {
  return kind == LayerKind::Anode || kind == LayerKind::Cathode || kind == LayerKind::Separator;
}

/// Volume share of the binder phase within an electrode solid composition.
double binder_volume_share(const materials::MaterialLibrary& lib, const std::string& composition,
                           const std::set<std::string>& binder_names) {
  double share = 0.0;
  for (const auto& [name, v] : weight_to_volume_fractions(lib.composition(composition), lib))
    if (binder_names.count(name)) share += v;
  return share;
}
}  // namespace

const char* to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Anode: return "anode";
    case LayerKind::Cathode: return "cathode";
    case LayerKind::Separator: return "separator";
    case LayerKind::Cu: return "cu";
    case LayerKind::Al: return "al";
  }
  return "?";
}

LayerKind layer_kind_from_string(const std::string& name) {
  if (name == "anode") return LayerKind::Anode;
  if (name == "cathode") return LayerKind::Cathode;
  if (name == "separator") return LayerKind::Separator;
  if (name == "cu") return LayerKind::Cu;
  if (name == "al") return LayerKind::Al;
  fail("unknown layer kind '" + name + "'");
}

const char* to_string(LossMechanism mechanism) {
  switch (mechanism) {
    case LossMechanism::SEI: return "SEI";
    case LossMechanism::Plating: return "plating";
    case LossMechanism::LAM: return "LAM";
  }
  return "?";
}

LossMechanism mechanism_from_string(const std::string& name) {
  if (name == "SEI" || name == "sei") return LossMechanism::SEI;
  if (name == "plating") return LossMechanism::Plating;
  if (name == "LAM" || name == "lam") return LossMechanism::LAM;
  fail("unknown loss mechanism '" + name + "'");
}

void LayerSpec::validate() const {
  if (!(thickness > 0.0)) fail("layer thickness must be positive");
  if (!(velocity > 0.0)) fail("layer velocity must be positive");
  if (is_porous(kind)) {
    if (!porosity || !(*porosity > 0.0 && *porosity < 1.0))
      fail(std::string("porous layer '") + to_string(kind) + "' needs porosity in (0,1)");
  }
}

void CellStack::validate() const {
  if (layers.empty()) fail("stack has no layers");
  double sum = 0.0;
  for (const auto& l : layers) {
    l.validate();
    sum += l.thickness;
  }
  if (std::abs(sum - total_thickness) > kStackTolerance)
    fail("layer thicknesses sum to " + format_sig(sum * 1e3) + " mm, expected " +
         format_sig(total_thickness * 1e3) + " mm");
}

const LayerSpec& CellStack::layer(LayerKind kind) const {
  for (const auto& l : layers)
    if (l.kind == kind) return l;
  fail(std::string("stack has no '") + to_string(kind) + "' layer");
}

LayerSpec& CellStack::layer(LayerKind kind) {
  for (auto& l : layers)
    if (l.kind == kind) return l;
  fail(std::string("stack has no '") + to_string(kind) + "' layer");
}

CellStack reference_stack() {
  using units::kMm;
  CellStack stack;
  stack.layers = {
      {LayerKind::Anode, 0.37, 9.21 * kMm, 1154.8, VelocityProvenance::FixedTable},
      {LayerKind::Cathode, 0.40, 10.91 * kMm, 1145.4, VelocityProvenance::FixedTable},
      {LayerKind::Separator, 0.40, 2.54 * kMm, 1353.7, VelocityProvenance::FixedTable},
      {LayerKind::Cu, {}, 0.77 * kMm, 4600.0, VelocityProvenance::FixedTable},
      {LayerKind::Al, {}, 5.87 * kMm, 6320.0, VelocityProvenance::FixedTable},
  };
  stack.total_thickness = 29.3 * kMm;
  return stack;
}

double stack_tof(const CellStack& stack) {
  stack.validate();
  double tof = 0.0;
  for (const auto& l : stack.layers) tof += l.thickness / l.velocity;
  return tof;
}

std::vector<double> layer_tofs(const CellStack& stack) {
  stack.validate();
  std::vector<double> tofs;
  tofs.reserve(stack.layers.size());
  for (const auto& l : stack.layers) tofs.push_back(l.thickness / l.velocity);
  return tofs;
}

DerivedThicknesses derive_layer_thicknesses(const std::map<std::string, double>& fractions,
                                            const PorositySet& porosities,
                                            double total_thickness) {
  double sum = 0.0;
  for (const auto& [name, f] : fractions) {
    if (f < 0.0) fail("negative volume fraction for '" + name + "'");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-6) fail("cell volume fractions sum to " + format_sig(sum));
  if (!(total_thickness > 0.0)) fail("total thickness must be positive");
  auto frac = [&](const std::string& name) {
    auto it = fractions.find(name);
    return it == fractions.end() ? 0.0 : it->second;
  };

  struct PorousPlan {
    LayerKind kind;
    double solid;
    double porosity;
  };
  const std::vector<PorousPlan> porous = {
      {LayerKind::Anode, frac("graphite") + frac("anode_binder"), porosities.anode},
      {LayerKind::Cathode, frac("LiFePO4") + frac("cathode_binder"), porosities.cathode},
      {LayerKind::Separator, frac("PP"), porosities.separator},
  };

  std::map<LayerKind, double> volume;
  double pores = 0.0;
  for (const auto& p : porous) {
    if (!(p.porosity > 0.0 && p.porosity < 1.0))
      fail(std::string("porosity for '") + to_string(p.kind) + "' must lie in (0,1)");
    volume[p.kind] = p.solid / (1.0 - p.porosity);
    pores += volume[p.kind] - p.solid;
  }
  volume[LayerKind::Cu] = frac("Cu");
  volume[LayerKind::Al] = frac("Al");

  const double electrolyte = frac("electrolyte");
  if (pores > electrolyte + 1e-9)
    fail("infeasible porosity: pore volume " + format_sig(pores) +
         " exceeds the electrolyte budget " + format_sig(electrolyte));

  double stacked = 0.0;
  for (const auto& [kind, v] : volume) stacked += v;

  DerivedThicknesses out;
  out.excess_electrolyte_fraction = electrolyte - pores;
  for (const auto& [kind, v] : volume) out.thickness[kind] = total_thickness * v / stacked;
  return out;
}

std::map<std::string, double> reaggregate_volume_fractions(const DerivedThicknesses& derived,
                                                           const PorositySet& porosities,
                                                           double excess_electrolyte_fraction) {
  double stacked = 0.0;
  for (const auto& [kind, t] : derived.thickness) stacked += t;
  // Thicknesses are proportional to layer volumes; undo the normalization so
  // that the stacked volumes plus the excess electrolyte sum to 1.
  const double scale = (1.0 - excess_electrolyte_fraction) / stacked;

  std::map<std::string, double> fractions;
  double pores = 0.0;
  for (const auto& [kind, t] : derived.thickness) {
    const double v = t * scale;
    double phi = 0.0;
    std::string solid_name;
    switch (kind) {
      case LayerKind::Anode: phi = porosities.anode; solid_name = "graphite"; break;
      case LayerKind::Cathode: phi = porosities.cathode; solid_name = "LiFePO4"; break;
      case LayerKind::Separator: phi = porosities.separator; solid_name = "PP"; break;
      case LayerKind::Cu: solid_name = "Cu"; break;
      case LayerKind::Al: solid_name = "Al"; break;
    }
    fractions[solid_name] += v * (1.0 - phi);
    pores += v * phi;
  }
  fractions["electrolyte"] = pores + excess_electrolyte_fraction;
  return fractions;
}

void AgeingScenario::validate() const {
  auto in_range = [](double r) { return r >= 0.0 && r <= 0.9; };
  if (!in_range(anode_binder_reduction) || !in_range(cathode_binder_reduction))
    fail("binder stiffness reduction must lie in [0, 0.9]");
  if (lithium_loss) {
    if (lithium_loss->fraction < 0.0 || lithium_loss->fraction > 0.2)
      fail("lithium loss fraction must lie in [0, 0.2]");
  }
  const auto& c = constants;
  if (!(c.cell_capacity_ah > 0.0) || !(c.np_ratio > 0.0)) fail("invalid capacity constants");
  if (!(c.graphite_molar_volume > 0.0) || !(c.sei_molar_volume > 0.0) ||
      !(c.lithium_molar_volume > 0.0) || !(c.lithiated_graphite_molar_volume > 0.0))
    fail("missing or non-positive molar volume");
}

EquilibriumResult equilibrium_thickness(const std::vector<SpringLayer>& layers) {
  if (layers.empty()) fail("equilibrium needs at least one layer");
  double free_sum = 0.0;       // total unconstrained thickness change
  double compliance_sum = 0.0; // sum of 1/k_i
  for (const auto& l : layers) {
    if (!(l.thickness > 0.0)) fail("spring layer thickness must be positive");
    if (!(l.stiffness_modulus > 0.0)) fail("spring stiffness must be positive");
    free_sum += l.free_strain * l.thickness;
    if (!std::isinf(l.stiffness_modulus)) {
      if (!(l.compliant_fraction > 0.0)) fail("compliant layer needs a positive volume fraction");
      compliance_sum += l.thickness / (l.stiffness_modulus * l.compliant_fraction);
    }
  }
  if (compliance_sum == 0.0)
    fail("indeterminate equilibrium: every layer is rigid");

  EquilibriumResult out;
  out.interface_force = free_sum / compliance_sum;
  for (const auto& l : layers) {
    const double compliance =
        std::isinf(l.stiffness_modulus) ? 0.0
                                        : l.thickness / (l.stiffness_modulus * l.compliant_fraction);
    const double dd = l.free_strain * l.thickness - out.interface_force * compliance;
    out.thickness_strain_pct[l.kind] = 100.0 * dd / l.thickness;
  }
  return out;
}

ScenarioOutcome lithium_loss_effects(const AgeingScenario& scenario, const CellStack& stack,
                                     const materials::MaterialLibrary& lib) {
  scenario.validate();
  stack.validate();
  if (!scenario.lithium_loss) fail("scenario carries no lithium loss");
  const auto& loss = *scenario.lithium_loss;
  const auto& c = scenario.constants;

  ScenarioOutcome out;
  for (const auto& l : stack.layers) {
    out.deltas[l.kind] = {};
    out.velocities[l.kind] = l.velocity;
  }

  const double n_li = loss.fraction * c.cell_capacity_ah * 3600.0 / kFaraday;  // mol
  const double n_c6 = c.np_ratio * c.cell_capacity_ah * 3600.0 / kFaraday;     // mol C6
  const double graphite_volume = n_c6 * c.graphite_molar_volume;               // m^3

  auto linear_pct = [](double volume_ratio) {
    return 100.0 * (std::cbrt(1.0 + volume_ratio) - 1.0);
  };

  // Cathode side: identical for all three mechanisms. Losing intercalation in
  // the active particles softens and shrinks them; the layer shrinks freely
  // (pores refill with electrolyte) with a documented structural coupling.
  const double cathode_dv = c.cathode_particle_volume_per_loss * loss.fraction;
  auto& cathode = out.deltas[LayerKind::Cathode];
  cathode.modulus_pct = 100.0 * c.cathode_modulus_per_loss * loss.fraction;
  cathode.particle_size_pct = linear_pct(cathode_dv);
  const double cathode_free_strain = c.cathode_thickness_coupling * cathode_dv;
  cathode.layer_thickness_pct = 100.0 * cathode_free_strain;

  auto& anode = out.deltas[LayerKind::Anode];
  switch (loss.mechanism) {
    case LossMechanism::SEI:
      // Uniform shell on the graphite particles; anode thickness held fixed.
      anode.particle_size_pct = linear_pct(n_li * c.sei_molar_volume / graphite_volume);
      anode.layer_thickness_pct = 0.0;
      break;
    case LossMechanism::Plating:
      anode.particle_size_pct = linear_pct(n_li * c.lithium_molar_volume / graphite_volume);
      anode.layer_thickness_pct = 0.0;
      break;
    case LossMechanism::LAM: {
      // Blocked lithium keeps the detached particles lithiated; the mean
      // particle volume grows by f_detached * (V_LiC6/V_C6 - 1).
      const double f_detached = loss.fraction / c.np_ratio;
      const double dv =
          f_detached * (c.lithiated_graphite_molar_volume / c.graphite_molar_volume - 1.0);
      anode.particle_size_pct = linear_pct(dv);
      // The anode cannot expand freely: it is pressed against the separator
      // and cathode, and the binder phases take the elastic strain.
      const double anode_free_strain = anode.particle_size_pct / 100.0;

      const auto& la = stack.layer(LayerKind::Anode);
      const auto& lc = stack.layer(LayerKind::Cathode);
      const auto& ls = stack.layer(LayerKind::Separator);
      const double anode_binder = binder_volume_share(lib, "anode_solid", {"CMC", "SBR", "carbon_black"});
      const double cathode_binder = binder_volume_share(lib, "cathode_solid", {"PVDF", "carbon_black"});
      const auto& pp = lib.get("PP");
      const auto frame = biot::frame_moduli_suspension(*pp.bulk_modulus, *pp.shear_modulus,
                                                       *ls.porosity);

      const std::vector<SpringLayer> springs = {
          {LayerKind::Anode, la.thickness, *lib.get("anode_binder").bulk_modulus,
           (1.0 - *la.porosity) * anode_binder, anode_free_strain},
          {LayerKind::Cathode, lc.thickness, *lib.get("cathode_binder").bulk_modulus,
           (1.0 - *lc.porosity) * cathode_binder, cathode_free_strain},
          {LayerKind::Separator, ls.thickness, frame.bulk, 1.0 - *ls.porosity, 0.0},
      };
      const auto eq = equilibrium_thickness(springs);
      anode.layer_thickness_pct = eq.thickness_strain_pct.at(LayerKind::Anode);
      cathode.layer_thickness_pct = eq.thickness_strain_pct.at(LayerKind::Cathode);
      out.deltas[LayerKind::Separator].layer_thickness_pct =
          eq.thickness_strain_pct.at(LayerKind::Separator);
      break;
    }
  }

  double tof = 0.0;
  for (const auto& l : stack.layers) {
    const double dd = out.deltas.at(l.kind).layer_thickness_pct / 100.0;
    tof += l.thickness * (1.0 + dd) / l.velocity;
  }
  out.total_tof = tof;
  return out;
}

std::vector<SweepPoint> binder_degradation_sweep(const CellStack& stack,
                                                 const std::vector<double>& reductions,
                                                 const ElectrodeVelocityFn& solver) {
  stack.validate();
  if (!std::is_sorted(reductions.begin(), reductions.end()))
    fail("sweep reductions must be sorted ascending");
  for (double r : reductions)
    if (r < 0.0 || r > 0.9) fail("sweep reduction outside [0, 0.9]");

  const double fresh_tof = stack_tof(stack);
  std::vector<SweepPoint> out;
  out.reserve(reductions.size());
  for (double r : reductions) {
    SweepPoint p;
    p.reduction = r;
    if (r == 0.0) {
      p.tof = fresh_tof;  // no-op path, bit-exact
    } else {
      CellStack aged = stack;
      aged.layer(LayerKind::Anode).velocity = solver(LayerKind::Anode, 1.0 - r);
      aged.layer(LayerKind::Cathode).velocity = solver(LayerKind::Cathode, 1.0 - r);
      aged.layer(LayerKind::Anode).provenance = VelocityProvenance::Microsim;
      aged.layer(LayerKind::Cathode).provenance = VelocityProvenance::Microsim;
      p.tof = stack_tof(aged);
    }
    p.delta_pct = 100.0 * (p.tof - fresh_tof) / fresh_tof;
    out.push_back(p);
  }
  return out;
}

}  // namespace porocell::cellmodel
