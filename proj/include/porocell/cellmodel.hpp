#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "porocell/materials.hpp"

namespace porocell::cellmodel {

enum class LayerKind { Anode, Cathode, Separator, Cu, Al };

const char* to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

enum class VelocityProvenance { FixedTable, Biot, Microsim };

struct LayerSpec {
  LayerKind kind = LayerKind::Anode;
  std::optional<double> porosity;  // porous kinds only
  double thickness = 0.0;          // m
  double velocity = 0.0;           // m/s
  VelocityProvenance provenance = VelocityProvenance::FixedTable;

  void validate() const;
};

/// Ordered stack of layer groups; order is irrelevant for the total ToF.
struct CellStack {
  std::vector<LayerSpec> layers;
  double total_thickness = 0.0;  // m

  void validate() const;  // layer thicknesses must sum to total +- 0.1 mm
  const LayerSpec& layer(LayerKind kind) const;
  LayerSpec& layer(LayerKind kind);
};

/// The bundled reference stack (layer thicknesses, porosities and fast-wave
/// velocities of the modelled prismatic cell).
CellStack reference_stack();

/// Total transit time sum(d_i / c_i).
double stack_tof(const CellStack& stack);

/// Per-layer transit times, in stack order.
std::vector<double> layer_tofs(const CellStack& stack);

struct PorositySet {
  double anode = 0.0;
  double cathode = 0.0;
  double separator = 0.0;
};

struct DerivedThicknesses {
  std::map<LayerKind, double> thickness;  // m
  double excess_electrolyte_fraction = 0.0;  // cell volume fraction not inside pores
};

/// Allocate cell-level constituent volume fractions into layer thicknesses:
/// solids map to their layers, each porous layer is inflated by 1/(1-phi),
/// pore space is filled from the electrolyte budget, and thicknesses are
/// proportional to layer volumes, normalized to the given total. Electrolyte
/// in excess of the pore space is reported, not stacked.
DerivedThicknesses derive_layer_thicknesses(const std::map<std::string, double>& volume_fractions,
                                            const PorositySet& porosities,
                                            double total_thickness);

/// Inverse of derive_layer_thicknesses, for round-trip checks.
std::map<std::string, double> reaggregate_volume_fractions(const DerivedThicknesses& derived,
                                                           const PorositySet& porosities,
                                                           double excess_electrolyte_fraction);

// ---------------------------------------------------------------------------
// Ageing scenarios
// ---------------------------------------------------------------------------

enum class LossMechanism { SEI, Plating, LAM };

const char* to_string(LossMechanism mechanism);
LossMechanism mechanism_from_string(const std::string& name);

/// Documented model constants. The SEI and lithiated-graphite molar volumes
/// are not measurable from the bundled data; the defaults are calibrated so
/// that a 10% lithium loss reproduces the reference outcome table, and every
/// value can be overridden through the scenario config.
struct AgeingConstants {
  double cell_capacity_ah = 50.0;
  double np_ratio = 1.22;  // graphite inventory relative to cyclable lithium
  double graphite_molar_volume = 31.885e-6;      // m^3 per mol C6 (72.06 g/mol at 2260 kg/m^3)
  double sei_molar_volume = 51.0e-6;             // m^3 per mol of consumed Li (calibrated)
  double lithium_molar_volume = 13.02e-6;        // m^3/mol, metallic lithium
  double lithiated_graphite_molar_volume = 37.72e-6;  // m^3 per mol LiC6 (calibrated)
  double cathode_modulus_per_loss = -0.2;        // dK/K per unit loss fraction
  double cathode_particle_volume_per_loss = -0.05;  // dV/V per unit loss fraction
  double cathode_thickness_coupling = 0.27;  // thickness strain / particle volume strain
};

struct LithiumLoss {
  LossMechanism mechanism = LossMechanism::SEI;
  double fraction = 0.0;  // of the cyclable inventory, <= 0.2
};

struct AgeingScenario {
  double anode_binder_reduction = 0.0;    // in [0, 0.9]
  double cathode_binder_reduction = 0.0;  // in [0, 0.9]
  std::optional<LithiumLoss> lithium_loss;
  AgeingConstants constants;

  void validate() const;
};

struct LayerDeltas {
  double particle_size_pct = 0.0;
  double layer_thickness_pct = 0.0;
  double modulus_pct = 0.0;
};

struct ScenarioOutcome {
  std::map<LayerKind, LayerDeltas> deltas;
  std::map<LayerKind, double> velocities;  // m/s, carried through from the stack
  double total_tof = 0.0;                  // s, with thickness deltas applied
};

/// Series-spring layer for the constrained-stack thickness equilibrium. A
/// layer is a spring of rate (stiffness_modulus * compliant_fraction /
/// thickness); stiffness_modulus = +inf marks a rigid layer.
struct SpringLayer {
  LayerKind kind = LayerKind::Anode;
  double thickness = 0.0;          // m
  double stiffness_modulus = 0.0;  // Pa
  double compliant_fraction = 0.0; // volume fraction of the compliant phase
  double free_strain = 0.0;        // unconstrained thickness strain
};

struct EquilibriumResult {
  std::map<LayerKind, double> thickness_strain_pct;
  double interface_force = 0.0;  // per unit area, Pa-equivalent of the spring chain
};

/// 1-D series force balance: the free expansions are partitioned so that the
/// force is equal through the stack and the total thickness is conserved.
EquilibriumResult equilibrium_thickness(const std::vector<SpringLayer>& layers);

/// Per-mechanism geometry/property changes for a lithium-loss scenario, at a
/// fully discharged state. One mechanism per call.
ScenarioOutcome lithium_loss_effects(const AgeingScenario& scenario, const CellStack& stack,
                                     const materials::MaterialLibrary& lib);

/// Velocity provider used by the binder-degradation sweep: returns the
/// electrode fast-wave speed for a binder stiffness scale in (0, 1].
using ElectrodeVelocityFn = std::function<double(LayerKind electrode, double binder_scale)>;

struct SweepPoint {
  double reduction = 0.0;
  double tof = 0.0;        // s
  double delta_pct = 0.0;  // vs the r = 0 stack
};

/// Scale both binder moduli of both electrodes by (1 - r) for each requested
/// reduction, recompute the electrode velocities through `solver`, and
/// re-evaluate the stack ToF. r = 0 reproduces the input stack exactly and
/// never calls the solver.
std::vector<SweepPoint> binder_degradation_sweep(const CellStack& stack,
                                                 const std::vector<double>& reductions,
                                                 const ElectrodeVelocityFn& solver);

}  // namespace porocell::cellmodel
