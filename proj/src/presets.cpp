#include "porocell/presets.hpp"

#include <algorithm>
#include <cmath>

#include "porocell/common.hpp"

namespace porocell::presets {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("presets", what); }
}  // namespace

double binder_fraction_of_solid(const materials::MaterialLibrary& lib,
                                cellmodel::LayerKind electrode) {
  const bool anode = electrode == cellmodel::LayerKind::Anode;
  const std::string comp = anode ? "anode_solid" : "cathode_solid";
  const std::string active = anode ? "graphite" : "LiFePO4";
  double share = 0.0;
  for (const auto& [name, v] : weight_to_volume_fractions(lib.composition(comp), lib))
    if (name != active) share += v;
  return share;
}

microsim::MicrostructureSpec electrode_spec(const materials::MaterialLibrary& lib,
                                            cellmodel::LayerKind electrode,
                                            const ElectrodeOptions& options) {
  const bool anode = electrode == cellmodel::LayerKind::Anode;
  if (!anode && electrode != cellmodel::LayerKind::Cathode)
    fail("electrode spec requested for a non-electrode layer");

  microsim::MicrostructureSpec spec;
  spec.lattice = options.lattice;
  spec.particle_size = options.particle_size;
  spec.porosity = anode ? 0.37 : 0.40;
  spec.active_material = lib.get(anode ? "graphite" : "LiFePO4");
  spec.binder_material = lib.get(anode ? "anode_binder" : "cathode_binder");
  spec.binder_volume_fraction_of_solid = binder_fraction_of_solid(lib, electrode);
  spec.fluid = lib.get("electrolyte");
  spec.propagation_length = options.propagation_length;
  spec.voxel_size = options.voxel_size;
  spec.binder_stiffness_scale = options.binder_stiffness_scale;
  spec.phase_shift = options.phase_shift;
  return spec;
}

SpeedResult measure_grid_speed(const microsim::VoxelGrid& grid, const SpeedRunOptions& options) {
  if (options.receiver_positions.size() < 2)
    fail("speed measurement needs two receiver planes");

  microsim::SimulationConfig config;
  config.cfl_safety = options.cfl_safety;
  config.source = {options.source_frequency, options.source_cycles, 1.0};
  config.receiver_positions = options.receiver_positions;
  config.sponge_layers = options.sponge_layers;
  config.kernel = options.kernel;
  if (options.sim_time > 0.0) {
    config.sim_time = options.sim_time;
  } else {
    // The pick needs the first arrival at the far plane plus enough of the
    // pulse for a stable peak normalization (the envelope peaks just before
    // half the pulse duration).
    const double x_far = *std::max_element(options.receiver_positions.begin(),
                                           options.receiver_positions.end());
    const double pulse = options.source_cycles / options.source_frequency;
    config.sim_time = x_far / options.min_expected_speed + 0.45 * pulse + 0.3e-6;
  }

  auto result = microsim::run_simulation(grid, config);
  SpeedResult out;
  out.traces = std::move(result.traces);
  out.dt = result.dt;
  out.steps = result.steps;
  out.speed = microsim::measure_speed(out.traces, options.pick_threshold);
  return out;
}

SpeedResult measure_electrode_speed(const materials::MaterialLibrary& lib,
                                    cellmodel::LayerKind electrode,
                                    const ElectrodeOptions& electrode_options,
                                    const SpeedRunOptions& run_options) {
  const auto spec = electrode_spec(lib, electrode, electrode_options);
  const auto grid = spec.lattice == microsim::Lattice::SimpleCubic
                        ? microsim::generate_simple_cubic(spec)
                        : microsim::generate_body_centered(spec);
  return measure_grid_speed(grid, run_options);
}

SpeedResult measure_separator_speed(const materials::MaterialLibrary& lib, double porosity,
                                    const microsim::SeparatorOptions& geometry,
                                    const SpeedRunOptions& run_options) {
  const auto grid =
      microsim::generate_separator(porosity, lib.get("PP"), lib.get("electrolyte"), geometry);
  return measure_grid_speed(grid, run_options);
}

}  // namespace porocell::presets
