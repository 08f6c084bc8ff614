#pragma once

#include <string>
#include <vector>

#include "porocell/cellmodel.hpp"
#include "porocell/materials.hpp"
#include "porocell/microsim/geometry.hpp"
#include "porocell/microsim/solver.hpp"

namespace porocell::presets {

/// Binder volume share of the electrode solid phase, from the built-in
/// composition tables (anode: CMC+SBR+carbon black, cathode: PVDF+carbon
/// black).
double binder_fraction_of_solid(const materials::MaterialLibrary& lib,
                                cellmodel::LayerKind electrode);

struct ElectrodeOptions {
  microsim::Lattice lattice = microsim::Lattice::SimpleCubic;
  double particle_size = 10e-6;       // m
  double voxel_size = 1e-6;           // m
  double propagation_length = 1.2e-3; // m
  double binder_stiffness_scale = 1.0;
  double phase_shift = 0.0;
};

/// Electrode microstructure spec from the built-in tables (porosities 0.37 /
/// 0.40, materials and binder shares from the catalog).
microsim::MicrostructureSpec electrode_spec(const materials::MaterialLibrary& lib,
                                            cellmodel::LayerKind electrode,
                                            const ElectrodeOptions& options = {});

struct SpeedRunOptions {
  std::vector<double> receiver_positions = {0.8e-3, 1.1e-3};  // m
  double source_frequency = 500e3;  // Hz
  int source_cycles = 3;
  double sim_time = 0.0;  // s; 0 = auto from the farthest receiver
  double min_expected_speed = 600.0;  // m/s, only for the auto sim_time
  int sponge_layers = 60;
  double cfl_safety = 0.5;
  double pick_threshold = 0.1;
  microsim::KernelKind kernel = microsim::KernelKind::Auto;
};

struct SpeedResult {
  double speed = 0.0;  // m/s
  microsim::TraceSet traces;
  double dt = 0.0;
  long steps = 0;
};

/// Generate the grid, run the transient, pick first arrivals on the two
/// receiver planes, return dx/dt.
SpeedResult measure_grid_speed(const microsim::VoxelGrid& grid, const SpeedRunOptions& options);

/// electrode_spec + generate + measure in one call.
SpeedResult measure_electrode_speed(const materials::MaterialLibrary& lib,
                                    cellmodel::LayerKind electrode,
                                    const ElectrodeOptions& electrode_options = {},
                                    const SpeedRunOptions& run_options = {});

/// Separator lattice speed with the built-in PP/electrolyte pair.
SpeedResult measure_separator_speed(const materials::MaterialLibrary& lib, double porosity = 0.4,
                                    const microsim::SeparatorOptions& geometry = {},
                                    const SpeedRunOptions& run_options = {});

}  // namespace porocell::presets
