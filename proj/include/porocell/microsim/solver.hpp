#pragma once

#include <memory>
#include <vector>

#include "porocell/microsim/geometry.hpp"
#include "porocell/waveform.hpp"

namespace porocell::microsim {

enum class KernelKind { Auto, Serial, OpenMP };

/// Explicit staggered-grid velocity-stress configuration. Fluid voxels run
/// through the same elastic update with zero shear modulus and bulk modulus
/// rho_f c_f^2, which keeps normal traction and normal acceleration
/// continuous across voxel interfaces without explicit interface tracking.
struct SimulationConfig {
  double dt = 0.0;        // s; 0 = derive from the CFL bound
  double sim_time = 0.0;  // s; ignored when n_steps > 0
  long n_steps = 0;
  double cfl_safety = 0.5;  // fraction of h / (c_max sqrt(3))
  waveform::PulseSpec source{500e3, 3, 1.0};
  std::vector<double> receiver_positions;  // m, plane-averaged normal stress
  int sponge_layers = 60;        // absorbing tail before the far face; 0 = reflective
  double sponge_strength = 0.05; // peak per-step damping exponent
  KernelKind kernel = KernelKind::Auto;
  bool track_energy = false;
  long check_interval = 500;  // steps between non-finite field scans

  void validate() const;
};

struct TraceSet {
  double dt = 0.0;
  std::vector<double> positions;              // m
  std::vector<std::vector<double>> samples;   // [plane][step]

  waveform::Trace trace(std::size_t plane) const;
};

struct RunResult {
  TraceSet traces;
  std::vector<double> energy;  // per-step total energy when track_energy is set
  double dt = 0.0;
  long steps = 0;
  double source_duration = 0.0;  // s
};

/// Stability bound dt <= cfl_safety * h / (c_max sqrt(3)).
double cfl_limit(const VoxelGrid& grid, double cfl_safety);

class WaveSolver {
 public:
  WaveSolver(const VoxelGrid& grid, const SimulationConfig& config);
  ~WaveSolver();
  WaveSolver(const WaveSolver&) = delete;
  WaveSolver& operator=(const WaveSolver&) = delete;

  void step();
  RunResult run();  // steps to completion and collects traces

  long steps_done() const;
  double dt() const;
  /// Discrete total energy (kinetic in time-centred product form + strain);
  /// only available when track_energy is enabled.
  double total_energy() const;

  /// Test hook: overwrite one normal-stress sample (e.g. with NaN) to drive
  /// the instability detector.
  void poke_stress(int i, int j, int k, double value);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunResult run_simulation(const VoxelGrid& grid, const SimulationConfig& config);

/// Speed between two receiver planes from first-arrival picks,
/// (x_b - x_a) / (t_b - t_a). Defaults to the first and last plane.
double measure_speed(const TraceSet& traces, double threshold_fraction = 0.1);
double measure_speed(const TraceSet& traces, std::size_t plane_a, std::size_t plane_b,
                     double threshold_fraction = 0.1);

}  // namespace porocell::microsim
