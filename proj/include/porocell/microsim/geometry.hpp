#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "porocell/materials.hpp"

namespace porocell::microsim {

/// Material ids used by the generators.
enum MaterialId : std::uint8_t { kFluid = 0, kActive = 1, kBinder = 2 };

struct VoxelMaterial {
  std::string name;
  double density = 0.0;  // kg/m^3
  double bulk = 0.0;     // Pa
  double shear = 0.0;    // Pa (0 for fluids)
};

/// 3-D material-id grid, x-fastest storage; x is the propagation axis and the
/// lateral (y, z) directions are periodic.
struct VoxelGrid {
  int nx = 0, ny = 0, nz = 0;
  double h = 0.0;  // voxel edge, m
  std::vector<std::uint8_t> ids;
  std::vector<VoxelMaterial> palette;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(ny) * static_cast<std::size_t>(k));
  }
  std::uint8_t at(int i, int j, int k) const { return ids[index(i, j, k)]; }
  std::size_t size() const { return ids.size(); }
  double length() const { return nx * h; }

  double fraction(std::uint8_t id) const;
  double solid_fraction() const;  // 1 - fluid fraction
  /// binder volume / solid volume
  double binder_fraction_of_solid() const;

  /// Each voxel split into factor^3 sub-voxels (same microstructure, finer h).
  VoxelGrid refine(int factor) const;
  /// Cyclic lateral shift by (dy, dz) voxels.
  VoxelGrid roll_lateral(int dy, int dz) const;

  void validate() const;
};

/// True when all fluid voxels form one 6-connected component (periodic in
/// y/z, open in x). A grid without fluid counts as connected.
bool fluid_connected(const VoxelGrid& grid);
/// Same check for the solid phase (active + binder together).
bool solid_connected(const VoxelGrid& grid);

enum class Lattice { SimpleCubic, BodyCentered };

/// Electrode microstructure description. The unit-cell edge and the binder
/// bridge cross-sections are solved from the volume-fraction targets; the
/// voxelization dithers the per-cell realization along the propagation axis
/// so that the counted fractions track the targets.
struct MicrostructureSpec {
  Lattice lattice = Lattice::SimpleCubic;
  double particle_size = 10e-6;  // m (cube edge / sphere diameter)
  double porosity = 0.37;
  materials::MaterialSpec active_material;
  materials::MaterialSpec binder_material;
  double binder_volume_fraction_of_solid = 0.0;
  materials::MaterialSpec fluid;
  double propagation_length = 1.2e-3;  // m
  double voxel_size = 1e-6;            // m
  double binder_stiffness_scale = 1.0; // ageing: scales both binder moduli
  double phase_shift = 0.0;            // cells, longitudinal generation offset

  void validate() const;
};

/// Cubic particles connected by square-section bridges to the six face
/// neighbours; one periodic unit laterally, tiled along x.
VoxelGrid generate_simple_cubic(const MicrostructureSpec& spec);

/// Spherical particles (cell corners + centre) with eight diagonal bridges.
VoxelGrid generate_body_centered(const MicrostructureSpec& spec);

struct SeparatorOptions {
  double unit_cell = 10e-6;           // m; the separator has no prescribed feature size
  double voxel_size = 1e-6;           // m
  double propagation_length = 1.2e-3; // m
};

/// Cubic lattice of solid struts at solid fraction 1 - porosity.
VoxelGrid generate_separator(double porosity, const materials::MaterialSpec& solid,
                             const materials::MaterialSpec& fluid,
                             const SeparatorOptions& options = {});

/// Uniform block of one material (reference/oracle runs).
VoxelGrid generate_homogeneous(const materials::MaterialSpec& material, double voxel_size,
                               double propagation_length, int lateral_voxels);

/// Flat binary dump: magic "PCEL", u32 nx, ny, nz, f64 h, then one byte per
/// voxel in x-fastest order. Little-endian.
void dump_grid(const VoxelGrid& grid, const std::string& path);
VoxelGrid load_grid(const std::string& path);  // palette is not stored

}  // namespace porocell::microsim
