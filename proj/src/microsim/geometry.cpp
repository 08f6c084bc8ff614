#include "porocell/microsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <queue>

#include "porocell/common.hpp"

namespace porocell::microsim {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("microsim", what); }
constexpr double kPi = std::numbers::pi;
}  // namespace

double VoxelGrid::fraction(std::uint8_t id) const {
  std::size_t n = 0;
  for (auto v : ids) n += (v == id);
  return static_cast<double>(n) / static_cast<double>(ids.size());
}

double VoxelGrid::solid_fraction() const {
  std::size_t n = 0;
  for (auto v : ids) n += (palette[v].shear > 0.0);
  return static_cast<double>(n) / static_cast<double>(ids.size());
}

double VoxelGrid::binder_fraction_of_solid() const {
  std::size_t nb = 0, ns = 0;
  for (auto v : ids) {
    if (palette[v].shear > 0.0) {
      ++ns;
      nb += (v == kBinder);
    }
  }
  return ns == 0 ? 0.0 : static_cast<double>(nb) / static_cast<double>(ns);
}

VoxelGrid VoxelGrid::refine(int factor) const {
  if (factor < 1) fail("refine factor must be >= 1");
  VoxelGrid out;
  out.nx = nx * factor;
  out.ny = ny * factor;
  out.nz = nz * factor;
  out.h = h / factor;
  out.palette = palette;
  out.ids.resize(static_cast<std::size_t>(out.nx) * out.ny * out.nz);
  for (int k = 0; k < out.nz; ++k)
    for (int j = 0; j < out.ny; ++j)
      for (int i = 0; i < out.nx; ++i)
        out.ids[out.index(i, j, k)] = at(i / factor, j / factor, k / factor);
  return out;
}

VoxelGrid VoxelGrid::roll_lateral(int dy, int dz) const {
  VoxelGrid out = *this;
  auto wrap = [](int v, int n) { return ((v % n) + n) % n; };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        out.ids[out.index(i, j, k)] = at(i, wrap(j - dy, ny), wrap(k - dz, nz));
  return out;
}

void VoxelGrid::validate() const {
  if (nx <= 0 || ny <= 0 || nz <= 0) fail("grid dimensions must be positive");
  if (!(h > 0.0)) fail("voxel size must be positive");
  if (ids.size() != static_cast<std::size_t>(nx) * ny * nz) fail("grid size mismatch");
  if (palette.empty()) fail("grid has no material palette");
  for (auto v : ids)
    if (v >= palette.size()) fail("voxel references material id outside the palette");
  for (const auto& m : palette) {
    if (!(m.density > 0.0)) fail("palette material '" + m.name + "' has non-positive density");
    if (m.bulk < 0.0 || m.shear < 0.0) fail("palette material '" + m.name + "' has negative moduli");
  }
}

namespace {

bool component_connected(const VoxelGrid& g, bool solid_phase) {
  auto in_phase = [&](std::size_t idx) {
    const bool solid = g.palette[g.ids[idx]].shear > 0.0;
    return solid == solid_phase;
  };
  const std::size_t total = g.size();
  std::size_t phase_count = 0;
  std::size_t seed = total;
  for (std::size_t i = 0; i < total; ++i)
    if (in_phase(i)) {
      ++phase_count;
      if (seed == total) seed = i;
    }
  if (phase_count == 0) return true;

  std::vector<std::uint8_t> visited(total, 0);
  std::queue<std::size_t> queue;
  queue.push(seed);
  visited[seed] = 1;
  std::size_t reached = 1;
  const int nx = g.nx, ny = g.ny, nz = g.nz;
  while (!queue.empty()) {
    const std::size_t cur = queue.front();
    queue.pop();
    const int i = static_cast<int>(cur % nx);
    const int j = static_cast<int>((cur / nx) % ny);
    const int k = static_cast<int>(cur / (static_cast<std::size_t>(nx) * ny));
    const int neighbors[6][3] = {{i - 1, j, k}, {i + 1, j, k}, {i, j - 1, k},
                                 {i, j + 1, k}, {i, j, k - 1}, {i, j, k + 1}};
    for (const auto& n : neighbors) {
      int ni = n[0], nj = n[1], nk = n[2];
      if (ni < 0 || ni >= nx) continue;  // x is open
      nj = (nj + ny) % ny;               // lateral wrap
      nk = (nk + nz) % nz;
      const std::size_t nidx = g.index(ni, nj, nk);
      if (!visited[nidx] && in_phase(nidx)) {
        visited[nidx] = 1;
        ++reached;
        queue.push(nidx);
      }
    }
  }
  return reached == phase_count;
}

VoxelMaterial to_voxel_material(const materials::MaterialSpec& m, double stiffness_scale = 1.0) {
  VoxelMaterial out;
  out.name = m.name;
  out.density = m.density;
  out.bulk = m.bulk_modulus.value_or(m.sound_speed ? m.density * (*m.sound_speed) * (*m.sound_speed)
                                                   : 0.0) *
             stiffness_scale;
  out.shear = m.shear_modulus.value_or(0.0) * stiffness_scale;
  return out;
}

/// Shared voxelization core: per unit cell along x, pick the k smallest
/// particle activations, then the k smallest bridge activations among the
/// remaining voxels, with running targets so the counted fractions track the
/// requested ones to within one voxel per cell.
struct CellOrders {
  int N = 0;                        // cell edge in voxels
  std::vector<int> particle_order;  // cell-local indices by particle activation
  std::vector<int> binder_order;    // cell-local indices by bridge activation
};

VoxelGrid assemble_tiled(const MicrostructureSpec& spec, const CellOrders& orders,
                         double particle_frac, double binder_frac) {
  const int N = orders.N;
  const auto n3 = static_cast<std::size_t>(N) * N * N;
  const int cells_x =
      static_cast<int>(std::ceil(spec.propagation_length / (N * spec.voxel_size) - 1e-9));

  VoxelGrid grid;
  grid.nx = cells_x * N;
  grid.ny = N;
  grid.nz = N;
  grid.h = spec.voxel_size;
  grid.palette = {to_voxel_material(spec.fluid),
                  to_voxel_material(spec.active_material),
                  to_voxel_material(spec.binder_material, spec.binder_stiffness_scale)};
  grid.ids.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, kFluid);

  const double particle_target = particle_frac * static_cast<double>(n3);
  const double binder_target = binder_frac * static_cast<double>(n3);
  const double dither_phase = spec.phase_shift - std::floor(spec.phase_shift);

  std::vector<std::uint8_t> cell(n3);
  double particle_done = 0.0, binder_done = 0.0;
  for (int c = 0; c < cells_x; ++c) {
    std::fill(cell.begin(), cell.end(), static_cast<std::uint8_t>(kFluid));
    const double along = static_cast<double>(c + 1);
    auto quota = [&](double target, double done) {
      return std::clamp<long>(std::lround(target * along + dither_phase - done), 0,
                              static_cast<long>(n3));
    };
    const long kp = quota(particle_target, particle_done);
    for (long m = 0; m < kp; ++m) cell[static_cast<std::size_t>(orders.particle_order[m])] = kActive;
    particle_done += static_cast<double>(kp);

    const long kb = quota(binder_target, binder_done);
    long marked = 0;
    for (int idx : orders.binder_order) {
      if (marked == kb) break;
      if (cell[static_cast<std::size_t>(idx)] == kFluid) {
        cell[static_cast<std::size_t>(idx)] = kBinder;
        ++marked;
      }
    }
    binder_done += static_cast<double>(marked);

    // Copy the cell into its slab; cell-local x is the fastest index.
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j) {
        const std::size_t src = static_cast<std::size_t>(N) * (j + static_cast<std::size_t>(N) * k);
        std::memcpy(&grid.ids[grid.index(c * N, j, k)], &cell[src], static_cast<std::size_t>(N));
      }
  }
  grid.validate();
  return grid;
}

/// Ascending activation order; ties resolved by distance from the cell
/// centre so a mid-shell cut still grows a connected region.
std::vector<int> sorted_by(const std::vector<double>& activation, const std::vector<double>& tie) {
  std::vector<int> order(activation.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (activation[a] != activation[b]) return activation[a] < activation[b];
    return tie[a] < tie[b];
  });
  return order;
}

}  // namespace

bool fluid_connected(const VoxelGrid& grid) { return component_connected(grid, false); }
bool solid_connected(const VoxelGrid& grid) { return component_connected(grid, true); }

void MicrostructureSpec::validate() const {
  if (!(particle_size > 0.0)) fail("particle size must be positive");
  if (!(porosity >= 0.0 && porosity < 1.0)) fail("porosity must lie in [0,1)");
  if (!(binder_volume_fraction_of_solid >= 0.0 && binder_volume_fraction_of_solid < 0.3))
    fail("binder fraction of solid must lie in [0, 0.3)");
  if (!(voxel_size > 0.0)) fail("voxel size must be positive");
  if (propagation_length < 100.0 * particle_size * (1.0 - 1e-9))
    fail("propagation length must be at least 100 particle sizes for wave separation");
  if (!(binder_stiffness_scale > 0.0)) fail("binder stiffness scale must be positive");
  if (binder_volume_fraction_of_solid > 0.0 && porosity == 0.0)
    fail("dense grid with binder is not representable");
}

VoxelGrid generate_simple_cubic(const MicrostructureSpec& spec) {
  spec.validate();
  const double beta = spec.binder_volume_fraction_of_solid;
  const double particle_frac = (1.0 - beta) * (1.0 - spec.porosity);
  const double binder_frac = beta * (1.0 - spec.porosity);
  const double a = spec.particle_size;
  const double L = a / std::cbrt(particle_frac);
  const double h = spec.voxel_size;

  if (beta > 0.0) {
    // Tie-break: a is fixed, L follows from the solid fraction, the bridge
    // section from the binder fraction.
    const double bridge_volume = binder_frac * L * L * L;
    const double total_len = 3.0 * (L - a);
    if (!(total_len > 0.0)) fail("geometry infeasible: no room for binder bridges (a >= L)");
    const double s = std::sqrt(bridge_volume / total_len);
    if (s < 2.0 * h)
      fail("geometry infeasible: bridge section " + format_sig(s) + " m thinner than 2h");
    if (s > a) fail("geometry infeasible: bridge section wider than the particle face");
  }

  CellOrders orders;
  orders.N = std::max(2, static_cast<int>(std::lround(L / h)));
  const int N = orders.N;
  const auto n3 = static_cast<std::size_t>(N) * N * N;
  const double half = 0.5 * N;

  std::vector<double> particle_act(n3), binder_act(n3), center_d2(n3);
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const std::size_t idx = i + static_cast<std::size_t>(N) * (j + static_cast<std::size_t>(N) * k);
        const double dx = std::abs(i + 0.5 - half);
        const double dy = std::abs(j + 0.5 - half);
        const double dz = std::abs(k + 0.5 - half);
        particle_act[idx] = std::max({dx, dy, dz});
        center_d2[idx] = dx * dx + dy * dy + dz * dz;
        // Bridges run along each axis through the cell centre; a voxel joins
        // the one whose transverse footprint it enters first.
        const double tx = std::max(dy, dz);
        const double ty = std::max(dx, dz);
        const double tz = std::max(dx, dy);
        binder_act[idx] = std::min({tx, ty, tz});
      }
  orders.particle_order = sorted_by(particle_act, center_d2);
  orders.binder_order = sorted_by(binder_act, center_d2);
  return assemble_tiled(spec, orders, particle_frac, binder_frac);
}

VoxelGrid generate_body_centered(const MicrostructureSpec& spec) {
  spec.validate();
  const double beta = spec.binder_volume_fraction_of_solid;
  const double particle_frac = (1.0 - beta) * (1.0 - spec.porosity);
  const double binder_frac = beta * (1.0 - spec.porosity);
  const double r = 0.5 * spec.particle_size;
  const double h = spec.voxel_size;
  // Two particles per cell (8 corner octants + centre).
  const double L = std::cbrt(2.0 * (4.0 / 3.0) * kPi * r * r * r / particle_frac);
  const double neighbor = std::sqrt(3.0) * 0.5 * L;
  if (2.0 * r >= neighbor)
    fail("geometry infeasible: spheres overlap along the body diagonal");
  if (beta > 0.0) {
    const double exposed = neighbor - 2.0 * r;
    const double area = binder_frac * L * L * L / (8.0 * exposed);
    const double rb = std::sqrt(area / kPi);
    if (rb < h) fail("geometry infeasible: diagonal bridge radius thinner than h");
    if (rb > r) fail("geometry infeasible: diagonal bridge thicker than the particle");
  }

  CellOrders orders;
  orders.N = std::max(2, static_cast<int>(std::lround(L / h)));
  const int N = orders.N;
  const auto n3 = static_cast<std::size_t>(N) * N * N;
  const double half = 0.5 * N;

  const double centers[9][3] = {{0, 0, 0}, {double(N), 0, 0}, {0, double(N), 0}, {0, 0, double(N)},
                                {double(N), double(N), 0}, {double(N), 0, double(N)},
                                {0, double(N), double(N)}, {double(N), double(N), double(N)},
                                {half, half, half}};

  auto segment_distance = [&](double px, double py, double pz, const double* corner) {
    // Distance to the centre-to-corner segment.
    const double ax = half, ay = half, az = half;
    const double bx = corner[0] - ax, by = corner[1] - ay, bz = corner[2] - az;
    const double t = std::clamp(((px - ax) * bx + (py - ay) * by + (pz - az) * bz) /
                                    (bx * bx + by * by + bz * bz),
                                0.0, 1.0);
    const double qx = ax + t * bx - px, qy = ay + t * by - py, qz = az + t * bz - pz;
    return std::sqrt(qx * qx + qy * qy + qz * qz);
  };

  std::vector<double> particle_act(n3), binder_act(n3), center_d2(n3);
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const std::size_t idx = i + static_cast<std::size_t>(N) * (j + static_cast<std::size_t>(N) * k);
        const double px = i + 0.5, py = j + 0.5, pz = k + 0.5;
        double dmin = 1e30;
        for (const auto& c : centers) {
          const double dx = px - c[0], dy = py - c[1], dz = pz - c[2];
          dmin = std::min(dmin, std::sqrt(dx * dx + dy * dy + dz * dz));
        }
        particle_act[idx] = dmin;
        const double cx = px - half, cy = py - half, cz = pz - half;
        center_d2[idx] = cx * cx + cy * cy + cz * cz;
        double bmin = 1e30;
        for (int s = 0; s < 8; ++s) bmin = std::min(bmin, segment_distance(px, py, pz, centers[s]));
        binder_act[idx] = bmin;
      }
  orders.particle_order = sorted_by(particle_act, center_d2);
  orders.binder_order = sorted_by(binder_act, center_d2);
  return assemble_tiled(spec, orders, particle_frac, binder_frac);
}

VoxelGrid generate_separator(double porosity, const materials::MaterialSpec& solid,
                             const materials::MaterialSpec& fluid, const SeparatorOptions& options) {
  if (!(porosity > 0.0 && porosity < 1.0)) fail("separator porosity must lie in (0,1)");
  MicrostructureSpec spec;  // reuse the tiling machinery
  spec.particle_size = options.unit_cell;
  spec.porosity = porosity;
  spec.active_material = solid;
  spec.binder_material = solid;
  spec.fluid = fluid;
  spec.propagation_length = options.propagation_length;
  spec.voxel_size = options.voxel_size;
  spec.validate();

  CellOrders orders;
  orders.N = std::max(2, static_cast<int>(std::lround(options.unit_cell / options.voxel_size)));
  const int N = orders.N;
  const auto n3 = static_cast<std::size_t>(N) * N * N;

  std::vector<double> act(n3), edge_d2(n3);
  for (int k = 0; k < N; ++k)
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const std::size_t idx = i + static_cast<std::size_t>(N) * (j + static_cast<std::size_t>(N) * k);
        // Struts run along the cell edges; distance to the nearest lattice
        // line in the two transverse coordinates.
        const double ex = std::min(i + 0.5, N - (i + 0.5));
        const double ey = std::min(j + 0.5, N - (j + 0.5));
        const double ez = std::min(k + 0.5, N - (k + 0.5));
        act[idx] = std::min({std::max(ey, ez), std::max(ex, ez), std::max(ex, ey)});
        edge_d2[idx] = ex * ex + ey * ey + ez * ez;
      }
  orders.particle_order = sorted_by(act, edge_d2);
  orders.binder_order = orders.particle_order;  // unused (binder fraction 0)
  return assemble_tiled(spec, orders, 1.0 - porosity, 0.0);
}

VoxelGrid generate_homogeneous(const materials::MaterialSpec& material, double voxel_size,
                               double propagation_length, int lateral_voxels) {
  if (!(voxel_size > 0.0) || !(propagation_length > 0.0) || lateral_voxels < 1)
    fail("invalid homogeneous block parameters");
  VoxelGrid grid;
  grid.nx = static_cast<int>(std::ceil(propagation_length / voxel_size - 1e-9));
  grid.ny = grid.nz = lateral_voxels;
  grid.h = voxel_size;
  grid.palette = {to_voxel_material(material)};
  grid.ids.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);
  grid.validate();
  return grid;
}

void dump_grid(const VoxelGrid& grid, const std::string& path) {
  grid.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open '" + path + "' for writing");
  out.write("PCEL", 4);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(grid.nx),
                                 static_cast<std::uint32_t>(grid.ny),
                                 static_cast<std::uint32_t>(grid.nz)};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  out.write(reinterpret_cast<const char*>(&grid.h), sizeof(double));
  out.write(reinterpret_cast<const char*>(grid.ids.data()),
            static_cast<std::streamsize>(grid.ids.size()));
  if (!out) fail("failed writing grid dump to '" + path + "'");
}

VoxelGrid load_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open grid dump '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "PCEL", 4) != 0) fail("'" + path + "' is not a grid dump");
  std::uint32_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  VoxelGrid grid;
  grid.nx = static_cast<int>(dims[0]);
  grid.ny = static_cast<int>(dims[1]);
  grid.nz = static_cast<int>(dims[2]);
  in.read(reinterpret_cast<char*>(&grid.h), sizeof(double));
  grid.ids.resize(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz);
  in.read(reinterpret_cast<char*>(grid.ids.data()), static_cast<std::streamsize>(grid.ids.size()));
  if (!in) fail("truncated grid dump '" + path + "'");
  return grid;
}

}  // namespace porocell::microsim
