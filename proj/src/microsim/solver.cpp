#include "porocell/microsim/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "kernels.hpp"
#include "porocell/common.hpp"

namespace porocell::microsim {

namespace {
[[noreturn]] void fail(const std::string& what) { throw Error("microsim", what); }
using detail::real;
}  // namespace

void SimulationConfig::validate() const {
  if (dt < 0.0) fail("dt must be non-negative");
  if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) fail("cfl_safety must lie in (0,1)");
  if (n_steps == 0 && !(sim_time > 0.0)) fail("either n_steps or sim_time must be set");
  if (receiver_positions.empty()) fail("at least one receiver plane is required");
  if (sponge_layers < 0) fail("sponge_layers must be non-negative");
  if (check_interval < 1) fail("check_interval must be positive");
}

waveform::Trace TraceSet::trace(std::size_t plane) const {
  waveform::Trace t;
  t.dt = dt;
  t.samples = samples.at(plane);
  return t;
}

double cfl_limit(const VoxelGrid& grid, double cfl_safety) {
  double c_max = 0.0;
  for (const auto& m : grid.palette) {
    const double c = std::sqrt((m.bulk + 4.0 * m.shear / 3.0) / m.density);
    c_max = std::max(c_max, c);
  }
  if (!(c_max > 0.0)) fail("grid has no stiffness; cannot form a CFL bound");
  return cfl_safety * grid.h / (c_max * std::sqrt(3.0));
}

struct WaveSolver::Impl {
  int nx = 0, ny = 0, nz = 0;
  std::ptrdiff_t sj = 0, sk = 0;
  std::size_t total = 0;
  double h = 0.0;
  double dt = 0.0;
  long n_steps = 0;
  long done = 0;
  SimulationConfig config;

  std::vector<real> vx, vy, vz, sxx, syy, szz, sxy, sxz, syz;
  std::vector<real> cvx, cvy, cvz, cl2m, clam, cmxy, cmxz, cmyz;
  std::vector<real> damp;  // per x-slot, 1 outside the sponge
  bool has_sponge = false;

  // Cell-centred material copies for the energy bookkeeping.
  std::vector<double> rho_c, lam_c, mu_c;

  std::vector<double> source;  // per-step face traction
  double source_duration = 0.0;

  std::vector<int> receiver_slots;
  std::vector<std::vector<double>> receiver_samples;

  bool track_energy = false;
  std::vector<real> vx0, vy0, vz0;
  std::vector<double> energy;

  bool use_omp = false;

  std::size_t at(int i, int j, int k) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(sj) * j +
           static_cast<std::size_t>(sk) * k;
  }

  void sync_lateral(std::vector<real>& f) {
    // y ghosts first, then z ghosts over the full (ghost-inclusive) planes.
    const int gx = nx + 2;
    for (int k = 0; k < nz + 2; ++k) {
      std::memcpy(&f[at(0, 0, k)], &f[at(0, ny, k)], sizeof(real) * gx);
      std::memcpy(&f[at(0, ny + 1, k)], &f[at(0, 1, k)], sizeof(real) * gx);
    }
    const std::size_t plane = static_cast<std::size_t>(gx) * (ny + 2);
    std::memcpy(&f[at(0, 0, 0)], &f[at(0, 0, nz)], sizeof(real) * plane);
    std::memcpy(&f[at(0, 0, nz + 1)], &f[at(0, 0, 1)], sizeof(real) * plane);
  }

  detail::KernelArgs args() {
    detail::KernelArgs a;
    a.nx = nx;
    a.ny = ny;
    a.nz = nz;
    a.sj = sj;
    a.sk = sk;
    a.vx = vx.data();
    a.vy = vy.data();
    a.vz = vz.data();
    a.sxx = sxx.data();
    a.syy = syy.data();
    a.szz = szz.data();
    a.sxy = sxy.data();
    a.sxz = sxz.data();
    a.syz = syz.data();
    a.cvx = cvx.data();
    a.cvy = cvy.data();
    a.cvz = cvz.data();
    a.cl2m = cl2m.data();
    a.clam = clam.data();
    a.cmxy = cmxy.data();
    a.cmxz = cmxz.data();
    a.cmyz = cmyz.data();
    return a;
  }

  void step();
  double compute_energy(const std::vector<real>& vx_old, const std::vector<real>& vy_old,
                        const std::vector<real>& vz_old) const;
  void check_finite(long step_index) const;
};

WaveSolver::WaveSolver(const VoxelGrid& grid, const SimulationConfig& config)
    : impl_(std::make_unique<Impl>()) {
  grid.validate();
  config.validate();
  auto& s = *impl_;
  s.config = config;
  s.nx = grid.nx;
  s.ny = grid.ny;
  s.nz = grid.nz;
  s.h = grid.h;
  s.sj = grid.nx + 2;
  s.sk = static_cast<std::ptrdiff_t>(grid.nx + 2) * (grid.ny + 2);
  s.total = static_cast<std::size_t>(grid.nx + 2) * (grid.ny + 2) * (grid.nz + 2);

  const double limit = cfl_limit(grid, config.cfl_safety);
  s.dt = config.dt == 0.0 ? limit : config.dt;
  if (s.dt > limit * (1.0 + 1e-12))
    fail("CFL violation: dt = " + format_sig(s.dt) + " s exceeds the stable bound " +
         format_sig(limit) + " s");
  s.n_steps = config.n_steps > 0
                  ? config.n_steps
                  : static_cast<long>(std::ceil(config.sim_time / s.dt));

  switch (config.kernel) {
    case KernelKind::Serial: s.use_omp = false; break;
    case KernelKind::OpenMP:
#ifdef _OPENMP
      s.use_omp = true;
      break;
#else
      fail("this build has no OpenMP support; use the serial kernel");
#endif
    case KernelKind::Auto:
#ifdef _OPENMP
      s.use_omp = true;
#else
      s.use_omp = false;
#endif
      break;
  }

  for (auto* f : {&s.vx, &s.vy, &s.vz, &s.sxx, &s.syy, &s.szz, &s.sxy, &s.sxz, &s.syz, &s.cvx,
                  &s.cvy, &s.cvz, &s.cl2m, &s.clam, &s.cmxy, &s.cmxz, &s.cmyz})
    f->assign(s.total, 0.0f);

  // Cell-centred material fields with ghost copies (x clamped, y/z periodic).
  s.rho_c.assign(s.total, 0.0);
  s.lam_c.assign(s.total, 0.0);
  s.mu_c.assign(s.total, 0.0);
  auto wrap = [](int v, int n) { return ((v - 1) % n + n) % n; };
  for (int k = 0; k < s.nz + 2; ++k)
    for (int j = 0; j < s.ny + 2; ++j)
      for (int i = 0; i < s.nx + 2; ++i) {
        const int ci = std::clamp(i, 1, s.nx) - 1;
        const auto& m = grid.palette[grid.at(ci, wrap(j, s.ny), wrap(k, s.nz))];
        const std::size_t idx = s.at(i, j, k);
        s.rho_c[idx] = m.density;
        s.mu_c[idx] = m.shear;
        s.lam_c[idx] = m.bulk - 2.0 * m.shear / 3.0;
      }

  // Staggered coefficients, premultiplied with dt/h.
  const double dth = s.dt / s.h;
  auto harmonic4 = [](double a, double b, double c, double d) {
    if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) return 0.0;
    return 4.0 / (1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
  };
  for (int k = 1; k <= s.nz; ++k)
    for (int j = 1; j <= s.ny; ++j) {
      for (int i = 0; i <= s.nx; ++i) {
        const std::size_t idx = s.at(i, j, k);
        double rho_bar;
        if (i == 0)
          rho_bar = s.rho_c[s.at(1, j, k)];
        else if (i == s.nx)
          rho_bar = s.rho_c[s.at(s.nx, j, k)];
        else
          rho_bar = 0.5 * (s.rho_c[idx] + s.rho_c[s.at(i + 1, j, k)]);
        s.cvx[idx] = static_cast<real>(dth / rho_bar);
      }
      for (int i = 1; i <= s.nx; ++i) {
        const std::size_t idx = s.at(i, j, k);
        s.cvy[idx] = static_cast<real>(dth / (0.5 * (s.rho_c[idx] + s.rho_c[s.at(i, j + 1, k)])));
        s.cvz[idx] = static_cast<real>(dth / (0.5 * (s.rho_c[idx] + s.rho_c[s.at(i, j, k + 1)])));
        s.cl2m[idx] = static_cast<real>((s.lam_c[idx] + 2.0 * s.mu_c[idx]) * dth);
        s.clam[idx] = static_cast<real>(s.lam_c[idx] * dth);
        s.cmyz[idx] = static_cast<real>(
            harmonic4(s.mu_c[idx], s.mu_c[s.at(i, j + 1, k)], s.mu_c[s.at(i, j, k + 1)],
                      s.mu_c[s.at(i, j + 1, k + 1)]) *
            dth);
        if (i < s.nx) {
          s.cmxy[idx] = static_cast<real>(
              harmonic4(s.mu_c[idx], s.mu_c[s.at(i + 1, j, k)], s.mu_c[s.at(i, j + 1, k)],
                        s.mu_c[s.at(i + 1, j + 1, k)]) *
              dth);
          s.cmxz[idx] = static_cast<real>(
              harmonic4(s.mu_c[idx], s.mu_c[s.at(i + 1, j, k)], s.mu_c[s.at(i, j, k + 1)],
                        s.mu_c[s.at(i + 1, j, k + 1)]) *
              dth);
        }
      }
    }

  // Absorbing tail: a gentle per-step exponential taper over the last layers.
  s.damp.assign(static_cast<std::size_t>(s.nx) + 2, 1.0f);
  s.has_sponge = config.sponge_layers > 0;
  if (s.has_sponge) {
    const int W = config.sponge_layers;
    if (W >= s.nx) fail("sponge_layers must be smaller than the domain length");
    for (int i = s.nx - W + 1; i <= s.nx + 1; ++i) {
      const double d = static_cast<double>(i - (s.nx - W)) / W;
      s.damp[static_cast<std::size_t>(i)] =
          static_cast<real>(std::exp(-config.sponge_strength * std::min(d, 1.0) * std::min(d, 1.0)));
    }
  }

  // Source trace sampled at the solver step.
  if (config.source.amplitude != 0.0) {
    const auto pulse = waveform::hanning_pulse(config.source, s.dt);
    s.source.assign(pulse.samples.begin(), pulse.samples.end());
  }
  s.source_duration = config.source.center_frequency > 0.0
                          ? config.source.n_cycles / config.source.center_frequency
                          : 0.0;

  // Receiver planes: nearest cell centre to each requested position.
  const int sponge_start = s.has_sponge ? s.nx - config.sponge_layers : s.nx + 1;
  for (double x : config.receiver_positions) {
    const int cell = static_cast<int>(std::lround(x / s.h - 0.5));
    if (cell < 0 || cell >= s.nx)
      fail("receiver at x = " + format_sig(x) + " m lies outside the domain");
    if (cell + 1 > sponge_start)
      fail("receiver at x = " + format_sig(x) + " m lies inside the absorbing tail");
    s.receiver_slots.push_back(cell + 1);
  }
  s.receiver_samples.assign(s.receiver_slots.size(), {});
  for (auto& v : s.receiver_samples) v.reserve(static_cast<std::size_t>(s.n_steps));

  s.track_energy = config.track_energy;
  if (s.track_energy) {
    s.energy.reserve(static_cast<std::size_t>(s.n_steps));
  }
}

WaveSolver::~WaveSolver() = default;

void WaveSolver::Impl::check_finite(long step_index) const {
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j) {
      const std::size_t base = at(1, j, k);
      for (int i = 0; i < nx; ++i) {
        if (!std::isfinite(sxx[base + i]) || !std::isfinite(vx[base + i]))
          fail("instability: non-finite field value at step " + std::to_string(step_index));
      }
    }
}

double WaveSolver::Impl::compute_energy(const std::vector<real>& vx_old,
                                        const std::vector<real>& vy_old,
                                        const std::vector<real>& vz_old) const {
  // Kinetic part in the time-centred product form 1/2 rho v+ v-, the quantity
  // the leapfrog scheme conserves together with the strain energy.
  const double cell_vol = h * h * h;
  double kin = 0.0;
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        const std::size_t idx = at(i, j, k);
        double rho_bar, w = 1.0;
        if (i == 0) {
          rho_bar = rho_c[at(1, j, k)];
          w = 0.5;
        } else if (i == nx) {
          rho_bar = rho_c[idx];
          w = 0.5;
        } else {
          rho_bar = 0.5 * (rho_c[idx] + rho_c[at(i + 1, j, k)]);
        }
        kin += w * rho_bar * static_cast<double>(vx[idx]) * vx_old[idx];
      }
      for (int i = 1; i <= nx; ++i) {
        const std::size_t idx = at(i, j, k);
        const double rho_y = 0.5 * (rho_c[idx] + rho_c[at(i, j + 1, k)]);
        const double rho_z = 0.5 * (rho_c[idx] + rho_c[at(i, j, k + 1)]);
        kin += rho_y * static_cast<double>(vy[idx]) * vy_old[idx];
        kin += rho_z * static_cast<double>(vz[idx]) * vz_old[idx];
      }
    }
  kin *= 0.5 * cell_vol;

  auto harmonic4 = [](double a, double b, double c, double d) {
    if (a == 0.0 || b == 0.0 || c == 0.0 || d == 0.0) return 0.0;
    return 4.0 / (1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
  };
  double strain = 0.0;
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j)
      for (int i = 1; i <= nx; ++i) {
        const std::size_t idx = at(i, j, k);
        const double bulk = lam_c[idx] + 2.0 * mu_c[idx] / 3.0;
        const double tr = static_cast<double>(sxx[idx]) + syy[idx] + szz[idx];
        strain += tr * tr / (18.0 * bulk);
        if (mu_c[idx] > 0.0) {
          const double m = tr / 3.0;
          const double dx = sxx[idx] - m, dy = syy[idx] - m, dz = szz[idx] - m;
          strain += (dx * dx + dy * dy + dz * dz) / (4.0 * mu_c[idx]);
        }
        const double myz = harmonic4(mu_c[idx], mu_c[at(i, j + 1, k)], mu_c[at(i, j, k + 1)],
                                     mu_c[at(i, j + 1, k + 1)]);
        if (myz > 0.0) strain += static_cast<double>(syz[idx]) * syz[idx] / (2.0 * myz);
        if (i < nx) {
          const double mxy = harmonic4(mu_c[idx], mu_c[at(i + 1, j, k)], mu_c[at(i, j + 1, k)],
                                       mu_c[at(i + 1, j + 1, k)]);
          if (mxy > 0.0) strain += static_cast<double>(sxy[idx]) * sxy[idx] / (2.0 * mxy);
          const double mxz = harmonic4(mu_c[idx], mu_c[at(i + 1, j, k)], mu_c[at(i, j, k + 1)],
                                       mu_c[at(i + 1, j, k + 1)]);
          if (mxz > 0.0) strain += static_cast<double>(sxz[idx]) * sxz[idx] / (2.0 * mxz);
        }
      }
  strain *= cell_vol;
  return kin + strain;
}

void WaveSolver::Impl::step() {
  // Face traction at the current step; zero once the pulse has ended.
  const auto n = static_cast<std::size_t>(done);
  const double src = n < source.size() ? source[n] : 0.0;

  // x-ghosts: driven face at x = 0 (stress image around the prescribed
  // traction), free surface at the far face.
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j) {
      sxx[at(0, j, k)] = static_cast<real>(2.0 * src) - sxx[at(1, j, k)];
      sxx[at(nx + 1, j, k)] = -sxx[at(nx, j, k)];
    }
  for (auto* f : {&sxx, &syy, &szz, &sxy, &sxz, &syz}) sync_lateral(*f);

  if (track_energy) {
    vx0 = vx;
    vy0 = vy;
    vz0 = vz;
  }

  const auto a = args();
  if (use_omp)
    detail::update_velocities_omp(a);
  else
    detail::update_velocities_serial(a);

  if (track_energy) energy.push_back(compute_energy(vx0, vy0, vz0));

  for (auto* f : {&vx, &vy, &vz}) sync_lateral(*f);

  if (use_omp)
    detail::update_stresses_omp(a);
  else
    detail::update_stresses_serial(a);

  if (has_sponge) {
    const int start = nx - config.sponge_layers + 1;
    for (auto* f : {&vx, &vy, &vz, &sxx, &syy, &szz, &sxy, &sxz, &syz}) {
      real* data = f->data();
      for (int k = 1; k <= nz; ++k)
        for (int j = 1; j <= ny; ++j) {
          const std::size_t base = at(0, j, k);
          for (int i = start; i <= nx; ++i) data[base + i] *= damp[static_cast<std::size_t>(i)];
        }
    }
  }

  // Plane-averaged normal stress, fixed summation order for determinism.
  for (std::size_t r = 0; r < receiver_slots.size(); ++r) {
    const int i = receiver_slots[r];
    double sum = 0.0;
    for (int k = 1; k <= nz; ++k) {
      const std::size_t base = at(i, 0, k);
      for (int j = 1; j <= ny; ++j) sum += sxx[base + static_cast<std::size_t>(sj) * j];
    }
    receiver_samples[r].push_back(sum / (static_cast<double>(ny) * nz));
  }

  ++done;
  if (done % config.check_interval == 0 || done == n_steps) check_finite(done);
}

void WaveSolver::step() { impl_->step(); }

RunResult WaveSolver::run() {
  while (impl_->done < impl_->n_steps) impl_->step();
  RunResult out;
  out.traces.dt = impl_->dt;
  for (int slot : impl_->receiver_slots)
    out.traces.positions.push_back((static_cast<double>(slot) - 0.5) * impl_->h);
  out.traces.samples = impl_->receiver_samples;
  out.energy = impl_->energy;
  out.dt = impl_->dt;
  out.steps = impl_->done;
  out.source_duration = impl_->source_duration;
  return out;
}

long WaveSolver::steps_done() const { return impl_->done; }
double WaveSolver::dt() const { return impl_->dt; }

double WaveSolver::total_energy() const {
  if (!impl_->track_energy || impl_->energy.empty())
    fail("energy tracking is not enabled or no step has run");
  return impl_->energy.back();
}

void WaveSolver::poke_stress(int i, int j, int k, double value) {
  impl_->sxx[impl_->at(i + 1, j + 1, k + 1)] = static_cast<real>(value);
}

RunResult run_simulation(const VoxelGrid& grid, const SimulationConfig& config) {
  WaveSolver solver(grid, config);
  return solver.run();
}

double measure_speed(const TraceSet& traces, double threshold_fraction) {
  if (traces.samples.size() < 2) fail("speed measurement needs at least two receiver planes");
  return measure_speed(traces, 0, traces.samples.size() - 1, threshold_fraction);
}

double measure_speed(const TraceSet& traces, std::size_t plane_a, std::size_t plane_b,
                     double threshold_fraction) {
  if (plane_a >= traces.samples.size() || plane_b >= traces.samples.size())
    fail("receiver plane index out of range");
  const double xa = traces.positions.at(plane_a);
  const double xb = traces.positions.at(plane_b);
  if (xa == xb) fail("receiver planes coincide");
  const double ta = waveform::pick_first_arrival(traces.trace(plane_a), threshold_fraction);
  const double tb = waveform::pick_first_arrival(traces.trace(plane_b), threshold_fraction);
  if (tb == ta) fail("arrival-time difference is zero");
  return (xb - xa) / (tb - ta);
}

}  // namespace porocell::microsim
