#pragma once

// Staggered-grid velocity-stress update kernels. The row bodies are shared
// between the serial reference and the OpenMP implementation so both produce
// bit-identical fields for any thread count: every field value has exactly
// one writer per step.
//
// Staggering (cell c = 1..n, ghosts at 0 and n+1):
//   sxx,syy,szz at cell centres (c-1/2)h   vx at x-faces c*h
//   sxy at (x-face, y-face)                vy at y-faces, vz at z-faces
//   sxz at (x-face, z-face), syz at (y-face, z-face)

#include <cstddef>

namespace porocell::microsim::detail {

using real = float;

struct KernelArgs {
  int nx = 0, ny = 0, nz = 0;   // interior counts
  std::ptrdiff_t sj = 0, sk = 0;  // strides for +1 in j / k
  real *vx = nullptr, *vy = nullptr, *vz = nullptr;
  real *sxx = nullptr, *syy = nullptr, *szz = nullptr;
  real *sxy = nullptr, *sxz = nullptr, *syz = nullptr;
  const real *cvx = nullptr, *cvy = nullptr, *cvz = nullptr;  // dt/(rho_bar h)
  const real *cl2m = nullptr, *clam = nullptr;                // (lam+2mu)dt/h, lam dt/h
  const real *cmxy = nullptr, *cmxz = nullptr, *cmyz = nullptr;  // mu_edge dt/h
};

inline void velocity_row(const KernelArgs& a, int j, int k) {
  const std::ptrdiff_t row = a.sj * j + a.sk * k;
  real* vx = a.vx + row;
  real* vy = a.vy + row;
  real* vz = a.vz + row;
  const real* sxx = a.sxx + row;
  const real* syy = a.syy + row;
  const real* szz = a.szz + row;
  const real* sxy = a.sxy + row;
  const real* sxz = a.sxz + row;
  const real* syz = a.syz + row;
  const std::ptrdiff_t sj = a.sj, sk = a.sk;

  // vx lives on x-faces 0..nx (0 is the driven source face).
  for (int i = 0; i <= a.nx; ++i)
    vx[i] += a.cvx[row + i] *
             ((sxx[i + 1] - sxx[i]) + (sxy[i] - sxy[i - sj]) + (sxz[i] - sxz[i - sk]));
  for (int i = 1; i <= a.nx; ++i)
    vy[i] += a.cvy[row + i] *
             ((sxy[i] - sxy[i - 1]) + (syy[i + sj] - syy[i]) + (syz[i] - syz[i - sk]));
  for (int i = 1; i <= a.nx; ++i)
    vz[i] += a.cvz[row + i] *
             ((sxz[i] - sxz[i - 1]) + (syz[i] - syz[i - sj]) + (szz[i + sk] - szz[i]));
}

inline void stress_row(const KernelArgs& a, int j, int k) {
  const std::ptrdiff_t row = a.sj * j + a.sk * k;
  real* sxx = a.sxx + row;
  real* syy = a.syy + row;
  real* szz = a.szz + row;
  real* sxy = a.sxy + row;
  real* sxz = a.sxz + row;
  real* syz = a.syz + row;
  const real* vx = a.vx + row;
  const real* vy = a.vy + row;
  const real* vz = a.vz + row;
  const std::ptrdiff_t sj = a.sj, sk = a.sk;

  for (int i = 1; i <= a.nx; ++i) {
    const real dvx = vx[i] - vx[i - 1];
    const real dvy = vy[i] - vy[i - sj];
    const real dvz = vz[i] - vz[i - sk];
    const real l2m = a.cl2m[row + i];
    const real lam = a.clam[row + i];
    sxx[i] += l2m * dvx + lam * (dvy + dvz);
    syy[i] += l2m * dvy + lam * (dvx + dvz);
    szz[i] += l2m * dvz + lam * (dvx + dvy);
  }
  // Shear faces at x = 0 and x = nx h stay traction-free (never updated).
  for (int i = 1; i < a.nx; ++i)
    sxy[i] += a.cmxy[row + i] * ((vx[i + sj] - vx[i]) + (vy[i + 1] - vy[i]));
  for (int i = 1; i < a.nx; ++i)
    sxz[i] += a.cmxz[row + i] * ((vx[i + sk] - vx[i]) + (vz[i + 1] - vz[i]));
  for (int i = 1; i <= a.nx; ++i)
    syz[i] += a.cmyz[row + i] * ((vy[i + sk] - vy[i]) + (vz[i + sj] - vz[i]));
}

void update_velocities_serial(const KernelArgs& args);
void update_stresses_serial(const KernelArgs& args);
void update_velocities_omp(const KernelArgs& args);
void update_stresses_omp(const KernelArgs& args);

}  // namespace porocell::microsim::detail
