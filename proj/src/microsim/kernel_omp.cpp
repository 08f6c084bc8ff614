#include "kernels.hpp"

namespace porocell::microsim::detail {

// Rows are distributed over (k, j); a row is written by exactly one thread,
// so the result matches the serial kernel bit for bit at any thread count.

void update_velocities_omp(const KernelArgs& args) {
  const int ny = args.ny, nz = args.nz;
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j) velocity_row(args, j, k);
}

void update_stresses_omp(const KernelArgs& args) {
  const int ny = args.ny, nz = args.nz;
#pragma omp parallel for collapse(2) schedule(static)
  for (int k = 1; k <= nz; ++k)
    for (int j = 1; j <= ny; ++j) stress_row(args, j, k);
}

}  // namespace porocell::microsim::detail
