#include "kernels.hpp"

namespace porocell::microsim::detail {

void update_velocities_serial(const KernelArgs& args) {
  for (int k = 1; k <= args.nz; ++k)
    for (int j = 1; j <= args.ny; ++j) velocity_row(args, j, k);
}

void update_stresses_serial(const KernelArgs& args) {
  for (int k = 1; k <= args.nz; ++k)
    for (int j = 1; j <= args.ny; ++j) stress_row(args, j, k);
}

}  // namespace porocell::microsim::detail
