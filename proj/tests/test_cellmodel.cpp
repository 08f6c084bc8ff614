#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "porocell/cellmodel.hpp"
#include "porocell/common.hpp"
#include "porocell/materials.hpp"
#include "support.hpp"

using namespace porocell;
using namespace porocell::cellmodel;
using testsupport::close_abs;
using testsupport::close_rel;

namespace {
const std::map<std::string, double> kCellFractions = {
    {"LiFePO4", 0.211}, {"electrolyte", 0.382}, {"graphite", 0.186},
    {"Al", 0.147},      {"Cu", 0.025},          {"PP", 0.049}};
const PorositySet kPorosities{0.37, 0.40, 0.40};
}  // namespace

TEST_CASE("reference stack transit times") {
  const auto stack = reference_stack();
  const auto tofs = layer_tofs(stack);
  REQUIRE(tofs.size() == 5);
  // Oracle d/c per layer, frozen in microseconds:
  //   9.21/1154.8 = 7.975407, 10.91/1145.4 = 9.525057, 2.54/1353.7 = 1.876339,
  //   0.77/4600 = 0.167391, 5.87/6320 = 0.928797
  const double us = 1e-6;
  CHECK(close_abs(tofs[0], 7.975407 * us, 0.00001 * us));
  CHECK(close_abs(tofs[1], 9.525057 * us, 0.00001 * us));
  CHECK(close_abs(tofs[2], 1.876339 * us, 0.00001 * us));
  CHECK(close_abs(tofs[3], 0.167391 * us, 0.00001 * us));
  CHECK(close_abs(tofs[4], 0.928797 * us, 0.00001 * us));
  // Rounded table values within 0.01 us each, total within 0.05 us.
  CHECK(close_abs(tofs[0], 7.97 * us, 0.01 * us));
  CHECK(close_abs(tofs[1], 9.53 * us, 0.01 * us));
  CHECK(close_abs(tofs[2], 1.88 * us, 0.01 * us));
  CHECK(close_abs(tofs[3], 0.17 * us, 0.01 * us));
  CHECK(close_abs(tofs[4], 0.93 * us, 0.01 * us));
  CHECK(close_abs(stack_tof(stack), 20.47 * us, 0.05 * us));
}

TEST_CASE("single layer and permutation invariance") {
  CellStack s;
  s.layers = {{LayerKind::Cu, {}, 1e-3, 1000.0, VelocityProvenance::FixedTable}};
  s.total_thickness = 1e-3;
  CHECK(close_rel(stack_tof(s), 1e-6, 1e-12));

  auto stack = reference_stack();
  const double base = stack_tof(stack);
  std::mt19937 gen(3);
  for (int i = 0; i < 10; ++i) {
    std::shuffle(stack.layers.begin(), stack.layers.end(), gen);
    CHECK(close_rel(stack_tof(stack), base, 1e-12));
  }
}

TEST_CASE("stack validation") {
  auto stack = reference_stack();
  stack.total_thickness = 40e-3;
  CHECK_THROWS_AS(stack_tof(stack), Error);
  stack = reference_stack();
  stack.layers[0].porosity.reset();
  CHECK_THROWS_AS(stack_tof(stack), Error);
}

TEST_CASE("layer thickness derivation") {
  SUBCASE("round-trips to the input volume fractions") {
    const auto derived = derive_layer_thicknesses(kCellFractions, kPorosities, 29.3e-3);
    const auto back =
        reaggregate_volume_fractions(derived, kPorosities, derived.excess_electrolyte_fraction);
    for (const auto& [name, f] : kCellFractions)
      CHECK(close_rel(back.at(name), f, 1e-9));
  }
  SUBCASE("the whole-cell table leaves excess electrolyte outside the pores") {
    const auto derived = derive_layer_thicknesses(kCellFractions, kPorosities, 29.3e-3);
    CHECK(derived.excess_electrolyte_fraction > 0.05);
    CHECK(derived.excess_electrolyte_fraction < 0.15);
  }
  SUBCASE("single dense layer takes the whole thickness") {
    const auto derived = derive_layer_thicknesses({{"Cu", 1.0}}, kPorosities, 5e-3);
    CHECK(close_rel(derived.thickness.at(LayerKind::Cu), 5e-3, 1e-12));
  }
  SUBCASE("insufficient electrolyte is infeasible") {
    auto fractions = kCellFractions;
    fractions["electrolyte"] = 0.05;
    fractions["Al"] = 0.482;  // keep the sum at 1
    CHECK_THROWS_AS(derive_layer_thicknesses(fractions, kPorosities, 29.3e-3), Error);
  }
  SUBCASE("fractions must sum to one") {
    CHECK_THROWS_AS(derive_layer_thicknesses({{"Cu", 0.4}}, kPorosities, 1e-3), Error);
  }
}

TEST_CASE("thickness equilibrium") {
  SUBCASE("zero expansion gives zero deltas") {
    const std::vector<SpringLayer> springs = {
        {LayerKind::Anode, 9e-3, 0.5e9, 0.05, 0.0},
        {LayerKind::Cathode, 11e-3, 1.8e9, 0.07, 0.0},
    };
    const auto eq = equilibrium_thickness(springs);
    CHECK(eq.thickness_strain_pct.at(LayerKind::Anode) == 0.0);
    CHECK(eq.thickness_strain_pct.at(LayerKind::Cathode) == 0.0);
  }
  SUBCASE("total thickness is conserved for random spring chains") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<SpringLayer> springs;
      const int n = 2 + static_cast<int>(gen() % 3);
      const LayerKind kinds[] = {LayerKind::Anode, LayerKind::Cathode, LayerKind::Separator,
                                 LayerKind::Cu, LayerKind::Al};
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        SpringLayer l;
        l.kind = kinds[i];
        l.thickness = 1e-3 * (1.0 + 9.0 * u(gen));
        l.stiffness_modulus = 1e8 * (1.0 + 99.0 * u(gen));
        l.compliant_fraction = 0.01 + 0.5 * u(gen);
        l.free_strain = 0.01 * (u(gen) - 0.3);
        total += l.thickness;
        springs.push_back(l);
      }
      const auto eq = equilibrium_thickness(springs);
      double delta = 0.0;
      for (const auto& l : springs)
        delta += eq.thickness_strain_pct.at(l.kind) / 100.0 * l.thickness;
      CHECK(close_abs(delta, 0.0, 1e-12 * total));
    }
  }
  SUBCASE("a rigid layer takes zero elastic strain") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<SpringLayer> springs = {
        {LayerKind::Anode, 9e-3, 0.5e9, 0.05, 0.004},
        {LayerKind::Cu, 1e-3, inf, 1.0, 0.0},
        {LayerKind::Cathode, 11e-3, 1.8e9, 0.07, 0.0},
    };
    const auto eq = equilibrium_thickness(springs);
    CHECK(eq.thickness_strain_pct.at(LayerKind::Cu) == 0.0);
    // The anode and cathode absorb the full mismatch.
    const double da = eq.thickness_strain_pct.at(LayerKind::Anode) / 100.0 * 9e-3;
    const double dc = eq.thickness_strain_pct.at(LayerKind::Cathode) / 100.0 * 11e-3;
    CHECK(close_abs(da + dc, 0.0, 1e-15));
  }
  SUBCASE("an all-rigid stack is indeterminate") {
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<SpringLayer> springs = {{LayerKind::Cu, 1e-3, inf, 1.0, 0.001}};
    CHECK_THROWS_AS(equilibrium_thickness(springs), Error);
  }
}

TEST_CASE("lithium loss scenarios") {
  const auto lib = materials::builtin_library();
  const auto stack = reference_stack();
  AgeingScenario scenario;

  SUBCASE("zero loss leaves everything unchanged") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::SEI, 0.0};
    const auto out = lithium_loss_effects(scenario, stack, lib);
    for (const auto& [kind, d] : out.deltas) {
      CHECK(d.particle_size_pct == 0.0);
      CHECK(d.layer_thickness_pct == 0.0);
      CHECK(d.modulus_pct == 0.0);
    }
    CHECK(close_rel(out.total_tof, stack_tof(stack), 1e-12));
  }

  SUBCASE("SEI growth at 10% loss reproduces the outcome table") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::SEI, 0.10};
    const auto out = lithium_loss_effects(scenario, stack, lib);
    CHECK(close_abs(out.deltas.at(LayerKind::Anode).particle_size_pct, 4.2, 0.02));
    CHECK(out.deltas.at(LayerKind::Anode).layer_thickness_pct == 0.0);
    CHECK(close_abs(out.deltas.at(LayerKind::Cathode).modulus_pct, -2.0, 1e-9));
    CHECK(close_abs(out.deltas.at(LayerKind::Cathode).particle_size_pct, -0.167, 0.001));
    CHECK(close_abs(out.deltas.at(LayerKind::Cathode).layer_thickness_pct, -0.135, 1e-9));
  }

  SUBCASE("plating at 10% loss") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::Plating, 0.10};
    const auto out = lithium_loss_effects(scenario, stack, lib);
    CHECK(close_abs(out.deltas.at(LayerKind::Anode).particle_size_pct, 1.1, 0.02));
    CHECK(out.deltas.at(LayerKind::Anode).layer_thickness_pct == 0.0);
    // Cathode side is mechanism-independent.
    CHECK(close_abs(out.deltas.at(LayerKind::Cathode).layer_thickness_pct, -0.135, 1e-9));
  }

  SUBCASE("LAM at 10% loss gives the equilibrium thickness shifts") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::LAM, 0.10};
    const auto out = lithium_loss_effects(scenario, stack, lib);
    CHECK(close_abs(out.deltas.at(LayerKind::Cathode).layer_thickness_pct, -0.192, 0.02));
    CHECK(close_abs(out.deltas.at(LayerKind::Anode).layer_thickness_pct, 0.233, 0.02));
    // Total stack thickness conserved through the spring balance.
    double dd = 0.0;
    for (const auto& l : stack.layers)
      dd += out.deltas.at(l.kind).layer_thickness_pct / 100.0 * l.thickness;
    CHECK(close_abs(dd, 0.0, 1e-12 * stack.total_thickness));
  }

  SUBCASE("deltas scale nearly linearly up to 10% loss") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::SEI, 0.10};
    const auto full = lithium_loss_effects(scenario, stack, lib);
    scenario.lithium_loss = LithiumLoss{LossMechanism::SEI, 0.05};
    const auto half = lithium_loss_effects(scenario, stack, lib);
    const double g10 = full.deltas.at(LayerKind::Anode).particle_size_pct;
    const double g5 = half.deltas.at(LayerKind::Anode).particle_size_pct;
    CHECK(std::abs(2.0 * g5 - g10) / std::abs(g10) < 0.05);
  }

  SUBCASE("fraction bound is enforced") {
    scenario.lithium_loss = LithiumLoss{LossMechanism::SEI, 0.25};
    CHECK_THROWS_AS(lithium_loss_effects(scenario, stack, lib), Error);
  }
}

TEST_CASE("binder degradation sweep") {
  const auto stack = reference_stack();
  const double fresh = stack_tof(stack);

  SUBCASE("r = 0 is a bit-exact no-op and never calls the solver") {
    int calls = 0;
    const auto points = binder_degradation_sweep(stack, {0.0},
                                                 [&](LayerKind, double) {
                                                   ++calls;
                                                   return 1000.0;
                                                 });
    CHECK(calls == 0);
    CHECK(points.size() == 1);
    CHECK(points[0].tof == fresh);
    CHECK(points[0].delta_pct == 0.0);
  }

  SUBCASE("table-valued aged velocities give the expected total increase") {
    // With anode 960.3 and cathode 966.0 m/s the stack transit time rises by
    // 16.53% over the fresh reference.
    const auto points = binder_degradation_sweep(
        stack, {0.0, 0.75}, [](LayerKind kind, double scale) {
          CHECK(scale == doctest::Approx(0.25));
          return kind == LayerKind::Anode ? 960.3 : 966.0;
        });
    REQUIRE(points.size() == 2);
    CHECK(close_abs(points[1].delta_pct, 16.53, 0.05));
  }

  SUBCASE("monotone synthetic stiffness model gives a monotone curve") {
    // Velocity falling with binder softening must raise the ToF monotonically.
    const auto points = binder_degradation_sweep(
        stack, {0.0, 0.25, 0.5, 0.75}, [](LayerKind kind, double scale) {
          const double v0 = kind == LayerKind::Anode ? 1154.8 : 1145.4;
          return v0 * (0.55 + 0.45 * std::sqrt(scale));
        });
    for (std::size_t i = 1; i < points.size(); ++i)
      CHECK(points[i].delta_pct > points[i - 1].delta_pct);
  }

  SUBCASE("unsorted or out-of-range reductions are rejected") {
    auto noop = [](LayerKind, double) { return 1000.0; };
    CHECK_THROWS_AS(binder_degradation_sweep(stack, {0.5, 0.25}, noop), Error);
    CHECK_THROWS_AS(binder_degradation_sweep(stack, {0.95}, noop), Error);
  }
}
