#pragma once

#include <optional>

#include "nsv/cli/config.hpp"
#include "nsv/solvers/ansatz.hpp"

namespace nsv {

GridSpec scenario_grid(const Scenario& s);

ForcingSpec scenario_forcing(const Scenario& s);

// Empty on a torus.
std::optional<BoundaryDatum> scenario_boundary(const Scenario& s, double viscosity);

// Solenoidal initial velocity: collocated on a torus, MAC-staggered on a box.
VectorField scenario_initial_field(const Scenario& s, double viscosity);

// Closed-form ansatz behind the shear and ansatz_custom scenarios.
std::optional<AnsatzSpec> scenario_ansatz(const Scenario& s);

// Profile entering through the x = 0 wall, with net boundary flux
// -inject_inflow * (L / 2)^(N-1).
VectorField injected_inflow(const Scenario& s);

}  // namespace nsv
