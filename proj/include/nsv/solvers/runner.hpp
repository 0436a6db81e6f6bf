#pragma once

#include <optional>

#include "nsv/solvers/config.hpp"
#include "nsv/solvers/trajectory.hpp"

namespace nsv {

// Integrates the full model from v0 over [0, cfg.t_end], sampling at step 0,
// every `sample_every` steps and at the final step. Periodic grids use the
// spectral stepper (v0 collocated on nodes, no datum); bounded grids use the
// MAC stepper (v0 staggered, datum required).
//
// Throws std::invalid_argument for inconsistent arguments, ConstraintError
// when max |div v0| > 1e-10 or a tangential datum has a normal component,
// CflError, BlowUpError (NaN, or energy above 10x its initial value when
// unforced) and SolvabilityError from the steppers.
Trajectory run_nse(const VectorField& v0, const ForcingSpec& f,
                   const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg,
                   int sample_every = 1);

// Same contract for the linear system v_t = mu lap v - grad p + f with
// lap p = div f.
Trajectory solve_reduced(const VectorField& v0, const ForcingSpec& f,
                         const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg,
                         int sample_every = 1);

}  // namespace nsv
