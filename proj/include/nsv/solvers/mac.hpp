#pragma once

#include <functional>
#include <memory>

#include "nsv/solvers/config.hpp"

namespace nsv {

// Projection method on a staggered (MAC) grid over the bounded box.
// Velocity components live on the faces normal to their axis, pressure at
// cell centres. Normal velocity on the walls is prescribed by the boundary
// datum; tangential wall values enter through ghost samples 2 g - u.
// Pressure solves use the separable Neumann eigenbasis of the discrete
// Laplacian.
class MacStepper {
 public:
  MacStepper(const GridSpec& grid, ForcingSpec forcing, BoundaryDatum bc, SolverConfig cfg,
             bool advect);
  ~MacStepper();
  MacStepper(MacStepper&&) noexcept;
  MacStepper& operator=(MacStepper&&) noexcept;

  // Throws GridError unless v is staggered on this grid.
  void load(const VectorField& v);

  // Advances the state from t to t + dt. Throws CflError, BlowUpError, or
  // SolvabilityError when the datum's net wall flux is not zero.
  void step(double t);

  VectorField velocity() const;
  // Cell-centred pressure from the last projection (zero before any step).
  ScalarField pressure() const;
  double max_speed() const;

  // Imposes the datum's normal wall values at time t on a staggered field and
  // removes its discrete gradient part so that the cell divergence vanishes.
  VectorField project(const VectorField& v, double t) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct MacStep {
  VectorField velocity;
  ScalarField pressure;
};

MacStep step_nse_mac(const VectorField& state, double t, const ForcingSpec& f,
                     const BoundaryDatum& bc, const SolverConfig& cfg);
MacStep step_reduced_mac(const VectorField& state, double t, const ForcingSpec& f,
                         const BoundaryDatum& bc, const SolverConfig& cfg);

// Samples fn on the MAC faces of a bounded grid, imposes the datum's normal
// wall values at time t and projects.
VectorField mac_initial_field(const GridSpec& grid, const std::function<Vec3(const Point&)>& fn,
                              const BoundaryDatum& bc, double t = 0.0);

}  // namespace nsv
