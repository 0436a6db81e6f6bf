#pragma once

#include <vector>

#include "nsv/solvers/config.hpp"

namespace nsv {

// Fourier-space time stepper on the periodic torus. The state is held as
// coefficient arrays between steps; physical fields are produced on request.
//
//   full NSE:  v_t = -P[(v . grad) v] + mu lap v + P f
//   reduced:   v_t = mu lap v - grad p + f,  lap p = div f
class SpectralStepper {
 public:
  SpectralStepper(const GridSpec& grid, ForcingSpec forcing, SolverConfig cfg, bool advect);

  // Throws GridError unless v is collocated on the nodes of this grid.
  void load(const VectorField& v);

  // Advances the state from t to t + dt. Throws CflError if dt exceeds the
  // advective guard for the current speed and BlowUpError on non-finite values.
  void step(double t);

  VectorField velocity() const;
  // Pressure (zero mean) consistent with the current state at time t.
  ScalarField pressure(double t) const;
  double max_speed() const;

 private:
  using Modes = std::vector<std::vector<fft::Complex>>;

  Modes rhs(const Modes& v, double t, bool check_cfl, double time_of_check) const;
  Modes nonlinear(const Modes& v, double* speed = nullptr) const;
  Modes forcing_modes(double t) const;
  std::vector<double> to_physical(const std::vector<fft::Complex>& m) const;

  GridSpec grid_;
  ForcingSpec forcing_;
  SolverConfig cfg_;
  bool advect_;
  int dims_;
  Index3 shape_;
  spectral::Wavenumbers wn_;
  std::vector<std::size_t> conj_;
  Modes state_;
};

// Single steps from a physical state. These build a stepper on each call; use
// SpectralStepper directly for repeated stepping.
VectorField step_nse_spectral(const VectorField& state, double t, const ForcingSpec& f,
                              const SolverConfig& cfg);
VectorField step_reduced_spectral(const VectorField& state, double t, const ForcingSpec& f,
                                  const SolverConfig& cfg);

}  // namespace nsv
