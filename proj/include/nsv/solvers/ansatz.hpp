#pragma once

#include <functional>
#include <string>

#include "nsv/fields/field.hpp"

namespace nsv {

// Separable velocity v(x, t) = psi(x, t) u(t) with a spatially constant
// direction u. The gradient of psi is supplied in closed form so that the
// solenoidality constraint u . grad(psi) = 0 can be checked exactly.
struct AnsatzSpec {
  std::string name = "ansatz";
  std::function<double(const Point&, double)> psi;
  std::function<Vec3(const Point&, double)> grad_psi;
  std::function<Vec3(double)> direction;
};

// max over the grid nodes of |u(t) . grad psi(x, t)|.
double ansatz_solenoidality_defect(const AnsatzSpec& a, const GridSpec& grid, double t);

// Samples psi*u on the grid nodes (or on MAC faces for the staggered
// layout). Throws ConstraintError when the solenoidality defect exceeds 1e-10.
VectorField sample_ansatz(const AnsatzSpec& a, const GridSpec& grid, double t,
                          Layout layout = Layout::collocated);

// psi = sum_m c_m sin(m (q . x) + phi_m) with q an integer vector orthogonal
// to u; direction u(t) = u0 * exp(-rate t). Periodic on [0, 2 pi]^N.
struct PlaneWaveAnsatz {
  Index3 direction{1, 0, 0};
  Index3 wave{0, 1, 0};
  std::vector<double> amplitudes{1.0};
  std::vector<double> phases{0.0};
  double rate = 0.0;

  AnsatzSpec spec() const;
};

}  // namespace nsv
