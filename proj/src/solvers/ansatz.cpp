#include "nsv/solvers/ansatz.hpp"

#include <cmath>
#include <sstream>

#include "nsv/solvers/config.hpp"

namespace nsv {

double ansatz_solenoidality_defect(const AnsatzSpec& a, const GridSpec& grid, double t) {
  const Vec3 u = a.direction(t);
  const ScalarField probe(grid, kNodes);
  double worst = 0.0;
  for (std::size_t n = 0; n < probe.size(); ++n) {
    const Vec3 g = a.grad_psi(probe.position(n), t);
    double s = 0.0;
    for (int d = 0; d < grid.dims(); ++d) s += u[d] * g[d];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

VectorField sample_ansatz(const AnsatzSpec& a, const GridSpec& grid, double t, Layout layout) {
  const double defect = ansatz_solenoidality_defect(a, grid, t);
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "ansatz '" << a.name << "' is not solenoidal: max |u . grad psi| = " << defect;
    throw ConstraintError(os.str());
  }
  const Vec3 u = a.direction(t);
  return VectorField::sample(
      grid,
      [&](const Point& p) {
        const double psi = a.psi(p, t);
        return Vec3{psi * u[0], psi * u[1], psi * u[2]};
      },
      layout);
}

AnsatzSpec PlaneWaveAnsatz::spec() const {
  AnsatzSpec s;
  s.name = "plane_wave";
  const PlaneWaveAnsatz copy = *this;
  auto phase_arg = [copy](const Point& x) {
    return copy.wave[0] * x[0] + copy.wave[1] * x[1] + copy.wave[2] * x[2];
  };
  s.psi = [copy, phase_arg](const Point& x, double) {
    const double q = phase_arg(x);
    double v = 0.0;
    for (std::size_t m = 0; m < copy.amplitudes.size(); ++m) {
      v += copy.amplitudes[m] * std::sin((m + 1.0) * q + copy.phases[m]);
    }
    return v;
  };
  s.grad_psi = [copy, phase_arg](const Point& x, double) {
    const double q = phase_arg(x);
    double dq = 0.0;
    for (std::size_t m = 0; m < copy.amplitudes.size(); ++m) {
      dq += copy.amplitudes[m] * (m + 1.0) * std::cos((m + 1.0) * q + copy.phases[m]);
    }
    return Vec3{dq * copy.wave[0], dq * copy.wave[1], dq * copy.wave[2]};
  };
  s.direction = [copy](double t) {
    const double e = std::exp(-copy.rate * t);
    return Vec3{copy.direction[0] * e, copy.direction[1] * e, copy.direction[2] * e};
  };
  return s;
}

}  // namespace nsv
