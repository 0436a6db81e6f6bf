#include "nsv/solvers/runner.hpp"

#include <cmath>
#include <sstream>
#include <variant>

#include "nsv/solvers/mac.hpp"
#include "nsv/solvers/spectral_solver.hpp"

namespace nsv {

namespace {

using Stepper = std::variant<SpectralStepper, MacStepper>;

Stepper make_stepper(const VectorField& v0, const ForcingSpec& f,
                     const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg, bool advect) {
  const GridSpec& g = v0.grid();
  if (g.periodic()) {
    if (bc) throw std::invalid_argument("a periodic run takes no boundary datum");
    SpectralStepper s(g, f, cfg, advect);
    s.load(v0);
    return s;
  }
  if (!bc) throw std::invalid_argument("a bounded-box run needs a boundary datum");
  bc->validate(g, 0.0);
  MacStepper s(g, f, *bc, cfg, advect);
  s.load(v0);
  return s;
}

Trajectory integrate(const VectorField& v0, const ForcingSpec& f,
                     const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg,
                     int sample_every, bool advect) {
  if (sample_every < 1) throw std::invalid_argument("sample_every must be at least 1");
  const double div0 = max_divergence(v0);
  if (div0 > 1e-10) {
    std::ostringstream os;
    os << "initial velocity is not solenoidal: max |div v0| = " << div0;
    throw ConstraintError(os.str());
  }
  cfg.validate(v0.grid(), std::sqrt(max_abs(norm_squared(collocated(v0)))));

  Stepper stepper = make_stepper(v0, f, bc, cfg, advect);
  auto velocity = [&] { return std::visit([](auto& s) { return s.velocity(); }, stepper); };
  auto pressure = [&](double t) {
    if (auto* s = std::get_if<SpectralStepper>(&stepper)) return s->pressure(t);
    return std::get<MacStepper>(stepper).pressure();
  };

  Trajectory traj;
  auto record = [&](double t, const VectorField& v) {
    Vorticity w = curl(v);
    SampleDiagnostics d = diagnose(v, w);
    traj.append({t, v, pressure(t), std::move(w), d});
  };

  const VectorField start = velocity();
  record(0.0, start);
  const double e0 = energy(start);
  const long long steps = cfg.steps();
  std::vector<double> step_energy{e0};
  step_energy.reserve(static_cast<std::size_t>(steps) + 1);
  for (long long k = 0; k < steps; ++k) {
    const double t = k * cfg.dt;
    std::visit([t](auto& s) { s.step(t); }, stepper);
    const double t1 = (k + 1) * cfg.dt;
    const VectorField v = velocity();
    const double e = energy(v);
    step_energy.push_back(e);
    if (!f.active() && e0 > 0.0 && e > 10.0 * e0) {
      std::ostringstream os;
      os << "energy grew from " << e0 << " to " << e << " by t = " << t1;
      throw BlowUpError(os.str(), t1);
    }
    if ((k + 1) % sample_every == 0 || k + 1 == steps) record(t1, v);
  }
  traj.set_step_energy(cfg.dt, std::move(step_energy));
  return traj;
}

}  // namespace

Trajectory run_nse(const VectorField& v0, const ForcingSpec& f,
                   const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg,
                   int sample_every) {
  return integrate(v0, f, bc, cfg, sample_every, true);
}

Trajectory solve_reduced(const VectorField& v0, const ForcingSpec& f,
                         const std::optional<BoundaryDatum>& bc, const SolverConfig& cfg,
                         int sample_every) {
  return integrate(v0, f, bc, cfg, sample_every, false);
}

}  // namespace nsv
