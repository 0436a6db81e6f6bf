#include "nsv/solvers/config.hpp"

#include <cmath>
#include <sstream>

namespace nsv {

const char* to_string(Integrator i) {
  switch (i) {
    case Integrator::explicit_euler: return "explicit_euler";
    case Integrator::rk4: return "rk4";
    case Integrator::imex_cn: return "imex_cn";
  }
  return "?";
}

const char* to_string(DealiasPolicy p) {
  return p == DealiasPolicy::none ? "none" : "two_thirds";
}

void SolverConfig::validate(const GridSpec& grid, double max_speed) const {
  if (!(viscosity > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(cfl_guard > 0.0 && cfl_guard <= 1.0)) throw std::invalid_argument("cfl_guard must lie in (0, 1]");
  const double ratio = t_end / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw std::invalid_argument("t_end must be an integer multiple of dt");
  }
  const double h = grid.min_spacing();
  const double adv_limit = cfl_guard * h / std::max(max_speed, 1e-12);
  if (dt > adv_limit) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the advective limit " << adv_limit;
    throw CflError(os.str());
  }
  if (integrator != Integrator::imex_cn) {
    const double diff_limit = cfl_guard * h * h / (2.0 * grid.dims() * viscosity);
    if (dt > diff_limit) {
      std::ostringstream os;
      os << "dt = " << dt << " exceeds the explicit diffusion limit " << diff_limit;
      throw CflError(os.str());
    }
  }
}

long long SolverConfig::steps() const { return std::llround(t_end / dt); }

double decay_factor(double t, double exponent) {
  if (t >= 1.0) return std::pow(t, -exponent);
  return 1.0 + 0.5 * exponent * (1.0 - t * t);
}

Vec3 ForcingSpec::evaluate(const Point& x, double t) const {
  if (!active()) return {0.0, 0.0, 0.0};
  const Vec3 s = shape(x);
  const double m = magnitude(t);
  return {m * s[0], m * s[1], m * s[2]};
}

VectorField ForcingSpec::sample(const GridSpec& grid, double t, Layout layout) const {
  if (!active()) return VectorField::zeros(grid, layout);
  return VectorField::sample(grid, [&](const Point& p) { return evaluate(p, t); }, layout);
}

Vec3 BoundaryDatum::evaluate(const Point& x, double t) const {
  if (!profile) return {0.0, 0.0, 0.0};
  return profile(x, t);
}

namespace {

template <class Fn>
void for_each_boundary_node(const GridSpec& g, Fn fn) {
  const ScalarField probe(g, kNodes);
  for (std::size_t n = 0; n < probe.size(); ++n) {
    const Index3 ijk = probe.unflatten(n);
    for (int d = 0; d < g.dims(); ++d) {
      if (ijk[d] == 0 || ijk[d] == probe.shape()[d] - 1) fn(probe.position(n), d);
    }
  }
}

}  // namespace

void BoundaryDatum::validate(const GridSpec& grid, double t) const {
  if (!tangential_only || !profile) return;
  double worst = 0.0;
  for_each_boundary_node(grid, [&](const Point& p, int axis) {
    worst = std::max(worst, std::abs(profile(p, t)[axis]));
  });
  if (worst > 1e-12) {
    std::ostringstream os;
    os << "boundary datum '" << name << "' is flagged tangential but has normal component " << worst;
    throw ConstraintError(os.str());
  }
}

double BoundaryDatum::max_magnitude(const GridSpec& grid, double t) const {
  if (!profile) return 0.0;
  double worst = 0.0;
  for_each_boundary_node(grid, [&](const Point& p, int) {
    const Vec3 v = profile(p, t);
    worst = std::max(worst, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
  });
  return worst;
}

}  // namespace nsv
