#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "nsv/fields/field.hpp"
#include "nsv/spectral/spectral.hpp"

namespace nsv {

// Time step too large for the stability guard. `time` is NaN when the
// violation is detected while building the configuration.
class CflError : public std::runtime_error {
 public:
  CflError(const std::string& what, double time = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }
  bool at_construction() const { return time_ != time_; }

 private:
  double time_;
};

// NaN or runaway energy during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time) : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Closed-form data violating a structural constraint (e.g. a non-solenoidal ansatz).
class ConstraintError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Integrator { explicit_euler, rk4, imex_cn };

const char* to_string(Integrator i);
const char* to_string(DealiasPolicy p);

struct SolverConfig {
  double viscosity = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  Integrator integrator = Integrator::rk4;
  DealiasPolicy dealias = DealiasPolicy::two_thirds;
  double cfl_guard = 0.5;

  // Throws std::invalid_argument for out-of-range values (message names the
  // offending quantity) and CflError when dt exceeds the advective guard
  // cfl*h/max|v0| or, for explicit diffusion, cfl*h^2/(2 N mu).
  void validate(const GridSpec& grid, double max_speed) const;

  long long steps() const;
};

// t^{-K} for t >= 1, joined C^1 to the quadratic 1 + K(1 - t^2)/2 on [0, 1].
double decay_factor(double t, double exponent);

// Body force amplitude * shape(x) * decay_factor(t, K).
struct ForcingSpec {
  std::string name = "none";
  std::function<Vec3(const Point&)> shape;
  double decay_exponent = 1.0;
  double amplitude = 0.0;

  static ForcingSpec none() { return {}; }
  bool active() const { return shape && amplitude != 0.0; }
  double magnitude(double t) const { return amplitude * decay_factor(t, decay_exponent); }
  Vec3 evaluate(const Point& x, double t) const;
  // Collocated on nodes, or on MAC faces for the staggered layout.
  VectorField sample(const GridSpec& grid, double t, Layout layout = Layout::collocated) const;
};

// Dirichlet velocity data on the box boundary.
struct BoundaryDatum {
  std::string name = "no_slip";
  std::function<Vec3(const Point&, double)> profile;
  double decay_exponent = 2.0;
  bool tangential_only = true;

  static BoundaryDatum no_slip() { return {}; }
  Vec3 evaluate(const Point& x, double t) const;
  // With tangential_only, throws ConstraintError if the profile has a normal
  // component above 1e-12 at any boundary node.
  void validate(const GridSpec& grid, double t) const;
  // Largest |v*| over boundary nodes.
  double max_magnitude(const GridSpec& grid, double t) const;
};

}  // namespace nsv
