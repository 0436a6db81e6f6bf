#include "nsv/cli/scenario.hpp"

#include <cmath>
#include <random>

#include "nsv/fields/operators.hpp"
#include "nsv/solvers/mac.hpp"
#include "nsv/spectral/spectral.hpp"

namespace nsv {

namespace {

double default_length(const Scenario& s) {
  if (s.length > 0.0) return s.length;
  if (s.periodic) return 2.0 * kPi;
  return s.kind == ScenarioKind::taylor_green ? kPi : 1.0;
}

// Fundamental wavenumber: one period on the torus, a half period across the box.
double base_wavenumber(const Scenario& s) {
  const double L = default_length(s);
  return s.periodic ? 2.0 * kPi / L : kPi / L;
}

VectorField normalize_rms(VectorField v) {
  const double e = energy(v);
  if (e == 0.0) return v;
  double volume = 1.0;
  for (int d = 0; d < v.dims(); ++d) volume *= v.grid().length(d);
  return std::sqrt(volume / e) * v;
}

struct RandomMode {
  Index3 k;
  Vec3 a;
  Vec3 b;
};

VectorField random_field(const Scenario& s, const GridSpec& g) {
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  const int m = s.max_mode;
  const int mz = s.dims == 3 ? m : 0;
  std::vector<RandomMode> modes;
  for (int kx = -m; kx <= m; ++kx) {
    for (int ky = -m; ky <= m; ++ky) {
      for (int kz = -mz; kz <= mz; ++kz) {
        if (kx == 0 && ky == 0 && kz == 0) continue;
        RandomMode mode{{kx, ky, kz}, {}, {}};
        for (int d = 0; d < 3; ++d) mode.a[d] = d < s.dims ? coeff(rng) : 0.0;
        for (int d = 0; d < 3; ++d) mode.b[d] = d < s.dims ? coeff(rng) : 0.0;
        modes.push_back(mode);
      }
    }
  }
  const double kappa = base_wavenumber(s);
  const VectorField raw = VectorField::sample(g, [&](const Point& p) {
    Vec3 v{0.0, 0.0, 0.0};
    for (const auto& mode : modes) {
      const double arg = kappa * (mode.k[0] * p[0] + mode.k[1] * p[1] + mode.k[2] * p[2]);
      const double c = std::cos(arg), sn = std::sin(arg);
      for (int d = 0; d < 3; ++d) v[d] += mode.a[d] * c + mode.b[d] * sn;
    }
    return v;
  });
  return normalize_rms(leray_project(raw));
}

// Closed-form velocity of the shear and Taylor-Green scenarios at time t.
std::function<Vec3(const Point&, double)> exact_solution(const Scenario& s, double mu) {
  const double kappa = base_wavenumber(s);
  if (s.kind == ScenarioKind::shear) {
    const double k = kappa * s.wavenumber;
    return [k, mu](const Point& p, double t) {
      return Vec3{std::exp(-mu * k * k * t) * std::sin(k * p[1]), 0.0, 0.0};
    };
  }
  return [kappa, mu](const Point& p, double t) {
    const double decay = std::exp(-2.0 * mu * kappa * kappa * t);
    return Vec3{decay * std::sin(kappa * p[0]) * std::cos(kappa * p[1]),
                -decay * std::cos(kappa * p[0]) * std::sin(kappa * p[1]), 0.0};
  };
}

}  // namespace

GridSpec scenario_grid(const Scenario& s) {
  const double L = default_length(s);
  return s.periodic ? GridSpec::periodic(s.dims, s.cells, L) : GridSpec::box(s.dims, s.cells, L);
}

ForcingSpec scenario_forcing(const Scenario& s) {
  if (s.forcing_shape == "none") return ForcingSpec::none();
  ForcingSpec f;
  f.name = s.forcing_shape;
  const double kappa = base_wavenumber(s);
  f.shape = [kappa](const Point& p) { return Vec3{std::sin(kappa * p[1]), 0.0, 0.0}; };
  f.amplitude = s.forcing_amplitude;
  f.decay_exponent = s.forcing_decay;
  return f;
}

std::optional<BoundaryDatum> scenario_boundary(const Scenario& s, double viscosity) {
  if (s.periodic) return std::nullopt;
  std::string kind = s.boundary_datum;
  if (kind.empty()) {
    kind = s.kind == ScenarioKind::shear || s.kind == ScenarioKind::taylor_green ? "exact" : "no_slip";
  }
  BoundaryDatum bc;
  bc.decay_exponent = s.boundary_decay;
  if (kind == "no_slip") return bc;
  bc.name = kind;
  const auto exact = exact_solution(s, viscosity);
  // the shear profile crosses the x walls
  bc.tangential_only = s.kind == ScenarioKind::taylor_green;
  if (kind == "exact") {
    bc.profile = exact;
    return bc;
  }
  const double K = s.boundary_decay;
  bc.profile = [exact, K](const Point& p, double t) {
    const Vec3 v = exact(p, 0.0);
    const double a = decay_factor(t, K) / decay_factor(0.0, K);
    return Vec3{a * v[0], a * v[1], a * v[2]};
  };
  return bc;
}

std::optional<AnsatzSpec> scenario_ansatz(const Scenario& s) {
  if (s.kind == ScenarioKind::ansatz_custom) {
    PlaneWaveAnsatz pw;
    pw.direction = {s.ansatz_direction[0], s.ansatz_direction[1], s.ansatz_direction[2]};
    pw.wave = {s.ansatz_wave[0], s.ansatz_wave[1], s.ansatz_wave[2]};
    pw.amplitudes = s.ansatz_amplitudes;
    pw.phases = s.ansatz_phases;
    const AnsatzSpec base = pw.spec();
    const double kappa = base_wavenumber(s);
    AnsatzSpec a = base;
    a.name = "ansatz_custom";
    a.psi = [base, kappa](const Point& p, double t) {
      return base.psi({kappa * p[0], kappa * p[1], kappa * p[2]}, t);
    };
    a.grad_psi = [base, kappa](const Point& p, double t) {
      const Vec3 g = base.grad_psi({kappa * p[0], kappa * p[1], kappa * p[2]}, t);
      return Vec3{kappa * g[0], kappa * g[1], kappa * g[2]};
    };
    return a;
  }
  if (s.kind == ScenarioKind::shear) {
    const double k = base_wavenumber(s) * s.wavenumber;
    AnsatzSpec a;
    a.name = "shear";
    a.psi = [k](const Point& p, double) { return std::sin(k * p[1]); };
    a.grad_psi = [k](const Point& p, double) { return Vec3{0.0, k * std::cos(k * p[1]), 0.0}; };
    a.direction = [](double) { return Vec3{1.0, 0.0, 0.0}; };
    return a;
  }
  return std::nullopt;
}

VectorField scenario_initial_field(const Scenario& s, double viscosity) {
  const GridSpec g = scenario_grid(s);
  std::function<Vec3(const Point&)> fn;
  switch (s.kind) {
    case ScenarioKind::shear:
    case ScenarioKind::taylor_green: {
      const auto exact = exact_solution(s, viscosity);
      fn = [exact](const Point& p) { return exact(p, 0.0); };
      break;
    }
    case ScenarioKind::two_mode: {
      const double kappa = base_wavenumber(s);
      return normalize_rms(leray_project(VectorField::sample(g, [kappa](const Point& p) {
        return Vec3{std::sin(kappa * p[1]), std::sin(2.0 * kappa * p[0]), 0.0};
      })));
    }
    case ScenarioKind::ansatz_custom:
      return sample_ansatz(*scenario_ansatz(s), g, 0.0);
    case ScenarioKind::random_solenoidal:
      return random_field(s, g);
  }
  if (s.periodic) return VectorField::sample(g, fn);
  return mac_initial_field(g, fn, *scenario_boundary(s, viscosity), 0.0);
}

VectorField injected_inflow(const Scenario& s) {
  const GridSpec g = scenario_grid(s);
  const double L = default_length(s);
  const double a = s.inject_inflow;
  const int dims = s.dims;
  return VectorField::sample(
      g,
      [a, L, dims](const Point& p) {
        if (p[0] != 0.0) return Vec3{0.0, 0.0, 0.0};
        double v = a;
        for (int e = 1; e < dims; ++e) v *= std::pow(std::sin(kPi * p[e] / L), 2);
        return Vec3{v, 0.0, 0.0};
      },
      Layout::staggered_mac);
}

}  // namespace nsv
