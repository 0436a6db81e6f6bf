#include "nsv/claims/identities.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nsv {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

double integral_dot(const VectorField& a, const VectorField& b) {
  return volume_integral(dot(a, b));
}

VectorField sample_forcing_like(const ForcingSpec& f, const VectorField& like, double t) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < like.dims(); ++d) {
    comps.push_back(ScalarField::sample(
        like.grid(), [&](const Point& p) { return f.evaluate(p, t)[d]; }, like[d].centering()));
  }
  return VectorField(Layout::collocated, std::move(comps));
}

ScalarField abs(const ScalarField& s) {
  std::vector<double> out(s.values().begin(), s.values().end());
  for (double& x : out) x = std::abs(x);
  return ScalarField(s.grid(), s.centering(), std::move(out));
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double default_tolerance(const GridSpec& grid) {
  if (grid.periodic()) return 1e-8;
  const double h = grid.min_spacing();
  return 1e-4 * h * h;
}

double wall_max(const VectorField& v, bool normal_only) {
  if (v.grid().periodic()) return 0.0;
  double worst = 0.0;
  for (int d = 0; d < v.dims(); ++d) {
    const ScalarField& c = v[d];
    const Index3& s = c.shape();
    for (int e = 0; e < v.dims(); ++e) {
      if (normal_only && e != d) continue;
      const bool node = c.centering()[e] == Centering::node;
      for (std::size_t n = 0; n < c.size(); ++n) {
        const Index3 i = c.unflatten(n);
        for (int side = 0; side < 2; ++side) {
          const int edge = side ? s[e] - 1 : 0;
          if (i[e] != edge) continue;
          double value = c[n];
          if (!node) {
            Index3 j = i;
            j[e] += side ? -1 : 1;
            value = 1.5 * c[n] - 0.5 * c.at(j[0], j[1], j[2]);
          }
          worst = std::max(worst, std::abs(value));
        }
      }
    }
  }
  return worst;
}

std::vector<double> energy_balance_series(const Trajectory& traj, const ForcingSpec& f, double mu) {
  const std::size_t n = traj.size();
  if (n < 3) throw std::invalid_argument("energy balance needs at least 3 samples");
  std::vector<double> e(n), out(n, kNaN);
  for (std::size_t i = 0; i < n; ++i) e[i] = traj[i].diagnostics.energy;
  const std::vector<double>& steps = traj.step_energy();
  const double dt = traj.step_dt();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double de;
    const long long k = dt > 0.0 ? std::llround(traj[i].t / dt) : -1;
    if (k >= 1 && k + 1 < static_cast<long long>(steps.size()) &&
        std::abs(k * dt - traj[i].t) <= 1e-9 * dt) {
      de = (steps[k + 1] - steps[k - 1]) / (2.0 * dt);
    } else {
      const double h1 = traj[i].t - traj[i - 1].t;
      const double h2 = traj[i + 1].t - traj[i].t;
      // second-order three-point derivative on a non-uniform stencil
      de = -h2 / (h1 * (h1 + h2)) * e[i - 1] + (h2 - h1) / (h1 * h2) * e[i] +
           h1 / (h2 * (h1 + h2)) * e[i + 1];
    }
    const VectorField& v = traj[i].velocity;
    const double diss = mu * volume_integral(velocity_gradient(v).frobenius_squared());
    double work = 0.0;
    if (f.active()) {
      const VectorField cv = collocated(v);
      work = integral_dot(sample_forcing_like(f, cv, traj[i].t), cv);
    }
    out[i] = 0.5 * de + diss - work;
  }
  return out;
}

IdentityReport check_energy_balance(const Trajectory& traj, const ForcingSpec& f, double mu,
                                    double tolerance) {
  const std::vector<double> r = energy_balance_series(traj, f, mu);
  const double e0 = traj[0].diagnostics.energy;
  double worst = 0.0;
  double at = 0.0;
  for (std::size_t i = 1; i + 1 < r.size(); ++i) {
    if (std::abs(r[i]) > worst) {
      worst = std::abs(r[i]);
      at = traj[i].t;
    }
  }
  const double scale = e0 > 0.0 ? e0 : 1.0;
  IdentityReport rep = evaluate_identity("energy_balance", worst / scale, 0.0, tolerance,
                                         "max |1/2 dE/dt + mu int|grad v|^2 - int f.v| / E(0)");
  rep.t = at;
  rep.extras["initial_energy"] = e0;
  rep.extras["max_balance_abs"] = worst;
  return rep;
}

IdentityReport check_compatibility(const VectorField& v, double tolerance) {
  const SurfaceIntegral s = boundary_flux(v);
  if (s.no_boundary) {
    return not_applicable("boundary_compatibility", "periodic domain has no boundary");
  }
  return evaluate_identity("boundary_compatibility", s.value, 0.0, tolerance,
                           "oint v.n over the box walls");
}

IdentityReport check_tangential(const VectorField& v, const Vorticity& w, double tolerance) {
  if (v.grid().periodic()) {
    return not_applicable("boundary_tangency", "periodic domain has no boundary");
  }
  const double vn = wall_max(v, true);
  double wn = 0.0;
  std::string notes = "max over wall samples of |v.n| and |w.n|";
  if (const auto* w3 = std::get_if<VectorField>(&w)) {
    wn = wall_max(*w3, true);
  } else {
    notes += "; 2D vorticity is out-of-plane and tangent to every wall";
  }
  IdentityReport r = evaluate_identity("boundary_tangency", std::max(vn, wn), 0.0, tolerance, notes);
  r.extras["velocity_normal_max"] = vn;
  r.extras["vorticity_normal_max"] = wn;
  return r;
}

IdentityReport check_eigenweighted_energy(const VectorField& v, double tolerance) {
  const VectorField cv = collocated(v);
  const ScalarField integrand = dot(velocity_gradient(v).apply(cv), cv);
  const double lhs = volume_integral(integrand);
  const double magnitude = volume_integral(abs(integrand));
  if (tolerance < 0.0) {
    tolerance = v.grid().periodic() ? 1e-9 : default_tolerance(v.grid()) * std::max(1.0, magnitude);
  }
  const SurfaceIntegral surf = boundary_weighted_flux(norm_squared(cv), v);
  const double defect = eigen_collinearity_defect(v);
  const double normal = wall_max(v, true);
  const double hyp = 1e-8;
  IdentityReport r;
  if (defect > hyp && normal > hyp) {
    r = not_applicable("eigenweighted_energy",
                       "(grad v) v is not collinear with v and v crosses the walls (max |v.n| = " +
                           fmt(normal) + ")");
    r.lhs = lhs;
  } else {
    r = evaluate_identity("eigenweighted_energy", lhs, 0.0, tolerance,
                          defect <= hyp ? "(grad v) v collinear with v" : "v tangential on the walls");
  }
  r.extras["surface"] = surf.value;
  r.extras["surface_half"] = 0.5 * surf.value;
  r.extras["collinearity_defect"] = defect;
  r.extras["wall_normal_max"] = normal;
  r.extras["integrand_l1"] = magnitude;
  return r;
}

std::vector<IdentityReport> check_uniqueness_identities(const VectorField& v, const VectorField& w,
                                                        double tolerance,
                                                        double hypothesis_tolerance) {
  if (!v.same_layout(w)) throw std::invalid_argument("v and w must share grid and layout");
  const double tol = tolerance < 0.0 ? default_tolerance(v.grid()) : tolerance;
  const VectorField vg = v - w;
  const VectorField cv = collocated(v);
  const VectorField cw = collocated(w);
  const VectorField cvg = collocated(vg);
  const TensorField gw = velocity_gradient(w);
  const TensorField gvg = velocity_gradient(vg);
  const VectorField gw_v = gw.apply(cv);

  struct Row {
    const char* name;
    double lhs;
    double raw;
    double factor;
    const char* notes;
  };
  const Row rows[] = {
      {"w_weighted_w", integral_dot(gw.apply(cw), cw),
       boundary_weighted_flux(norm_squared(cw), w).value, 0.5,
       "int ((grad w) w).w vs 1/2 oint |w|^2 w.n"},
      {"w_weighted_v", integral_dot(gw_v, cv), boundary_weighted_flux(dot(cw, cv), v).value, 1.0,
       "int ((grad w) v).v vs oint (w.v) v.n"},
      {"w_weighted_vw", integral_dot(gw_v, cw), boundary_weighted_flux(norm_squared(cw), v).value,
       0.5, "int ((grad w) v).w vs 1/2 oint |w|^2 v.n"},
  };

  const bool box = !v.grid().periodic();
  const double wall_w = box ? wall_max(w, false) : 0.0;
  const double wall_vn = box ? wall_max(v, true) : 0.0;
  const bool applicable = wall_w <= hypothesis_tolerance && wall_vn <= hypothesis_tolerance;
  std::string hyp_note;
  if (!applicable) {
    hyp_note = "; walls violate w = 0 or v.n = 0 (max |w| = " + fmt(wall_w) +
               ", max |v.n| = " + fmt(wall_vn) + ")";
  }
  auto finish = [&](IdentityReport r) {
    if (!applicable) {
      r.verdict = Verdict::not_applicable;
      r.notes += hyp_note;
    }
    if (box) {
      r.extras["wall_w_max"] = wall_w;
      r.extras["wall_vn_max"] = wall_vn;
    }
    return r;
  };

  std::vector<IdentityReport> out;
  for (const Row& row : rows) {
    IdentityReport r = evaluate_identity(row.name, row.lhs, row.factor * row.raw, tol, row.notes);
    r.extras["surface_raw"] = row.raw;
    out.push_back(finish(std::move(r)));
  }
  const double chain_lhs = integral_dot(gvg.apply_transpose(cw), cvg);
  const double chain_rhs = -integral_dot(gw.apply(cvg), cvg);
  IdentityReport chain = evaluate_identity("convective_chain", chain_lhs, chain_rhs, tol,
                                           "int ((grad v_g)^T w).v_g vs -int ((grad w) v_g).v_g");
  chain.extras["rhs_transposed"] = -integral_dot(gw.apply_transpose(cvg), cvg);
  out.push_back(finish(std::move(chain)));
  return out;
}

IdentityReport check_decay(const std::vector<std::pair<double, double>>& series, double exponent) {
  double t_max = 0.0;
  for (const auto& [t, m] : series) t_max = std::max(t_max, t);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (const auto& [t, m] : series) {
    if (t <= 0.0 || t < 0.1 * t_max || m == 0.0) continue;
    const double x = std::log(t);
    const double y = std::log(std::abs(m));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  const double denom = count * sxx - sx * sx;
  if (count < 2 || !(denom > 0.0)) {
    IdentityReport r = evaluate_identity("decay_rate", kNaN, 0.0, 0.05,
                                         "fewer than two usable samples in the last decade");
    r.verdict = Verdict::fails;
    return r;
  }
  const double slope = (count * sxy - sx * sy) / denom;
  IdentityReport r = evaluate_identity("decay_rate", slope + exponent, 0.0, 0.05,
                                       "log-log slope over the last decade plus the exponent");
  r.extras["slope"] = slope;
  r.extras["expected_exponent"] = exponent;
  r.extras["samples"] = count;
  return r;
}

}  // namespace nsv
