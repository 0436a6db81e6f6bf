#pragma once

#include <utility>
#include <vector>

#include "nsv/claims/report.hpp"
#include "nsv/solvers/config.hpp"
#include "nsv/solvers/trajectory.hpp"

namespace nsv {

// 1e-8 on a torus, 1e-4 h^2 on a bounded box (h the smallest spacing).
double default_tolerance(const GridSpec& grid);

// Per interior sample: 1/2 dE/dt + mu int|grad v|^2 - int f.v with
// E = int|v|^2 and dE/dt from centred differences over the neighbouring
// steps when the trajectory carries per-step energies, else over the
// neighbouring samples.
// lhs = max |balance| / E(0) (unscaled when E(0) == 0), rhs = 0.
// Throws std::invalid_argument with fewer than 3 samples.
IdentityReport check_energy_balance(const Trajectory& traj, const ForcingSpec& f, double mu,
                                    double tolerance = 1e-5);

// Per-sample balance values used by check_energy_balance (NaN at the ends).
std::vector<double> energy_balance_series(const Trajectory& traj, const ForcingSpec& f, double mu);

// lhs = boundary_flux(v), rhs = 0. Not applicable on a torus.
IdentityReport check_compatibility(const VectorField& v, double tolerance = 1e-10);

// lhs = max over wall samples of max(|v.n|, |w.n|). A 2D vorticity is
// out-of-plane and tangent to every wall. Not applicable on a torus.
IdentityReport check_tangential(const VectorField& v, const Vorticity& w,
                                double tolerance = 1e-10);

// lhs = int ((grad v) v).v, rhs = 0. extras: surface = oint |v|^2 v.n,
// surface_half = surface / 2, collinearity_defect, wall_normal_max,
// integrand_l1 = int |((grad v) v).v|. Not applicable when v neither has
// collinear (grad v) v nor is tangential on the walls. A negative tolerance
// selects 1e-9 on a torus and 1e-4 h^2 max(1, integrand_l1) on a box.
IdentityReport check_eigenweighted_energy(const VectorField& v, double tolerance = -1.0);

// Volume forms against their divergence-theorem surface counterparts, for a
// reduced solution v and a difference w = v - v_g:
//   w_weighted_w   int ((grad w) w).w   vs 1/2 oint |w|^2 w.n
//   w_weighted_v   int ((grad w) v).v   vs oint (w.v) v.n
//   w_weighted_vw  int ((grad w) v).w   vs 1/2 oint |w|^2 v.n
//   convective_chain  int ((grad v_g)^T w).v_g  vs  -int ((grad w) v_g).v_g
// The surface forms without the factor 1/2 are kept in extras["surface_raw"];
// the chain also reports -int ((grad w)^T v_g).v_g in extras. On a box, the
// hypotheses w = 0 and v.n = 0 on the walls are measured (extras
// wall_w_max, wall_vn_max); above `hypothesis_tolerance` the reports are
// not applicable.
std::vector<IdentityReport> check_uniqueness_identities(const VectorField& v, const VectorField& w,
                                                        double tolerance = -1.0,
                                                        double hypothesis_tolerance = 1e-6);

// Least-squares slope of log|m| against log t over samples with
// t >= t_max / 10. lhs = slope + exponent, rhs = 0, holds when
// |slope + exponent| <= 0.05. extras["slope"] carries the fitted slope.
IdentityReport check_decay(const std::vector<std::pair<double, double>>& series, double exponent);

// Max over wall samples of |component| (normal only when `normal_only`);
// cell-centred samples are extrapolated to the wall.
double wall_max(const VectorField& v, bool normal_only);

}  // namespace nsv
