#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nsv/claims/identities.hpp"
#include "nsv/claims/uniqueness.hpp"
#include "nsv/solvers/ansatz.hpp"
#include "nsv/solvers/mac.hpp"
#include "nsv/solvers/runner.hpp"
#include "support.hpp"

using namespace nsv;

namespace {

Vec3 tg(const Point& p) {
  return {std::sin(p[0]) * std::cos(p[1]), -std::cos(p[0]) * std::sin(p[1]), 0.0};
}

VectorField taylor_green(const GridSpec& g) { return VectorField::sample(g, tg); }

VectorField two_mode(const GridSpec& g) {
  return VectorField::sample(
      g, [](const Point& p) { return Vec3{std::sin(p[1]), std::sin(2.0 * p[0]), 0.0}; });
}

VectorField random_solenoidal(const GridSpec& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return leray_project(nsv::testing::random_vector(g, rng, 3, 6));
}

SolverConfig config(double mu, double dt, double t_end) {
  SolverConfig c;
  c.viscosity = mu;
  c.dt = dt;
  c.t_end = t_end;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Stream function sin^2(pi x) sin^2(pi y): solenoidal, zero on the unit box walls.
VectorField no_slip_cell(const GridSpec& box, double scale = 1.0) {
  return VectorField::sample(box, [scale](const Point& p) {
    const double sx = std::sin(kPi * p[0]), sy = std::sin(kPi * p[1]);
    const double cx = std::cos(kPi * p[0]), cy = std::cos(kPi * p[1]);
    return Vec3{scale * 2.0 * kPi * sx * sx * sy * cy, -scale * 2.0 * kPi * sy * sy * sx * cx, 0.0};
  });
}

}  // namespace

TEST_CASE("identity reports compute the scaled residual") {
  CHECK(scaled_residual(3.0, 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(scaled_residual(0.25, 0.0) == 0.25);
  const IdentityReport r = evaluate_identity("x", 1e-9, 0.0, 1e-8);
  CHECK(r.verdict == Verdict::holds);
  CHECK(evaluate_identity("x", 1e-7, 0.0, 1e-8).verdict == Verdict::fails);
  CHECK(std::string(to_string(not_applicable("x", "no boundary").verdict)) == "not_applicable");
}

TEST_CASE("energy balance: zero, Taylor-Green and decayed shear runs") {
  const GridSpec g = GridSpec::periodic(2, 64);
  const Trajectory zero =
      run_nse(VectorField::zeros(g), ForcingSpec::none(), std::nullopt, config(0.1, 1e-2, 0.1), 1);
  const IdentityReport z = check_energy_balance(zero, ForcingSpec::none(), 0.1);
  CHECK(z.residual == 0.0);
  CHECK(z.verdict == Verdict::holds);

  const Trajectory tgrun =
      run_nse(taylor_green(g), ForcingSpec::none(), std::nullopt, config(0.1, 1e-3, 1.0), 10);
  const IdentityReport a = check_energy_balance(tgrun, ForcingSpec::none(), 0.1);
  CHECK(a.residual <= 1e-5);
  CHECK(a.verdict == Verdict::holds);
  // analytic dissipation 2 mu E for Taylor-Green, E = 2 pi^2 exp(-4 mu t)
  const auto& mid = tgrun[50];
  const double diss = 0.1 * volume_integral(velocity_gradient(mid.velocity).frobenius_squared());
  CHECK(diss == doctest::Approx(0.2 * 2.0 * kPi * kPi * std::exp(-0.4 * mid.t)).epsilon(1e-10));

  const VectorField shear = VectorField::sample(
      g, [](const Point& p) { return Vec3{std::sin(p[1]), 0.0, 0.0}; });
  const Trajectory heat =
      solve_reduced(shear, ForcingSpec::none(), std::nullopt, config(0.1, 1e-3, 1.0), 10);
  CHECK(check_energy_balance(heat, ForcingSpec::none(), 0.1).residual <= 1e-5);

  Trajectory two;
  two.append(tgrun[0]);
  two.append(tgrun[1]);
  CHECK_THROWS_AS(check_energy_balance(two, ForcingSpec::none(), 0.1), std::invalid_argument);
}

TEST_CASE("energy balance includes the forcing work") {
  const GridSpec g = GridSpec::periodic(2, 32);
  ForcingSpec f;
  f.shape = [](const Point& p) { return Vec3{std::cos(p[1]), 0.0, 0.0}; };
  f.amplitude = 1.0;
  f.decay_exponent = 1.0;
  const Trajectory traj =
      run_nse(VectorField::zeros(g), f, std::nullopt, config(0.1, 2e-3, 1.0), 1);
  const IdentityReport with = check_energy_balance(traj, f, 0.1);
  const IdentityReport without = check_energy_balance(traj, ForcingSpec::none(), 0.1);
  CHECK(with.extras.at("max_balance_abs") <= 1e-4);
  CHECK(without.extras.at("max_balance_abs") > 0.1);
}

TEST_CASE("energy balance residual shrinks with the sample spacing") {
  const GridSpec g = GridSpec::periodic(2, 32);
  std::vector<double> res;
  for (double dt : {2e-3, 1e-3}) {
    const Trajectory traj =
        run_nse(random_solenoidal(g, 4), ForcingSpec::none(), std::nullopt, config(0.1, dt, 0.2), 1);
    res.push_back(check_energy_balance(traj, ForcingSpec::none(), 0.1).residual);
  }
  CHECK(res[0] <= 1e-5);
  CHECK(res[0] / res[1] >= 3.0);
}

TEST_CASE("compatibility: torus, tangential MAC snapshot, injected inflow") {
  CHECK(check_compatibility(taylor_green(GridSpec::periodic(2, 16))).verdict ==
        Verdict::not_applicable);

  const GridSpec box = GridSpec::box(2, 64);
  const VectorField v0 = mac_initial_field(
      box, [](const Point& p) { return Vec3{std::sin(kPi * p[1]) * p[0], 0.3, 0.0}; },
      BoundaryDatum::no_slip());
  const Trajectory traj =
      run_nse(v0, ForcingSpec::none(), BoundaryDatum::no_slip(), config(0.1, 1e-4, 2e-3), 10);
  for (const auto& s : traj.samples()) {
    const IdentityReport r = check_compatibility(s.velocity);
    CHECK(r.verdict == Verdict::holds);
    CHECK(std::abs(r.lhs) <= 1e-10);
  }

  // 0.5 sin^2(pi y) entering through x = 0: flux -0.25, exact under midpoint quadrature
  const VectorField inflow = VectorField::sample(
      box,
      [](const Point& p) {
        const double s = std::sin(kPi * p[1]);
        return Vec3{p[0] == 0.0 ? 0.5 * s * s : 0.0, 0.0, 0.0};
      },
      Layout::staggered_mac);
  const IdentityReport bad = check_compatibility(traj.back().velocity + inflow);
  CHECK(bad.verdict == Verdict::fails);
  CHECK(bad.residual == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("tangency: shear ansatz on the unit box crosses the x walls") {
  const GridSpec box = GridSpec::box(2, 32);
  AnsatzSpec a;
  a.name = "box_shear";
  a.psi = [](const Point& p, double) { return std::sin(kPi * p[1]); };
  a.grad_psi = [](const Point& p, double) { return Vec3{0.0, kPi * std::cos(kPi * p[1]), 0.0}; };
  a.direction = [](double) { return Vec3{1.0, 0.0, 0.0}; };
  const VectorField v = sample_ansatz(a, box, 0.0);
  const IdentityReport r = check_tangential(v, curl(v));
  // v.n = -+sin(pi y) on the x walls, reaching 1 at y = 1/2; zero on the y walls
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.verdict == Verdict::fails);
  double y_walls = 0.0;
  for (std::size_t n = 0; n < v[1].size(); ++n) {
    const Index3 i = v[1].unflatten(n);
    if (i[1] == 0 || i[1] == 32) y_walls = std::max(y_walls, std::abs(v[1][n]));
  }
  CHECK(y_walls == 0.0);
}

TEST_CASE("tangency: no-slip fields hold, uniform flow fails with residual 1") {
  const GridSpec box = GridSpec::box(2, 32);
  const VectorField cell = no_slip_cell(box);
  CHECK(check_tangential(cell, curl(cell)).verdict == Verdict::holds);

  const GridSpec box3 = GridSpec::box(3, 16);
  const VectorField bump = VectorField::sample(box3, [](const Point& p) {
    const double b = std::sin(kPi * p[0]) * std::sin(kPi * p[1]) * std::sin(kPi * p[2]);
    return Vec3{b, 2.0 * b, -b};
  });
  const IdentityReport r3 = check_tangential(bump, curl(bump));
  CHECK(r3.verdict == Verdict::holds);

  const VectorField uniform =
      VectorField::sample(box, [](const Point&) { return Vec3{1.0, 0.0, 0.0}; });
  const IdentityReport u = check_tangential(uniform, curl(uniform));
  CHECK(u.verdict == Verdict::fails);
  CHECK(u.residual == 1.0);
  CHECK(check_tangential(taylor_green(GridSpec::periodic(2, 16)),
                         curl(taylor_green(GridSpec::periodic(2, 16))))
            .verdict == Verdict::not_applicable);
}

TEST_CASE("eigenweighted energy: shear ansatz, Taylor-Green, random periodic fields") {
  const GridSpec g = GridSpec::periodic(2, 64);
  const VectorField shear = VectorField::sample(
      g, [](const Point& p) { return Vec3{std::sin(3.0 * p[1]), 0.0, 0.0}; });
  const IdentityReport s = check_eigenweighted_energy(shear);
  CHECK(std::abs(s.lhs) <= 1e-10);
  CHECK(s.verdict == Verdict::holds);

  const VectorField v = taylor_green(g);
  const IdentityReport t = check_eigenweighted_energy(v);
  CHECK(std::abs(t.lhs) <= 1e-10);
  CHECK(t.verdict == Verdict::holds);
  // brute-force quadrature of v . grad(|v|^2 / 2) with the closed-form gradient
  double brute = 0.0;
  const double cellarea = g.spacing(0) * g.spacing(1);
  for (std::size_t n = 0; n < v[0].size(); ++n) {
    const Point p = v[0].position(n);
    const double gx = 0.5 * std::sin(2 * p[0]) * std::cos(2 * p[1]);
    const double gy = 0.5 * std::cos(2 * p[0]) * std::sin(2 * p[1]);
    brute += (v[0][n] * gx + v[1][n] * gy) * cellarea;
  }
  CHECK(std::abs(brute - t.lhs) <= 1e-10);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IdentityReport r = check_eigenweighted_energy(random_solenoidal(GridSpec::periodic(2, 32), seed));
    CHECK(r.residual <= 1e-9);
    CHECK(r.verdict == Verdict::holds);
  }
}

TEST_CASE("eigenweighted energy on the box reports both surface conventions") {
  const GridSpec box = GridSpec::box(2, 64);
  const VectorField cell = no_slip_cell(box);
  const IdentityReport r = check_eigenweighted_energy(cell);
  CHECK(r.verdict == Verdict::holds);
  CHECK(r.extras.at("surface") == 0.0);
  CHECK(r.extras.at("surface_half") == 0.0);

  // neither collinear nor tangential: a generic polynomial flow through the walls
  const VectorField through = VectorField::sample(box, [](const Point& p) {
    return Vec3{1.0 + p[1] * p[1], p[0], 0.0};
  });
  const IdentityReport na = check_eigenweighted_energy(through);
  CHECK(na.verdict == Verdict::not_applicable);
  // divergence theorem: int v.grad(|v|^2/2) = 1/2 oint |v|^2 v.n for div v = 0
  CHECK(na.lhs == doctest::Approx(na.extras.at("surface_half")).epsilon(1e-3));
}

TEST_CASE("uniqueness identities: zero difference, torus, no-slip box") {
  const GridSpec g = GridSpec::periodic(2, 32);
  const VectorField v = random_solenoidal(g, 3);
  for (const auto& r : check_uniqueness_identities(v, VectorField::zeros(g))) {
    CHECK(r.residual == 0.0);
    CHECK(r.verdict == Verdict::holds);
  }

  const VectorField w = random_solenoidal(g, 4);
  const auto reps = check_uniqueness_identities(v, w);
  REQUIRE(reps.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(reps[i].rhs == 0.0);
  CHECK(reps[0].verdict == Verdict::holds);  // int w.grad(|w|^2/2) vanishes on the torus
  // volume side of w_weighted_v equals -int w . ((v . grad) v) on the torus
  const double alt = -volume_integral(dot(w, convective_term(v)));
  CHECK(reps[1].lhs == doctest::Approx(alt).epsilon(1e-9));
  CHECK(reps[3].verdict == Verdict::holds);
  CHECK(reps[3].rhs == doctest::Approx(reps[3].extras.at("rhs_transposed")).epsilon(1e-12));

  const GridSpec box = GridSpec::box(2, 64);
  const VectorField cellular = VectorField::sample(box, [](const Point& p) {
    return Vec3{kPi * std::sin(kPi * p[0]) * std::cos(kPi * p[1]),
                -kPi * std::cos(kPi * p[0]) * std::sin(kPi * p[1]), 0.0};
  });
  const auto box_reps = check_uniqueness_identities(cellular, no_slip_cell(box, 0.3));
  CHECK(std::abs(box_reps[0].lhs - box_reps[0].rhs) <= 1e-8);
  CHECK(box_reps[0].rhs == 0.0);
  CHECK(box_reps[0].verdict == Verdict::holds);
  CHECK(box_reps[0].extras.at("wall_w_max") <= 1e-12);

  const VectorField uniform = VectorField::sample(box, [](const Point&) { return Vec3{1.0, 0.0, 0.0}; });
  for (const auto& r : check_uniqueness_identities(uniform, no_slip_cell(box))) {
    CHECK(r.verdict == Verdict::not_applicable);
    CHECK(r.extras.at("wall_vn_max") == 1.0);
  }
}

TEST_CASE("convective residual: ansatz, Taylor-Green, two-mode oracle, gradient invariance") {
  const GridSpec g = GridSpec::periodic(2, 64);
  PlaneWaveAnsatz pw;
  pw.direction = {2, 1, 0};
  pw.wave = {1, -2, 0};
  CHECK(convective_residual(sample_ansatz(pw.spec(), g, 0.0)) <= 1e-10);
  CHECK(convective_residual(taylor_green(g)) <= 1e-10);
  // P[(v.grad)v] = (-3/5 sin 2x cos y, 6/5 cos 2x sin y), norm pi sqrt(1.8)
  const VectorField v = two_mode(g);
  CHECK(convective_residual(v) == doctest::Approx(kPi * std::sqrt(1.8)).epsilon(1e-12));
  const ScalarField phi = ScalarField::sample(
      g, [](const Point& p) { return std::cos(p[0] + 2.0 * p[1]) + 0.5 * std::sin(3.0 * p[0]); });
  const VectorField reproj = leray_project(v + gradient(phi));
  CHECK(std::abs(convective_residual(reproj) - convective_residual(v)) <= 1e-10);
}

TEST_CASE("decay fits") {
  std::vector<std::pair<double, double>> power, flat, expo;
  for (int i = 0; i <= 200; ++i) {
    const double t = std::pow(100.0, i / 200.0);
    power.emplace_back(t, std::pow(t, -2.0));
    flat.emplace_back(t, 3.0);
    expo.emplace_back(t, std::exp(-t));
  }
  const IdentityReport p = check_decay(power, 2.0);
  CHECK(p.extras.at("slope") == doctest::Approx(-2.0).epsilon(0.005));
  CHECK(p.verdict == Verdict::holds);
  CHECK(check_decay(flat, 0.0).verdict == Verdict::holds);
  CHECK(check_decay(expo, 1.0).verdict == Verdict::fails);

  ForcingSpec f;
  f.shape = [](const Point&) { return Vec3{1.0, 0.0, 0.0}; };
  f.amplitude = 0.7;
  f.decay_exponent = 1.5;
  BoundaryDatum bc;
  bc.decay_exponent = 2.5;
  bc.profile = [&bc](const Point& x, double t) {
    return Vec3{decay_factor(t, bc.decay_exponent) * std::sin(kPi * x[0]), 0.0, 0.0};
  };
  const GridSpec box = GridSpec::box(2, 16);
  std::vector<std::pair<double, double>> fs, bs;
  for (int i = 0; i <= 100; ++i) {
    const double t = std::pow(100.0, i / 100.0);
    fs.emplace_back(t, f.magnitude(t));
    bs.emplace_back(t, bc.max_magnitude(box, t));
  }
  CHECK(check_decay(fs, 1.5).verdict == Verdict::holds);
  CHECK(check_decay(bs, 2.5).verdict == Verdict::holds);
}

TEST_CASE("uniqueness experiment: shear and Taylor-Green coincide") {
  const GridSpec g = GridSpec::periodic(2, 32);
  const VectorField shear = VectorField::sample(
      g, [](const Point& p) { return Vec3{std::sin(p[1]), 0.0, 0.0}; });
  const UniquenessReport s =
      run_uniqueness_experiment("shear", shear, ForcingSpec::none(), std::nullopt, config(0.1, 5e-3, 1.0), 10);
  REQUIRE(s.completed);
  for (const auto& x : s.samples) {
    CHECK(std::sqrt(x.w_norm_sq) <= 1e-9);
    CHECK(x.conv_residual <= 1e-10);
  }
  CHECK(s.verdict.find("consistent") == 0);

  const double mu = 0.1;
  const UniquenessReport t = run_uniqueness_experiment("taylor_green", taylor_green(g),
                                                       ForcingSpec::none(), std::nullopt,
                                                       config(mu, 5e-3, 1.0), 20);
  REQUIRE(t.completed);
  for (const auto& x : t.samples) {
    const double vnorm = std::sqrt(2.0 * kPi * kPi * std::exp(-4.0 * mu * x.t));
    CHECK(std::sqrt(x.w_norm_sq) / vnorm <= 1e-8);
    // reduced pressure is zero, so q is the Taylor-Green pressure (pi/2) exp(-4 mu t)
    CHECK(x.q_norm == doctest::Approx(0.5 * kPi * std::exp(-4.0 * mu * x.t)).epsilon(1e-6));
  }
}

TEST_CASE("uniqueness experiment: two-mode data separates the solutions") {
  const SolverConfig cfg = config(0.05, 5e-3, 1.0);
  UniquenessReport hi = run_uniqueness_experiment("two_mode", two_mode(GridSpec::periodic(2, 64)),
                                                  ForcingSpec::none(), std::nullopt, cfg, 10);
  const UniquenessReport lo = run_uniqueness_experiment(
      "two_mode", two_mode(GridSpec::periodic(2, 32)), ForcingSpec::none(), std::nullopt, cfg, 10);
  REQUIRE(hi.completed);
  CHECK(hi.samples.front().conv_residual >= 0.1);
  CHECK(hi.samples.front().w_norm_sq == 0.0);
  CHECK(hi.monotone_growth);
  CHECK(hi.growth_observed);
  CHECK(hi.richardson_consistent);
  CHECK(hi.final_w_norm() > 1e-3 * hi.v0_norm);
  attach_confirmation(hi, lo);
  CHECK(hi.confirmation->sign_agrees);
  CHECK(hi.confirmation->within_10_percent);
  CHECK(hi.verdict.find("not a refutation of the continuum theorem") != std::string::npos);
  CHECK(hi.verdict.find("confirms") != std::string::npos);
}

TEST_CASE("uniqueness experiment records solver aborts") {
  const GridSpec g = GridSpec::periodic(2, 32);
  SolverConfig cfg = config(0.1, 0.0, 0.0);
  cfg.integrator = Integrator::explicit_euler;
  cfg.dealias = DealiasPolicy::none;
  cfg.cfl_guard = 1.0;
  const double h = g.min_spacing();
  cfg.dt = h * h / (4.0 * cfg.viscosity);
  cfg.t_end = 400 * cfg.dt;
  const VectorField v0 = 0.1 * random_solenoidal(g, 2);
  const UniquenessReport r = run_uniqueness_experiment("unstable", v0, ForcingSpec::none(), std::nullopt, cfg, 10);
  CHECK_FALSE(r.completed);
  CHECK(r.abort_time > 0.0);
  CHECK(r.verdict.find("aborted") != std::string::npos);
}

TEST_CASE("report exports are deterministic and carry the preamble") {
  const GridSpec g = GridSpec::periodic(2, 16);
  const VectorField v = random_solenoidal(g, 9);
  std::vector<IdentityReport> reps = check_uniqueness_identities(v, random_solenoidal(g, 10));
  reps.push_back(check_eigenweighted_energy(v));
  const auto dir = std::filesystem::temp_directory_path() / "nsv_test_reports";
  std::filesystem::remove_all(dir);
  const nlohmann::json cfg = {{"scenario", "random_solenoidal"}, {"seed", 9}};
  write_report_json(dir / "a.json", reps, cfg);
  write_report_json(dir / "b.json", reps, cfg);
  write_report_csv(dir / "a.csv", reps);
  write_report_csv(dir / "b.csv", reps);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  const auto doc = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(doc["preamble"].get<std::string>().find("square integrable") != std::string::npos);
  CHECK(doc["reports"].size() == reps.size());
  CHECK(doc["reports"][0]["lhs"].get<double>() == reps[0].lhs);
  CHECK(slurp(dir / "a.csv").rfind("t,identity,lhs,rhs,residual,tolerance,verdict\n", 0) == 0);
  CHECK_FALSE(std::filesystem::exists(dir / "a.json.tmp"));
  std::filesystem::remove_all(dir);
}
