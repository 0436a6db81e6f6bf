#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "nsv/claims/identities.hpp"
#include "nsv/cli/commands.hpp"
#include "nsv/cli/scenario.hpp"
#include "nsv/fields/errors.hpp"
#include "nsv/fields/nsf1.hpp"
#include "nsv/solvers/trajectory.hpp"

using namespace nsv;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nsv_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RunPlan plan(const std::string& text) { return parse_config_text(text, "test.cfg"); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(NSVERIFY_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* const kShear =
    "scenario.name = shear\ngrid.n = 16\nfluid.viscosity = 0.1\ntime.dt = 5e-3\n"
    "time.t_end = 0.1\ntime.sample_every = 5\n";

const char* const kInflow =
    "scenario.name = taylor_green\ngrid.domain = box\ngrid.n = 16\nscenario.inject_inflow = 0.5\n"
    "fluid.viscosity = 0.1\ntime.dt = 5e-3\ntime.t_end = 0.02\ntime.sample_every = 2\n";

const char* const kRandom =
    "scenario.name = random_solenoidal\nscenario.seed = 99\nscenario.max_mode = 3\ngrid.n = 16\n"
    "fluid.viscosity = 0.1\ntime.dt = 2e-3\ntime.t_end = 0.02\ntime.sample_every = 5\n";

}  // namespace

TEST_CASE("config: minimal file gives a valid plan") {
  const RunPlan p = plan(
      "# comment\nscenario.name = taylor_green\ngrid.n = 64\nfluid.viscosity = 0.1  # mu\n"
      "time.dt = 1e-3\ntime.t_end = 1\n");
  CHECK(p.scenario.kind == ScenarioKind::taylor_green);
  CHECK(p.scenario.cells == 64);
  CHECK(p.scenario.periodic);
  CHECK(p.solver.viscosity == 0.1);
  CHECK(p.solver.dt == 1e-3);
  CHECK(p.solver.t_end == 1.0);
  CHECK(p.solver.integrator == Integrator::rk4);
  CHECK(p.echo["grid.n"] == "64");
  CHECK_NOTHROW(p.solver.validate(scenario_grid(p.scenario), 1.0));
}

TEST_CASE("config: errors name the key and the line") {
  const std::string base = "scenario.name = taylor_green\ngrid.n = 64\ntime.dt = 1e-3\ntime.t_end = 1\n";
  const auto message = [](const std::string& text) {
    try {
      parse_config_text(text, "c.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(base + "fluid.viscosity = -1\n") == "c.cfg:5: fluid.viscosity must be > 0 (got -1)");
  CHECK(message(base + "fluid.viscosity = 0.1\nfluid.color = red\n") == "c.cfg:6: unknown key 'fluid.color'");
  CHECK(message(base + "fluid.viscosity = 0.1\ngrid.n = 32\n").find("c.cfg:6: duplicate key 'grid.n'") == 0);
  CHECK(message(base).find("missing required key 'fluid.viscosity'") != std::string::npos);
  CHECK(message(base + "fluid.viscosity = abc\n").find("c.cfg:5: fluid.viscosity expects a real") == 0);
  CHECK(message(base + "fluid.viscosity = 0.1\nnot a pair\n") == "c.cfg:6: expected 'section.key = value'");
  CHECK(message("scenario.name = random_solenoidal\ngrid.n = 16\nfluid.viscosity = 0.1\n"
                "time.dt = 1e-3\ntime.t_end = 1\n")
            .find("missing required key 'scenario.seed'") != std::string::npos);
  CHECK(message("scenario.name = ansatz_custom\nansatz.direction = 1 1\nansatz.wave = 1 0\n"
                "grid.n = 16\nfluid.viscosity = 0.1\ntime.dt = 1e-3\ntime.t_end = 1\n") ==
        "c.cfg:3: ansatz.wave must be orthogonal to ansatz.direction");
  CHECK(message("scenario.name = two_mode\ngrid.domain = box\ngrid.n = 16\nfluid.viscosity = 0.1\n"
                "time.dt = 1e-3\ntime.t_end = 1\n")
            .find("c.cfg:1: scenario.name 'two_mode' requires grid.domain = periodic") == 0);
  CHECK(message(base + "fluid.viscosity = 0.1\ngrid.domain = periodic\nboundary.datum = exact\n")
            .find("c.cfg:7: boundary.datum requires grid.domain = box") == 0);
  CHECK(message("scenario.name = shear\ngrid.n = 24\nfluid.viscosity = 0.1\ntime.dt = 1e-3\n"
                "time.t_end = 1\n")
            .find("c.cfg:2: grid.n must be a power of two") == 0);
  CHECK(message(base + "fluid.viscosity = 0.1\ntime.sample_every = 0\n").find("c.cfg:6:") == 0);
  CHECK_THROWS_AS(parse_config("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("scenarios start solenoidal") {
  const std::vector<std::string> configs = {
      kShear,
      kRandom,
      "scenario.name = two_mode\ngrid.n = 32\nfluid.viscosity = 0.05\ntime.dt = 1e-3\ntime.t_end = 1\n",
      "scenario.name = ansatz_custom\nansatz.direction = 1 2\nansatz.wave = 2 -1\n"
      "ansatz.amplitudes = 1 0.5\ngrid.n = 32\nfluid.viscosity = 0.1\ntime.dt = 1e-3\ntime.t_end = 1\n",
      "scenario.name = random_solenoidal\nscenario.seed = 3\nscenario.max_mode = 2\ngrid.dims = 3\n"
      "grid.n = 16\n"
      "fluid.viscosity = 0.1\ntime.dt = 1e-3\ntime.t_end = 1\n",
      "scenario.name = taylor_green\ngrid.domain = box\ngrid.n = 16\nfluid.viscosity = 0.1\n"
      "time.dt = 1e-3\ntime.t_end = 1\n",
      "scenario.name = shear\ngrid.domain = box\ngrid.n = 16\nfluid.viscosity = 0.1\n"
      "time.dt = 1e-3\ntime.t_end = 1\n",
  };
  for (const auto& c : configs) {
    const RunPlan p = plan(c);
    const VectorField v = scenario_initial_field(p.scenario, p.solver.viscosity);
    CHECK(max_divergence(v) <= 1e-10);
    CHECK(energy(v) > 0.0);
  }
  const RunPlan two = plan(configs[2]);
  const VectorField v = scenario_initial_field(two.scenario, 0.05);
  CHECK(energy(v) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));  // unit RMS
}

TEST_CASE("run: Taylor-Green writes decreasing energy and a manifest") {
  const fs::path dir = scratch("run_tg");
  const RunPlan p = plan(
      "scenario.name = taylor_green\ngrid.n = 32\nfluid.viscosity = 0.1\ntime.dt = 2e-3\n"
      "time.t_end = 0.2\ntime.sample_every = 10\n");
  CHECK(cmd_run(p, dir) == kExitOk);
  const auto rows = read_csv(dir / "diagnostics.csv");
  REQUIRE(rows.size() == 12);
  CHECK(slurp(dir / "diagnostics.csv").rfind(std::string(kDiagnosticsHeader) + "\n", 0) == 0);
  for (std::size_t i = 2; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) < std::stod(rows[i - 1][1]));
    const double t = std::stod(rows[i][0]);
    CHECK(std::stod(rows[i][1]) == doctest::Approx(2.0 * kPi * kPi * std::exp(-0.4 * t)).epsilon(1e-8));
  }
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["status"] == "completed");
  CHECK(m["exit_code"] == 0);
  CHECK(m["config"]["keys"]["scenario.name"] == "taylor_green");
  for (const auto& out : m["outputs"]) CHECK(fs::exists(out.get<std::string>()));
  CHECK(fs::exists(dir / "snapshots" / "index.csv"));
  CHECK(read_nsf1(dir / "snapshots" / "snap_00000.nsf").grid().cells(0) == 32);
}

TEST_CASE("run: blow-up exits 2 and records the abort time") {
  const fs::path dir = scratch("run_blow");
  const RunPlan p = plan(
      "scenario.name = random_solenoidal\nscenario.seed = 7\nscenario.max_mode = 2\ngrid.n = 32\n"
      "fluid.viscosity = 0.19\nsolver.integrator = explicit_euler\nsolver.dealias = none\n"
      "solver.cfl_guard = 1\ntime.dt = 0.05\ntime.t_end = 5\ntime.sample_every = 10\n");
  CHECK(cmd_run(p, dir) == kExitAbort);
  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["status"] == "aborted");
  CHECK(m["abort_time"].get<double>() > 0.0);
  CHECK(m["abort_time"].get<double>() < 5.0);
}

TEST_CASE("run: dt above the stability guard exits 2") {
  const fs::path dir = scratch("run_cfl");
  const RunPlan p = plan(
      "scenario.name = taylor_green\ngrid.n = 64\nfluid.viscosity = 0.1\ntime.dt = 0.5\ntime.t_end = 1\n");
  CHECK(cmd_run(p, dir) == kExitAbort);
  CHECK(nlohmann::json::parse(slurp(dir / "manifest.json"))["status"] == "aborted");
}

TEST_CASE("verify: shear holds, torus boundary identities are not applicable") {
  const fs::path dir = scratch("verify_shear");
  CHECK(cmd_verify({plan(kShear)}, dir) == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(dir / "verify.json"));
  bool saw_reduction = false;
  for (const auto& r : doc["reports"]) {
    const std::string name = r["identity"];
    if (name == "boundary_compatibility" || name == "boundary_tangency") {
      CHECK(r["verdict"] == "not_applicable");
    } else {
      CHECK(r["verdict"] == "holds");
    }
    saw_reduction |= name == "reduction_residual";
  }
  CHECK(saw_reduction);
  CHECK(doc["preamble"].get<std::string>().size() > 20);
}

TEST_CASE("verify: injected inflow fails compatibility with the injected flux") {
  const fs::path dir = scratch("verify_inflow");
  CHECK(cmd_verify({plan(kInflow)}, dir) == kExitIdentityFailure);
  const auto doc = nlohmann::json::parse(slurp(dir / "verify.json"));
  int seen = 0;
  for (const auto& r : doc["reports"]) {
    if (r["identity"] != "boundary_compatibility") continue;
    ++seen;
    CHECK(r["verdict"] == "fails");
    // 0.5 sin^2(y) on x = 0 over [0, pi]: flux -0.5 pi / 2
    CHECK(r["lhs"].get<double>() == doctest::Approx(-0.25 * kPi).epsilon(1e-8));
  }
  CHECK(seen == 3);
}

TEST_CASE("verify: parallel jobs match serial output byte for byte") {
  const fs::path a = scratch("verify_serial");
  const fs::path b = scratch("verify_parallel");
  const fs::path cfgdir = scratch("verify_cfgs");
  std::vector<RunPlan> plans;
  for (const auto& [name, text] : {std::pair{"shear", kShear}, std::pair{"random", kRandom}}) {
    std::ofstream(cfgdir / (std::string(name) + ".cfg")) << text;
    plans.push_back(parse_config(cfgdir / (std::string(name) + ".cfg")));
  }
  CHECK(cmd_verify(plans, a, 1) == cmd_verify(plans, b, 2));
  for (const char* sub : {"shear", "random"}) {
    for (const char* f : {"verify.csv", "diagnostics.csv", "verify.json"}) {
      CHECK(slurp(a / sub / f) == slurp(b / sub / f));
      CHECK_FALSE(slurp(a / sub / f).empty());
    }
  }
}

TEST_CASE("seeded scenarios give byte-identical CSVs") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  CHECK(cmd_run(plan(kRandom), a) == kExitOk);
  CHECK(cmd_run(plan(kRandom), b) == kExitOk);
  CHECK(slurp(a / "diagnostics.csv") == slurp(b / "diagnostics.csv"));
  CHECK(slurp(a / "snapshots" / "index.csv") == slurp(b / "snapshots" / "index.csv"));
  const RunPlan other = plan(std::string(kRandom).replace(std::string(kRandom).find("99"), 2, "98"));
  const fs::path c = scratch("det_c");
  CHECK(cmd_run(other, c) == kExitOk);
  CHECK(slurp(a / "diagnostics.csv") != slurp(c / "diagnostics.csv"));
}

TEST_CASE("uniqueness and identities on stored snapshots") {
  const fs::path dir = scratch("uniq");
  const RunPlan p = plan(
      "scenario.name = two_mode\ngrid.n = 32\nfluid.viscosity = 0.05\ntime.dt = 1e-2\n"
      "time.t_end = 0.3\ntime.sample_every = 5\n");
  CHECK(cmd_uniqueness(p, dir) == kExitOk);
  for (const char* f : {"uniqueness.json", "uniqueness.csv", "diagnostics.csv", "v_final.nsf",
                        "w_final.nsf", "manifest.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto rows = read_csv(dir / "diagnostics.csv");
  CHECK(rows[0].back() == "w_norm");
  CHECK(rows.size() == 8);
  const auto doc = nlohmann::json::parse(slurp(dir / "uniqueness.json"));
  CHECK(doc["verdict"].get<std::string>().find("not a refutation") != std::string::npos);
  const auto& last = doc["series"].back()["identities"];

  const fs::path out = scratch("ids_pair");
  cmd_identities(dir / "v_final.nsf", dir / "w_final.nsf", out);
  const auto ids = nlohmann::json::parse(slurp(out / "identities.json"));
  REQUIRE(ids["reports"].size() == 4);
  for (const auto& r : ids["reports"]) {
    const auto& in_run = last[r["identity"].get<std::string>()];
    CHECK(std::abs(r["lhs"].get<double>() - in_run["lhs"].get<double>()) <= 1e-12);
    CHECK(std::abs(r["rhs"].get<double>() - in_run["rhs"].get<double>()) <= 1e-12);
  }
}

TEST_CASE("identities: stored shear snapshot, corrupt file") {
  const fs::path dir = scratch("ids_single");
  CHECK(cmd_run(plan(kShear), dir / "run") == kExitOk);
  const fs::path snap = dir / "run" / "snapshots" / "snap_00002.nsf";
  CHECK(cmd_identities(snap, std::nullopt, dir / "ids") == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(dir / "ids" / "identities.json"));
  bool eigen = false;
  for (const auto& r : doc["reports"]) {
    if (r["identity"] == "eigenweighted_energy") eigen = r["verdict"] == "holds";
  }
  CHECK(eigen);

  const std::string bytes = slurp(snap);
  std::ofstream(dir / "bad.nsf", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_WITH_AS(cmd_identities(dir / "bad.nsf", std::nullopt, dir / "ids2"),
                       doctest::Contains("truncated"), FormatError);
}

TEST_CASE("binary: exit code contract") {
  const fs::path dir = scratch("binary");
  std::ofstream(dir / "shear.cfg") << kShear;
  std::ofstream(dir / "bad.cfg") << "scenario.name = shear\nfluid.color = red\n";
  std::ofstream(dir / "inflow.cfg") << kInflow;
  std::ofstream(dir / "junk.nsf") << "not a field";
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_binary("run --config " + (dir / "shear.cfg").string() + out) == 0);
  CHECK(run_binary("run --config " + (dir / "bad.cfg").string() + out) == 1);
  CHECK(run_binary("verify --config " + (dir / "inflow.cfg").string() + out) == 3);
  CHECK(run_binary("identities " + (dir / "junk.nsf").string() + out) == 1);
  CHECK(run_binary("frobnicate") == 1);
  CHECK(run_binary("run") == 1);
  const std::string env = "NSVERIFY_OUT=" + (dir / "env").string() + " ";
  const int status = std::system((env + NSVERIFY_BINARY + " run --config " +
                                  (dir / "shear.cfg").string() + " >/dev/null 2>&1")
                                     .c_str());
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(dir / "env" / "manifest.json"));
}
