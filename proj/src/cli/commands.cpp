#include "nsv/cli/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "nsv/claims/identities.hpp"
#include "nsv/claims/uniqueness.hpp"
#include "nsv/cli/scenario.hpp"
#include "nsv/fields/errors.hpp"
#include "nsv/fields/nsf1.hpp"
#include "nsv/solvers/runner.hpp"

#ifndef NSVERIFY_VERSION
#define NSVERIFY_VERSION "unknown"
#endif

namespace nsv {

namespace fs = std::filesystem;

const char* const kDiagnosticsHeader =
    "t,energy,enstrophy,div_max,conv_residual,energy_balance_residual,boundary_flux";

namespace {

using Clock = std::chrono::steady_clock;

std::string real_or_nan(double x) { return std::isnan(x) ? "nan" : format_real(x); }

std::string diagnostics_row(double t, const SampleDiagnostics& d, double balance) {
  return format_real(t) + ',' + format_real(d.energy) + ',' + format_real(d.enstrophy) + ',' +
         format_real(d.div_max) + ',' + format_real(d.conv_residual) + ',' + real_or_nan(balance) +
         ',' + format_real(d.boundary_flux);
}

std::vector<double> balance_or_nan(const Trajectory& traj, const ForcingSpec& f, double mu) {
  if (traj.size() < 3) return std::vector<double>(traj.size(), std::nan(""));
  return energy_balance_series(traj, f, mu);
}

fs::path write_diagnostics(const fs::path& dir, const Trajectory& traj, const ForcingSpec& f,
                           double mu) {
  const std::vector<double> balance = balance_or_nan(traj, f, mu);
  std::string text = std::string(kDiagnosticsHeader) + '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    text += diagnostics_row(traj[i].t, traj[i].diagnostics, balance[i]) + '\n';
  }
  const fs::path path = dir / "diagnostics.csv";
  write_atomically(path, text);
  return path;
}

nlohmann::json config_echo(const RunPlan& plan) {
  return {{"source", plan.source},
          {"scenario", to_string(plan.scenario.kind)},
          {"keys", plan.echo}};
}

class Manifest {
 public:
  Manifest(std::string command, const RunPlan* plan) : start_(Clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = NSVERIFY_VERSION;
    if (plan) {
      doc_["scenario"] = to_string(plan->scenario.kind);
      doc_["config"] = config_echo(*plan);
    }
    doc_["outputs"] = nlohmann::json::array();
  }

  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  nlohmann::json& operator[](const char* key) { return doc_[key]; }

  void abort(const std::string& message, double time) {
    doc_["status"] = "aborted";
    doc_["message"] = message;
    doc_["abort_time"] = std::isnan(time) ? nlohmann::json(nullptr) : nlohmann::json(time);
  }

  void write(const fs::path& dir, int code) {
    doc_["exit_code"] = code;
    if (!doc_.contains("status")) doc_["status"] = "completed";
    doc_["wall_clock_seconds"] = std::chrono::duration<double>(Clock::now() - start_).count();
    const fs::path path = dir / "manifest.json";
    doc_["outputs"].push_back(path.string());
    write_atomically(path, doc_.dump(2) + "\n");
  }

 private:
  Clock::time_point start_;
  nlohmann::json doc_;
};

// Solver aborts are recorded in the manifest; everything else propagates.
template <class Body>
int guarded(Manifest& m, std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const BlowUpError& e) {
    m.abort(e.what(), e.time());
    log << "solver aborted: " << e.what() << "\n";
  } catch (const CflError& e) {
    m.abort(e.what(), e.at_construction() ? 0.0 : e.time());
    log << "solver aborted: " << e.what() << "\n";
  } catch (const SolvabilityError& e) {
    m.abort(e.what(), 0.0);
    log << "solver aborted: " << e.what() << "\n";
  }
  return kExitAbort;
}

std::vector<std::pair<double, double>> decay_series(const std::function<double(double)>& mag) {
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i <= 100; ++i) {
    const double t = std::pow(100.0, i / 100.0);
    out.emplace_back(t, mag(t));
  }
  return out;
}

bool any_failure(const std::vector<IdentityReport>& reps) {
  for (const auto& r : reps) {
    if (r.verdict == Verdict::fails) return true;
  }
  return false;
}

std::vector<IdentityReport> verify_reports(const RunPlan& plan, const Trajectory& traj,
                                           const ForcingSpec& f,
                                           const std::optional<BoundaryDatum>& bc) {
  const Scenario& s = plan.scenario;
  std::vector<IdentityReport> reps;
  if (traj.size() >= 3) {
    if (!bc || !bc->profile) {
      reps.push_back(check_energy_balance(traj, f, plan.solver.viscosity));
    } else {
      IdentityReport r = not_applicable("energy_balance", "nonzero boundary datum does work on the fluid");
      reps.push_back(r);
    }
  }
  const std::optional<VectorField> inflow =
      s.inject_inflow > 0.0 ? std::optional<VectorField>(injected_inflow(s)) : std::nullopt;
  for (const auto& sample : traj.samples()) {
    std::vector<IdentityReport> at;
    if (inflow) {
      IdentityReport r = check_compatibility(sample.velocity + *inflow);
      r.notes += " (snapshot plus injected inflow)";
      at.push_back(r);
    } else {
      at.push_back(check_compatibility(sample.velocity));
    }
    if (bc && !bc->tangential_only) {
      at.push_back(not_applicable("boundary_tangency", "boundary datum is not tangential"));
    } else {
      at.push_back(check_tangential(sample.velocity, sample.vorticity));
    }
    at.push_back(check_eigenweighted_energy(sample.velocity));
    for (auto& r : at) {
      r.t = sample.t;
      reps.push_back(std::move(r));
    }
  }
  if (scenario_ansatz(s)) {
    double worst = 0.0, at = 0.0;
    for (const auto& sample : traj.samples()) {
      if (sample.diagnostics.conv_residual >= worst) {
        worst = sample.diagnostics.conv_residual;
        at = sample.t;
      }
    }
    IdentityReport r = evaluate_identity("reduction_residual", worst, 0.0, 1e-10,
                                         "max over samples of the convective residual of ansatz data");
    r.t = at;
    reps.push_back(r);
  }
  if (f.active()) {
    IdentityReport r = check_decay(decay_series([&f](double t) { return f.magnitude(t); }),
                                   f.decay_exponent);
    r.name = "forcing_decay";
    reps.push_back(r);
  }
  if (bc && bc->profile) {
    if (bc->name == "decaying") {
      const GridSpec g = scenario_grid(s);
      const BoundaryDatum datum = *bc;
      IdentityReport r = check_decay(
          decay_series([&](double t) { return datum.max_magnitude(g, t); }), datum.decay_exponent);
      r.name = "boundary_decay";
      reps.push_back(r);
    } else {
      reps.push_back(not_applicable("boundary_decay", "exact datum decays exponentially"));
    }
  }
  return reps;
}

int verify_one(const RunPlan& plan, const fs::path& dir, std::ostream& log) {
  fs::create_directories(dir);
  Manifest m("verify", &plan);
  const int code = guarded(m, log, [&] {
    const double mu = plan.solver.viscosity;
    const VectorField v0 = scenario_initial_field(plan.scenario, mu);
    const ForcingSpec f = scenario_forcing(plan.scenario);
    const auto bc = scenario_boundary(plan.scenario, mu);
    const Trajectory traj = run_nse(v0, f, bc, plan.solver, plan.scenario.sample_every);
    m.output(write_diagnostics(dir, traj, f, mu));
    const std::vector<IdentityReport> reps = verify_reports(plan, traj, f, bc);
    write_report_json(dir / "verify.json", reps, config_echo(plan));
    write_report_csv(dir / "verify.csv", reps);
    m.output(dir / "verify.json");
    m.output(dir / "verify.csv");
    std::set<std::string> failed;
    int applicable = 0;
    for (const auto& r : reps) {
      if (r.verdict != Verdict::not_applicable) ++applicable;
      if (r.verdict == Verdict::fails) failed.insert(r.name);
    }
    m["identities_failed"] = failed;
    log << plan.source << ": " << reps.size() << " reports, " << applicable << " applicable, "
        << failed.size() << " identities failing";
    for (const auto& name : failed) log << " " << name;
    log << "\n";
    return failed.empty() ? kExitOk : kExitIdentityFailure;
  });
  m.write(dir, code);
  return code;
}

}  // namespace

int cmd_run(const RunPlan& plan, const fs::path& out) {
  fs::create_directories(out);
  Manifest m("run", &plan);
  const int code = guarded(m, std::cerr, [&] {
    const double mu = plan.solver.viscosity;
    const VectorField v0 = scenario_initial_field(plan.scenario, mu);
    const ForcingSpec f = scenario_forcing(plan.scenario);
    const Trajectory traj =
        run_nse(v0, f, scenario_boundary(plan.scenario, mu), plan.solver, plan.scenario.sample_every);
    m.output(write_diagnostics(out, traj, f, mu));
    if (plan.output.snapshots) m.output(export_trajectory(traj, out / "snapshots"));
    std::cout << "run completed: " << traj.size() << " samples to t = " << traj.back().t << "\n";
    return kExitOk;
  });
  m.write(out, code);
  return code;
}

int cmd_verify(const std::vector<RunPlan>& plans, const fs::path& out, int jobs) {
  std::vector<fs::path> dirs;
  std::set<std::string> used;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (plans.size() == 1) {
      dirs.push_back(out);
      continue;
    }
    std::string stem = fs::path(plans[i].source).stem().string();
    if (stem.empty()) stem = "plan";
    std::string name = stem;
    for (int k = 2; used.count(name); ++k) name = stem + "_" + std::to_string(k);
    used.insert(name);
    dirs.push_back(out / name);
  }

  std::vector<int> codes(plans.size(), kExitOk);
  std::vector<std::string> logs(plans.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      std::ostringstream log;
      try {
        codes[i] = verify_one(plans[i], dirs[i], log);
      } catch (const std::exception& e) {
        log << plans[i].source << ": error: " << e.what() << "\n";
        codes[i] = kExitConfig;
      }
      logs[i] = log.str();
    }
  };
  const std::size_t workers =
      std::min<std::size_t>(plans.size(), static_cast<std::size_t>(std::max(jobs, 1)));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& l : logs) std::cout << l;
  for (int severity : {kExitConfig, kExitAbort, kExitIdentityFailure}) {
    for (int c : codes) {
      if (c == severity) return severity;
    }
  }
  return kExitOk;
}

int cmd_uniqueness(const RunPlan& plan, const fs::path& out) {
  fs::create_directories(out);
  Manifest m("uniqueness", &plan);
  const double mu = plan.solver.viscosity;
  const Scenario& s = plan.scenario;
  const ForcingSpec f = scenario_forcing(s);
  const std::string name = to_string(s.kind);
  UniquenessReport r = run_uniqueness_experiment(name, scenario_initial_field(s, mu), f,
                                                 scenario_boundary(s, mu), plan.solver, s.sample_every);
  if (r.completed && plan.output.confirm_cells > 0) {
    Scenario low = s;
    low.cells = plan.output.confirm_cells;
    const UniquenessReport rerun = run_uniqueness_experiment(
        name, scenario_initial_field(low, mu), scenario_forcing(low), scenario_boundary(low, mu),
        plan.solver, low.sample_every);
    attach_confirmation(r, rerun);
  }
  nlohmann::json doc = to_json(r);
  doc["config"] = config_echo(plan);
  write_atomically(out / "uniqueness.json", doc.dump(2) + "\n");
  write_uniqueness_csv(out / "uniqueness.csv", r);
  m.output(out / "uniqueness.json");
  m.output(out / "uniqueness.csv");

  std::string text = std::string(kDiagnosticsHeader) + ",w_norm\n";
  for (const auto& x : r.samples) {
    text += diagnostics_row(x.t, x.full, x.energy_balance) + ',' + format_real(std::sqrt(x.w_norm_sq)) + '\n';
  }
  write_atomically(out / "diagnostics.csv", text);
  m.output(out / "diagnostics.csv");
  if (r.v_final && r.w_final) {
    write_nsf1(out / "v_final.nsf", *r.v_final);
    write_nsf1(out / "w_final.nsf", *r.w_final);
    m.output(out / "v_final.nsf");
    m.output(out / "w_final.nsf");
  }
  m["verdict"] = r.verdict;
  if (!r.completed) m.abort(r.outcome, r.abort_time);
  const int code = r.completed ? kExitOk : kExitAbort;
  m.write(out, code);
  std::cout << r.verdict << "\n";
  return code;
}

int cmd_identities(const fs::path& field, const std::optional<fs::path>& second, const fs::path& out) {
  const auto load = [](const fs::path& p) {
    if (!fs::exists(p)) throw FormatError(p.string() + ": no such file");
    try {
      return read_nsf1(p);
    } catch (const FormatError& e) {
      throw FormatError(p.string() + ": " + e.what());
    }
  };
  const VectorField v = load(field);
  std::vector<IdentityReport> reps;
  nlohmann::json cfg = {{"field", field.string()}};
  if (second) {
    const VectorField w = load(*second);
    if (!v.same_layout(w)) {
      throw FormatError(second->string() + ": grid or layout differs from " + field.string());
    }
    cfg["second"] = second->string();
    reps = check_uniqueness_identities(v, w);
  } else {
    reps.push_back(check_compatibility(v));
    reps.push_back(check_tangential(v, curl(v)));
    reps.push_back(check_eigenweighted_energy(v));
  }
  fs::create_directories(out);
  Manifest m("identities", nullptr);
  m["inputs"] = cfg;
  write_report_json(out / "identities.json", reps, cfg);
  write_report_csv(out / "identities.csv", reps);
  m.output(out / "identities.json");
  m.output(out / "identities.csv");
  for (const auto& r : reps) {
    std::cout << r.name << ": " << to_string(r.verdict) << " (lhs " << r.lhs << ", rhs " << r.rhs
              << ", residual " << r.residual << ")\n";
  }
  const int code = any_failure(reps) ? kExitIdentityFailure : kExitOk;
  m.write(out, code);
  return code;
}

}  // namespace nsv
