#include "nsv/claims/uniqueness.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "nsv/solvers/runner.hpp"

namespace nsv {

namespace {

// Derivative at x0 of the quadratic through three points.
double three_point(double x0, double xa, double fa, double xb, double fb, double xc, double fc) {
  return fa * ((x0 - xb) + (x0 - xc)) / ((xa - xb) * (xa - xc)) +
         fb * ((x0 - xa) + (x0 - xc)) / ((xb - xa) * (xb - xc)) +
         fc * ((x0 - xa) + (x0 - xb)) / ((xc - xa) * (xc - xb));
}

std::vector<double> derivative(const std::vector<double>& t, const std::vector<double>& f,
                               std::size_t stride) {
  const std::size_t n = t.size();
  std::vector<double> d(n, 0.0);
  if (n < 2 * stride + 1) return d;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t a, b, c;
    if (i < stride) {
      a = 0, b = stride, c = 2 * stride;
    } else if (i + stride >= n) {
      a = n - 1 - 2 * stride, b = n - 1 - stride, c = n - 1;
    } else {
      a = i - stride, b = i, c = i + stride;
    }
    d[i] = three_point(t[i], t[a], f[a], t[b], f[b], t[c], f[c]);
  }
  return d;
}

double l2(const ScalarField& s) { return std::sqrt(volume_integral(s * s)); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

void compose_verdict(UniquenessReport& r) {
  if (!r.completed) {
    r.verdict = "experiment aborted: " + r.outcome;
    return;
  }
  const double wn = r.final_w_norm();
  double wmax = 0.0;
  for (const auto& s : r.samples) wmax = std::max(wmax, std::sqrt(s.w_norm_sq));
  std::ostringstream os;
  if (wmax <= 1e-8 * std::max(r.v0_norm, 1e-300)) {
    os << "consistent with uniqueness: ||w|| stays below 1e-8 ||v0|| (max " << fmt(wmax)
       << "); the reduced and full solutions coincide at " << r.cells << " cells per axis.";
  } else if (r.growth_observed) {
    os << "||w|| grows from 0 to " << fmt(wn) << " (" << fmt(wn / r.v0_norm)
       << " ||v0||) with d/dt||w||^2 > 0 observed at " << r.cells
       << " cells per axis. This is a discretization-level observation, not a refutation of "
          "the continuum theorem.";
  } else {
    os << "||w|| reaches " << fmt(wn) << " without a positive growth rate of ||w||^2.";
  }
  if (r.confirmation) {
    const Confirmation& c = *r.confirmation;
    const bool ok = c.sign_agrees && c.within_10_percent;
    os << " Rerun at " << c.cells << " cells per axis " << (ok ? "confirms" : "does not confirm")
       << " it (final ||w|| " << fmt(c.final_w_norm) << ", growth sign "
       << (c.sign_agrees ? "agrees" : "differs") << ").";
  }
  r.verdict = os.str();
}

}  // namespace

double UniquenessReport::final_w_norm() const {
  return samples.empty() ? 0.0 : std::sqrt(samples.back().w_norm_sq);
}

double UniquenessReport::final_ddt() const {
  return samples.empty() ? 0.0 : samples.back().ddt_w_norm_sq;
}

UniquenessReport run_uniqueness_experiment(const std::string& scenario, const VectorField& v0,
                                           const ForcingSpec& f,
                                           const std::optional<BoundaryDatum>& bc,
                                           const SolverConfig& cfg, int sample_every) {
  UniquenessReport r;
  r.scenario = scenario;
  r.cells = v0.grid().cells(0);
  r.v0_norm = std::sqrt(energy(v0));
  Trajectory reduced, full;
  try {
    reduced = solve_reduced(v0, f, bc, cfg, sample_every);
    full = run_nse(v0, f, bc, cfg, sample_every);
  } catch (const BlowUpError& e) {
    r.outcome = e.what();
    r.abort_time = e.time();
  } catch (const CflError& e) {
    r.outcome = e.what();
    r.abort_time = e.time();
  } catch (const SolvabilityError& e) {
    r.outcome = e.what();
  }
  if (!r.outcome.empty()) {
    compose_verdict(r);
    return r;
  }
  r.completed = true;
  r.outcome = "completed";

  std::vector<double> t, wsq;
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    const auto& a = reduced[i];
    const auto& b = full[i];
    UniquenessSample s;
    s.t = a.t;
    const VectorField w = a.velocity - b.velocity;
    s.w_norm_sq = energy(w);
    s.conv_residual = b.diagnostics.conv_residual;
    s.full = b.diagnostics;
    s.energy_balance = std::numeric_limits<double>::quiet_NaN();
    s.q_norm = l2(a.pressure - b.pressure);
    s.identities = check_uniqueness_identities(a.velocity, w);
    for (auto& rep : s.identities) rep.t = a.t;
    t.push_back(s.t);
    wsq.push_back(s.w_norm_sq);
    r.samples.push_back(std::move(s));
    if (i + 1 == reduced.size()) {
      r.v_final = a.velocity;
      r.w_final = w;
    }
  }
  if (full.size() >= 3) {
    const std::vector<double> balance = energy_balance_series(full, f, cfg.viscosity);
    for (std::size_t i = 0; i < balance.size(); ++i) r.samples[i].energy_balance = balance[i];
  }
  const std::vector<double> d1 = derivative(t, wsq, 1);
  const std::vector<double> d2 = derivative(t, wsq, 2);
  const double noise = 1e-10 * r.v0_norm * r.v0_norm;
  bool monotone = wsq.size() > 1;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    auto& s = r.samples[i];
    s.ddt_w_norm_sq = d1[i];
    const bool interior = i >= 2 && i + 2 < r.samples.size();
    s.ddt_richardson = interior ? (4.0 * d1[i] - d2[i]) / 3.0 : d1[i];
    if (std::abs(s.ddt_richardson) > noise && (s.ddt_richardson > 0) != (d1[i] > 0)) {
      r.richardson_consistent = false;
    }
    if (d1[i] > noise) r.growth_observed = true;
    if (i > 0 && wsq[i] < wsq[i - 1]) monotone = false;
  }
  r.monotone_growth = monotone && wsq.back() > wsq.front();
  compose_verdict(r);
  return r;
}

void attach_confirmation(UniquenessReport& report, const UniquenessReport& rerun) {
  Confirmation c;
  c.cells = rerun.cells;
  c.final_w_norm = rerun.final_w_norm();
  c.final_ddt = rerun.final_ddt();
  c.sign_agrees = rerun.completed && (c.final_ddt > 0) == (report.final_ddt() > 0);
  const double ref = report.final_w_norm();
  c.within_10_percent = rerun.completed && ref > 0.0 && std::abs(c.final_w_norm - ref) <= 0.1 * ref;
  report.confirmation = c;
  compose_verdict(report);
}

std::vector<IdentityReport> flatten_identities(const UniquenessReport& r) {
  std::vector<IdentityReport> out;
  for (const auto& s : r.samples) out.insert(out.end(), s.identities.begin(), s.identities.end());
  return out;
}

nlohmann::json to_json(const UniquenessReport& r) {
  nlohmann::json j;
  j["preamble"] = kReportPreamble;
  j["scenario"] = r.scenario;
  j["cells"] = r.cells;
  j["completed"] = r.completed;
  j["outcome"] = r.outcome;
  if (!r.completed) j["abort_time"] = r.abort_time;
  j["v0_norm"] = r.v0_norm;
  j["final_w_norm"] = r.final_w_norm();
  j["final_ddt_w_norm_sq"] = r.final_ddt();
  j["growth_observed"] = r.growth_observed;
  j["monotone_growth"] = r.monotone_growth;
  j["richardson_consistent"] = r.richardson_consistent;
  j["verdict"] = r.verdict;
  if (r.confirmation) {
    const Confirmation& c = *r.confirmation;
    j["confirmation"] = {{"cells", c.cells},
                         {"final_w_norm", c.final_w_norm},
                         {"final_ddt_w_norm_sq", c.final_ddt},
                         {"sign_agrees", c.sign_agrees},
                         {"within_10_percent", c.within_10_percent}};
  }
  nlohmann::json series = nlohmann::json::array();
  for (const auto& s : r.samples) {
    nlohmann::json row = {{"t", s.t},
                          {"w_norm", std::sqrt(s.w_norm_sq)},
                          {"w_norm_sq", s.w_norm_sq},
                          {"ddt_w_norm_sq", s.ddt_w_norm_sq},
                          {"ddt_richardson", s.ddt_richardson},
                          {"conv_residual", s.conv_residual},
                          {"q_norm", s.q_norm}};
    nlohmann::json ids = nlohmann::json::object();
    for (const auto& rep : s.identities) ids[rep.name] = to_json(rep);
    row["identities"] = ids;
    series.push_back(row);
  }
  j["series"] = series;
  return j;
}

void write_uniqueness_csv(const std::filesystem::path& path, const UniquenessReport& r) {
  std::ostringstream os;
  os << "t,w_norm,w_norm_sq,ddt_w_norm_sq,ddt_richardson,conv_residual,q_norm";
  if (!r.samples.empty()) {
    for (const auto& rep : r.samples.front().identities) os << ',' << rep.name << "_residual";
  }
  os << '\n';
  for (const auto& s : r.samples) {
    os << format_real(s.t) << ',' << format_real(std::sqrt(s.w_norm_sq)) << ','
       << format_real(s.w_norm_sq) << ',' << format_real(s.ddt_w_norm_sq) << ','
       << format_real(s.ddt_richardson) << ',' << format_real(s.conv_residual) << ','
       << format_real(s.q_norm);
    for (const auto& rep : s.identities) os << ',' << format_real(rep.residual);
    os << '\n';
  }
  write_atomically(path, os.str());
}

}  // namespace nsv
