#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsv/claims/identities.hpp"
#include "nsv/solvers/config.hpp"

namespace nsv {

struct UniquenessSample {
  double t = 0.0;
  double w_norm_sq = 0.0;      // ||w||^2 with w = v - v_g
  double ddt_w_norm_sq = 0.0;  // three-point derivative over neighbouring samples
  double ddt_richardson = 0.0; // (4 D_h - D_2h) / 3, equal to the above at the ends
  double conv_residual = 0.0;  // of v_g
  double q_norm = 0.0;         // ||p - p_g||
  SampleDiagnostics full;      // diagnostics of v_g
  double energy_balance = 0.0; // of v_g, NaN where undefined
  std::vector<IdentityReport> identities;
};

struct Confirmation {
  int cells = 0;
  double final_w_norm = 0.0;
  double final_ddt = 0.0;
  bool sign_agrees = false;
  bool within_10_percent = false;
};

struct UniquenessReport {
  std::string scenario;
  int cells = 0;
  bool completed = false;
  std::string outcome;  // "completed" or the abort message
  double abort_time = 0.0;
  double v0_norm = 0.0;
  std::vector<UniquenessSample> samples;
  bool growth_observed = false;
  bool monotone_growth = false;
  bool richardson_consistent = true;
  std::optional<Confirmation> confirmation;
  std::string verdict;
  std::optional<VectorField> v_final;
  std::optional<VectorField> w_final;

  double final_w_norm() const;
  double final_ddt() const;
};

// Integrates v with solve_reduced and v_g with run_nse from the same data and
// measures w = v - v_g at every sample. Solver aborts (blow-up, CFL,
// solvability) are recorded in the report instead of propagating.
UniquenessReport run_uniqueness_experiment(const std::string& scenario, const VectorField& v0,
                                           const ForcingSpec& f,
                                           const std::optional<BoundaryDatum>& bc,
                                           const SolverConfig& cfg, int sample_every = 1);

// Compares the final sign of d/dt||w||^2 and ||w(t_end)|| (within 10%) with a
// rerun at another resolution and rewrites the verdict.
void attach_confirmation(UniquenessReport& report, const UniquenessReport& rerun);

nlohmann::json to_json(const UniquenessReport& r);

// t,w_norm,w_norm_sq,ddt_w_norm_sq,ddt_richardson,conv_residual,q_norm followed
// by one residual column per identity.
void write_uniqueness_csv(const std::filesystem::path& path, const UniquenessReport& r);

// Every per-sample identity report, in sample order.
std::vector<IdentityReport> flatten_identities(const UniquenessReport& r);

}  // namespace nsv
