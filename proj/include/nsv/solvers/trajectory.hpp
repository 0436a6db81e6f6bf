#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nsv/fields/field.hpp"
#include "nsv/fields/operators.hpp"

namespace nsv {

// ||P[(v . grad) v]||_{L2} on a torus (P the Leray projector),
// ||(v . grad) v||_{L2} on a box.
double convective_residual(const VectorField& v);

// max |divergence(v)|.
double max_divergence(const VectorField& v);

struct SampleDiagnostics {
  double energy = 0.0;
  double enstrophy = 0.0;
  double div_max = 0.0;
  double conv_residual = 0.0;
  double boundary_flux = 0.0;
};

SampleDiagnostics diagnose(const VectorField& v, const Vorticity& w);

struct TrajectorySample {
  double t;
  VectorField velocity;
  ScalarField pressure;
  Vorticity vorticity;
  SampleDiagnostics diagnostics;
};

class Trajectory {
 public:
  // Throws std::invalid_argument unless t is strictly after the last sample.
  void append(TrajectorySample s);

  const std::vector<TrajectorySample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples_[i]; }
  const TrajectorySample& back() const { return samples_.back(); }
  std::vector<double> times() const;

  // Energy after every step k (t = k dt), recorded alongside the samples.
  void set_step_energy(double dt, std::vector<double> energy);
  const std::vector<double>& step_energy() const { return step_energy_; }
  double step_dt() const { return step_dt_; }

 private:
  std::vector<TrajectorySample> samples_;
  std::vector<double> step_energy_;
  double step_dt_ = 0.0;
};

// Writes snap_NNNNN.nsf per sample plus index.csv with columns
// t,file,energy,div_max,conv_residual. Returns the index path.
std::filesystem::path export_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                        const std::string& prefix = "snap");

// Round-trip-exact text form of a double for CSV and JSON outputs.
std::string format_real(double x);

}  // namespace nsv
