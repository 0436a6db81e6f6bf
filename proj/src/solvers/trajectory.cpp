#include "nsv/solvers/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "nsv/fields/nsf1.hpp"
#include "nsv/spectral/spectral.hpp"

namespace nsv {

double convective_residual(const VectorField& v) {
  VectorField c = convective_term(v);
  if (v.grid().periodic()) c = leray_project(c);
  return std::sqrt(energy(c));
}

double max_divergence(const VectorField& v) { return max_abs(divergence(v)); }

SampleDiagnostics diagnose(const VectorField& v, const Vorticity& w) {
  SampleDiagnostics d;
  d.energy = energy(v);
  d.enstrophy = enstrophy(w);
  d.div_max = max_divergence(v);
  d.conv_residual = convective_residual(v);
  d.boundary_flux = boundary_flux(v).value;
  return d;
}

void Trajectory::append(TrajectorySample s) {
  if (!samples_.empty() && !(s.t > samples_.back().t)) {
    throw std::invalid_argument("trajectory sample times must increase strictly");
  }
  samples_.push_back(std::move(s));
}

void Trajectory::set_step_energy(double dt, std::vector<double> energy) {
  step_dt_ = dt;
  step_energy_ = std::move(energy);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(samples_.size());
  for (const auto& s : samples_) t.push_back(s.t);
  return t;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::filesystem::path export_trajectory(const Trajectory& traj, const std::filesystem::path& dir,
                                        const std::string& prefix) {
  std::filesystem::create_directories(dir);
  const auto index = dir / "index.csv";
  std::ofstream csv(index, std::ios::trunc);
  if (!csv) throw std::runtime_error("cannot write " + index.string());
  csv << "t,file,energy,div_max,conv_residual\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%05zu.nsf", prefix.c_str(), i);
    write_nsf1(dir / name, traj[i].velocity);
    const auto& d = traj[i].diagnostics;
    csv << format_real(traj[i].t) << ',' << name << ',' << format_real(d.energy) << ','
        << format_real(d.div_max) << ',' << format_real(d.conv_residual) << '\n';
  }
  return index;
}

}  // namespace nsv
