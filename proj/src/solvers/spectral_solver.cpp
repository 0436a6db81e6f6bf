#include "nsv/solvers/spectral_solver.hpp"

#include <cmath>
#include <sstream>

#include "nsv/fields/errors.hpp"

namespace nsv {

namespace {

using fft::Complex;
using Spectrum = std::vector<Complex>;

const Complex kI(0.0, 1.0);

// Two real fields per complex transform: ifft(A + iB) = a + ib for Hermitian A, B.
std::vector<std::vector<double>> inverse_real(const std::vector<const Spectrum*>& in,
                                              const Index3& shape, int dims) {
  std::vector<std::vector<double>> out(in.size());
  Spectrum z;
  for (std::size_t p = 0; p < in.size(); p += 2) {
    const Spectrum& a = *in[p];
    const bool pair = p + 1 < in.size();
    z.assign(a.begin(), a.end());
    if (pair) {
      const Spectrum& b = *in[p + 1];
      for (std::size_t n = 0; n < z.size(); ++n) z[n] += kI * b[n];
    }
    fft::transform(z, shape, dims, true);
    out[p].resize(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) out[p][n] = z[n].real();
    if (pair) {
      out[p + 1].resize(z.size());
      for (std::size_t n = 0; n < z.size(); ++n) out[p + 1][n] = z[n].imag();
    }
  }
  return out;
}

std::vector<Spectrum> forward_real(const std::vector<std::vector<double>>& in, const Index3& shape,
                                   int dims, const std::vector<std::size_t>& conj) {
  std::vector<Spectrum> out(in.size());
  Spectrum z;
  for (std::size_t p = 0; p < in.size(); p += 2) {
    const bool pair = p + 1 < in.size();
    z.resize(in[p].size());
    for (std::size_t n = 0; n < z.size(); ++n) {
      z[n] = Complex(in[p][n], pair ? in[p + 1][n] : 0.0);
    }
    fft::transform(z, shape, dims, false);
    out[p].resize(z.size());
    if (pair) out[p + 1].resize(z.size());
    for (std::size_t n = 0; n < z.size(); ++n) {
      const Complex zc = std::conj(z[conj[n]]);
      out[p][n] = 0.5 * (z[n] + zc);
      if (pair) out[p + 1][n] = -0.5 * kI * (z[n] - zc);
    }
  }
  return out;
}

std::vector<std::size_t> conjugate_table(const GridSpec& grid, std::size_t count) {
  const SpectralField probe(grid, Spectrum(count));
  std::vector<std::size_t> c(count);
  for (std::size_t n = 0; n < count; ++n) c[n] = probe.conjugate_index(n);
  return c;
}

}  // namespace

SpectralStepper::SpectralStepper(const GridSpec& grid, ForcingSpec forcing, SolverConfig cfg,
                                 bool advect)
    : grid_(grid),
      forcing_(std::move(forcing)),
      cfg_(cfg),
      advect_(advect),
      dims_(grid.dims()),
      shape_(ScalarField(grid).shape()),
      wn_(grid) {
  if (!grid.periodic()) throw GridError("spectral stepper requires a periodic torus");
  conj_ = conjugate_table(grid, wn_.k2.size());
}

void SpectralStepper::load(const VectorField& v) {
  if (!(v.grid() == grid_) || v.staggered() || v[0].centering() != kNodes) {
    throw GridError("spectral stepper state must be collocated on the nodes of " + grid_.describe());
  }
  state_.clear();
  for (int d = 0; d < dims_; ++d) state_.push_back(forward_transform(v[d]).modes());
}

std::vector<double> SpectralStepper::to_physical(const Spectrum& m) const {
  return inverse_real({&m}, shape_, dims_)[0];
}

SpectralStepper::Modes SpectralStepper::nonlinear(const Modes& v, double* speed) const {
  const std::size_t count = wn_.k2.size();
  std::vector<const Spectrum*> fields;
  for (int j = 0; j < dims_; ++j) fields.push_back(&v[j]);
  Modes grads;
  grads.reserve(dims_ * dims_);
  for (int i = 0; i < dims_; ++i) {
    for (int j = 0; j < dims_; ++j) {
      Spectrum g(count);
      for (std::size_t n = 0; n < count; ++n) g[n] = kI * wn_.k[n][j] * v[i][n];
      grads.push_back(std::move(g));
    }
  }
  for (const auto& g : grads) fields.push_back(&g);
  const auto phys = inverse_real(fields, shape_, dims_);

  std::vector<std::vector<double>> prod(dims_, std::vector<double>(count, 0.0));
  double vmax = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    double s = 0.0;
    for (int j = 0; j < dims_; ++j) s += phys[j][n] * phys[j][n];
    vmax = std::max(vmax, s);
    for (int i = 0; i < dims_; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dims_; ++j) acc += phys[j][n] * phys[dims_ + i * dims_ + j][n];
      prod[i][n] = acc;
    }
  }
  if (speed) *speed = std::sqrt(vmax);

  Modes out = forward_real(prod, shape_, dims_, conj_);
  if (cfg_.dealias == DealiasPolicy::two_thirds) {
    for (auto& c : out) {
      for (std::size_t n = 0; n < count; ++n) {
        if (!wn_.keep[n]) c[n] = 0.0;
      }
    }
  }
  return out;
}

SpectralStepper::Modes SpectralStepper::forcing_modes(double t) const {
  Modes out;
  const VectorField f = forcing_.sample(grid_, t);
  for (int d = 0; d < dims_; ++d) out.push_back(forward_transform(f[d]).modes());
  return out;
}

SpectralStepper::Modes SpectralStepper::rhs(const Modes& v, double t, bool check_cfl,
                                            double time_of_check) const {
  const std::size_t count = wn_.k2.size();
  Modes s(dims_, Spectrum(count, 0.0));
  double speed = 0.0;
  if (advect_) {
    const Modes nl = nonlinear(v, &speed);
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) s[d][n] = -nl[d][n];
    }
  }
  if (check_cfl && advect_) {
    const double limit = cfg_.cfl_guard * grid_.min_spacing() / std::max(speed, 1e-12);
    if (cfg_.dt > limit) {
      std::ostringstream os;
      os << "dt = " << cfg_.dt << " exceeds the advective limit " << limit << " at t = "
         << time_of_check << " (max speed " << speed << ")";
      throw CflError(os.str(), time_of_check);
    }
  }
  if (forcing_.active()) {
    const Modes f = forcing_modes(t);
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) s[d][n] += f[d][n];
    }
  }
  spectral::project(s, wn_, dims_);
  return s;
}

void SpectralStepper::step(double t) {
  if (state_.empty()) throw std::logic_error("spectral stepper has no state");
  const double dt = cfg_.dt;
  const double mu = cfg_.viscosity;
  const std::size_t count = wn_.k2.size();

  auto axpy = [&](const Modes& base, double a, const Modes& k) {
    Modes out = base;
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) out[d][n] += a * k[d][n];
    }
    return out;
  };
  // Full right-hand side including diffusion, as a modes array.
  auto full = [&](const Modes& v, double tt, bool check) {
    Modes r = rhs(v, tt, check, t);
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) r[d][n] -= mu * wn_.k2[n] * v[d][n];
    }
    return r;
  };

  Modes next;
  switch (cfg_.integrator) {
    case Integrator::explicit_euler: {
      next = axpy(state_, dt, full(state_, t, true));
      break;
    }
    case Integrator::rk4: {
      const Modes k1 = full(state_, t, true);
      const Modes k2 = full(axpy(state_, 0.5 * dt, k1), t + 0.5 * dt, false);
      const Modes k3 = full(axpy(state_, 0.5 * dt, k2), t + 0.5 * dt, false);
      const Modes k4 = full(axpy(state_, dt, k3), t + dt, false);
      next = state_;
      for (int d = 0; d < dims_; ++d) {
        for (std::size_t n = 0; n < count; ++n) {
          next[d][n] += dt / 6.0 * (k1[d][n] + 2.0 * k2[d][n] + 2.0 * k3[d][n] + k4[d][n]);
        }
      }
      break;
    }
    case Integrator::imex_cn: {
      const Modes e = rhs(state_, t, true, t);
      next = state_;
      for (int d = 0; d < dims_; ++d) {
        for (std::size_t n = 0; n < count; ++n) {
          const double a = 0.5 * mu * dt * wn_.k2[n];
          next[d][n] = ((1.0 - a) * state_[d][n] + dt * e[d][n]) / (1.0 + a);
        }
      }
      break;
    }
  }
  for (const auto& c : next) {
    for (const auto& z : c) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "non-finite velocity reached at t = " << t + dt;
        throw BlowUpError(os.str(), t + dt);
      }
    }
  }
  state_ = std::move(next);
}

VectorField SpectralStepper::velocity() const {
  std::vector<const Spectrum*> in;
  for (const auto& c : state_) in.push_back(&c);
  auto phys = inverse_real(in, shape_, dims_);
  std::vector<ScalarField> comps;
  for (auto& p : phys) comps.emplace_back(grid_, kNodes, std::move(p));
  return VectorField(Layout::collocated, std::move(comps));
}

double SpectralStepper::max_speed() const {
  std::vector<const Spectrum*> in;
  for (const auto& c : state_) in.push_back(&c);
  const auto phys = inverse_real(in, shape_, dims_);
  double m = 0.0;
  for (std::size_t n = 0; n < phys[0].size(); ++n) {
    double s = 0.0;
    for (const auto& p : phys) s += p[n] * p[n];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

ScalarField SpectralStepper::pressure(double t) const {
  const std::size_t count = wn_.k2.size();
  Modes s(dims_, Spectrum(count, 0.0));
  if (advect_) {
    const Modes nl = nonlinear(state_);
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) s[d][n] = -nl[d][n];
    }
  }
  if (forcing_.active()) {
    const Modes f = forcing_modes(t);
    for (int d = 0; d < dims_; ++d) {
      for (std::size_t n = 0; n < count; ++n) s[d][n] += f[d][n];
    }
  }
  Spectrum p(count, 0.0);
  for (std::size_t n = 0; n < count; ++n) {
    if (wn_.k2[n] == 0.0) continue;
    Complex ks = 0.0;
    for (int d = 0; d < dims_; ++d) ks += wn_.k[n][d] * s[d][n];
    p[n] = -kI * ks / wn_.k2[n];
  }
  return ScalarField(grid_, kNodes, to_physical(p));
}

namespace {

VectorField single_step(const VectorField& state, double t, const ForcingSpec& f,
                        const SolverConfig& cfg, bool advect) {
  SpectralStepper s(state.grid(), f, cfg, advect);
  s.load(state);
  s.step(t);
  return s.velocity();
}

}  // namespace

VectorField step_nse_spectral(const VectorField& state, double t, const ForcingSpec& f,
                              const SolverConfig& cfg) {
  return single_step(state, t, f, cfg, true);
}

VectorField step_reduced_spectral(const VectorField& state, double t, const ForcingSpec& f,
                                  const SolverConfig& cfg) {
  return single_step(state, t, f, cfg, false);
}

}  // namespace nsv
