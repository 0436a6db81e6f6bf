#include "nsv/solvers/mac.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "nsv/fields/errors.hpp"

namespace nsv {

namespace {

using Comps = std::vector<std::vector<double>>;

std::size_t flat(const Index3& s, const Index3& i) {
  return (static_cast<std::size_t>(i[0]) * s[1] + i[1]) * s[2] + i[2];
}

std::size_t volume(const Index3& s) {
  return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

template <class Fn>
void for_each_index(const Index3& s, Fn fn) {
  Index3 i{0, 0, 0};
  for (i[0] = 0; i[0] < s[0]; ++i[0]) {
    for (i[1] = 0; i[1] < s[1]; ++i[1]) {
      for (i[2] = 0; i[2] < s[2]; ++i[2]) fn(i);
    }
  }
}

// Eigen decomposition of the 1D second-difference matrix with the given
// (unscaled) corner entries: -1 Neumann, -2 Dirichlet, -3 ghost wall value.
struct Basis {
  Eigen::MatrixXd q;
  Eigen::VectorXd lambda;
  int zero = -1;  // index of the null mode, if any
};

Basis second_difference(int n, double h, double corner) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = -2.0;
    if (i > 0) a(i, i - 1) = 1.0;
    if (i + 1 < n) a(i, i + 1) = 1.0;
  }
  a(0, 0) = corner;
  a(n - 1, n - 1) = corner;
  a /= h * h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Basis b{es.eigenvectors(), es.eigenvalues(), -1};
  if (corner == -1.0) {
    Eigen::Index idx;
    b.lambda.cwiseAbs().minCoeff(&idx);
    b.zero = static_cast<int>(idx);
    b.lambda(idx) = 0.0;
  }
  return b;
}

// data <- M line by line along `axis` (M^T when transpose is set).
void apply_axis(std::vector<double>& data, const Index3& s, int axis, const Eigen::MatrixXd& m,
                bool transpose) {
  const int n = s[axis];
  std::size_t stride = 1;
  for (int d = axis + 1; d < 3; ++d) stride *= s[d];
  const std::size_t outer = data.size() / (stride * n);
  Eigen::VectorXd line(n), out(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t st = 0; st < stride; ++st) {
      const std::size_t base = o * stride * n + st;
      for (int i = 0; i < n; ++i) line(i) = data[base + i * stride];
      if (transpose) {
        out.noalias() = m.transpose() * line;
      } else {
        out.noalias() = m * line;
      }
      for (int i = 0; i < n; ++i) data[base + i * stride] = out(i);
    }
  }
}

// Solves (c0 + c1 * sum_e A_e) x = data in the separable eigenbasis. Modes
// whose divisor is exactly zero are set to zero.
void separable_solve(std::vector<double>& data, const Index3& s, int dims,
                     const std::vector<const Basis*>& bases, double c0, double c1) {
  for (int e = 0; e < dims; ++e) apply_axis(data, s, e, bases[e]->q, true);
  for_each_index(s, [&](const Index3& m) {
    double lam = 0.0;
    bool null = true;
    for (int e = 0; e < dims; ++e) {
      lam += bases[e]->lambda(m[e]);
      if (m[e] != bases[e]->zero) null = false;
    }
    const double div = c0 + c1 * lam;
    double& x = data[flat(s, m)];
    x = (null && c0 == 0.0) ? 0.0 : x / div;
  });
  for (int e = 0; e < dims; ++e) apply_axis(data, s, e, bases[e]->q, false);
}

}  // namespace

struct MacStepper::Impl {
  GridSpec grid;
  ForcingSpec forcing;
  BoundaryDatum bc;
  SolverConfig cfg;
  bool advect;
  int dims;
  Index3 n{1, 1, 1};
  Vec3 h{1.0, 1.0, 1.0};
  std::vector<Index3> fs;  // face shapes per component
  Index3 cs{1, 1, 1};      // cell shape
  std::vector<Basis> neumann;
  std::vector<std::vector<Basis>> helmholtz;  // [component][axis], imex only
  Comps u;
  std::vector<double> p;

  Impl(const GridSpec& g, ForcingSpec f, BoundaryDatum b, SolverConfig c, bool adv)
      : grid(g), forcing(std::move(f)), bc(std::move(b)), cfg(c), advect(adv), dims(g.dims()) {
    if (g.periodic()) throw GridError("MAC stepper requires a bounded box");
    for (int e = 0; e < dims; ++e) {
      n[e] = g.cells(e);
      h[e] = g.spacing(e);
      cs[e] = n[e];
    }
    for (int d = 0; d < dims; ++d) {
      Index3 s = cs;
      s[d] += 1;
      fs.push_back(s);
    }
    for (int e = 0; e < dims; ++e) neumann.push_back(second_difference(n[e], h[e], -1.0));
    if (cfg.integrator == Integrator::imex_cn) {
      helmholtz.resize(dims);
      for (int d = 0; d < dims; ++d) {
        for (int e = 0; e < dims; ++e) {
          helmholtz[d].push_back(e == d ? second_difference(n[e] - 1, h[e], -2.0)
                                        : second_difference(n[e], h[e], -3.0));
        }
      }
    }
    p.assign(volume(cs), 0.0);
  }

  Point face_point(int d, const Index3& i) const {
    Point x{0.0, 0.0, 0.0};
    for (int e = 0; e < dims; ++e) {
      x[e] = e == d ? i[e] * h[e] : (i[e] + 0.5) * h[e];
    }
    return x;
  }

  double wall(int d, int e, int side, const Index3& i, double t) const {
    if (!bc.profile) return 0.0;
    Point x = face_point(d, i);
    x[e] = side ? grid.length(e) : 0.0;
    return bc.profile(x, t)[d];
  }

  // Component d at i shifted by dir along e; tangential walls use ghosts.
  double neighbor(const Comps& v, int d, const Index3& i, int e, int dir, double t) const {
    Index3 j = i;
    j[e] += dir;
    if (e != d) {
      if (j[e] < 0) return 2.0 * wall(d, e, 0, i, t) - v[d][flat(fs[d], i)];
      if (j[e] >= fs[d][e]) return 2.0 * wall(d, e, 1, i, t) - v[d][flat(fs[d], i)];
    }
    return v[d][flat(fs[d], j)];
  }

  bool interior(int d, const Index3& i) const { return i[d] > 0 && i[d] < n[d]; }

  double lap(const Comps& v, int d, const Index3& i, double t) const {
    const double c = v[d][flat(fs[d], i)];
    double s = 0.0;
    for (int e = 0; e < dims; ++e) {
      s += (neighbor(v, d, i, e, 1, t) - 2.0 * c + neighbor(v, d, i, e, -1, t)) / (h[e] * h[e]);
    }
    return s;
  }

  double adv(const Comps& v, int d, const Index3& i, double t) const {
    double s = 0.0;
    for (int e = 0; e < dims; ++e) {
      double ve;
      if (e == d) {
        ve = v[d][flat(fs[d], i)];
      } else {
        ve = 0.0;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            Index3 j = i;
            j[d] = i[d] - 1 + a;
            j[e] = i[e] + b;
            ve += v[e][flat(fs[e], j)];
          }
        }
        ve *= 0.25;
      }
      const double grad =
          (neighbor(v, d, i, e, 1, t) - neighbor(v, d, i, e, -1, t)) / (2.0 * h[e]);
      s += ve * grad;
    }
    return s;
  }

  // Explicit tendency on interior faces; zero on wall faces.
  Comps tendency(const Comps& v, double t, bool diffusion) const {
    Comps k(dims);
    for (int d = 0; d < dims; ++d) {
      k[d].assign(v[d].size(), 0.0);
      for_each_index(fs[d], [&](const Index3& i) {
        if (!interior(d, i)) return;
        double r = 0.0;
        if (diffusion) r += cfg.viscosity * lap(v, d, i, t);
        if (advect) r -= adv(v, d, i, t);
        if (forcing.active()) r += forcing.evaluate(face_point(d, i), t)[d];
        k[d][flat(fs[d], i)] = r;
      });
    }
    return k;
  }

  void set_walls(Comps& v, double t) const {
    for (int d = 0; d < dims; ++d) {
      for_each_index(fs[d], [&](const Index3& i) {
        if (interior(d, i)) return;
        v[d][flat(fs[d], i)] = bc.profile ? bc.profile(face_point(d, i), t)[d] : 0.0;
      });
    }
  }

  // Imposes walls at t and projects in place; returns the potential phi with
  // v <- v - grad(phi).
  std::vector<double> project(Comps& v, double t) const {
    set_walls(v, t);
    double flux = 0.0;
    double scale = 0.0;
    for (int d = 0; d < dims; ++d) {
      double area = 1.0;
      for (int e = 0; e < dims; ++e) {
        if (e != d) area *= h[e];
      }
      for_each_index(fs[d], [&](const Index3& i) {
        if (interior(d, i)) return;
        const double vn = v[d][flat(fs[d], i)] * area;
        flux += i[d] == 0 ? -vn : vn;
        scale += std::abs(vn);
      });
    }
    if (std::abs(flux) > 1e-10 * (1.0 + scale)) {
      std::ostringstream os;
      os << "pressure Poisson problem is not solvable at t = " << t
         << ": net boundary flux of the datum is " << flux;
      throw SolvabilityError(os.str());
    }
    std::vector<double> r(volume(cs), 0.0);
    for_each_index(cs, [&](const Index3& c) {
      double s = 0.0;
      for (int d = 0; d < dims; ++d) {
        Index3 up = c;
        up[d] += 1;
        s += (v[d][flat(fs[d], up)] - v[d][flat(fs[d], c)]) / h[d];
      }
      r[flat(cs, c)] = s;
    });
    double mean = 0.0;
    for (double x : r) mean += x;
    mean /= static_cast<double>(r.size());
    for (double& x : r) x -= mean;
    std::vector<const Basis*> bases;
    for (const auto& b : neumann) bases.push_back(&b);
    separable_solve(r, cs, dims, bases, 0.0, 1.0);
    for (int d = 0; d < dims; ++d) {
      for_each_index(fs[d], [&](const Index3& i) {
        if (!interior(d, i)) return;
        Index3 lo = i;
        lo[d] -= 1;
        v[d][flat(fs[d], i)] -= (r[flat(cs, i)] - r[flat(cs, lo)]) / h[d];
      });
    }
    return r;
  }

  static Comps axpy(const Comps& a, double c, const Comps& k) {
    Comps out = a;
    for (std::size_t d = 0; d < out.size(); ++d) {
      for (std::size_t m = 0; m < out[d].size(); ++m) out[d][m] += c * k[d][m];
    }
    return out;
  }

  double speed(const Comps& v) const {
    double worst = 0.0;
    for_each_index(cs, [&](const Index3& c) {
      double s = 0.0;
      for (int d = 0; d < dims; ++d) {
        Index3 up = c;
        up[d] += 1;
        const double m = 0.5 * (v[d][flat(fs[d], c)] + v[d][flat(fs[d], up)]);
        s += m * m;
      }
      worst = std::max(worst, s);
    });
    return std::sqrt(worst);
  }

  Comps imex_step(double t) const {
    const double dt = cfg.dt;
    const double a = 0.5 * cfg.viscosity * dt;
    Comps walls_next(dims);
    for (int d = 0; d < dims; ++d) walls_next[d].assign(u[d].size(), 0.0);
    set_walls(walls_next, t + dt);
    const Comps expl = tendency(u, t, false);
    Comps next = walls_next;
    for (int d = 0; d < dims; ++d) {
      Index3 s = fs[d];
      s[d] = n[d] - 1;
      std::vector<double> rhs(volume(s));
      for_each_index(fs[d], [&](const Index3& i) {
        if (!interior(d, i)) return;
        Index3 j = i;
        j[d] -= 1;
        rhs[flat(s, j)] = u[d][flat(fs[d], i)] + a * lap(u, d, i, t) +
                          a * lap(walls_next, d, i, t + dt) + dt * expl[d][flat(fs[d], i)];
      });
      std::vector<const Basis*> bases;
      for (const auto& b : helmholtz[d]) bases.push_back(&b);
      separable_solve(rhs, s, dims, bases, 1.0, -a);
      for_each_index(s, [&](const Index3& j) {
        Index3 i = j;
        i[d] += 1;
        next[d][flat(fs[d], i)] = rhs[flat(s, j)];
      });
    }
    return next;
  }

  void step(double t) {
    const double dt = cfg.dt;
    if (advect) {
      const double sp = speed(u);
      const double limit = cfg.cfl_guard * grid.min_spacing() / std::max(sp, 1e-12);
      if (dt > limit) {
        std::ostringstream os;
        os << "dt = " << dt << " exceeds the advective limit " << limit << " at t = " << t
           << " (max speed " << sp << ")";
        throw CflError(os.str(), t);
      }
    }
    Comps next;
    switch (cfg.integrator) {
      case Integrator::explicit_euler:
        next = axpy(u, dt, tendency(u, t, true));
        break;
      case Integrator::rk4: {
        const Comps k1 = tendency(u, t, true);
        Comps s = axpy(u, 0.5 * dt, k1);
        project(s, t + 0.5 * dt);
        const Comps k2 = tendency(s, t + 0.5 * dt, true);
        s = axpy(u, 0.5 * dt, k2);
        project(s, t + 0.5 * dt);
        const Comps k3 = tendency(s, t + 0.5 * dt, true);
        s = axpy(u, dt, k3);
        project(s, t + dt);
        const Comps k4 = tendency(s, t + dt, true);
        next = u;
        for (int d = 0; d < dims; ++d) {
          for (std::size_t m = 0; m < next[d].size(); ++m) {
            next[d][m] += dt / 6.0 * (k1[d][m] + 2.0 * k2[d][m] + 2.0 * k3[d][m] + k4[d][m]);
          }
        }
        break;
      }
      case Integrator::imex_cn:
        next = imex_step(t);
        break;
    }
    std::vector<double> phi = project(next, t + dt);
    for (const auto& c : next) {
      for (double x : c) {
        if (!std::isfinite(x)) {
          std::ostringstream os;
          os << "non-finite velocity reached at t = " << t + dt;
          throw BlowUpError(os.str(), t + dt);
        }
      }
    }
    for (double& x : phi) x /= dt;
    u = std::move(next);
    p = std::move(phi);
  }

  Comps unpack(const VectorField& v) const {
    if (!v.staggered() || !(v.grid() == grid)) {
      throw GridError("MAC stepper expects a staggered field on " + grid.describe());
    }
    Comps c(dims);
    for (int d = 0; d < dims; ++d) c[d].assign(v[d].values().begin(), v[d].values().end());
    return c;
  }

  VectorField pack(Comps c) const {
    std::vector<ScalarField> comps;
    for (int d = 0; d < dims; ++d) comps.emplace_back(grid, face_centering(d), std::move(c[d]));
    return VectorField(Layout::staggered_mac, std::move(comps));
  }
};

MacStepper::MacStepper(const GridSpec& grid, ForcingSpec forcing, BoundaryDatum bc,
                       SolverConfig cfg, bool advect)
    : impl_(std::make_unique<Impl>(grid, std::move(forcing), std::move(bc), cfg, advect)) {}

MacStepper::~MacStepper() = default;
MacStepper::MacStepper(MacStepper&&) noexcept = default;
MacStepper& MacStepper::operator=(MacStepper&&) noexcept = default;

void MacStepper::load(const VectorField& v) { impl_->u = impl_->unpack(v); }

void MacStepper::step(double t) {
  if (impl_->u.empty()) throw std::logic_error("MAC stepper has no state");
  impl_->step(t);
}

VectorField MacStepper::velocity() const { return impl_->pack(impl_->u); }

ScalarField MacStepper::pressure() const {
  return ScalarField(impl_->grid, kCells, impl_->p);
}

double MacStepper::max_speed() const { return impl_->speed(impl_->u); }

VectorField MacStepper::project(const VectorField& v, double t) const {
  Comps c = impl_->unpack(v);
  impl_->project(c, t);
  return impl_->pack(std::move(c));
}

namespace {

MacStep single_mac_step(const VectorField& state, double t, const ForcingSpec& f,
                        const BoundaryDatum& bc, const SolverConfig& cfg, bool advect) {
  MacStepper s(state.grid(), f, bc, cfg, advect);
  s.load(state);
  s.step(t);
  return {s.velocity(), s.pressure()};
}

}  // namespace

MacStep step_nse_mac(const VectorField& state, double t, const ForcingSpec& f,
                     const BoundaryDatum& bc, const SolverConfig& cfg) {
  return single_mac_step(state, t, f, bc, cfg, true);
}

MacStep step_reduced_mac(const VectorField& state, double t, const ForcingSpec& f,
                         const BoundaryDatum& bc, const SolverConfig& cfg) {
  return single_mac_step(state, t, f, bc, cfg, false);
}

VectorField mac_initial_field(const GridSpec& grid, const std::function<Vec3(const Point&)>& fn,
                              const BoundaryDatum& bc, double t) {
  SolverConfig cfg;
  cfg.integrator = Integrator::explicit_euler;
  const MacStepper s(grid, ForcingSpec::none(), bc, cfg, false);
  return s.project(VectorField::sample(grid, fn, Layout::staggered_mac), t);
}

}  // namespace nsv
