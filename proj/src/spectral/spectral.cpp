#include "nsv/spectral/spectral.hpp"

#include <cmath>
#include <sstream>

#include "nsv/fields/errors.hpp"
#include "nsv/fields/operators.hpp"

namespace nsv {

namespace {

void require_periodic(const GridSpec& g, const char* what) {
  if (!g.periodic()) throw InconsistentFieldError(std::string(what) + " requires a periodic torus");
}

std::vector<fft::Complex> to_complex(const ScalarField& s) {
  return {s.values().begin(), s.values().end()};
}

}  // namespace

SpectralField::SpectralField(GridSpec grid, std::vector<fft::Complex> modes)
    : grid_(grid), shape_{grid.cells(0), grid.cells(1), grid.dims() == 3 ? grid.cells(2) : 1},
      modes_(std::move(modes)) {
  require_periodic(grid_, "SpectralField");
  if (modes_.size() != static_cast<std::size_t>(shape_[0]) * shape_[1] * shape_[2]) {
    throw InconsistentFieldError("spectral field mode count does not match the grid");
  }
}

std::size_t SpectralField::conjugate_index(std::size_t flat) const {
  const std::size_t k = flat % shape_[2];
  const std::size_t j = (flat / shape_[2]) % shape_[1];
  const std::size_t i = flat / (static_cast<std::size_t>(shape_[2]) * shape_[1]);
  const std::size_t ci = (shape_[0] - i) % shape_[0];
  const std::size_t cj = (shape_[1] - j) % shape_[1];
  const std::size_t ck = (shape_[2] - k) % shape_[2];
  return (ci * shape_[1] + cj) * shape_[2] + ck;
}

Index3 SpectralField::wavenumbers(std::size_t flat) const {
  const int k = static_cast<int>(flat % shape_[2]);
  const int j = static_cast<int>((flat / shape_[2]) % shape_[1]);
  const int i = static_cast<int>(flat / (static_cast<std::size_t>(shape_[2]) * shape_[1]));
  return {fft::signed_mode(i, shape_[0]), fft::signed_mode(j, shape_[1]),
          grid_.dims() == 3 ? fft::signed_mode(k, shape_[2]) : 0};
}

SpectralField forward_transform(const ScalarField& s) {
  require_periodic(s.grid(), "forward_transform");
  auto data = to_complex(s);
  fft::transform(data, s.shape(), s.grid().dims(), false);
  SpectralField tmp(s.grid(), data);
  for (std::size_t n = 0; n < data.size(); ++n) {
    const std::size_t c = tmp.conjugate_index(n);
    if (c < n) continue;
    const fft::Complex sym = 0.5 * (data[n] + std::conj(data[c]));
    data[n] = sym;
    data[c] = std::conj(sym);
  }
  return SpectralField(s.grid(), std::move(data));
}

ScalarField inverse_transform(const SpectralField& s) {
  auto data = s.modes();
  fft::transform(data, s.shape(), s.grid().dims(), true);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
  return ScalarField(s.grid(), kNodes, std::move(out));
}

bool dealias_keeps(const Index3& k, const GridSpec& grid) {
  for (int d = 0; d < grid.dims(); ++d) {
    if (3 * std::abs(k[d]) > grid.cells(d)) return false;
  }
  return true;
}

void apply_dealias(std::vector<fft::Complex>& modes, const GridSpec& grid, DealiasPolicy policy) {
  if (policy == DealiasPolicy::none) return;
  SpectralField probe(grid, std::vector<fft::Complex>(modes.size()));
  for (std::size_t n = 0; n < modes.size(); ++n) {
    if (!dealias_keeps(probe.wavenumbers(n), grid)) modes[n] = 0.0;
  }
}

namespace spectral {

Wavenumbers::Wavenumbers(const GridSpec& grid) {
  SpectralField probe(grid, std::vector<fft::Complex>(
                                static_cast<std::size_t>(grid.cells(0)) * grid.cells(1) *
                                (grid.dims() == 3 ? grid.cells(2) : 1)));
  const std::size_t count = probe.size();
  k.resize(count);
  k2.resize(count);
  keep.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    const Index3 m = probe.wavenumbers(n);
    Vec3 kv{0.0, 0.0, 0.0};
    double sq = 0.0;
    for (int d = 0; d < grid.dims(); ++d) {
      const int cells = grid.cells(d);
      kv[d] = (m[d] == -cells / 2) ? 0.0 : 2.0 * kPi * m[d] / grid.length(d);
      sq += kv[d] * kv[d];
    }
    k[n] = kv;
    k2[n] = sq;
    keep[n] = dealias_keeps(m, grid) ? 1 : 0;
  }
}

void project(std::vector<std::vector<fft::Complex>>& comps, const Wavenumbers& wn, int dims) {
  const std::size_t count = wn.k2.size();
  for (std::size_t n = 0; n < count; ++n) {
    if (wn.k2[n] == 0.0) continue;
    fft::Complex kv(0.0, 0.0);
    for (int d = 0; d < dims; ++d) kv += wn.k[n][d] * comps[d][n];
    const fft::Complex s = kv / wn.k2[n];
    for (int d = 0; d < dims; ++d) comps[d][n] -= wn.k[n][d] * s;
  }
}

}  // namespace spectral

ScalarField solve_poisson_periodic(const ScalarField& rhs) {
  require_periodic(rhs.grid(), "solve_poisson_periodic");
  const double mean = volume_integral(rhs) / rhs.grid().measure();
  if (std::abs(mean) > 1e-10) {
    std::ostringstream os;
    os << "periodic Poisson problem is not solvable: right-hand side mean is " << mean;
    throw SolvabilityError(os.str());
  }
  const spectral::Wavenumbers wn(rhs.grid());
  auto data = to_complex(rhs);
  fft::transform(data, rhs.shape(), rhs.grid().dims(), false);
  for (std::size_t n = 0; n < data.size(); ++n) {
    data[n] = wn.k2[n] == 0.0 ? fft::Complex(0.0) : -data[n] / wn.k2[n];
  }
  fft::transform(data, rhs.shape(), rhs.grid().dims(), true);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
  return ScalarField(rhs.grid(), kNodes, std::move(out));
}

VectorField leray_project(const VectorField& v) {
  require_periodic(v.grid(), "leray_project");
  const GridSpec& g = v.grid();
  const spectral::Wavenumbers wn(g);
  std::vector<std::vector<fft::Complex>> comps;
  for (int d = 0; d < v.dims(); ++d) {
    comps.push_back(to_complex(v[d]));
    fft::transform(comps.back(), v[d].shape(), g.dims(), false);
  }
  spectral::project(comps, wn, g.dims());
  std::vector<ScalarField> out;
  for (int d = 0; d < v.dims(); ++d) {
    fft::transform(comps[d], v[d].shape(), g.dims(), true);
    std::vector<double> vals(comps[d].size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = comps[d][i].real();
    out.emplace_back(g, kNodes, std::move(vals));
  }
  return VectorField(Layout::collocated, std::move(out));
}

ScalarField dealias_product(const ScalarField& a, const ScalarField& b, DealiasPolicy policy) {
  ScalarField p = a * b;
  if (policy == DealiasPolicy::none) return p;
  require_periodic(p.grid(), "dealias_product");
  auto data = to_complex(p);
  fft::transform(data, p.shape(), p.grid().dims(), false);
  apply_dealias(data, p.grid(), policy);
  fft::transform(data, p.shape(), p.grid().dims(), true);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
  return ScalarField(p.grid(), kNodes, std::move(out));
}

double spectral_energy(const VectorField& v) {
  require_periodic(v.grid(), "spectral_energy");
  const GridSpec& g = v.grid();
  const double count = static_cast<double>(v[0].size());
  double sum = 0.0;
  for (const auto& c : v.components()) {
    const SpectralField f = forward_transform(c);
    for (const auto& m : f.modes()) sum += std::norm(m);
  }
  // sum_x |u|^2 = (1/M) sum_k |U_k|^2, integral = cell volume * sum_x
  return sum / count * (g.measure() / count);
}

}  // namespace nsv
