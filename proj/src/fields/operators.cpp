#include "nsv/fields/operators.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "nsv/fields/errors.hpp"
#include "nsv/spectral/fft.hpp"

namespace nsv {

namespace {

std::size_t axis_stride(const Index3& shape, int axis) {
  std::size_t s = 1;
  for (int d = axis + 1; d < 3; ++d) s *= shape[d];
  return s;
}

// Calls fn(base, stride, n) for every grid line along `axis`.
template <class Fn>
void for_each_line(const Index3& shape, int axis, Fn fn) {
  const std::size_t stride = axis_stride(shape, axis);
  const int n = shape[axis];
  const std::size_t total = static_cast<std::size_t>(shape[0]) * shape[1] * shape[2];
  const std::size_t outer = total / (stride * n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) fn(o * stride * n + s, stride, n);
  }
}

void check_axis(const ScalarField& s, int axis) {
  if (axis < 0 || axis >= s.grid().dims()) {
    throw GridError("axis " + std::to_string(axis) + " outside the grid");
  }
  if (!s.grid().periodic() && s.shape()[axis] < 4) {
    throw GridError("degenerate grid: axis " + std::to_string(axis) +
                    " needs at least two interior samples");
  }
}

// Effective Fourier wavenumber; Nyquist treated as zero.
double wavenumber(int index, int n, double length) {
  if (index == n / 2) return 0.0;
  return 2.0 * kPi * fft::signed_mode(index, n) / length;
}

ScalarField spectral_axis_op(const ScalarField& s, int axis, int order) {
  const auto& shape = s.shape();
  std::vector<fft::Complex> data(s.values().begin(), s.values().end());
  fft::transform_axis(data, shape, axis, false);
  const int n = shape[axis];
  const double len = s.grid().length(axis);
  std::vector<fft::Complex> factor(n);
  for (int i = 0; i < n; ++i) {
    const double k = wavenumber(i, n, len);
    factor[i] = order == 1 ? fft::Complex(0.0, k) : fft::Complex(-k * k, 0.0);
  }
  for_each_line(shape, axis, [&](std::size_t base, std::size_t stride, int len_) {
    for (int i = 0; i < len_; ++i) data[base + i * stride] *= factor[i];
  });
  fft::transform_axis(data, shape, axis, true);
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[i].real();
  return ScalarField(s.grid(), s.centering(), std::move(out));
}

ScalarField fd_first(const ScalarField& s, int axis) {
  const double inv2h = 1.0 / (2.0 * s.grid().spacing(axis));
  const auto v = s.values();
  std::vector<double> out(s.size());
  for_each_line(s.shape(), axis, [&](std::size_t b, std::size_t st, int n) {
    auto f = [&](int i) { return v[b + i * st]; };
    out[b] = (-3.0 * f(0) + 4.0 * f(1) - f(2)) * inv2h;
    for (int i = 1; i < n - 1; ++i) out[b + i * st] = (f(i + 1) - f(i - 1)) * inv2h;
    out[b + (n - 1) * st] = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) * inv2h;
  });
  return ScalarField(s.grid(), s.centering(), std::move(out));
}

ScalarField fd_second(const ScalarField& s, int axis) {
  const double h = s.grid().spacing(axis);
  const double inv = 1.0 / (h * h);
  const auto v = s.values();
  std::vector<double> out(s.size());
  for_each_line(s.shape(), axis, [&](std::size_t b, std::size_t st, int n) {
    auto f = [&](int i) { return v[b + i * st]; };
    out[b] = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) * inv;
    for (int i = 1; i < n - 1; ++i) out[b + i * st] = (f(i + 1) - 2.0 * f(i) + f(i - 1)) * inv;
    out[b + (n - 1) * st] = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) * inv;
  });
  return ScalarField(s.grid(), s.centering(), std::move(out));
}

// d v_axis / d x_axis of a staggered component, evaluated at cell centres.
ScalarField face_difference(const ScalarField& comp, int axis) {
  const GridSpec& g = comp.grid();
  const double inv_h = 1.0 / g.spacing(axis);
  ScalarField probe(g, kCells);
  std::vector<double> out(probe.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const Index3 ijk = probe.unflatten(n);
    Index3 up = ijk;
    up[axis] += 1;
    out[n] = (comp.at(up[0], up[1], up[2]) - comp.at(ijk[0], ijk[1], ijk[2])) * inv_h;
  }
  return ScalarField(g, kCells, std::move(out));
}

// Quadrature weight of sample `i` along one axis.
double axis_weight(const GridSpec& g, int axis, Centering c, int i, int n) {
  if (axis >= g.dims()) return 1.0;
  const double h = g.spacing(axis);
  if (g.periodic() || c == Centering::cell) return h;
  return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

}  // namespace

ScalarField derivative(const ScalarField& s, int axis) {
  check_axis(s, axis);
  return s.grid().periodic() ? spectral_axis_op(s, axis, 1) : fd_first(s, axis);
}

ScalarField second_derivative(const ScalarField& s, int axis) {
  check_axis(s, axis);
  return s.grid().periodic() ? spectral_axis_op(s, axis, 2) : fd_second(s, axis);
}

VectorField gradient(const ScalarField& s) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < s.grid().dims(); ++d) comps.push_back(derivative(s, d));
  return VectorField(Layout::collocated, std::move(comps));
}

ScalarField divergence(const VectorField& v) {
  if (v.staggered()) {
    ScalarField acc = face_difference(v[0], 0);
    for (int d = 1; d < v.dims(); ++d) acc = acc + face_difference(v[d], d);
    return acc;
  }
  ScalarField acc = derivative(v[0], 0);
  for (int d = 1; d < v.dims(); ++d) acc = acc + derivative(v[d], d);
  return acc;
}

ScalarField laplacian(const ScalarField& s) {
  ScalarField acc = second_derivative(s, 0);
  for (int d = 1; d < s.grid().dims(); ++d) acc = acc + second_derivative(s, d);
  return acc;
}

VectorField laplacian(const VectorField& v) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < v.dims(); ++d) comps.push_back(laplacian(v[d]));
  return VectorField(v.layout(), std::move(comps));
}

Vorticity curl(const VectorField& field) {
  const VectorField v = collocated(field);
  if (v.dims() == 2) return derivative(v[1], 0) - derivative(v[0], 1);
  std::vector<ScalarField> w;
  w.push_back(derivative(v[2], 1) - derivative(v[1], 2));
  w.push_back(derivative(v[0], 2) - derivative(v[2], 0));
  w.push_back(derivative(v[1], 0) - derivative(v[0], 1));
  return VectorField(Layout::collocated, std::move(w));
}

double enstrophy(const Vorticity& w) {
  if (const auto* s = std::get_if<ScalarField>(&w)) return volume_integral((*s) * (*s));
  return energy(std::get<VectorField>(w));
}

double max_abs(const Vorticity& w) {
  if (const auto* s = std::get_if<ScalarField>(&w)) return max_abs(*s);
  return max_abs(std::get<VectorField>(w));
}

TensorField velocity_gradient(const VectorField& v) {
  const int n = v.dims();
  std::vector<ScalarField> entries;
  entries.reserve(n * n);
  if (!v.staggered()) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) entries.push_back(derivative(v[i], j));
    }
    return TensorField(n, std::move(entries));
  }
  const VectorField c = to_cell_centers(v);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      entries.push_back(i == j ? face_difference(v[i], i) : derivative(c[i], j));
    }
  }
  return TensorField(n, std::move(entries));
}

VectorField convective_term(const VectorField& v) {
  return velocity_gradient(v).apply(collocated(v));
}

double volume_integral(const ScalarField& s) {
  const GridSpec& g = s.grid();
  const auto& shape = s.shape();
  std::vector<std::vector<double>> w(3);
  for (int d = 0; d < 3; ++d) {
    w[d].resize(shape[d]);
    for (int i = 0; i < shape[d]; ++i) w[d][i] = axis_weight(g, d, s.centering()[d], i, shape[d]);
  }
  double total = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < shape[0]; ++i) {
    double plane = 0.0;
    for (int j = 0; j < shape[1]; ++j) {
      double row = 0.0;
      for (int k = 0; k < shape[2]; ++k) row += w[2][k] * s[n++];
      plane += w[1][j] * row;
    }
    total += w[0][i] * plane;
  }
  return total;
}

double energy(const VectorField& v) {
  double e = 0.0;
  for (const auto& c : v.components()) e += volume_integral(c * c);
  return e;
}

namespace {

// Integral over the wall x_axis = 0 (side 0) or x_axis = L (side 1) of
// weight * carrier[axis], signed by the outward normal.
double wall_integral(const ScalarField* weight, const ScalarField& comp, int axis, int side) {
  const GridSpec& g = comp.grid();
  if (comp.centering()[axis] != Centering::node) {
    throw InconsistentFieldError("carrier component " + std::to_string(axis) +
                                 " has no samples on the boundary");
  }
  const auto& shape = comp.shape();
  const int wall = side == 0 ? 0 : shape[axis] - 1;
  double sum = 0.0;
  for (std::size_t n = 0; n < comp.size(); ++n) {
    const Index3 ijk = comp.unflatten(n);
    if (ijk[axis] != wall) continue;
    double wt = 1.0;
    for (int d = 0; d < g.dims(); ++d) {
      if (d != axis) wt *= axis_weight(g, d, comp.centering()[d], ijk[d], shape[d]);
    }
    double weight_value = 1.0;
    if (weight != nullptr) {
      if (weight->centering()[axis] == Centering::node) {
        weight_value = weight->at(ijk[0], ijk[1], ijk[2]);
      } else {
        const int m = weight->shape()[axis];
        Index3 a = ijk, b = ijk;
        a[axis] = side == 0 ? 0 : m - 1;
        b[axis] = side == 0 ? 1 : m - 2;
        weight_value = 1.5 * weight->at(a[0], a[1], a[2]) - 0.5 * weight->at(b[0], b[1], b[2]);
      }
    }
    sum += wt * weight_value * comp[n];
  }
  return side == 0 ? -sum : sum;
}

}  // namespace

SurfaceIntegral boundary_flux(const VectorField& v) {
  if (v.grid().periodic()) return {0.0, true};
  double total = 0.0;
  for (int d = 0; d < v.dims(); ++d) {
    total += wall_integral(nullptr, v[d], d, 0) + wall_integral(nullptr, v[d], d, 1);
  }
  return {total, false};
}

SurfaceIntegral boundary_weighted_flux(const ScalarField& weight, const VectorField& carrier) {
  if (!(weight.grid() == carrier.grid())) {
    throw InconsistentFieldError("weight and carrier live on different grids");
  }
  if (carrier.grid().periodic()) return {0.0, true};
  double total = 0.0;
  for (int d = 0; d < carrier.dims(); ++d) {
    for (int e = 0; e < carrier.dims(); ++e) {
      if (e != d && weight.centering()[e] != carrier[d].centering()[e]) {
        throw InconsistentFieldError("weight is not sampled on the carrier's wall points");
      }
    }
    total += wall_integral(&weight, carrier[d], d, 0) + wall_integral(&weight, carrier[d], d, 1);
  }
  return {total, false};
}

double eigen_collinearity_defect(const VectorField& field, double floor) {
  const VectorField v = collocated(field);
  const VectorField a = velocity_gradient(field).apply(v);
  double worst = 0.0;
  const std::size_t count = v[0].size();
  for (std::size_t n = 0; n < count; ++n) {
    double vv = 0.0, av = 0.0, aa = 0.0;
    for (int d = 0; d < v.dims(); ++d) {
      vv += v[d][n] * v[d][n];
      av += a[d][n] * v[d][n];
      aa += a[d][n] * a[d][n];
    }
    if (vv < floor * floor || aa < floor * floor) continue;
    const double perp2 = std::max(0.0, aa - av * av / vv);
    worst = std::max(worst, std::sqrt(perp2 / aa));
  }
  return worst;
}

}  // namespace nsv
