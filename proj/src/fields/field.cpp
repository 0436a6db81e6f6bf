#include "nsv/fields/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nsv/fields/errors.hpp"

namespace nsv {

namespace {

Index3 shape_of(const GridSpec& g, const Staggering& c) {
  return {g.samples(0, c[0]), g.samples(1, c[1]), g.samples(2, c[2])};
}

std::size_t count_of(const Index3& s) {
  return static_cast<std::size_t>(s[0]) * s[1] * s[2];
}

void require_same(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!a.same_layout(b)) {
    throw InconsistentFieldError(std::string(what) + ": operands live on different sample sets");
  }
}

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op, const char* what) {
  require_same(a, b, what);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return ScalarField(a.grid(), a.centering(), std::move(out));
}

}  // namespace

Staggering face_centering(int axis) {
  Staggering s = kCells;
  s[axis] = Centering::node;
  return s;
}

ScalarField::ScalarField(GridSpec grid, Staggering centering)
    : grid_(grid), centering_(centering), shape_(shape_of(grid, centering)),
      values_(count_of(shape_), 0.0) {}

ScalarField::ScalarField(GridSpec grid, Staggering centering, std::vector<double> values)
    : grid_(grid), centering_(centering), shape_(shape_of(grid, centering)),
      values_(std::move(values)) {
  if (values_.size() != count_of(shape_)) {
    throw InconsistentFieldError("scalar field expects " + std::to_string(count_of(shape_)) +
                                 " samples, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NonFiniteError("scalar field contains a non-finite sample");
  }
}

ScalarField ScalarField::constant(GridSpec grid, double value, Staggering centering) {
  std::vector<double> v(count_of(shape_of(grid, centering)), value);
  return ScalarField(grid, centering, std::move(v));
}

ScalarField ScalarField::sample(GridSpec grid, const std::function<double(const Point&)>& fn,
                                Staggering centering) {
  ScalarField probe(grid, centering);
  std::vector<double> v(probe.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(probe.position(i));
  return ScalarField(grid, centering, std::move(v));
}

Index3 ScalarField::unflatten(std::size_t flat) const {
  const int k = static_cast<int>(flat % shape_[2]);
  flat /= shape_[2];
  const int j = static_cast<int>(flat % shape_[1]);
  const int i = static_cast<int>(flat / shape_[1]);
  return {i, j, k};
}

Point ScalarField::position(std::size_t flat) const {
  const Index3 ijk = unflatten(flat);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < grid_.dims(); ++d) p[d] = grid_.coordinate(d, centering_[d], ijk[d]);
  return p;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x + y; }, "add");
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x - y; }, "subtract");
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  return zip(a, b, [](double x, double y) { return x * y; }, "multiply");
}

ScalarField operator*(double c, const ScalarField& a) {
  std::vector<double> out(a.values().begin(), a.values().end());
  for (double& v : out) v *= c;
  return ScalarField(a.grid(), a.centering(), std::move(out));
}

double max_abs(const ScalarField& s) {
  double m = 0.0;
  for (double v : s.values()) m = std::max(m, std::abs(v));
  return m;
}

VectorField::VectorField(Layout layout, std::vector<ScalarField> components)
    : layout_(layout), components_(std::move(components)) {
  if (components_.empty()) throw InconsistentFieldError("vector field needs components");
  const GridSpec& g = components_.front().grid();
  if (static_cast<int>(components_.size()) != g.dims()) {
    throw InconsistentFieldError("vector field on a " + std::to_string(g.dims()) +
                                 "D grid needs that many components, got " +
                                 std::to_string(components_.size()));
  }
  for (int d = 0; d < g.dims(); ++d) {
    const ScalarField& c = components_[d];
    if (!(c.grid() == g)) throw InconsistentFieldError("vector components on different grids");
    if (layout_ == Layout::collocated) {
      if (c.centering() != components_.front().centering()) {
        throw InconsistentFieldError("collocated components must share one centering");
      }
    } else {
      if (g.periodic()) throw InconsistentFieldError("staggered layout requires a bounded box");
      if (c.centering() != face_centering(d)) {
        throw InconsistentFieldError("staggered component " + std::to_string(d) +
                                     " must sit on faces normal to its axis");
      }
    }
  }
}

VectorField VectorField::zeros(GridSpec grid, Layout layout, Staggering centering) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < grid.dims(); ++d) {
    comps.emplace_back(grid, layout == Layout::staggered_mac ? face_centering(d) : centering);
  }
  return VectorField(layout, std::move(comps));
}

VectorField VectorField::sample(GridSpec grid, const std::function<Vec3(const Point&)>& fn,
                                Layout layout) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < grid.dims(); ++d) {
    const Staggering c = layout == Layout::staggered_mac ? face_centering(d) : kNodes;
    comps.push_back(ScalarField::sample(grid, [&](const Point& p) { return fn(p)[d]; }, c));
  }
  return VectorField(layout, std::move(comps));
}

bool VectorField::same_layout(const VectorField& other) const {
  if (layout_ != other.layout_ || dims() != other.dims()) return false;
  for (int d = 0; d < dims(); ++d) {
    if (!components_[d].same_layout(other.components_[d])) return false;
  }
  return true;
}

namespace {

template <class Op>
VectorField zip_vec(const VectorField& a, const VectorField& b, Op op) {
  if (!a.same_layout(b)) throw InconsistentFieldError("vector operands differ in layout");
  std::vector<ScalarField> out;
  for (int d = 0; d < a.dims(); ++d) out.push_back(op(a[d], b[d]));
  return VectorField(a.layout(), std::move(out));
}

}  // namespace

VectorField operator+(const VectorField& a, const VectorField& b) {
  return zip_vec(a, b, [](const ScalarField& x, const ScalarField& y) { return x + y; });
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  return zip_vec(a, b, [](const ScalarField& x, const ScalarField& y) { return x - y; });
}

VectorField operator*(double c, const VectorField& a) {
  std::vector<ScalarField> out;
  for (int d = 0; d < a.dims(); ++d) out.push_back(c * a[d]);
  return VectorField(a.layout(), std::move(out));
}

double max_abs(const VectorField& v) {
  double m = 0.0;
  for (const auto& c : v.components()) m = std::max(m, max_abs(c));
  return m;
}

ScalarField dot(const VectorField& a, const VectorField& b) {
  if (a.staggered() || b.staggered()) {
    throw InconsistentFieldError("pointwise dot product needs collocated fields");
  }
  ScalarField acc = a[0] * b[0];
  for (int d = 1; d < a.dims(); ++d) acc = acc + a[d] * b[d];
  return acc;
}

ScalarField norm_squared(const VectorField& v) { return dot(v, v); }

VectorField to_cell_centers(const VectorField& v) {
  if (!v.staggered()) throw InconsistentFieldError("to_cell_centers expects a staggered field");
  const GridSpec& g = v.grid();
  std::vector<ScalarField> out;
  for (int d = 0; d < g.dims(); ++d) {
    const ScalarField& f = v[d];
    ScalarField probe(g, kCells);
    std::vector<double> vals(probe.size());
    for (std::size_t n = 0; n < vals.size(); ++n) {
      Index3 ijk = probe.unflatten(n);
      Index3 up = ijk;
      up[d] += 1;
      vals[n] = 0.5 * (f.at(ijk[0], ijk[1], ijk[2]) + f.at(up[0], up[1], up[2]));
    }
    out.emplace_back(g, kCells, std::move(vals));
  }
  return VectorField(Layout::collocated, std::move(out));
}

VectorField collocated(const VectorField& v) { return v.staggered() ? to_cell_centers(v) : v; }

TensorField::TensorField(int dims, std::vector<ScalarField> entries)
    : dims_(dims), entries_(std::move(entries)) {
  if (static_cast<int>(entries_.size()) != dims * dims) {
    throw InconsistentFieldError("tensor field needs N*N entries");
  }
  for (const auto& e : entries_) {
    if (!e.same_layout(entries_.front())) {
      throw InconsistentFieldError("tensor entries on different sample sets");
    }
  }
}

ScalarField TensorField::trace() const {
  ScalarField acc = entry(0, 0);
  for (int d = 1; d < dims_; ++d) acc = acc + entry(d, d);
  return acc;
}

VectorField TensorField::apply(const VectorField& a) const {
  std::vector<ScalarField> out;
  for (int i = 0; i < dims_; ++i) {
    ScalarField acc = entry(i, 0) * a[0];
    for (int j = 1; j < dims_; ++j) acc = acc + entry(i, j) * a[j];
    out.push_back(std::move(acc));
  }
  return VectorField(Layout::collocated, std::move(out));
}

VectorField TensorField::apply_transpose(const VectorField& a) const {
  std::vector<ScalarField> out;
  for (int i = 0; i < dims_; ++i) {
    ScalarField acc = entry(0, i) * a[0];
    for (int j = 1; j < dims_; ++j) acc = acc + entry(j, i) * a[j];
    out.push_back(std::move(acc));
  }
  return VectorField(Layout::collocated, std::move(out));
}

ScalarField TensorField::frobenius_squared() const {
  ScalarField acc = entries_.front() * entries_.front();
  for (std::size_t n = 1; n < entries_.size(); ++n) acc = acc + entries_[n] * entries_[n];
  return acc;
}

}  // namespace nsv
