#include "nsv/fields/grid.hpp"

#include <algorithm>
#include <sstream>

#include "nsv/fields/errors.hpp"

namespace nsv {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec GridSpec::periodic(int dims, int n, double length) {
  return GridSpec(dims, {n, n, dims == 3 ? n : 1}, {length, length, dims == 3 ? length : 1.0},
                  DomainKind::periodic_torus);
}

GridSpec GridSpec::box(int dims, int n, double length) {
  return GridSpec(dims, {n, n, dims == 3 ? n : 1}, {length, length, dims == 3 ? length : 1.0},
                  DomainKind::bounded_box);
}

GridSpec::GridSpec(int dims, Index3 cells, Vec3 lengths, DomainKind kind)
    : dims_(dims), cells_(cells), lengths_(lengths), spacing_{1.0, 1.0, 1.0}, kind_(kind) {
  if (dims != 2 && dims != 3) {
    throw GridError("grid dimension must be 2 or 3, got " + std::to_string(dims));
  }
  for (int d = 0; d < dims; ++d) {
    if (cells[d] < 8) {
      throw GridError("axis " + std::to_string(d) + " has " + std::to_string(cells[d]) +
                      " cells; at least 8 are required");
    }
    if (!(lengths[d] > 0.0)) {
      throw GridError("axis " + std::to_string(d) + " length must be positive");
    }
    if (kind == DomainKind::periodic_torus && !is_power_of_two(cells[d])) {
      throw GridError("periodic axis " + std::to_string(d) + " needs a power-of-two cell count, got " +
                      std::to_string(cells[d]));
    }
    spacing_[d] = lengths[d] / cells[d];
  }
  // Unused trailing axis of a 2D grid is a single sample of unit extent.
  for (int d = dims; d < 3; ++d) {
    cells_[d] = 1;
    lengths_[d] = 1.0;
    spacing_[d] = 1.0;
  }
}

double GridSpec::min_spacing() const {
  double h = spacing_[0];
  for (int d = 1; d < dims_; ++d) h = std::min(h, spacing_[d]);
  return h;
}

double GridSpec::measure() const {
  double m = 1.0;
  for (int d = 0; d < dims_; ++d) m *= lengths_[d];
  return m;
}

int GridSpec::samples(int axis, Centering c) const {
  if (axis >= dims_) return 1;
  if (periodic()) return cells_[axis];
  return c == Centering::node ? cells_[axis] + 1 : cells_[axis];
}

double GridSpec::coordinate(int axis, Centering c, int index) const {
  if (axis >= dims_) return 0.0;
  if (periodic() || c == Centering::node) return index * spacing_[axis];
  return (index + 0.5) * spacing_[axis];
}

GridSpec GridSpec::resampled(int cells_per_axis) const {
  Index3 c{cells_per_axis, cells_per_axis, dims_ == 3 ? cells_per_axis : 1};
  return GridSpec(dims_, c, lengths_, kind_);
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << (periodic() ? "torus" : "box") << ' ';
  for (int d = 0; d < dims_; ++d) os << (d ? "x" : "") << cells_[d];
  os << " L=(";
  for (int d = 0; d < dims_; ++d) os << (d ? "," : "") << lengths_[d];
  os << ')';
  return os.str();
}

}  // namespace nsv
