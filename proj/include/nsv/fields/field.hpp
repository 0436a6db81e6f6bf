#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "nsv/fields/grid.hpp"

namespace nsv {

using Staggering = std::array<Centering, 3>;

inline constexpr Staggering kNodes{Centering::node, Centering::node, Centering::node};
inline constexpr Staggering kCells{Centering::cell, Centering::cell, Centering::cell};

// Node centering along `axis`, cell centering elsewhere: the location of the
// face-normal velocity component `axis` on a MAC grid.
Staggering face_centering(int axis);

// Real samples of a scalar on a grid, stored row-major with axis 0 slowest.
// Values are immutable once constructed.
class ScalarField {
 public:
  explicit ScalarField(GridSpec grid, Staggering centering = kNodes);
  // Throws InconsistentFieldError on a size mismatch, NonFiniteError on NaN/Inf.
  ScalarField(GridSpec grid, Staggering centering, std::vector<double> values);

  static ScalarField constant(GridSpec grid, double value, Staggering centering = kNodes);
  static ScalarField sample(GridSpec grid, const std::function<double(const Point&)>& fn,
                            Staggering centering = kNodes);

  const GridSpec& grid() const { return grid_; }
  const Staggering& centering() const { return centering_; }
  const Index3& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(int i, int j, int k = 0) const { return values_[index(i, j, k)]; }

  std::size_t index(int i, int j, int k = 0) const {
    return (static_cast<std::size_t>(i) * shape_[1] + j) * shape_[2] + k;
  }
  Index3 unflatten(std::size_t flat) const;
  Point position(std::size_t flat) const;

  bool same_layout(const ScalarField& other) const {
    return grid_ == other.grid_ && centering_ == other.centering_;
  }

 private:
  GridSpec grid_;
  Staggering centering_;
  Index3 shape_;
  std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
double max_abs(const ScalarField& s);

enum class Layout : std::uint8_t { collocated = 0, staggered_mac = 1 };

// N scalar components on one grid. Collocated fields share one centering;
// staggered fields store component d on the faces normal to axis d.
class VectorField {
 public:
  VectorField(Layout layout, std::vector<ScalarField> components);

  static VectorField zeros(GridSpec grid, Layout layout = Layout::collocated,
                           Staggering centering = kNodes);
  static VectorField sample(GridSpec grid, const std::function<Vec3(const Point&)>& fn,
                            Layout layout = Layout::collocated);

  const GridSpec& grid() const { return components_.front().grid(); }
  int dims() const { return static_cast<int>(components_.size()); }
  Layout layout() const { return layout_; }
  bool staggered() const { return layout_ == Layout::staggered_mac; }
  const ScalarField& operator[](int d) const { return components_[d]; }
  const std::vector<ScalarField>& components() const { return components_; }

  bool same_layout(const VectorField& other) const;

 private:
  Layout layout_;
  std::vector<ScalarField> components_;
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);
double max_abs(const VectorField& v);

// Pointwise dot product / squared magnitude of collocated fields.
ScalarField dot(const VectorField& a, const VectorField& b);
ScalarField norm_squared(const VectorField& v);

// Averages face values of a staggered field onto cell centres.
VectorField to_cell_centers(const VectorField& v);

// Returns v unchanged if collocated, otherwise its cell-centred interpolant.
VectorField collocated(const VectorField& v);

// Discrete velocity gradient: entry(i, j) holds d v_i / d x_j.
class TensorField {
 public:
  TensorField(int dims, std::vector<ScalarField> entries);

  int dims() const { return dims_; }
  const GridSpec& grid() const { return entries_.front().grid(); }
  const ScalarField& entry(int i, int j) const { return entries_[i * dims_ + j]; }

  ScalarField trace() const;
  // (T a)_i = sum_j T_ij a_j
  VectorField apply(const VectorField& a) const;
  // (T^T a)_i = sum_j T_ji a_j
  VectorField apply_transpose(const VectorField& a) const;
  // sum_ij T_ij^2
  ScalarField frobenius_squared() const;

 private:
  int dims_;
  std::vector<ScalarField> entries_;
};

}  // namespace nsv
