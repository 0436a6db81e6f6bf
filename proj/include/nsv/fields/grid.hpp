#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace nsv {

inline constexpr double kPi = 3.14159265358979323846;

enum class DomainKind : std::uint8_t { periodic_torus = 0, bounded_box = 1 };

// Position of samples along one axis. On a periodic torus every axis is
// sampled at x_i = i*h, i < n. On a bounded box `node` means n+1 samples at
// x_i = i*h (boundaries included) and `cell` means n samples at (i+1/2)*h.
enum class Centering : std::uint8_t { node = 0, cell = 1 };

using Point = std::array<double, 3>;
using Vec3 = std::array<double, 3>;
using Index3 = std::array<int, 3>;

// Uniform Cartesian discretization of [0,L_0] x ... x [0,L_{N-1}].
class GridSpec {
 public:
  static GridSpec periodic(int dims, int n, double length = 2.0 * kPi);
  static GridSpec box(int dims, int n, double length = 1.0);

  // Throws GridError on invalid input: dims outside {2,3}, counts below 8,
  // non-positive lengths, or non power-of-two counts on a torus.
  GridSpec(int dims, Index3 cells, Vec3 lengths, DomainKind kind);

  int dims() const { return dims_; }
  int cells(int axis) const { return cells_[axis]; }
  const Index3& cells() const { return cells_; }
  double length(int axis) const { return lengths_[axis]; }
  const Vec3& lengths() const { return lengths_; }
  double spacing(int axis) const { return spacing_[axis]; }
  double min_spacing() const;
  DomainKind kind() const { return kind_; }
  bool periodic() const { return kind_ == DomainKind::periodic_torus; }
  double measure() const;

  // Sample count along `axis` for the given centering.
  int samples(int axis, Centering c) const;
  double coordinate(int axis, Centering c, int index) const;

  // Same domain with `cells_per_axis` cells on every active axis.
  GridSpec resampled(int cells_per_axis) const;

  std::string describe() const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.dims_ == b.dims_ && a.cells_ == b.cells_ &&
           a.lengths_ == b.lengths_ && a.kind_ == b.kind_;
  }

 private:
  int dims_;
  Index3 cells_;
  Vec3 lengths_;
  Vec3 spacing_;
  DomainKind kind_;
};

}  // namespace nsv
