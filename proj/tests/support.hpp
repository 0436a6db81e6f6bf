#pragma once

// Shared generators for the test suites. Everything is seeded explicitly.

#include <cmath>
#include <random>
#include <vector>

#include "nsv/fields/field.hpp"
#include "nsv/fields/operators.hpp"

namespace nsv::testing {

struct Mode {
  Index3 k;
  double amp;
  double phase;
};

// Random trigonometric polynomial with integer wavenumbers |k_i| <= kmax.
inline std::vector<Mode> random_modes(std::mt19937_64& rng, int dims, int count, int kmax) {
  std::uniform_int_distribution<int> wave(-kmax, kmax);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::vector<Mode> modes;
  for (int m = 0; m < count; ++m) {
    Mode mode{{wave(rng), wave(rng), dims == 3 ? wave(rng) : 0}, amp(rng), phase(rng)};
    modes.push_back(mode);
  }
  return modes;
}

inline double eval_modes(const std::vector<Mode>& modes, const Point& p, const Vec3& lengths) {
  double s = 0.0;
  for (const auto& m : modes) {
    double arg = m.phase;
    for (int d = 0; d < 3; ++d) arg += 2.0 * kPi * m.k[d] * p[d] / lengths[d];
    s += m.amp * std::sin(arg);
  }
  return s;
}

inline ScalarField random_scalar(const GridSpec& g, std::mt19937_64& rng, int kmax = 3,
                                 int count = 5) {
  const auto modes = random_modes(rng, g.dims(), count, kmax);
  const Vec3 L = g.lengths();
  return ScalarField::sample(g, [&](const Point& p) { return eval_modes(modes, p, L); });
}

inline VectorField random_vector(const GridSpec& g, std::mt19937_64& rng, int kmax = 3,
                                 int count = 5) {
  std::vector<ScalarField> comps;
  for (int d = 0; d < g.dims(); ++d) comps.push_back(random_scalar(g, rng, kmax, count));
  return VectorField(Layout::collocated, std::move(comps));
}

inline double max_diff(const ScalarField& a, const ScalarField& b) { return max_abs(a - b); }
inline double max_diff(const VectorField& a, const VectorField& b) { return max_abs(a - b); }

}  // namespace nsv::testing
